//! Sparse linear algebra over GF(2).
//!
//! [`SparseBinaryMatrix`] keeps both the column and the row adjacency of a
//! binary matrix, which is what message passing and union-find both want.
//! Elimination (rank, image membership, ordered information sets) works on a
//! private bit-packed dense copy.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, invalid, Error, Result};

/// A fixed-length vector over GF(2), one byte per entry.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct BinaryVector {
    bits: Vec<u8>,
}

impl BinaryVector {
    pub fn zeros(len: usize) -> Self {
        BinaryVector { bits: vec![0; len] }
    }

    /// Builds a vector from 0/1 bytes; any other value is rejected.
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(invalid(format!(
                "entry {pos} of binary vector is {}, expected 0 or 1",
                bits[pos]
            )));
        }
        Ok(BinaryVector { bits })
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(it: I) -> Self {
        BinaryVector {
            bits: it.into_iter().map(u8::from).collect(),
        }
    }

    /// Vector of length `len` with ones at `support`.
    pub fn from_support(len: usize, support: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(len);
        for &i in support {
            if i >= len {
                return Err(invalid(format!("index {i} out of range for length {len}")));
            }
            v.flip(i);
        }
        Ok(v)
    }

    /// Parses a string of `0`/`1` characters. Whitespace, commas and
    /// underscores are ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                c if c.is_whitespace() || c == ',' || c == '_' => {}
                c => return Err(invalid(format!("unexpected character {c:?} in bitstring"))),
            }
        }
        Ok(BinaryVector { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits[i] != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = u8::from(value);
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.bits[i] ^= 1;
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    /// Indices of the nonzero entries, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(i, _)| i)
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn xor(&self, other: &BinaryVector) -> Result<BinaryVector> {
        ensure_len("right operand", other.len(), self.len())?;
        Ok(BinaryVector {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    pub fn xor_assign(&mut self, other: &BinaryVector) -> Result<()> {
        ensure_len("right operand", other.len(), self.len())?;
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
        Ok(())
    }
}

impl TryFrom<Vec<u8>> for BinaryVector {
    type Error = Error;

    fn try_from(bits: Vec<u8>) -> Result<Self> {
        BinaryVector::from_bits(bits)
    }
}

impl From<BinaryVector> for Vec<u8> {
    fn from(v: BinaryVector) -> Vec<u8> {
        v.bits
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b != 0 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({self})")
    }
}

/// A binary matrix stored as sorted column supports and sorted row supports.
///
/// Construction cancels repeated entries pairwise, so a support listing the
/// same index twice contributes nothing.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseBinaryMatrix {
    num_rows: usize,
    num_cols: usize,
    col_support: Vec<Vec<usize>>,
    row_support: Vec<Vec<usize>>,
}

fn canonical_support(mut idx: Vec<usize>) -> Vec<usize> {
    idx.sort_unstable();
    let mut out: Vec<usize> = Vec::with_capacity(idx.len());
    for i in idx {
        if out.last() == Some(&i) {
            out.pop();
        } else {
            out.push(i);
        }
    }
    out
}

impl SparseBinaryMatrix {
    pub fn zeros(num_rows: usize, num_cols: usize) -> Self {
        SparseBinaryMatrix {
            num_rows,
            num_cols,
            col_support: vec![Vec::new(); num_cols],
            row_support: vec![Vec::new(); num_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let cols = (0..n).map(|i| vec![i]).collect();
        Self::from_col_supports(n, cols).expect("identity is well formed")
    }

    /// Builds a matrix from per-column row indices.
    pub fn from_col_supports(num_rows: usize, cols: Vec<Vec<usize>>) -> Result<Self> {
        let num_cols = cols.len();
        let mut col_support = Vec::with_capacity(num_cols);
        let mut row_support = vec![Vec::new(); num_rows];
        for (j, col) in cols.into_iter().enumerate() {
            let col = canonical_support(col);
            if let Some(&r) = col.last() {
                if r >= num_rows {
                    return Err(invalid(format!(
                        "row index {r} in column {j} out of range ({num_rows} rows)"
                    )));
                }
            }
            for &r in &col {
                row_support[r].push(j);
            }
            col_support.push(col);
        }
        Ok(SparseBinaryMatrix {
            num_rows,
            num_cols,
            col_support,
            row_support,
        })
    }

    /// Builds a matrix from per-row column indices.
    pub fn from_row_supports(num_cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        Ok(Self::from_col_supports(num_cols, rows)?.transpose())
    }

    /// Builds a matrix from dense rows of 0/1 bytes.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let num_cols = rows.first().map_or(0, Vec::len);
        let mut supports = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            ensure_len(&format!("row {i}"), row.len(), num_cols)?;
            supports.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b != 0)
                    .map(|(j, _)| j)
                    .collect(),
            );
        }
        Self::from_row_supports(num_cols, supports)
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    /// Sorted row indices of column `j`.
    #[inline]
    pub fn col(&self, j: usize) -> &[usize] {
        &self.col_support[j]
    }

    /// Sorted column indices of row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[usize] {
        &self.row_support[i]
    }

    pub fn col_supports(&self) -> &[Vec<usize>] {
        &self.col_support
    }

    pub fn row_supports(&self) -> &[Vec<usize>] {
        &self.row_support
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.col_support[j].binary_search(&i).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.col_support.iter().map(Vec::len).sum()
    }

    pub fn col_weight(&self, j: usize) -> usize {
        self.col_support[j].len()
    }

    pub fn max_col_weight(&self) -> usize {
        self.col_support.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_row_weight(&self) -> usize {
        self.row_support.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Average column weight.
    pub fn mean_col_weight(&self) -> f64 {
        if self.num_cols == 0 {
            0.0
        } else {
            self.nnz() as f64 / self.num_cols as f64
        }
    }

    pub fn column_vector(&self, j: usize) -> BinaryVector {
        let mut v = BinaryVector::zeros(self.num_rows);
        for &i in &self.col_support[j] {
            v.set(i, true);
        }
        v
    }

    pub fn transpose(&self) -> SparseBinaryMatrix {
        SparseBinaryMatrix {
            num_rows: self.num_cols,
            num_cols: self.num_rows,
            col_support: self.row_support.clone(),
            row_support: self.col_support.clone(),
        }
    }

    /// Submatrix made of the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> SparseBinaryMatrix {
        let supports = cols.iter().map(|&j| self.col_support[j].clone()).collect();
        Self::from_col_supports(self.num_rows, supports).expect("columns already in range")
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &SparseBinaryMatrix) -> Result<SparseBinaryMatrix> {
        ensure_len("row count of right block", other.num_rows, self.num_rows)?;
        let supports = self
            .col_support
            .iter()
            .chain(&other.col_support)
            .cloned()
            .collect();
        Self::from_col_supports(self.num_rows, supports)
    }

    /// Matrix-vector product over GF(2).
    pub fn matvec(&self, v: &BinaryVector) -> Result<BinaryVector> {
        ensure_len("vector", v.len(), self.num_cols)?;
        Ok(BinaryVector::from_bools(self.row_support.iter().map(|row| {
            row.iter().fold(false, |acc, &j| acc ^ v.get(j))
        })))
    }

    /// Product over GF(2) of `self` and `other`.
    pub fn matmul(&self, other: &SparseBinaryMatrix) -> Result<SparseBinaryMatrix> {
        ensure_len("row count of right factor", other.num_rows, self.num_cols)?;
        let cols = other
            .col_support
            .iter()
            .map(|col| {
                let mut acc = Vec::new();
                for &k in col {
                    acc.extend_from_slice(&self.col_support[k]);
                }
                acc
            })
            .collect();
        Self::from_col_supports(self.num_rows, cols)
    }

    /// True when `matvec(self, v) == s`, without allocating.
    pub fn satisfies(&self, v: &BinaryVector, s: &BinaryVector) -> bool {
        v.len() == self.num_cols
            && s.len() == self.num_rows
            && self
                .row_support
                .iter()
                .enumerate()
                .all(|(i, row)| row.iter().fold(false, |acc, &j| acc ^ v.get(j)) == s.get(i))
    }
}

impl fmt::Debug for SparseBinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseBinaryMatrix {}x{} [", self.num_rows, self.num_cols)?;
        for row in &self.row_support {
            let mut line = vec![b'.'; self.num_cols];
            for &j in row {
                line[j] = b'1';
            }
            writeln!(f, "  {}", String::from_utf8_lossy(&line))?;
        }
        write!(f, "]")
    }
}

/// `M · v` over GF(2).
pub fn matvec_mod2(m: &SparseBinaryMatrix, v: &BinaryVector) -> Result<BinaryVector> {
    m.matvec(v)
}

/// Outcome of Gaussian elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowReduction {
    pub rank: usize,
    /// Column indices of the pivots, in scan order.
    pub pivot_cols: Vec<usize>,
}

/// Rank and greedy left-to-right pivot columns.
pub fn row_reduce(m: &SparseBinaryMatrix) -> RowReduction {
    let order: Vec<usize> = (0..m.num_cols()).collect();
    let elim = OrderedElimination::run(m, &order, None);
    RowReduction {
        rank: elim.pivot_cols.len(),
        pivot_cols: elim.pivot_cols,
    }
}

/// Returns a witness `x` with `M·x = s` when `s` lies in the column space of
/// `M`, or `None` otherwise. The witness is supported on the left-to-right
/// pivot columns.
pub fn in_image(m: &SparseBinaryMatrix, s: &BinaryVector) -> Result<Option<BinaryVector>> {
    let order: Vec<usize> = (0..m.num_cols()).collect();
    solve_ordered(m, &order, s)
}

/// Like [`in_image`] but scanning columns in `order` for pivots, so the
/// witness is supported on the first independent columns of that order.
/// Columns absent from `order` are never used.
pub fn solve_ordered(
    m: &SparseBinaryMatrix,
    order: &[usize],
    s: &BinaryVector,
) -> Result<Option<BinaryVector>> {
    ensure_len("syndrome", s.len(), m.num_rows())?;
    if let Some(&j) = order.iter().find(|&&j| j >= m.num_cols()) {
        return Err(invalid(format!("column {j} out of range")));
    }
    Ok(OrderedElimination::run(m, order, Some(s)).solution)
}

/// Bit-packed row echelon reduction over a caller-chosen column order.
struct OrderedElimination {
    pivot_cols: Vec<usize>,
    solution: Option<BinaryVector>,
}

impl OrderedElimination {
    fn run(m: &SparseBinaryMatrix, order: &[usize], rhs: Option<&BinaryVector>) -> Self {
        let n = order.len();
        let rhs_bit = n;
        let words = (n + 1).div_ceil(64);
        let mut rows = vec![0u64; m.num_rows() * words];
        for (pos, &j) in order.iter().enumerate() {
            for &i in m.col(j) {
                rows[i * words + pos / 64] ^= 1 << (pos % 64);
            }
        }
        if let Some(s) = rhs {
            for i in s.support() {
                rows[i * words + rhs_bit / 64] |= 1 << (rhs_bit % 64);
            }
        }

        let num_rows = m.num_rows();
        let bit = |rows: &[u64], r: usize, p: usize| rows[r * words + p / 64] >> (p % 64) & 1 == 1;
        let mut rank = 0;
        let mut pivots = Vec::new();
        for pos in 0..n {
            if rank == num_rows {
                break;
            }
            let Some(pr) = (rank..num_rows).find(|&r| bit(&rows, r, pos)) else {
                continue;
            };
            if pr != rank {
                for w in 0..words {
                    rows.swap(pr * words + w, rank * words + w);
                }
            }
            // The pivot row is zero left of `pos`, so only later words change.
            let first = pos / 64;
            for r in 0..num_rows {
                if r != rank && bit(&rows, r, pos) {
                    for w in first..words {
                        let v = rows[rank * words + w];
                        rows[r * words + w] ^= v;
                    }
                }
            }
            pivots.push(pos);
            rank += 1;
        }

        let solution = rhs.and_then(|_| {
            if (rank..num_rows).any(|r| bit(&rows, r, rhs_bit)) {
                return None;
            }
            let mut x = BinaryVector::zeros(m.num_cols());
            for (k, &pos) in pivots.iter().enumerate() {
                if bit(&rows, k, rhs_bit) {
                    x.set(order[pos], true);
                }
            }
            Some(x)
        });
        OrderedElimination {
            pivot_cols: pivots.into_iter().map(|p| order[p]).collect(),
            solution,
        }
    }
}

/// Parses the MacKay "alist" format.
///
/// Layout: `N M`, then the maximum column and row weights, then the `N`
/// column weights and the `M` row weights, then one line per column and one
/// per row with 1-based indices, zero padded.
pub fn read_alist(text: &str) -> Result<SparseBinaryMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut next_ints = |what: &str| -> Result<(usize, Vec<usize>)> {
        let (no, line) = lines.next().ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("unexpected end of alist while reading {what}"),
        })?;
        let ints = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line: no,
                    message: format!("expected integer, found {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((no, ints))
    };

    let (no, header) = next_ints("header")?;
    let [num_cols, num_rows] = header[..] else {
        return Err(Error::Parse {
            line: no,
            message: "header must be `num_cols num_rows`".into(),
        });
    };
    next_ints("maximum weights")?;
    let (no, col_weights) = next_ints("column weights")?;
    if col_weights.len() != num_cols {
        return Err(Error::Parse {
            line: no,
            message: format!("expected {num_cols} column weights"),
        });
    }
    let (no, row_weights) = next_ints("row weights")?;
    if row_weights.len() != num_rows {
        return Err(Error::Parse {
            line: no,
            message: format!("expected {num_rows} row weights"),
        });
    }

    let mut cols = Vec::with_capacity(num_cols);
    for (j, &w) in col_weights.iter().enumerate() {
        let (no, ints) = next_ints("column list")?;
        let idx: Vec<usize> = ints.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
        if idx.len() != w {
            return Err(Error::Parse {
                line: no,
                message: format!("column {j} lists {} entries, weight says {w}", idx.len()),
            });
        }
        cols.push(idx);
    }
    let m = SparseBinaryMatrix::from_col_supports(num_rows, cols).map_err(|e| Error::Parse {
        line: 0,
        message: e.to_string(),
    })?;

    // Row lists are redundant; when present they must agree.
    for (i, &w) in row_weights.iter().enumerate() {
        let Ok((no, ints)) = next_ints("row list") else {
            break;
        };
        let mut idx: Vec<usize> = ints.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
        idx.sort_unstable();
        if idx.len() != w || idx != m.row(i) {
            return Err(Error::Parse {
                line: no,
                message: format!("row {i} disagrees with the column lists"),
            });
        }
    }
    Ok(m)
}

/// Writes the MacKay "alist" format, zero padded.
pub fn write_alist(m: &SparseBinaryMatrix) -> String {
    let max_c = m.max_col_weight();
    let max_r = m.max_row_weight();
    let join = |xs: &mut dyn Iterator<Item = usize>| {
        xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", m.num_cols(), m.num_rows()));
    out.push_str(&format!("{max_c} {max_r}\n"));
    out.push_str(&join(&mut m.col_supports().iter().map(Vec::len)));
    out.push('\n');
    out.push_str(&join(&mut m.row_supports().iter().map(Vec::len)));
    out.push('\n');
    for (supports, width) in [(m.col_supports(), max_c), (m.row_supports(), max_r)] {
        for s in supports {
            let padded = s
                .iter()
                .map(|&x| x + 1)
                .chain(std::iter::repeat(0))
                .take(width.max(s.len()).max(1));
            out.push_str(&join(&mut padded.into_iter()));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(num_rows: usize, c: &[&[usize]]) -> SparseBinaryMatrix {
        SparseBinaryMatrix::from_col_supports(num_rows, c.iter().map(|x| x.to_vec()).collect())
            .unwrap()
    }

    fn bv(s: &str) -> BinaryVector {
        BinaryVector::parse(s).unwrap()
    }

    #[test]
    fn matvec_examples() {
        let m = SparseBinaryMatrix::from_row_supports(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(matvec_mod2(&m, &bv("101")).unwrap(), bv("11"));
        assert_eq!(matvec_mod2(&m, &bv("000")).unwrap(), bv("00"));
        let id = SparseBinaryMatrix::identity(3);
        assert_eq!(matvec_mod2(&id, &bv("011")).unwrap(), bv("011"));
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let id = SparseBinaryMatrix::identity(3);
        assert!(matches!(
            matvec_mod2(&id, &bv("01")),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn duplicates_cancel() {
        let m = cols(3, &[&[2, 0, 2, 1]]);
        assert_eq!(m.col(0), &[0, 1]);
        assert_eq!(m.row(2), &[] as &[usize]);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(SparseBinaryMatrix::from_col_supports(2, vec![vec![2]]).is_err());
    }

    #[test]
    fn row_reduce_examples() {
        let id = SparseBinaryMatrix::identity(4);
        assert_eq!(
            row_reduce(&id),
            RowReduction {
                rank: 4,
                pivot_cols: vec![0, 1, 2, 3]
            }
        );
        let z = SparseBinaryMatrix::zeros(3, 5);
        assert_eq!(row_reduce(&z).rank, 0);
        assert!(row_reduce(&z).pivot_cols.is_empty());
        let m = cols(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(
            row_reduce(&m),
            RowReduction {
                rank: 2,
                pivot_cols: vec![0, 1]
            }
        );
    }

    #[test]
    fn in_image_examples() {
        let m = cols(3, &[&[0, 1], &[1, 2]]);
        assert_eq!(in_image(&m, &bv("000")).unwrap(), Some(bv("00")));
        assert_eq!(in_image(&m, &bv("101")).unwrap(), Some(bv("11")));
        let single = cols(2, &[&[0, 1]]);
        assert_eq!(in_image(&single, &bv("10")).unwrap(), None);
        assert!(in_image(&single, &bv("1")).is_err());
    }

    #[test]
    fn elimination_crosses_word_boundary() {
        // 70 columns forces two words per row.
        let n = 70;
        let supports = (0..n).map(|j| vec![j, (j + 1) % n]).collect();
        let m = SparseBinaryMatrix::from_col_supports(n, supports).unwrap();
        assert_eq!(row_reduce(&m).rank, n - 1);
        let mut s = BinaryVector::zeros(n);
        s.set(3, true);
        s.set(68, true);
        let x = in_image(&m, &s).unwrap().unwrap();
        assert_eq!(m.matvec(&x).unwrap(), s);
        s.set(10, true);
        assert_eq!(in_image(&m, &s).unwrap(), None);
    }

    #[test]
    fn solve_ordered_prefers_early_columns() {
        // Columns 0 and 2 are equal; ordering decides which one carries the bit.
        let m = cols(2, &[&[0], &[1], &[0]]);
        let s = bv("10");
        assert_eq!(solve_ordered(&m, &[2, 1, 0], &s).unwrap(), Some(bv("001")));
        assert_eq!(solve_ordered(&m, &[0, 1, 2], &s).unwrap(), Some(bv("100")));
    }

    #[test]
    fn alist_roundtrip_and_format() {
        let m = SparseBinaryMatrix::from_row_supports(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let text = write_alist(&m);
        assert_eq!(text, "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n");
        assert_eq!(read_alist(&text).unwrap(), m);
    }

    #[test]
    fn alist_rejects_inconsistent_rows() {
        let bad = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 3\n2 3\n";
        assert!(matches!(read_alist(bad), Err(Error::Parse { .. })));
    }

    #[test]
    fn binary_vector_rejects_non_bits() {
        assert!(BinaryVector::from_bits(vec![0, 2]).is_err());
        assert!(BinaryVector::parse("01x").is_err());
        assert_eq!(bv("0 1,1_0").to_string(), "0110");
    }

    #[test]
    fn matmul_matches_matvec() {
        let a = cols(3, &[&[0, 1], &[1, 2], &[0]]);
        let b = cols(3, &[&[0, 1], &[2], &[0, 1, 2]]);
        let ab = a.matmul(&b).unwrap();
        for j in 0..3 {
            assert_eq!(ab.column_vector(j), a.matvec(&b.column_vector(j)).unwrap());
        }
    }
}

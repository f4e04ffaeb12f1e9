//! Ordered Tanner forests.
//!
//! Columns are scanned from most to least likely to be in error and kept only
//! when their check nodes currently sit in pairwise distinct trees, so the
//! kept columns always induce a loop-free Tanner graph. Tree membership is
//! tracked by [`UnionFindForest`], a list of `(root, depth)` pairs merged by
//! depth.

use serde::{Deserialize, Serialize};

use crate::bp::{posteriors_to_order, BpConfig, BpDecoder, DecodeResult, Stage};
use crate::error::{ensure_len, invalid, Result};
use crate::gf2::{BinaryVector, SparseBinaryMatrix};
use crate::model::{clip_probability, DetectorModel, SoftInfo};

/// Union-find over check nodes, one `(root, depth)` entry per node.
///
/// Finding a root walks the chain of root links until a fixed point. Merges
/// attach every tree to a deepest root, so depths stay logarithmic without
/// path compression.
#[derive(Clone, Debug)]
pub struct UnionFindForest {
    entries: Vec<(usize, usize)>,
    path_compression: bool,
    scratch: Vec<usize>,
}

impl PartialEq for UnionFindForest {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.path_compression == other.path_compression
    }
}

impl Eq for UnionFindForest {}

impl UnionFindForest {
    pub fn new(size: usize) -> Self {
        UnionFindForest {
            entries: (0..size).map(|i| (i, 1)).collect(),
            path_compression: false,
            scratch: Vec::new(),
        }
    }

    /// Also rewrite root links of queried nodes while adding columns.
    pub fn with_path_compression(mut self, enabled: bool) -> Self {
        self.path_compression = enabled;
        self
    }

    /// Rebuilds a forest from raw entries. Every chain must end at a fixed
    /// point.
    pub fn from_entries(entries: Vec<(usize, usize)>) -> Result<Self> {
        let n = entries.len();
        for (i, &(r, d)) in entries.iter().enumerate() {
            if r >= n {
                return Err(invalid(format!("entry {i} points at {r}, size is {n}")));
            }
            if d == 0 {
                return Err(invalid(format!("entry {i} has depth 0")));
            }
        }
        let forest = UnionFindForest {
            entries,
            path_compression: false,
            scratch: Vec::new(),
        };
        for i in 0..n {
            let mut cur = i;
            for _ in 0..=n {
                cur = forest.entries[cur].0;
            }
            if forest.entries[cur].0 != cur {
                return Err(invalid(format!("root chain from {i} does not terminate")));
            }
        }
        Ok(forest)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Depth recorded at node `i` (meaningful for roots).
    pub fn depth(&self, i: usize) -> usize {
        self.entries[i].1
    }

    /// Root of the tree containing `i`.
    pub fn find(&self, i: usize) -> Result<usize> {
        if i >= self.entries.len() {
            return Err(invalid(format!(
                "node {i} out of range for forest of size {}",
                self.entries.len()
            )));
        }
        Ok(self.root(i))
    }

    #[inline]
    fn root(&self, mut i: usize) -> usize {
        while self.entries[i].0 != i {
            i = self.entries[i].0;
        }
        i
    }

    /// Adds a column touching `check_rows` if that keeps the graph acyclic.
    ///
    /// Returns `true` and merges the trees when all roots are distinct;
    /// otherwise leaves the forest untouched and returns `false`.
    pub fn try_add_column(&mut self, check_rows: &[usize]) -> bool {
        let mut roots = std::mem::take(&mut self.scratch);
        roots.clear();
        roots.extend(check_rows.iter().map(|&c| self.root(c)));

        let mut accepted = true;
        'outer: for a in 0..roots.len() {
            for b in a + 1..roots.len() {
                if roots[a] == roots[b] {
                    accepted = false;
                    break 'outer;
                }
            }
        }

        if accepted && !roots.is_empty() {
            let mut best = roots[0];
            let mut ties = 1;
            for &r in &roots[1..] {
                let (d, bd) = (self.entries[r].1, self.entries[best].1);
                if d > bd {
                    best = r;
                    ties = 1;
                } else if d == bd {
                    ties += 1;
                    best = best.min(r);
                }
            }
            for &r in &roots {
                self.entries[r].0 = best;
            }
            if ties > 1 {
                self.entries[best].1 += 1;
            }
            if self.path_compression {
                for &c in check_rows {
                    self.entries[c].0 = best;
                }
            }
        }
        self.scratch = roots;
        accepted
    }
}

/// How synthetic boundary checks are added before the forest search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VirtualCheckPolicy {
    /// Use the matrix as is.
    None,
    /// One virtual check per connected component, adjacent to every
    /// weight-1 column of that component.
    PerComponent,
    /// `PerComponent` when every column has weight at most 2, else `None`.
    #[default]
    Auto,
}

impl VirtualCheckPolicy {
    pub fn resolve(self, h: &SparseBinaryMatrix) -> VirtualCheckPolicy {
        match self {
            VirtualCheckPolicy::Auto if h.max_col_weight() <= 2 => VirtualCheckPolicy::PerComponent,
            VirtualCheckPolicy::Auto => VirtualCheckPolicy::None,
            p => p,
        }
    }
}

/// Columns kept in an ordered Tanner forest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OtfSelection {
    /// Accepted columns in scan order.
    pub kept_cols: Vec<usize>,
    /// Row indices (past the real rows) of the virtual checks used.
    pub virtual_checks: Vec<usize>,
}

/// Component label of every row, following shared columns. Labels are dense
/// and numbered by lowest row index.
pub fn row_components(h: &SparseBinaryMatrix) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..h.num_rows()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for col in h.col_supports() {
        if let Some((&first, rest)) = col.split_first() {
            for &r in rest {
                let (a, b) = (find(&mut parent, first), find(&mut parent, r));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut label = vec![usize::MAX; h.num_rows()];
    let mut next = 0;
    let mut out = Vec::with_capacity(h.num_rows());
    for i in 0..h.num_rows() {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out.push(label[r]);
    }
    out
}

/// For each column, the virtual check it gains (if any), plus the list of
/// virtual row indices. Virtual rows are numbered from `h.num_rows()`.
fn virtual_assignment(h: &SparseBinaryMatrix) -> (Vec<Option<usize>>, Vec<usize>) {
    let comp = row_components(h);
    let mut virt_of_comp: Vec<Option<usize>> = vec![None; h.num_rows()];
    let mut virtuals = Vec::new();
    let mut assign = vec![None; h.num_cols()];
    // Allocate in order of component label so numbering is reproducible.
    let mut weight_one: Vec<(usize, usize)> = (0..h.num_cols())
        .filter(|&j| h.col_weight(j) == 1)
        .map(|j| (comp[h.col(j)[0]], j))
        .collect();
    weight_one.sort_unstable();
    for (c, j) in weight_one {
        let v = *virt_of_comp[c].get_or_insert_with(|| {
            let v = h.num_rows() + virtuals.len();
            virtuals.push(v);
            v
        });
        assign[j] = Some(v);
    }
    (assign, virtuals)
}

/// The check matrix extended with virtual-check rows.
pub fn augment_with_virtual_checks(h: &SparseBinaryMatrix) -> (SparseBinaryMatrix, Vec<usize>) {
    let (assign, virtuals) = virtual_assignment(h);
    let cols = (0..h.num_cols())
        .map(|j| {
            let mut c = h.col(j).to_vec();
            c.extend(assign[j]);
            c
        })
        .collect();
    let aug = SparseBinaryMatrix::from_col_supports(h.num_rows() + virtuals.len(), cols)
        .expect("virtual rows are in range");
    (aug, virtuals)
}

/// Scans columns in `order` and keeps those that leave the Tanner graph
/// acyclic. Weight-0 columns are never kept.
pub fn build_otf(
    h: &SparseBinaryMatrix,
    order: &[usize],
    policy: VirtualCheckPolicy,
) -> Result<OtfSelection> {
    ensure_len("column order", order.len(), h.num_cols())?;
    let mut seen = vec![false; h.num_cols()];
    for &j in order {
        if j >= h.num_cols() || std::mem::replace(&mut seen[j], true) {
            return Err(invalid("column order is not a permutation"));
        }
    }

    let (assign, virtuals) = match policy.resolve(h) {
        VirtualCheckPolicy::PerComponent => virtual_assignment(h),
        _ => (Vec::new(), Vec::new()),
    };
    let mut forest = UnionFindForest::new(h.num_rows() + virtuals.len());
    let mut kept = Vec::new();
    for &j in order {
        let col = h.col(j);
        let accepted = match assign.get(j).copied().flatten() {
            Some(v) => forest.try_add_column(&[col[0], v]),
            None if col.is_empty() => false,
            None => forest.try_add_column(col),
        };
        if accepted {
            kept.push(j);
        }
    }
    Ok(OtfSelection {
        kept_cols: kept,
        virtual_checks: virtuals,
    })
}

/// Configuration of the forest decoding stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OtfConfig {
    /// Prior given to columns outside the forest. Zero removes them.
    pub decimation: f64,
    pub virtual_checks: VirtualCheckPolicy,
    pub bp: BpConfig,
}

impl Default for OtfConfig {
    fn default() -> Self {
        OtfConfig {
            decimation: 0.0,
            virtual_checks: VirtualCheckPolicy::Auto,
            bp: BpConfig::product_sum(100),
        }
    }
}

/// Decodes `syndrome` on an ordered Tanner forest of `model.h()` built from
/// `posteriors`.
pub fn otf_decode(
    model: &DetectorModel,
    posteriors: &SoftInfo,
    syndrome: &BinaryVector,
    cfg: &OtfConfig,
) -> Result<DecodeResult> {
    otf_decode_matrix(model.h(), None, posteriors, syndrome, cfg)
}

/// [`otf_decode`] on a bare matrix. `full` may hold a prepared decoder for
/// `h`, used when the decimation parameter is positive.
pub fn otf_decode_matrix(
    h: &SparseBinaryMatrix,
    full: Option<&BpDecoder>,
    posteriors: &SoftInfo,
    syndrome: &BinaryVector,
    cfg: &OtfConfig,
) -> Result<DecodeResult> {
    ensure_len("posteriors", posteriors.len(), h.num_cols())?;
    ensure_len("syndrome", syndrome.len(), h.num_rows())?;
    if !(cfg.decimation >= 0.0 && cfg.decimation <= 0.5) {
        return Err(invalid(format!(
            "decimation {} outside [0, 0.5]",
            cfg.decimation
        )));
    }
    let posteriors = posteriors.clip();
    let order = posteriors_to_order(&posteriors);
    let selection = build_otf(h, &order, cfg.virtual_checks)?;

    let mut result = if cfg.decimation == 0.0 {
        let sub = h.select_columns(&selection.kept_cols);
        let priors = SoftInfo::new(
            selection
                .kept_cols
                .iter()
                .map(|&j| posteriors.get(j))
                .collect(),
        );
        // A forest needs at most as many flooding iterations as it has columns.
        let bp_cfg = BpConfig {
            max_iters: cfg.bp.max_iters.max(selection.kept_cols.len()),
            ..cfg.bp.clone()
        };
        let r = BpDecoder::new(&sub).decode(syndrome, &priors, &bp_cfg)?;
        let mut estimate = BinaryVector::zeros(h.num_cols());
        let mut post = vec![clip_probability(0.0); h.num_cols()];
        for (k, &j) in selection.kept_cols.iter().enumerate() {
            estimate.set(j, r.estimate.get(k));
            post[j] = r.posteriors.get(k);
        }
        DecodeResult {
            estimate,
            converged: r.converged,
            iterations_used: r.iterations_used,
            posteriors: SoftInfo::new(post),
            stage: Stage::Otf,
        }
    } else {
        let mut kept = vec![false; h.num_cols()];
        for &j in &selection.kept_cols {
            kept[j] = true;
        }
        let priors = SoftInfo::new(
            (0..h.num_cols())
                .map(|j| if kept[j] { posteriors.get(j) } else { cfg.decimation })
                .collect(),
        );
        let owned;
        let decoder = match full {
            Some(d) => d,
            None => {
                owned = BpDecoder::new(h);
                &owned
            }
        };
        decoder.decode(syndrome, &priors, &cfg.bp)?
    };
    result.stage = Stage::Otf;
    result.converged = h.satisfies(&result.estimate, syndrome);
    Ok(result)
}

/// True when the Tanner graph of `cols` over `num_rows` checks is a forest,
/// tested as `|V| − |E| == 1` on every connected component.
pub fn is_tanner_forest(num_rows: usize, cols: &[Vec<usize>]) -> bool {
    // Nodes: checks 0..num_rows, then one node per column.
    let n = num_rows + cols.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (j, col) in cols.iter().enumerate() {
        for &r in col {
            let (a, b) = (find(&mut parent, num_rows + j), find(&mut parent, r));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut vertices = vec![0usize; n];
    let mut edges = vec![0usize; n];
    let mut touched = vec![false; num_rows];
    for (j, col) in cols.iter().enumerate() {
        let root = find(&mut parent, num_rows + j);
        vertices[root] += 1;
        edges[root] += col.len();
        for &r in col {
            touched[r] = true;
        }
    }
    for (r, &t) in touched.iter().enumerate() {
        if t {
            let root = find(&mut parent, r);
            vertices[root] += 1;
        }
    }
    (0..n).all(|c| vertices[c] == 0 || vertices[c] == edges[c] + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_forest_roots_are_identity() {
        let f = UnionFindForest::new(5);
        for i in 0..5 {
            assert_eq!(f.find(i).unwrap(), i);
            assert_eq!(f.depth(i), 1);
        }
        assert!(f.find(5).is_err());
    }

    #[test]
    fn equal_depth_merge_picks_lowest_index() {
        let mut f = UnionFindForest::new(4);
        assert!(f.try_add_column(&[2, 1]));
        assert_eq!(f.find(2).unwrap(), 1);
        assert_eq!(f.depth(1), 2);
    }

    #[test]
    fn chain_walk() {
        let f = UnionFindForest::from_entries(vec![(0, 1), (1, 3), (1, 2), (2, 1)]).unwrap();
        assert_eq!(f.find(3).unwrap(), 1);
        assert!(UnionFindForest::from_entries(vec![(1, 1), (0, 1)]).is_err());
    }

    #[test]
    fn three_way_merge_depths() {
        // Roots 0, 3 and 5 with depths 3, 2, 3.
        let mut f = UnionFindForest::from_entries(vec![
            (0, 3),
            (0, 2),
            (1, 1),
            (3, 2),
            (3, 1),
            (5, 3),
            (5, 2),
            (6, 1),
        ])
        .unwrap();
        assert!(f.try_add_column(&[2, 4, 7]));
        for i in 0..8 {
            assert_eq!(f.find(i).unwrap(), 0);
        }
        assert_eq!(f.depth(0), 4);
    }

    #[test]
    fn loops_are_rejected() {
        let mut f = UnionFindForest::new(3);
        assert!(f.try_add_column(&[0, 1]));
        assert!(f.try_add_column(&[1, 2]));
        let before = f.clone();
        assert!(!f.try_add_column(&[0, 2]));
        assert_eq!(f, before);
        assert!(f.try_add_column(&[2]));
    }

    #[test]
    fn build_otf_examples() {
        let tri = SparseBinaryMatrix::from_col_supports(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]])
            .unwrap();
        let sel = build_otf(&tri, &[0, 1, 2], VirtualCheckPolicy::None).unwrap();
        assert_eq!(sel.kept_cols, vec![0, 1]);
        let sel = build_otf(&tri, &[2, 0, 1], VirtualCheckPolicy::None).unwrap();
        assert_eq!(sel.kept_cols, vec![2, 0]);

        let path = SparseBinaryMatrix::from_col_supports(3, vec![vec![0], vec![0, 1], vec![1, 2], vec![2]])
            .unwrap();
        let sel = build_otf(&path, &[3, 1, 0, 2], VirtualCheckPolicy::None).unwrap();
        assert_eq!(sel.kept_cols.len(), 4);
        assert!(build_otf(&path, &[0, 0, 1, 2], VirtualCheckPolicy::None).is_err());
    }

    #[test]
    fn virtual_check_closes_boundary_loop() {
        // Repetition code: both boundary columns have weight 1.
        let rep = SparseBinaryMatrix::from_col_supports(2, vec![vec![0], vec![0, 1], vec![1]]).unwrap();
        let none = build_otf(&rep, &[0, 1, 2], VirtualCheckPolicy::None).unwrap();
        assert_eq!(none.kept_cols.len(), 3);
        let virt = build_otf(&rep, &[0, 1, 2], VirtualCheckPolicy::PerComponent).unwrap();
        assert_eq!(virt.virtual_checks, vec![2]);
        assert_eq!(virt.kept_cols, vec![0, 1]);
        assert_eq!(VirtualCheckPolicy::Auto.resolve(&rep), VirtualCheckPolicy::PerComponent);
    }

    #[test]
    fn one_virtual_check_per_component() {
        let two = SparseBinaryMatrix::from_col_supports(
            4,
            vec![vec![0], vec![0, 1], vec![1], vec![2], vec![2, 3], vec![3]],
        )
        .unwrap();
        let (aug, virt) = augment_with_virtual_checks(&two);
        assert_eq!(virt, vec![4, 5]);
        assert_eq!(aug.col(0), &[0, 4]);
        assert_eq!(aug.col(5), &[3, 5]);
        assert_eq!(row_components(&two), vec![0, 0, 1, 1]);
    }

    #[test]
    fn forest_check() {
        assert!(is_tanner_forest(3, &[vec![0, 1], vec![1, 2]]));
        assert!(!is_tanner_forest(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]));
        assert!(!is_tanner_forest(2, &[vec![0, 1], vec![0, 1]]));
        assert!(is_tanner_forest(2, &[vec![0], vec![0]]));
    }

    #[test]
    fn otf_decode_on_repetition_code() {
        let h = SparseBinaryMatrix::from_col_supports(2, vec![vec![0], vec![0, 1], vec![1]]).unwrap();
        let model = DetectorModel::new(
            h.clone(),
            SparseBinaryMatrix::zeros(0, 3),
            SoftInfo::uniform(3, 0.1),
        )
        .unwrap();
        for s in ["00", "10", "01", "11"] {
            let s = BinaryVector::parse(s).unwrap();
            let r = otf_decode(&model, &SoftInfo::new(vec![0.3, 0.2, 0.1]), &s, &OtfConfig::default())
                .unwrap();
            assert!(r.converged, "syndrome {s}");
            assert_eq!(r.stage, Stage::Otf);
            assert_eq!(h.matvec(&r.estimate).unwrap(), s);
        }
    }

    #[test]
    fn otf_decode_reports_unreachable_syndrome() {
        // Without virtual checks the two boundary columns span only row 0 and row 1
        // separately; keep only one column by making the matrix tiny.
        let h = SparseBinaryMatrix::from_col_supports(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let model = DetectorModel::new(h, SparseBinaryMatrix::zeros(0, 2), SoftInfo::uniform(2, 0.1))
            .unwrap();
        let s = BinaryVector::parse("10").unwrap();
        let r = otf_decode(&model, model.priors(), &s, &OtfConfig::default()).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn positive_decimation_uses_full_matrix() {
        let h = SparseBinaryMatrix::from_col_supports(2, vec![vec![0], vec![0, 1], vec![1]]).unwrap();
        let model = DetectorModel::new(h.clone(), SparseBinaryMatrix::zeros(0, 3), SoftInfo::uniform(3, 0.1))
            .unwrap();
        let cfg = OtfConfig {
            decimation: 1e-9,
            virtual_checks: VirtualCheckPolicy::PerComponent,
            bp: BpConfig::product_sum(10),
        };
        let s = BinaryVector::parse("01").unwrap();
        let r = otf_decode(&model, &SoftInfo::new(vec![0.1, 0.2, 0.3]), &s, &cfg).unwrap();
        assert!(r.converged);
        assert_eq!(r.estimate, BinaryVector::parse("001").unwrap());
    }
}

//! Parity-check matrices of small test codes.

use crate::error::{invalid, Result};
use crate::gf2::{BinaryVector, SparseBinaryMatrix};

/// Repetition code of length `d`: a `(d−1) × d` chain matrix with rows
/// `{i, i+1}`, and the all-ones logical operator.
pub fn build_repetition_code(d: usize) -> Result<(SparseBinaryMatrix, BinaryVector)> {
    if d < 2 {
        return Err(invalid(format!("repetition code needs d >= 2, got {d}")));
    }
    let h = SparseBinaryMatrix::from_row_supports(d, (0..d - 1).map(|i| vec![i, i + 1]).collect())?;
    Ok((h, BinaryVector::from_bools(std::iter::repeat_n(true, d))))
}

/// Check matrices and logical operators of a rotated surface code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotatedSurfaceCode {
    pub distance: usize,
    /// X-type stabilizers; they detect Z errors.
    pub hx: SparseBinaryMatrix,
    /// Z-type stabilizers; they detect X errors.
    pub hz: SparseBinaryMatrix,
    /// Support of a logical X operator (the first column of qubits).
    pub logical_x: BinaryVector,
    /// Support of a logical Z operator (the first row of qubits).
    pub logical_z: BinaryVector,
}

impl RotatedSurfaceCode {
    pub fn num_qubits(&self) -> usize {
        self.distance * self.distance
    }
}

/// Rotated surface code on a `d × d` grid of data qubits, qubit `(r, c)`
/// having index `r·d + c`.
///
/// Plaquette `(i, j)` with `0 ≤ i, j ≤ d` covers the qubits at
/// `(i−1, j−1)`, `(i−1, j)`, `(i, j−1)` and `(i, j)` that lie on the grid,
/// and is X-type when `i + j` is even. Plaquettes on the top and bottom
/// edges are kept only when X-type, those on the left and right edges only
/// when Z-type, and corners are dropped.
pub fn build_rotated_surface_code(d: usize) -> Result<RotatedSurfaceCode> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(invalid(format!("rotated surface code needs odd d >= 3, got {d}")));
    }
    let mut x_rows = Vec::new();
    let mut z_rows = Vec::new();
    for i in 0..=d {
        for j in 0..=d {
            let x_type = (i + j) % 2 == 0;
            let row_edge = i == 0 || i == d;
            let col_edge = j == 0 || j == d;
            if (row_edge && col_edge) || (row_edge && !x_type) || (col_edge && x_type) {
                continue;
            }
            let mut support = Vec::with_capacity(4);
            for r in [i.wrapping_sub(1), i] {
                for c in [j.wrapping_sub(1), j] {
                    if r < d && c < d {
                        support.push(r * d + c);
                    }
                }
            }
            if x_type {
                x_rows.push(support);
            } else {
                z_rows.push(support);
            }
        }
    }
    let n = d * d;
    let column: Vec<usize> = (0..d).map(|r| r * d).collect();
    let row: Vec<usize> = (0..d).collect();
    Ok(RotatedSurfaceCode {
        distance: d,
        hx: SparseBinaryMatrix::from_row_supports(n, x_rows)?,
        hz: SparseBinaryMatrix::from_row_supports(n, z_rows)?,
        logical_x: BinaryVector::from_support(n, &column)?,
        logical_z: BinaryVector::from_support(n, &row)?,
    })
}

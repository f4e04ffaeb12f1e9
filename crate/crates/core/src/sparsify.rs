//! Transfer matrices between a detector model and a sparsified model.
//!
//! Every detector-model column is written as a minimum-weight sum of
//! sparsified columns with the same observable action. The resulting
//! `n_s × n` matrix `A` satisfies `H_sdem · A = H_dem` and
//! `O_sdem · A = O_dem`, and maps soft information through the piling-up
//! rule.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, invalid, Error, Result};
use crate::gf2::{BinaryVector, SparseBinaryMatrix};
use crate::model::{clip_probability, DetectorModel, SoftInfo};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsifyConfig {
    /// Largest number of sparsified columns in one decomposition.
    pub w_max: usize,
    /// Optional bound on the column weight of the sparsified model.
    pub gamma: Option<usize>,
}

impl Default for SparsifyConfig {
    fn default() -> Self {
        SparsifyConfig {
            w_max: 4,
            gamma: None,
        }
    }
}

/// GF(2) map from detector-model columns to sparsified-model columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    a: SparseBinaryMatrix,
    w_max: usize,
}

/// Tie-break among equal-weight decompositions recorded in transfer files.
pub const TIE_BREAK: &str = "first-lexicographic";

impl TransferMatrix {
    /// Wraps an existing `n_s × n` matrix.
    pub fn from_matrix(a: SparseBinaryMatrix, w_max: usize) -> Self {
        TransferMatrix { a, w_max }
    }

    pub fn identity(n: usize) -> Self {
        TransferMatrix {
            a: SparseBinaryMatrix::identity(n),
            w_max: 1,
        }
    }

    pub fn matrix(&self) -> &SparseBinaryMatrix {
        &self.a
    }

    pub fn w_max(&self) -> usize {
        self.w_max
    }

    pub fn num_dem_columns(&self) -> usize {
        self.a.num_cols()
    }

    pub fn num_sdem_columns(&self) -> usize {
        self.a.num_rows()
    }

    /// Sparsified columns making up detector-model column `j`.
    pub fn decomposition(&self, j: usize) -> &[usize] {
        self.a.col(j)
    }

    /// Maps a detector-model error vector onto the sparsified model.
    pub fn apply(&self, e: &BinaryVector) -> Result<BinaryVector> {
        self.a.matvec(e)
    }

    /// Checks `H_sdem · A = H_dem` and `O_sdem · A = O_dem`.
    pub fn verify(&self, dem: &DetectorModel, sdem: &DetectorModel) -> Result<()> {
        ensure_len("transfer columns", self.a.num_cols(), dem.num_columns())?;
        ensure_len("transfer rows", self.a.num_rows(), sdem.num_columns())?;
        if &sdem.h().matmul(&self.a)? != dem.h() {
            return Err(Error::Validation(
                "transfer matrix does not reproduce the detector matrix".into(),
            ));
        }
        if &sdem.observables().matmul(&self.a)? != dem.observables() {
            return Err(Error::Validation(
                "transfer matrix changes the observable action".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json_value(&self) -> TransferJson {
        TransferJson {
            num_dem_columns: self.a.num_cols(),
            num_sdem_columns: self.a.num_rows(),
            w_max: self.w_max,
            tie_break: TIE_BREAK.to_string(),
            columns: self.a.col_supports().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("transfer serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: TransferJson = serde_json::from_str(text)?;
        ensure_len("transfer column list", t.columns.len(), t.num_dem_columns)?;
        Ok(TransferMatrix {
            a: SparseBinaryMatrix::from_col_supports(t.num_sdem_columns, t.columns)?,
            w_max: t.w_max,
        })
    }
}

/// On-disk transfer matrix: the sparsified index set of every detector-model
/// column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferJson {
    pub num_dem_columns: usize,
    pub num_sdem_columns: usize,
    pub w_max: usize,
    pub tie_break: String,
    pub columns: Vec<Vec<usize>>,
}

/// Sparsified columns sharing at least one detector with `rows`, ascending.
fn candidates(sdem: &SparseBinaryMatrix, rows: &[usize]) -> Vec<usize> {
    let mut c: Vec<usize> = rows.iter().flat_map(|&r| sdem.row(r).iter().copied()).collect();
    c.sort_unstable();
    c.dedup();
    c
}

/// Exhaustive minimum-weight search. `rows` and `obs` are the supports of the
/// target detector and observable vectors.
fn search(
    sdem: &DetectorModel,
    rows: &[usize],
    obs: &[usize],
    w_max: usize,
) -> Option<Vec<usize>> {
    let cands = candidates(sdem.h(), rows);
    if cands.is_empty() {
        return None;
    }

    // Pack detectors then observables into a local bit space.
    let mut local_rows: Vec<usize> = cands
        .iter()
        .flat_map(|&j| sdem.h().col(j).iter().copied())
        .chain(rows.iter().copied())
        .collect();
    local_rows.sort_unstable();
    local_rows.dedup();
    let obs_base = local_rows.len();
    let bits = obs_base + sdem.num_observables();
    let words = bits.div_ceil(64).max(1);
    let pack = |dets: &[usize], ls: &[usize]| {
        let mut v = vec![0u64; words];
        for &d in dets {
            let k = local_rows.binary_search(&d).expect("row collected above");
            v[k / 64] ^= 1 << (k % 64);
        }
        for &l in ls {
            let k = obs_base + l;
            v[k / 64] ^= 1 << (k % 64);
        }
        v
    };
    let target = pack(rows, obs);
    let vecs: Vec<Vec<u64>> = cands
        .iter()
        .map(|&j| pack(sdem.h().col(j), sdem.observables().col(j)))
        .collect();

    // Depth-first enumeration of index combinations visits each size in
    // lexicographic order.
    fn dfs(
        vecs: &[Vec<u64>],
        target: &[u64],
        start: usize,
        remaining: usize,
        acc: &mut Vec<Vec<u64>>,
        chosen: &mut Vec<usize>,
    ) -> bool {
        let depth = chosen.len();
        if remaining == 0 {
            return acc[depth] == target;
        }
        for i in start..=vecs.len() - remaining {
            let (head, tail) = acc.split_at_mut(depth + 1);
            for (w, (a, b)) in tail[0].iter_mut().zip(head[depth].iter().zip(&vecs[i])) {
                *w = a ^ b;
            }
            chosen.push(i);
            if dfs(vecs, target, i + 1, remaining - 1, acc, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    for size in 1..=w_max.min(cands.len()) {
        let mut acc = vec![vec![0u64; words]; size + 1];
        let mut chosen = Vec::with_capacity(size);
        if dfs(&vecs, &target, 0, size, &mut acc, &mut chosen) {
            return Some(chosen.into_iter().map(|k| cands[k]).collect());
        }
    }
    None
}

/// Finds the minimum-weight set of sparsified columns whose detector sum is
/// `h` and whose observable sum is `obs_target`, returned as an indicator
/// vector of length `n_s`.
pub fn decompose_column(
    h: &BinaryVector,
    sdem: &DetectorModel,
    obs_target: &BinaryVector,
    cfg: &SparsifyConfig,
) -> Result<BinaryVector> {
    ensure_len("detector column", h.len(), sdem.num_detectors())?;
    ensure_len("observable target", obs_target.len(), sdem.num_observables())?;
    if cfg.w_max == 0 {
        return Err(invalid("w_max must be at least 1"));
    }
    let rows: Vec<usize> = h.support().collect();
    let obs: Vec<usize> = obs_target.support().collect();
    let found = search(sdem, &rows, &obs, cfg.w_max).ok_or(Error::Decomposition {
        column: None,
        w_max: cfg.w_max,
    })?;
    BinaryVector::from_support(sdem.num_columns(), &found)
}

/// Decomposes every detector-model column and checks the resulting transfer
/// matrix before returning it.
pub fn build_transfer_matrix(
    dem: &DetectorModel,
    sdem: &DetectorModel,
    cfg: &SparsifyConfig,
) -> Result<TransferMatrix> {
    ensure_len("sparsified detector count", sdem.num_detectors(), dem.num_detectors())?;
    ensure_len(
        "sparsified observable count",
        sdem.num_observables(),
        dem.num_observables(),
    )?;
    if cfg.w_max == 0 {
        return Err(invalid("w_max must be at least 1"));
    }
    if let Some(gamma) = cfg.gamma {
        let w = sdem.h().max_col_weight();
        if w > gamma {
            return Err(Error::Validation(format!(
                "sparsified model has column weight {w}, above gamma = {gamma}"
            )));
        }
    }

    let results: Vec<Option<Vec<usize>>> = (0..dem.num_columns())
        .into_par_iter()
        .map(|j| {
            if dem.h().col(j).is_empty() {
                // Undetectable faults must match an undetectable sparsified
                // fault with the same observables.
                let obs = dem.observables().col(j);
                if obs.is_empty() {
                    return Some(Vec::new());
                }
                return (0..sdem.num_columns())
                    .find(|&k| sdem.h().col(k).is_empty() && sdem.observables().col(k) == obs)
                    .map(|k| vec![k]);
            }
            search(sdem, dem.h().col(j), dem.observables().col(j), cfg.w_max)
        })
        .collect();

    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_none())
        .map(|(j, _)| j)
        .collect();
    if !failed.is_empty() {
        return Err(Error::Transfer { columns: failed });
    }
    let cols = results.into_iter().map(Option::unwrap).collect();
    let t = TransferMatrix {
        a: SparseBinaryMatrix::from_col_supports(sdem.num_columns(), cols)?,
        w_max: cfg.w_max,
    };
    t.verify(dem, sdem)?;
    Ok(t)
}

/// Probability that the XOR of independent Bernoulli variables is one:
/// `½(1 − Π(1 − 2pᵢ))`.
pub fn piling_up<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    0.5 * (1.0 - probs.into_iter().map(|p| 1.0 - 2.0 * p).product::<f64>())
}

/// Maps detector-model error probabilities onto the sparsified model.
pub fn map_soft_info(p_dem: &SoftInfo, t: &TransferMatrix) -> Result<SoftInfo> {
    ensure_len("detector-model soft information", p_dem.len(), t.num_dem_columns())?;
    let probs = p_dem.as_slice();
    Ok(SoftInfo::new(
        (0..t.num_sdem_columns())
            .map(|i| clip_probability(piling_up(t.a.row(i).iter().map(|&j| probs[j]))))
            .collect(),
    ))
}

//! Syndrome belief propagation over a detector model's Tanner graph.
//!
//! Messages live in the log-likelihood-ratio domain, `llr = ln((1-p)/p)`,
//! and are updated under a flooding schedule: every check-to-variable message
//! from the previous variable sweep, then every variable-to-check message.
//! After each iteration the hard decision `bit = llr < 0` is tested against the
//! syndrome.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, invalid, Result};
use crate::gf2::{BinaryVector, SparseBinaryMatrix};
use crate::model::{DetectorModel, SoftInfo, CLIP_LOW};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BpVariant {
    ProductSum,
    MinSum,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// Flooding: all checks, then all variables, per iteration.
    #[default]
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BpConfig {
    pub variant: BpVariant,
    pub max_iters: usize,
    /// Normalization factor applied to min-sum check messages.
    pub min_sum_scale: f64,
    pub schedule: Schedule,
    /// Stop as soon as the hard decision reproduces the syndrome.
    pub stop_on_syndrome: bool,
    /// Messages are clamped to `[-llr_clamp, llr_clamp]`.
    pub llr_clamp: f64,
}

pub const DEFAULT_MIN_SUM_SCALE: f64 = 0.625;
pub const DEFAULT_LLR_CLAMP: f64 = 50.0;

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            variant: BpVariant::MinSum,
            max_iters: 100,
            min_sum_scale: DEFAULT_MIN_SUM_SCALE,
            schedule: Schedule::Parallel,
            stop_on_syndrome: true,
            llr_clamp: DEFAULT_LLR_CLAMP,
        }
    }
}

impl BpConfig {
    pub fn min_sum(max_iters: usize) -> Self {
        BpConfig {
            max_iters,
            ..Default::default()
        }
    }

    pub fn product_sum(max_iters: usize) -> Self {
        BpConfig {
            variant: BpVariant::ProductSum,
            max_iters,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(invalid("max_iters must be at least 1"));
        }
        if !(self.min_sum_scale > 0.0 && self.min_sum_scale <= 1.0) {
            return Err(invalid(format!(
                "min-sum scale {} outside (0, 1]",
                self.min_sum_scale
            )));
        }
        if self.llr_clamp.is_nan() || self.llr_clamp <= 0.0 {
            return Err(invalid("llr clamp must be positive"));
        }
        Ok(())
    }
}

/// Which decoding stage produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    /// BP on the full detector model.
    Dem,
    /// BP on the sparsified model.
    Sdem,
    /// BP on an ordered Tanner forest.
    Otf,
    /// Ordered-statistics post-processing.
    Osd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    pub estimate: BinaryVector,
    pub converged: bool,
    pub iterations_used: usize,
    pub posteriors: SoftInfo,
    pub stage: Stage,
}

const LLR_SATURATION: f64 = 184.206_807_439_523_55; // ln(1e80)

/// `ln((1-p)/p)`, saturating at the clipping bounds.
#[inline]
pub fn probability_to_llr(p: f64) -> f64 {
    let p = p.clamp(CLIP_LOW, 1.0);
    ((1.0 - p) / p).ln().clamp(-LLR_SATURATION, LLR_SATURATION)
}

#[inline]
pub fn llr_to_probability(llr: f64) -> f64 {
    1.0 / (1.0 + llr.exp())
}

/// Exact pairwise check-node combination, `2·atanh(tanh(a/2)·tanh(b/2))`.
#[inline]
fn boxplus(a: f64, b: f64) -> f64 {
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    sign * a.abs().min(b.abs()) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// A Tanner graph prepared for repeated decoding. Cheap to share across
/// threads; each [`BpDecoder::decode`] call owns its message buffers.
#[derive(Clone, Debug)]
pub struct BpDecoder {
    num_rows: usize,
    num_cols: usize,
    /// Edges are numbered row-major; row `i` owns `row_offsets[i]..row_offsets[i+1]`.
    row_offsets: Vec<usize>,
    edge_var: Vec<usize>,
    var_offsets: Vec<usize>,
    var_edges: Vec<usize>,
}

impl BpDecoder {
    pub fn new(h: &SparseBinaryMatrix) -> Self {
        let mut row_offsets = Vec::with_capacity(h.num_rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        row_offsets.push(0);
        for i in 0..h.num_rows() {
            edge_var.extend_from_slice(h.row(i));
            row_offsets.push(edge_var.len());
        }
        let mut var_offsets = vec![0usize; h.num_cols() + 1];
        for &v in &edge_var {
            var_offsets[v + 1] += 1;
        }
        for j in 0..h.num_cols() {
            var_offsets[j + 1] += var_offsets[j];
        }
        let mut fill = var_offsets.clone();
        let mut var_edges = vec![0; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        BpDecoder {
            num_rows: h.num_rows(),
            num_cols: h.num_cols(),
            row_offsets,
            edge_var,
            var_offsets,
            var_edges,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    fn syndrome_matches(&self, estimate: &[u8], syndrome: &BinaryVector) -> bool {
        (0..self.num_rows).all(|i| {
            let parity = self.edge_var[self.row_offsets[i]..self.row_offsets[i + 1]]
                .iter()
                .fold(0u8, |acc, &v| acc ^ estimate[v]);
            (parity != 0) == syndrome.get(i)
        })
    }

    pub fn decode(
        &self,
        syndrome: &BinaryVector,
        priors: &SoftInfo,
        cfg: &BpConfig,
    ) -> Result<DecodeResult> {
        ensure_len("syndrome", syndrome.len(), self.num_rows)?;
        ensure_len("priors", priors.len(), self.num_cols)?;
        cfg.validate()?;

        let clamp = cfg.llr_clamp;
        let prior_llr: Vec<f64> = priors.as_slice().iter().map(|&p| probability_to_llr(p)).collect();
        let num_edges = self.edge_var.len();
        let mut v2c: Vec<f64> = self
            .edge_var
            .iter()
            .map(|&v| prior_llr[v].clamp(-clamp, clamp))
            .collect();
        let mut c2v = vec![0.0; num_edges];
        let mut posterior = prior_llr.clone();
        let mut estimate = vec![0u8; self.num_cols];
        let mut forward = Vec::new();
        let mut converged = false;
        let mut iterations = 0;

        for _ in 0..cfg.max_iters {
            iterations += 1;
            for i in 0..self.num_rows {
                let edges = self.row_offsets[i]..self.row_offsets[i + 1];
                let flip = syndrome.get(i);
                match cfg.variant {
                    BpVariant::MinSum => {
                        min_sum_check(&v2c[edges.clone()], &mut c2v[edges], flip, cfg.min_sum_scale, clamp)
                    }
                    BpVariant::ProductSum => {
                        product_sum_check(&v2c[edges.clone()], &mut c2v[edges], flip, clamp, &mut forward)
                    }
                }
            }

            for v in 0..self.num_cols {
                let edges = &self.var_edges[self.var_offsets[v]..self.var_offsets[v + 1]];
                let total = prior_llr[v] + edges.iter().map(|&e| c2v[e]).sum::<f64>();
                posterior[v] = total;
                for &e in edges {
                    v2c[e] = (total - c2v[e]).clamp(-clamp, clamp);
                }
                estimate[v] = u8::from(total < 0.0);
            }

            if self.syndrome_matches(&estimate, syndrome) {
                converged = true;
                if cfg.stop_on_syndrome {
                    break;
                }
            } else {
                converged = false;
            }
        }

        Ok(DecodeResult {
            estimate: BinaryVector::from_bits(estimate).expect("hard decisions are bits"),
            converged,
            iterations_used: iterations,
            posteriors: SoftInfo::new(posterior.into_iter().map(llr_to_probability).collect()),
            stage: Stage::Dem,
        })
    }
}

fn min_sum_check(incoming: &[f64], out: &mut [f64], flip: bool, scale: f64, clamp: f64) {
    let mut negative = flip;
    let mut min1 = f64::INFINITY;
    let mut min2 = f64::INFINITY;
    let mut argmin = usize::MAX;
    for (k, &m) in incoming.iter().enumerate() {
        negative ^= m < 0.0;
        let a = m.abs();
        if a < min1 {
            min2 = min1;
            min1 = a;
            argmin = k;
        } else if a < min2 {
            min2 = a;
        }
    }
    for (k, (&m, o)) in incoming.iter().zip(out.iter_mut()).enumerate() {
        let mag = if k == argmin { min2 } else { min1 };
        let neg = negative ^ (m < 0.0);
        let val = (scale * mag).min(clamp);
        *o = if neg { -val } else { val };
    }
}

fn product_sum_check(incoming: &[f64], out: &mut [f64], flip: bool, clamp: f64, forward: &mut Vec<f64>) {
    let n = incoming.len();
    let sign = if flip { -1.0 } else { 1.0 };
    if n == 0 {
        return;
    }
    if n == 1 {
        out[0] = sign * clamp;
        return;
    }
    // forward[k] combines incoming[..k]; the backward pass runs in place.
    forward.clear();
    forward.push(f64::NAN);
    forward.push(incoming[0]);
    for k in 1..n - 1 {
        let f = boxplus(forward[k], incoming[k]);
        forward.push(f);
    }
    let mut backward = incoming[n - 1];
    out[n - 1] = sign * forward[n - 1];
    for k in (1..n - 1).rev() {
        out[k] = sign * boxplus(forward[k], backward);
        backward = boxplus(backward, incoming[k]);
    }
    out[0] = sign * backward;
    for o in out.iter_mut() {
        *o = o.clamp(-clamp, clamp);
    }
}

/// Belief propagation of `syndrome` on `model.h()` with the given priors.
pub fn bp_decode(
    model: &DetectorModel,
    syndrome: &BinaryVector,
    priors: &SoftInfo,
    cfg: &BpConfig,
) -> Result<DecodeResult> {
    BpDecoder::new(model.h()).decode(syndrome, priors, cfg)
}

/// Column indices sorted by descending error probability; ties keep
/// ascending index order.
pub fn posteriors_to_order(p: &SoftInfo) -> Vec<usize> {
    let probs = p.as_slice();
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]));
    order
}

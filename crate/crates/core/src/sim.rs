//! Noise sampling, Monte Carlo logical error rates and timing benchmarks.
//!
//! Every shot draws from its own ChaCha8 stream keyed by `(seed, shot)`, so
//! results do not depend on the number of worker threads or on which
//! pipeline consumes the shots.

use std::io::Write;
use std::time::Duration;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gf2::BinaryVector;
use crate::model::DetectorModel;
use crate::pipeline::Decoder;

/// Random generator for shot `shot` of a run seeded with `seed`.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// One sampled fault configuration with its syndrome and observable flips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub error: BinaryVector,
    pub syndrome: BinaryVector,
    pub observables: BinaryVector,
}

/// Flips every column independently with its prior.
pub fn sample_error<R: Rng + ?Sized>(model: &DetectorModel, rng: &mut R) -> Sample {
    let error = BinaryVector::from_bools(model.priors().as_slice().iter().map(|&p| rng.gen::<f64>() < p));
    Sample {
        syndrome: model.h().matvec(&error).expect("error length matches model"),
        observables: model.observables().matvec(&error).expect("error length matches model"),
        error,
    }
}

/// Per-round failure probability `1 − (1 − ler_total)^(1/rounds)`.
pub fn ler_per_round(ler_total: f64, rounds: usize) -> f64 {
    if rounds <= 1 {
        return ler_total;
    }
    -((-ler_total).ln_1p() / rounds as f64).exp_m1()
}

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if p == 1.0 { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

/// Binomial rates whose likelihood is within `factor` of the maximum.
pub fn likelihood_ratio_interval(k: u64, n: u64, factor: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (kf, nf) = (k as f64, n as f64);
    let loglik = |p: f64| {
        let a = if k == 0 { 0.0 } else { kf * p.ln() };
        let b = if k == n { 0.0 } else { (nf - kf) * (-p).ln_1p() };
        a + b
    };
    let phat = kf / nf;
    let threshold = loglik(phat) - factor.ln();
    let bisect = |mut inside: f64, mut outside: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if loglik(mid) >= threshold {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    let low = if k == 0 { 0.0 } else { bisect(phat, 0.0) };
    let high = if k == n { 1.0 } else { bisect(phat, 1.0) };
    (low, high)
}

/// Histogram with geometrically growing bin widths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingHistogram {
    /// Lower edge of the first bin, in nanoseconds.
    pub min_ns: f64,
    /// Ratio between consecutive bin edges.
    pub ratio: f64,
    pub counts: Vec<u64>,
}

impl Default for TimingHistogram {
    fn default() -> Self {
        TimingHistogram::new(100.0, 2f64.sqrt(), 64)
    }
}

impl TimingHistogram {
    pub fn new(min_ns: f64, ratio: f64, bins: usize) -> Self {
        assert!(min_ns > 0.0 && ratio > 1.0 && bins > 0);
        TimingHistogram {
            min_ns,
            ratio,
            counts: vec![0; bins],
        }
    }

    /// `bins + 1` edges; values outside fall into the first or last bin.
    pub fn edges(&self) -> Vec<f64> {
        (0..=self.counts.len())
            .map(|k| self.min_ns * self.ratio.powi(k as i32))
            .collect()
    }

    pub fn bin_of(&self, ns: f64) -> usize {
        if ns <= self.min_ns {
            return 0;
        }
        let k = ((ns / self.min_ns).ln() / self.ratio.ln()).floor() as usize;
        k.min(self.counts.len() - 1)
    }

    pub fn record(&mut self, ns: f64) {
        let k = self.bin_of(ns);
        self.counts[k] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub shots: u64,
    pub seed: u64,
    /// Syndrome extraction rounds covered by the model.
    pub rounds: usize,
    pub physical_p: f64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// When false, timings are not recorded and reported as zero so that
    /// repeated runs are byte-identical.
    pub record_timing: bool,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        MonteCarloConfig {
            shots: 1000,
            seed: 0,
            rounds: 1,
            physical_p: 0.0,
            threads: None,
            record_timing: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloStats {
    pub failures: u64,
    pub shots: u64,
    pub rounds: usize,
    pub ler_total: f64,
    pub ler_per_round: f64,
    /// Wilson 95% interval on the per-round rate.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Wilson 95% interval on the total rate.
    pub ci_total: (f64, f64),
    /// Likelihood-ratio interval (factor 1000) on the total rate, reported
    /// from 100 shots on.
    pub lr_interval: Option<(f64, f64)>,
    /// Shots whose final stage did not reproduce the syndrome.
    pub unconverged: u64,
    pub mean_time_per_round_ns: f64,
    pub timing: TimingHistogram,
}

impl MonteCarloStats {
    fn from_shots(cfg: &MonteCarloConfig, shots: &[ShotOutcome]) -> Self {
        let n = shots.len() as u64;
        let failures = shots.iter().filter(|s| s.failed).count() as u64;
        let unconverged = shots.iter().filter(|s| !s.converged).count() as u64;
        let ler_total = failures as f64 / n as f64;
        let ci_total = wilson_interval(failures, n, Z95);
        let mut timing = TimingHistogram::default();
        let mut mean = 0.0;
        if cfg.record_timing {
            for s in shots {
                timing.record(s.nanos as f64);
            }
            mean = shots.iter().map(|s| s.nanos as f64).sum::<f64>() / n as f64 / cfg.rounds as f64;
        }
        MonteCarloStats {
            failures,
            shots: n,
            rounds: cfg.rounds,
            ler_total,
            ler_per_round: ler_per_round(ler_total, cfg.rounds),
            ci_low: ler_per_round(ci_total.0, cfg.rounds),
            ci_high: ler_per_round(ci_total.1, cfg.rounds),
            ci_total,
            lr_interval: (n >= 100).then(|| likelihood_ratio_interval(failures, n, 1000.0)),
            unconverged,
            mean_time_per_round_ns: mean,
            timing,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct ShotOutcome {
    failed: bool,
    converged: bool,
    nanos: u64,
}

fn run_shot(decoder: &Decoder, model: &DetectorModel, seed: u64, shot: u64) -> Result<ShotOutcome> {
    let sample = sample_error(model, &mut shot_rng(seed, shot));
    let out = decoder.decode(&sample.syndrome)?;
    let converged = out.result.converged;
    Ok(ShotOutcome {
        failed: !converged || out.observables != sample.observables,
        converged,
        nanos: u64::try_from(out.elapsed.as_nanos()).unwrap_or(u64::MAX),
    })
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(invalid("thread count must be at least 1")),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| invalid(format!("cannot start thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Samples `cfg.shots` errors from the decoder's detector model, decodes each
/// and counts logical failures. A shot fails when the predicted observable
/// flips differ from the sampled ones or the pipeline did not converge.
pub fn run_montecarlo(decoder: &Decoder, cfg: &MonteCarloConfig) -> Result<MonteCarloStats> {
    if cfg.shots == 0 {
        return Err(invalid("shots must be at least 1"));
    }
    if cfg.rounds == 0 {
        return Err(invalid("rounds must be at least 1"));
    }
    let model = decoder.dem();
    let shots = in_pool(cfg.threads, || {
        (0..cfg.shots)
            .into_par_iter()
            .map(|shot| run_shot(decoder, model, cfg.seed, shot))
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(MonteCarloStats::from_shots(cfg, &shots))
}

/// Timing of one pipeline in [`bench_decoders`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub pipeline: String,
    pub shots: u64,
    pub failures: u64,
    pub mean_time_per_round_ns: f64,
    pub timing: TimingHistogram,
}

/// Feeds the same shot stream to every decoder, one shot at a time on the
/// calling thread, and reports mean decoding time per round.
pub fn bench_decoders(decoders: &[&Decoder], rounds: usize, shots: u64, seed: u64) -> Result<Vec<BenchReport>> {
    if rounds == 0 || shots == 0 {
        return Err(invalid("rounds and shots must be at least 1"));
    }
    decoders
        .iter()
        .map(|d| {
            let mut timing = TimingHistogram::default();
            let mut total = Duration::ZERO;
            let mut failures = 0;
            for shot in 0..shots {
                let s = run_shot(d, d.dem(), seed, shot)?;
                failures += u64::from(s.failed);
                total += Duration::from_nanos(s.nanos);
                timing.record(s.nanos as f64);
            }
            Ok(BenchReport {
                pipeline: d.kind().to_string(),
                shots,
                failures,
                mean_time_per_round_ns: total.as_nanos() as f64 / shots as f64 / rounds as f64,
                timing,
            })
        })
        .collect()
}

/// One line of the results table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub p: f64,
    pub d: usize,
    pub rounds: usize,
    pub shots: u64,
    pub failures: u64,
    pub ler_total: f64,
    pub ler_per_round: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_time_per_round_ns: f64,
}

impl CsvRow {
    pub fn new(p: f64, d: usize, stats: &MonteCarloStats) -> Self {
        CsvRow {
            p,
            d,
            rounds: stats.rounds,
            shots: stats.shots,
            failures: stats.failures,
            ler_total: stats.ler_total,
            ler_per_round: stats.ler_per_round,
            ci_low: stats.ci_low,
            ci_high: stats.ci_high,
            mean_time_per_round_ns: stats.mean_time_per_round_ns,
        }
    }
}

pub fn write_csv<W: Write>(w: W, rows: &[CsvRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r).map_err(|e| invalid(format!("csv: {e}")))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| invalid(format!("csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::SparseBinaryMatrix;
    use crate::model::SoftInfo;
    use crate::pipeline::{PipelineConfig, PipelineKind};

    fn model(p: f64) -> DetectorModel {
        DetectorModel::new(
            SparseBinaryMatrix::from_col_supports(2, vec![vec![0], vec![0, 1], vec![1]]).unwrap(),
            SparseBinaryMatrix::from_col_supports(1, vec![vec![0], vec![], vec![]]).unwrap(),
            SoftInfo::uniform(3, p),
        )
        .unwrap()
    }

    #[test]
    fn degenerate_channel_samples_nothing() {
        let m = model(1e-80);
        for shot in 0..100 {
            let s = sample_error(&m, &mut shot_rng(1, shot));
            assert!(s.error.is_zero() && s.syndrome.is_zero());
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let m = model(0.3);
        let a: Vec<Sample> = (0..20).map(|i| sample_error(&m, &mut shot_rng(9, i))).collect();
        let b: Vec<Sample> = (0..20).map(|i| sample_error(&m, &mut shot_rng(9, i))).collect();
        assert_eq!(a, b);
        let c: Vec<Sample> = (0..20).map(|i| sample_error(&m, &mut shot_rng(10, i))).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn flip_frequency_matches_prior() {
        let m = model(0.2);
        let n = 100_000u64;
        let mut counts = [0u64; 3];
        for shot in 0..n {
            let s = sample_error(&m, &mut shot_rng(3, shot));
            for j in s.error.support() {
                counts[j] += 1;
            }
        }
        let sigma = (0.2f64 * 0.8 / n as f64).sqrt();
        for c in counts {
            assert!((c as f64 / n as f64 - 0.2).abs() < 3.0 * sigma);
        }
    }

    #[test]
    fn per_round_examples() {
        assert_eq!(ler_per_round(0.0, 10), 0.0);
        assert!((ler_per_round(0.1, 10) - (1.0 - 0.9f64.powf(0.1))).abs() < 1e-15);
        assert!((ler_per_round(0.1, 10) - 0.010480).abs() < 1e-6);
        assert_eq!(ler_per_round(0.3, 1), 0.3);
        assert_eq!(ler_per_round(1.0, 4), 1.0);
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(10, 100, Z95);
        assert!(lo < 0.1 && 0.1 < hi);
        assert!((lo - 0.05523).abs() < 1e-4 && (hi - 0.17437).abs() < 1e-4);
        assert_eq!(wilson_interval(0, 50, Z95).0, 0.0);
    }

    #[test]
    fn likelihood_ratio_bounds() {
        let (lo, hi) = likelihood_ratio_interval(10, 100, 1000.0);
        let ll = |p: f64| 10.0 * p.ln() + 90.0 * (1.0 - p).ln();
        let peak = ll(0.1);
        assert!((peak - ll(lo) - 1000f64.ln()).abs() < 1e-9);
        assert!((peak - ll(hi) - 1000f64.ln()).abs() < 1e-9);
        let (w_lo, w_hi) = wilson_interval(10, 100, Z95);
        assert!(lo < w_lo && hi > w_hi);
        assert_eq!(likelihood_ratio_interval(0, 100, 1000.0).0, 0.0);
    }

    #[test]
    fn histogram_bins_widen() {
        let h = TimingHistogram::default();
        let e = h.edges();
        let widths: Vec<f64> = e.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(widths.windows(2).all(|w| w[1] > w[0]));
        assert!(widths.windows(2).all(|w| (w[1] / w[0] - h.ratio).abs() < 1e-9));
        assert_eq!(h.bin_of(1.0), 0);
        assert_eq!(h.bin_of(1e30), h.counts.len() - 1);
        assert_eq!(h.bin_of(e[5] * 1.0001), 5);
    }

    #[test]
    fn montecarlo_is_deterministic_across_threads() {
        let m = model(0.1);
        let d = Decoder::new(PipelineKind::BpOtf, PipelineConfig::surface_code(), &m, None).unwrap();
        let mut cfg = MonteCarloConfig {
            shots: 2000,
            seed: 5,
            rounds: 1,
            physical_p: 0.1,
            threads: Some(1),
            record_timing: false,
        };
        let a = run_montecarlo(&d, &cfg).unwrap();
        cfg.threads = Some(4);
        let b = run_montecarlo(&d, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.failures <= a.shots);
        assert!(a.ler_per_round <= a.ler_total);
        assert!(a.ci_low <= a.ler_per_round && a.ler_per_round <= a.ci_high);
        assert!(a.lr_interval.is_some());
    }

    #[test]
    fn bench_reports_each_pipeline() {
        let m = model(0.05);
        let a = Decoder::new(PipelineKind::Bp, PipelineConfig::bp_osd0_surface(), &m, None).unwrap();
        let b = Decoder::new(PipelineKind::BpOsd0, PipelineConfig::bp_osd0_surface(), &m, None).unwrap();
        let r = bench_decoders(&[&a, &b], 1, 200, 1).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].pipeline, "bp");
        assert!(r.iter().all(|x| x.timing.total() == 200 && x.mean_time_per_round_ns > 0.0));
    }

    #[test]
    fn csv_roundtrip() {
        let m = model(0.1);
        let d = Decoder::new(PipelineKind::Bp, PipelineConfig::bp_osd0_surface(), &m, None).unwrap();
        let stats = run_montecarlo(&d, &MonteCarloConfig { shots: 50, ..Default::default() }).unwrap();
        let row = CsvRow::new(0.1, 2, &stats);
        let mut buf = Vec::new();
        write_csv(&mut buf, std::slice::from_ref(&row)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(
            "p,d,rounds,shots,failures,ler_total,ler_per_round,ci_low,ci_high,mean_time_per_round_ns\n"
        ));
        assert_eq!(read_csv(&text).unwrap(), vec![row]);
    }
}

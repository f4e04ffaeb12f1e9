//! Composed decoders: BP+OTF, BP+BP, BP+BP+OTF, the iteration ensemble and
//! the BP+OSD-0 baseline.
//!
//! Every pipeline stops at the first stage whose estimate reproduces the
//! syndrome. Soft information is clipped at every handoff.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bp::{posteriors_to_order, BpConfig, BpDecoder, DecodeResult, Stage};
use crate::error::{ensure_len, invalid, Error, Result};
use crate::gf2::{solve_ordered, BinaryVector, SparseBinaryMatrix};
use crate::model::{DetectorModel, SoftInfo};
use crate::otf::{otf_decode_matrix, OtfConfig, VirtualCheckPolicy};
use crate::sparsify::{map_soft_info, TransferMatrix};

/// Which stages a pipeline runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineKind {
    Bp,
    BpOsd0,
    BpOtf,
    BpBp,
    BpBpOtf,
    BpBpOsd0,
    Ensemble,
}

impl PipelineKind {
    pub const ALL: [PipelineKind; 7] = [
        PipelineKind::Bp,
        PipelineKind::BpOsd0,
        PipelineKind::BpOtf,
        PipelineKind::BpBp,
        PipelineKind::BpBpOtf,
        PipelineKind::BpBpOsd0,
        PipelineKind::Ensemble,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PipelineKind::Bp => "bp",
            PipelineKind::BpOsd0 => "bp-osd0",
            PipelineKind::BpOtf => "bp-otf",
            PipelineKind::BpBp => "bp-bp",
            PipelineKind::BpBpOtf => "bp-bp-otf",
            PipelineKind::BpBpOsd0 => "bp-bp-osd0",
            PipelineKind::Ensemble => "ensemble",
        }
    }

    /// True when the pipeline has a stage on the sparsified model.
    pub fn uses_sdem(self) -> bool {
        matches!(
            self,
            PipelineKind::BpBp | PipelineKind::BpBpOtf | PipelineKind::BpBpOsd0 | PipelineKind::Ensemble
        )
    }
}

impl fmt::Display for PipelineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PipelineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PipelineKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid(format!("unknown pipeline '{s}'")))
    }
}

/// Per-stage settings shared by all pipelines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// BP on the detector model.
    pub stage1: BpConfig,
    /// BP on the sparsified model.
    pub stage2: BpConfig,
    /// BP on the ordered Tanner forest. Product-sum by default, which is
    /// exact on a forest; scaled min-sum is not.
    pub stage3: BpConfig,
    /// Prior of columns left out of the forest; zero removes them.
    pub decimation: f64,
    pub virtual_checks: VirtualCheckPolicy,
    /// Stage-1 iteration counts of the ensemble members.
    pub ensemble_stage1_iters: Option<Vec<usize>>,
}

/// Stage-1 iteration counts of the default ensemble: multiples of 17 below
/// 391, which gives 22 members (17, 34, ..., 374).
pub fn default_ensemble_iters() -> Vec<usize> {
    (17..391).step_by(17).collect()
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig::ensemble()
    }
}

impl PipelineConfig {
    fn stages(i1: usize, i2: usize, i3: usize, decimation: f64) -> Self {
        PipelineConfig {
            stage1: BpConfig::min_sum(i1),
            stage2: BpConfig::min_sum(i2),
            stage3: BpConfig::product_sum(i3),
            decimation,
            virtual_checks: VirtualCheckPolicy::Auto,
            ensemble_stage1_iters: None,
        }
    }

    /// 22 BP+BP+OTF members with stage-1 budgets 17, 34, ..., 374 and later stages
    /// capped at 113 iterations.
    pub fn ensemble() -> Self {
        PipelineConfig {
            ensemble_stage1_iters: Some(default_ensemble_iters()),
            ..PipelineConfig::stages(17, 113, 113, 1e-9)
        }
    }

    /// One BP+BP+OTF decoder with 300 stage-1 iterations, for codes with
    /// little degeneracy.
    pub fn single_member() -> Self {
        PipelineConfig::stages(300, 113, 113, 1e-9)
    }

    /// BP+BP+OTF budgets for rotated surface codes.
    pub fn surface_code() -> Self {
        PipelineConfig {
            virtual_checks: VirtualCheckPolicy::PerComponent,
            ..PipelineConfig::stages(6, 51, 50, 0.0)
        }
    }

    /// BP+OSD-0 with a 10,000 iteration BP stage.
    pub fn bp_osd0() -> Self {
        PipelineConfig::stages(10_000, 0, 0, 0.0).without_unused()
    }

    /// BP+OSD-0 budget used for rotated surface codes.
    pub fn bp_osd0_surface() -> Self {
        PipelineConfig::stages(70, 0, 0, 0.0).without_unused()
    }

    /// BP+BP+OSD-0 with 1,000 iterations on the detector model and 9,000 on
    /// the sparsified model.
    pub fn bp_bp_osd0() -> Self {
        PipelineConfig::stages(1_000, 9_000, 1, 0.0)
    }

    fn without_unused(mut self) -> Self {
        self.stage2.max_iters = 1;
        self.stage3.max_iters = 1;
        self
    }

    /// Preset matching `kind`. `surface` selects the rotated surface code
    /// budgets where they differ.
    pub fn preset(kind: PipelineKind, surface: bool) -> Self {
        match (kind, surface) {
            (PipelineKind::Ensemble, _) => PipelineConfig::ensemble(),
            (PipelineKind::BpOsd0 | PipelineKind::Bp, true) => PipelineConfig::bp_osd0_surface(),
            (PipelineKind::BpOsd0 | PipelineKind::Bp, false) => PipelineConfig::bp_osd0(),
            (PipelineKind::BpBpOsd0, _) => PipelineConfig::bp_bp_osd0(),
            (_, true) => PipelineConfig::surface_code(),
            (_, false) => PipelineConfig::single_member(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.stage1.validate()?;
        self.stage2.validate()?;
        self.stage3.validate()?;
        if !(0.0..=0.5).contains(&self.decimation) {
            return Err(invalid(format!("decimation {} outside [0, 0.5]", self.decimation)));
        }
        if let Some(iters) = &self.ensemble_stage1_iters {
            if iters.is_empty() {
                return Err(invalid("ensemble needs at least one member"));
            }
            if iters.contains(&0) {
                return Err(invalid("ensemble iteration counts must be at least 1"));
            }
        }
        Ok(())
    }

    fn otf(&self) -> OtfConfig {
        OtfConfig {
            decimation: self.decimation,
            virtual_checks: self.virtual_checks,
            bp: self.stage3.clone(),
        }
    }

    /// Stage-1 budgets of the ensemble members; a lone member when no list
    /// is configured.
    pub fn members(&self) -> Vec<usize> {
        self.ensemble_stage1_iters
            .clone()
            .unwrap_or_else(|| vec![self.stage1.max_iters])
    }
}

/// Decodes on the columns of `h` ordered from least to most reliable, using
/// the first independent columns of that order.
fn osd0_matrix(h: &SparseBinaryMatrix, syndrome: &BinaryVector, posteriors: &SoftInfo) -> Result<DecodeResult> {
    ensure_len("syndrome", syndrome.len(), h.num_rows())?;
    ensure_len("posteriors", posteriors.len(), h.num_cols())?;
    let posteriors = posteriors.clip();
    let order = posteriors_to_order(&posteriors);
    let (estimate, converged) = match solve_ordered(h, &order, syndrome)? {
        Some(x) => (x, true),
        None => (
            BinaryVector::from_bools(posteriors.as_slice().iter().map(|&p| p > 0.5)),
            false,
        ),
    };
    Ok(DecodeResult {
        estimate,
        converged,
        iterations_used: 0,
        posteriors,
        stage: Stage::Osd,
    })
}

/// OSD-0 post-processing of `posteriors` on `model.h()`.
pub fn osd0_decode(model: &DetectorModel, syndrome: &BinaryVector, posteriors: &SoftInfo) -> Result<DecodeResult> {
    osd0_matrix(model.h(), syndrome, posteriors)
}

/// Result of a pipeline run on one syndrome.
#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    pub result: DecodeResult,
    /// Observable flips predicted by the estimate, using the observable
    /// matrix of the model the final stage decoded on.
    pub observables: BinaryVector,
    /// Decoding time; for ensembles, the time of the selected member.
    pub elapsed: Duration,
}

/// A pipeline bound to its models, with Tanner graphs prepared once for
/// repeated decoding. Safe to share across threads.
#[derive(Debug)]
pub struct Decoder<'a> {
    kind: PipelineKind,
    cfg: PipelineConfig,
    dem: &'a DetectorModel,
    sdem: &'a DetectorModel,
    transfer: Cow<'a, TransferMatrix>,
    dem_bp: BpDecoder,
    sdem_bp: Option<BpDecoder>,
}

impl<'a> Decoder<'a> {
    /// Pipelines that need a sparsified model fall back to the detector model
    /// itself with an identity transfer matrix when `sdem` is `None`.
    pub fn new(
        kind: PipelineKind,
        cfg: PipelineConfig,
        dem: &'a DetectorModel,
        sdem: Option<(&'a DetectorModel, &'a TransferMatrix)>,
    ) -> Result<Self> {
        cfg.validate()?;
        let (sdem, transfer, sdem_bp) = match sdem {
            Some((s, t)) => {
                t.verify(dem, s)?;
                (s, Cow::Borrowed(t), Some(BpDecoder::new(s.h())))
            }
            None => (dem, Cow::Owned(TransferMatrix::identity(dem.num_columns())), None),
        };
        Ok(Decoder {
            kind,
            cfg,
            dem,
            sdem,
            transfer,
            dem_bp: BpDecoder::new(dem.h()),
            sdem_bp,
        })
    }

    pub fn kind(&self) -> PipelineKind {
        self.kind
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    /// The detector model syndromes are drawn from.
    pub fn dem(&self) -> &'a DetectorModel {
        self.dem
    }

    /// The sparsified model, or the detector model when none was given.
    pub fn sdem(&self) -> &'a DetectorModel {
        self.sdem
    }

    fn sdem_bp(&self) -> &BpDecoder {
        self.sdem_bp.as_ref().unwrap_or(&self.dem_bp)
    }

    /// Decodes one syndrome of the detector model.
    pub fn decode(&self, syndrome: &BinaryVector) -> Result<PipelineOutcome> {
        ensure_len("syndrome", syndrome.len(), self.dem.num_detectors())?;
        if self.kind == PipelineKind::Ensemble {
            return self.ensemble(syndrome);
        }
        let start = Instant::now();
        let result = self.run(self.kind, self.cfg.stage1.max_iters, syndrome)?;
        let elapsed = start.elapsed();
        self.outcome(result, elapsed)
    }

    fn outcome(&self, result: DecodeResult, elapsed: Duration) -> Result<PipelineOutcome> {
        let model = if self.on_sdem(&result) { self.sdem } else { self.dem };
        Ok(PipelineOutcome {
            observables: model.observables().matvec(&result.estimate)?,
            result,
            elapsed,
        })
    }

    fn on_sdem(&self, result: &DecodeResult) -> bool {
        match result.stage {
            Stage::Dem => false,
            Stage::Sdem => true,
            Stage::Otf | Stage::Osd => self.kind.uses_sdem(),
        }
    }

    fn run(&self, kind: PipelineKind, stage1_iters: usize, s: &BinaryVector) -> Result<DecodeResult> {
        let stage1 = BpConfig {
            max_iters: stage1_iters,
            ..self.cfg.stage1.clone()
        };
        let r1 = self.dem_bp.decode(s, self.dem.priors(), &stage1)?;
        if r1.converged || kind == PipelineKind::Bp {
            return Ok(r1);
        }
        match kind {
            PipelineKind::BpOsd0 => return osd0_matrix(self.dem.h(), s, &r1.posteriors),
            PipelineKind::BpOtf => {
                return otf_decode_matrix(self.dem.h(), Some(&self.dem_bp), &r1.posteriors, s, &self.cfg.otf())
            }
            _ => {}
        }

        let mapped = map_soft_info(&r1.posteriors.clip(), &self.transfer)?;
        let mut r2 = self.sdem_bp().decode(s, &mapped, &self.cfg.stage2)?;
        r2.stage = Stage::Sdem;
        if r2.converged || kind == PipelineKind::BpBp {
            return Ok(r2);
        }
        if kind == PipelineKind::BpBpOsd0 {
            return osd0_matrix(self.sdem.h(), s, &r2.posteriors);
        }
        otf_decode_matrix(self.sdem.h(), Some(self.sdem_bp()), &r2.posteriors, s, &self.cfg.otf())
    }

    fn ensemble(&self, s: &BinaryVector) -> Result<PipelineOutcome> {
        let mut best: Option<(usize, DecodeResult, Duration)> = None;
        for iters in self.cfg.members() {
            let start = Instant::now();
            let r = self.run(PipelineKind::BpBpOtf, iters, s)?;
            let elapsed = start.elapsed();
            if r.converged {
                return self.outcome(r, elapsed);
            }
            let h = if self.on_sdem(&r) { self.sdem.h() } else { self.dem.h() };
            let residual = h.matvec(&r.estimate)?.xor(s)?.weight();
            if best.as_ref().is_none_or(|(w, _, _)| residual < *w) {
                best = Some((residual, r, elapsed));
            }
        }
        let (_, r, elapsed) = best.expect("ensemble has members");
        self.outcome(r, elapsed)
    }
}

/// BP on the detector model, then BP on the sparsified model seeded with the
/// mapped posteriors.
pub fn bp_bp_decode(
    dem: &DetectorModel,
    sdem: &DetectorModel,
    t: &TransferMatrix,
    syndrome: &BinaryVector,
    cfg: &PipelineConfig,
) -> Result<DecodeResult> {
    Ok(Decoder::new(PipelineKind::BpBp, cfg.clone(), dem, Some((sdem, t)))?
        .decode(syndrome)?
        .result)
}

/// [`bp_bp_decode`] followed by an ordered Tanner forest stage on the
/// sparsified model.
pub fn bp_bp_otf_decode(
    dem: &DetectorModel,
    sdem: &DetectorModel,
    t: &TransferMatrix,
    syndrome: &BinaryVector,
    cfg: &PipelineConfig,
) -> Result<DecodeResult> {
    Ok(Decoder::new(PipelineKind::BpBpOtf, cfg.clone(), dem, Some((sdem, t)))?
        .decode(syndrome)?
        .result)
}

/// Runs one BP+BP+OTF decoder per stage-1 budget and keeps the first that
/// reproduces the syndrome, or else the one with the lightest residual
/// syndrome.
pub fn ensemble_decode(
    dem: &DetectorModel,
    sdem: &DetectorModel,
    t: &TransferMatrix,
    syndrome: &BinaryVector,
    cfg: &PipelineConfig,
) -> Result<DecodeResult> {
    if cfg.ensemble_stage1_iters.as_ref().is_none_or(|v| v.is_empty()) {
        return Err(invalid("ensemble needs at least one member"));
    }
    Ok(Decoder::new(PipelineKind::Ensemble, cfg.clone(), dem, Some((sdem, t)))?
        .decode(syndrome)?
        .result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparsify::{build_transfer_matrix, SparsifyConfig};

    fn bv(s: &str) -> BinaryVector {
        BinaryVector::parse(s).unwrap()
    }

    fn model(rows: usize, cols: Vec<Vec<usize>>, obs: Vec<Vec<usize>>, priors: Vec<f64>) -> DetectorModel {
        DetectorModel::new(
            SparseBinaryMatrix::from_col_supports(rows, cols).unwrap(),
            SparseBinaryMatrix::from_col_supports(1, obs).unwrap(),
            SoftInfo::new(priors),
        )
        .unwrap()
    }

    fn repetition() -> DetectorModel {
        model(
            2,
            vec![vec![0], vec![0, 1], vec![1]],
            vec![vec![0], vec![], vec![]],
            vec![0.1; 3],
        )
    }

    #[test]
    fn kind_names_roundtrip() {
        for k in PipelineKind::ALL {
            assert_eq!(k.name().parse::<PipelineKind>().unwrap(), k);
        }
        assert!("bp-osd".parse::<PipelineKind>().is_err());
    }

    #[test]
    fn presets() {
        let e = PipelineConfig::ensemble();
        assert_eq!(e.members().len(), 22);
        assert_eq!(e.members()[0], 17);
        assert_eq!(*e.members().last().unwrap(), 374);
        assert!(e.members().windows(2).all(|w| w[1] - w[0] == 17));
        assert_eq!((e.stage2.max_iters, e.stage3.max_iters), (113, 113));
        let s = PipelineConfig::surface_code();
        assert_eq!((s.stage1.max_iters, s.stage2.max_iters, s.stage3.max_iters), (6, 51, 50));
        assert_eq!(s.decimation, 0.0);
        let one = PipelineConfig::single_member();
        assert_eq!((one.stage1.max_iters, one.stage2.max_iters), (300, 113));
        assert_eq!(PipelineConfig::bp_osd0().stage1.max_iters, 10_000);
        assert_eq!(PipelineConfig::bp_osd0_surface().stage1.max_iters, 70);
        let bbo = PipelineConfig::bp_bp_osd0();
        assert_eq!((bbo.stage1.max_iters, bbo.stage2.max_iters), (1_000, 9_000));
    }

    #[test]
    fn invalid_ensemble_rejected() {
        let mut cfg = PipelineConfig::ensemble();
        cfg.ensemble_stage1_iters = Some(vec![3, 0]);
        assert!(cfg.validate().is_err());
        cfg.ensemble_stage1_iters = Some(vec![]);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn osd0_examples() {
        let m = repetition();
        let zero = osd0_decode(&m, &bv("00"), &SoftInfo::uniform(3, 0.1)).unwrap();
        assert!(zero.converged && zero.estimate.is_zero());

        let r = osd0_decode(&m, &bv("10"), &SoftInfo::new(vec![0.4, 0.1, 0.05])).unwrap();
        assert_eq!(r.estimate, bv("100"));
        assert_eq!(r.stage, Stage::Osd);

        // Square full-rank system: unique solution.
        let sq = model(
            2,
            vec![vec![0, 1], vec![1]],
            vec![vec![], vec![]],
            vec![0.1, 0.1],
        );
        let r = osd0_decode(&sq, &bv("11"), &SoftInfo::uniform(2, 0.1)).unwrap();
        assert_eq!(r.estimate, bv("10"));

        let unreachable = model(2, vec![vec![0]], vec![vec![]], vec![0.1]);
        assert!(!osd0_decode(&unreachable, &bv("01"), &SoftInfo::uniform(1, 0.1)).unwrap().converged);
    }

    #[test]
    fn zero_syndrome_stops_at_first_stage() {
        let m = repetition();
        let t = TransferMatrix::identity(3);
        for r in [
            bp_bp_decode(&m, &m, &t, &bv("00"), &PipelineConfig::surface_code()).unwrap(),
            bp_bp_otf_decode(&m, &m, &t, &bv("00"), &PipelineConfig::surface_code()).unwrap(),
            ensemble_decode(&m, &m, &t, &bv("00"), &PipelineConfig::ensemble()).unwrap(),
        ] {
            assert_eq!(r.stage, Stage::Dem);
            assert!(r.converged);
            assert_eq!(r.iterations_used, 1);
        }
    }

    /// Two-cycle on a single check pair: BP oscillates on the cyclic model
    /// but the forest stage resolves the syndrome.
    fn loopy() -> DetectorModel {
        model(
            2,
            vec![vec![0, 1], vec![0, 1], vec![0], vec![1]],
            vec![vec![0], vec![], vec![], vec![]],
            vec![0.1, 0.1, 0.1, 0.1],
        )
    }

    #[test]
    fn stage_labels_follow_algorithm() {
        let m = loopy();
        let t = TransferMatrix::identity(4);
        let cfg = PipelineConfig::stages(3, 3, 3, 0.0);
        let r = bp_bp_decode(&m, &m, &t, &bv("11"), &cfg).unwrap();
        assert_eq!(r.stage, Stage::Sdem);
        assert!(!r.converged);
        let r = bp_bp_otf_decode(&m, &m, &t, &bv("11"), &cfg).unwrap();
        assert_eq!(r.stage, Stage::Otf);
        assert!(r.converged);
        assert!(m.h().satisfies(&r.estimate, &bv("11")));
    }

    #[test]
    fn sparsified_stage_rescues_hyperedge() {
        // The detector model has a single weight-3 fault; the sparsified model
        // splits it into a weight-1 and a weight-2 fault.
        let dem = model(
            3,
            vec![vec![0, 1, 2], vec![0], vec![1], vec![2]],
            vec![vec![0], vec![], vec![], vec![]],
            vec![0.1, 0.01, 0.01, 0.01],
        );
        let sdem = model(
            3,
            vec![vec![0, 1], vec![2], vec![0], vec![1]],
            vec![vec![0], vec![], vec![], vec![]],
            vec![0.1, 0.1, 0.01, 0.01],
        );
        let t = build_transfer_matrix(&dem, &sdem, &SparsifyConfig::default()).unwrap();
        let cfg = PipelineConfig::stages(20, 20, 20, 0.0);
        let d = Decoder::new(PipelineKind::BpBpOtf, cfg, &dem, Some((&sdem, &t))).unwrap();
        let out = d.decode(&bv("111")).unwrap();
        assert!(out.result.converged);
        assert_eq!(out.observables, bv("1"));
    }

    #[test]
    fn ensemble_of_identical_members_matches_single() {
        let m = loopy();
        let t = TransferMatrix::identity(4);
        let mut cfg = PipelineConfig::stages(4, 4, 4, 0.0);
        let single = bp_bp_otf_decode(&m, &m, &t, &bv("11"), &cfg).unwrap();
        cfg.ensemble_stage1_iters = Some(vec![4, 4, 4]);
        let ens = ensemble_decode(&m, &m, &t, &bv("11"), &cfg).unwrap();
        assert_eq!(ens, single);
    }

    #[test]
    fn missing_sdem_uses_identity() {
        let m = loopy();
        let d = Decoder::new(PipelineKind::BpBpOtf, PipelineConfig::stages(3, 3, 3, 0.0), &m, None).unwrap();
        let out = d.decode(&bv("11")).unwrap();
        assert!(out.result.converged);
        assert_eq!(out.observables, m.observables().matvec(&out.result.estimate).unwrap());
    }

    #[test]
    fn syndrome_length_checked() {
        let m = repetition();
        let d = Decoder::new(PipelineKind::Bp, PipelineConfig::bp_osd0_surface(), &m, None).unwrap();
        assert!(d.decode(&bv("000")).is_err());
    }
}

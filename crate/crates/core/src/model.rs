//! Detector models: the check matrix, the observable matrix and per-column
//! prior probabilities, plus the file formats they are read from.
//!
//! Three on-disk formats are understood:
//!
//! * detector-error-model text (`.dem`), one `error(p) D.. L..` line per
//!   fault mechanism;
//! * a JSON interchange schema (`.json`), see [`ModelJson`];
//! * bare `alist` matrices with a separate whitespace-separated priors file.
//!   [`DetectorModel::load`] reads `name.alist` together with `name.priors`
//!   and, when present, the observable matrix `name.obs.alist`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, invalid, Error, Result};
use crate::gf2::{read_alist, SparseBinaryMatrix};

/// Smallest probability handed between decoding stages.
pub const CLIP_LOW: f64 = 1e-80;
/// Largest probability handed between decoding stages.
///
/// `1 - 1e-80` rounds to `1.0` in double precision; LLR conversion saturates
/// symmetrically at `ln(1e80)` so the upper bound still behaves as a clip.
pub const CLIP_HIGH: f64 = 1.0 - 1e-80;

/// Per-column error probabilities.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SoftInfo {
    probs: Vec<f64>,
}

impl SoftInfo {
    pub fn new(probs: Vec<f64>) -> Self {
        SoftInfo { probs }
    }

    pub fn uniform(len: usize, p: f64) -> Self {
        SoftInfo { probs: vec![p; len] }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    /// Clamps every value into `[CLIP_LOW, CLIP_HIGH]`. NaN maps to 0.5.
    pub fn clip(&self) -> SoftInfo {
        SoftInfo {
            probs: self.probs.iter().map(|&p| clip_probability(p)).collect(),
        }
    }
}

impl From<Vec<f64>> for SoftInfo {
    fn from(probs: Vec<f64>) -> Self {
        SoftInfo { probs }
    }
}

#[inline]
pub fn clip_probability(p: f64) -> f64 {
    if p.is_nan() {
        0.5
    } else {
        p.clamp(CLIP_LOW, CLIP_HIGH)
    }
}

/// Free-function form of [`SoftInfo::clip`].
pub fn clip(p: &SoftInfo) -> SoftInfo {
    p.clip()
}

/// Probability that the XOR of two independent Bernoulli variables is one.
#[inline]
pub fn xor_probability(p1: f64, p2: f64) -> f64 {
    p1 * (1.0 - p2) + p2 * (1.0 - p1)
}

/// A detector error model: `d` detectors, `k` observables, `n` fault
/// mechanisms with independent prior probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectorModel {
    h: SparseBinaryMatrix,
    observables: SparseBinaryMatrix,
    priors: SoftInfo,
}

impl DetectorModel {
    pub fn new(
        h: SparseBinaryMatrix,
        observables: SparseBinaryMatrix,
        priors: SoftInfo,
    ) -> Result<Self> {
        if h.num_rows() == 0 {
            return Err(Error::Validation("model has no detectors".into()));
        }
        ensure_len("observable matrix columns", observables.num_cols(), h.num_cols())?;
        ensure_len("priors", priors.len(), h.num_cols())?;
        if let Some((j, p)) = priors
            .as_slice()
            .iter()
            .enumerate()
            .find(|(_, &p)| !(p > 0.0 && p <= 0.5))
        {
            return Err(Error::Validation(format!(
                "prior of column {j} is {p}, expected a value in (0, 0.5]"
            )));
        }
        Ok(DetectorModel {
            h,
            observables,
            priors,
        })
    }

    /// Detector (check) matrix.
    pub fn h(&self) -> &SparseBinaryMatrix {
        &self.h
    }

    /// Observable matrix, one row per logical observable.
    pub fn observables(&self) -> &SparseBinaryMatrix {
        &self.observables
    }

    pub fn priors(&self) -> &SoftInfo {
        &self.priors
    }

    pub fn num_detectors(&self) -> usize {
        self.h.num_rows()
    }

    pub fn num_observables(&self) -> usize {
        self.observables.num_rows()
    }

    pub fn num_columns(&self) -> usize {
        self.h.num_cols()
    }

    /// Average column weight of the detector matrix.
    pub fn mean_column_weight(&self) -> f64 {
        self.h.mean_col_weight()
    }

    /// Loads a model, picking the format from the file extension
    /// (`.dem`, `.json` or `.alist`). An alist check matrix needs a sibling
    /// priors file with the same stem and extension `.priors`; a sibling
    /// `.obs.alist` supplies the observables.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("dem") => parse_dem_text(&text),
            Some("json") => Self::from_json(&text),
            Some("alist") => {
                let priors_path = path.with_extension("priors");
                let priors = std::fs::read_to_string(&priors_path).map_err(|e| {
                    invalid(format!("alist model needs {}: {e}", priors_path.display()))
                })?;
                let obs_path = path.with_extension("obs.alist");
                let obs = match std::fs::read_to_string(&obs_path) {
                    Ok(t) => Some(t),
                    Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
                    Err(e) => return Err(e.into()),
                };
                Self::from_alist(&text, &priors, obs.as_deref())
            }
            _ => Err(invalid(format!(
                "cannot infer model format of {}",
                path.display()
            ))),
        }
    }

    /// Builds a model from an alist check matrix, a whitespace-separated
    /// priors list and an optional alist observable matrix.
    pub fn from_alist(h_text: &str, priors_text: &str, obs_text: Option<&str>) -> Result<Self> {
        let h = read_alist(h_text)?;
        let priors = priors_text
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Validation(format!("bad probability {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let observables = match obs_text {
            Some(t) => read_alist(t)?,
            None => SparseBinaryMatrix::zeros(0, h.num_cols()),
        };
        Self::new(h, observables, SoftInfo::new(priors))
    }

    pub fn to_json_value(&self) -> ModelJson {
        ModelJson {
            num_detectors: self.num_detectors(),
            num_observables: self.num_observables(),
            columns: (0..self.num_columns())
                .map(|j| ColumnJson {
                    detectors: self.h.col(j).to_vec(),
                    observables: self.observables.col(j).to_vec(),
                    prob: self.priors.get(j),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: ModelJson = serde_json::from_str(text)?;
        Self::try_from(m)
    }

    /// Serializes to detector-error-model text. Parsing the result yields an
    /// identical model.
    pub fn to_dem_text(&self) -> String {
        let mut out = String::new();
        let mut det_seen = false;
        let mut obs_seen = false;
        let last_det = self.num_detectors() - 1;
        let last_obs = self.num_observables().checked_sub(1);
        for j in 0..self.num_columns() {
            let p = self.priors.get(j);
            if p >= 1e-4 {
                write!(out, "error({p})").unwrap();
            } else {
                write!(out, "error({p:e})").unwrap();
            }
            for &d in self.h.col(j) {
                det_seen |= d == last_det;
                write!(out, " D{d}").unwrap();
            }
            for &l in self.observables.col(j) {
                obs_seen |= Some(l) == last_obs;
                write!(out, " L{l}").unwrap();
            }
            out.push('\n');
        }
        if !det_seen {
            writeln!(out, "detector D{last_det}").unwrap();
        }
        if let (Some(l), false) = (last_obs, obs_seen) {
            writeln!(out, "logical_observable L{l}").unwrap();
        }
        out
    }
}

/// JSON interchange schema for detector models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub num_detectors: usize,
    pub num_observables: usize,
    pub columns: Vec<ColumnJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnJson {
    pub detectors: Vec<usize>,
    #[serde(default)]
    pub observables: Vec<usize>,
    pub prob: f64,
}

impl TryFrom<ModelJson> for DetectorModel {
    type Error = Error;

    fn try_from(m: ModelJson) -> Result<Self> {
        let mut dets = Vec::with_capacity(m.columns.len());
        let mut obs = Vec::with_capacity(m.columns.len());
        let mut priors = Vec::with_capacity(m.columns.len());
        for c in m.columns {
            dets.push(c.detectors);
            obs.push(c.observables);
            priors.push(c.prob);
        }
        DetectorModel::new(
            SparseBinaryMatrix::from_col_supports(m.num_detectors, dets)?,
            SparseBinaryMatrix::from_col_supports(m.num_observables, obs)?,
            SoftInfo::new(priors),
        )
    }
}

enum DemItem {
    Error {
        prob: f64,
        dets: Vec<usize>,
        obs: Vec<usize>,
    },
    Detector(Vec<usize>),
    Observable(Vec<usize>),
    Shift(usize),
    Repeat(usize, Vec<DemItem>),
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Splits `name[tag](args) rest` into (`name`, `args`, `rest`).
fn split_instruction(line: &str) -> (&str, Option<&str>, &str) {
    let end = line
        .find(|c: char| c == '(' || c == '[' || c.is_whitespace())
        .unwrap_or(line.len());
    let name = &line[..end];
    let mut rest = &line[end..];
    if rest.starts_with('[') {
        if let Some(close) = rest.find(']') {
            rest = &rest[close + 1..];
        }
    }
    let mut args = None;
    if rest.starts_with('(') {
        if let Some(close) = rest.find(')') {
            args = Some(&rest[1..close]);
            rest = &rest[close + 1..];
        }
    }
    (name, args, rest.trim())
}

fn parse_targets(line: usize, rest: &str) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut dets = Vec::new();
    let mut obs = Vec::new();
    for tok in rest.split_whitespace() {
        if tok == "^" {
            continue;
        }
        let (kind, idx) = tok.split_at(1);
        let idx: usize = idx
            .parse()
            .map_err(|_| parse_err(line, format!("bad target {tok:?}")))?;
        match kind {
            "D" => dets.push(idx),
            "L" => obs.push(idx),
            _ => return Err(parse_err(line, format!("bad target {tok:?}"))),
        }
    }
    Ok((dets, obs))
}

fn parse_block(
    lines: &mut std::iter::Peekable<impl Iterator<Item = (usize, String)>>,
    nested: bool,
) -> Result<Vec<DemItem>> {
    let mut items = Vec::new();
    while let Some((no, line)) = lines.next() {
        if line == "}" {
            if nested {
                return Ok(items);
            }
            return Err(parse_err(no, "unmatched '}'"));
        }
        let (name, args, rest) = split_instruction(&line);
        match name {
            "error" => {
                let args = args.ok_or_else(|| parse_err(no, "error needs a probability"))?;
                let prob: f64 = args
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(no, format!("bad probability {args:?}")))?;
                if !(prob > 0.0 && prob < 1.0) {
                    return Err(Error::Validation(format!(
                        "line {no}: probability {prob} outside (0, 1)"
                    )));
                }
                if prob > 0.5 {
                    return Err(Error::Validation(format!(
                        "line {no}: probability {prob} above 0.5"
                    )));
                }
                let (dets, obs) = parse_targets(no, rest)?;
                items.push(DemItem::Error {
                    prob,
                    dets,
                    obs,
                });
            }
            "detector" => items.push(DemItem::Detector(parse_targets(no, rest)?.0)),
            "logical_observable" => items.push(DemItem::Observable(parse_targets(no, rest)?.1)),
            "shift_detectors" => {
                let n = rest
                    .parse()
                    .map_err(|_| parse_err(no, format!("bad shift {rest:?}")))?;
                items.push(DemItem::Shift(n));
            }
            "repeat" => {
                let count = rest
                    .strip_suffix('{')
                    .map(str::trim)
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| parse_err(no, "expected `repeat N {`"))?;
                let body = parse_block(lines, true)?;
                items.push(DemItem::Repeat(count, body));
            }
            _ => return Err(parse_err(no, format!("unknown instruction {name:?}"))),
        }
    }
    if nested {
        return Err(parse_err(0, "unterminated repeat block"));
    }
    Ok(items)
}

#[derive(Default)]
struct DemBuilder {
    offset: usize,
    num_detectors: usize,
    num_observables: usize,
    index: HashMap<(Vec<usize>, Vec<usize>), usize>,
    dets: Vec<Vec<usize>>,
    obs: Vec<Vec<usize>>,
    probs: Vec<f64>,
}

fn toggled(mut v: Vec<usize>) -> Vec<usize> {
    // `D1 ^ D1` cancels: keep indices that appear an odd number of times.
    v.sort_unstable();
    let mut out: Vec<usize> = Vec::with_capacity(v.len());
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

impl DemBuilder {
    fn run(&mut self, items: &[DemItem]) {
        for item in items {
            match item {
                DemItem::Error {
                    prob,
                    dets,
                    obs,
                } => {
                    let dets = toggled(dets.iter().map(|d| d + self.offset).collect());
                    let obs = toggled(obs.clone());
                    if let Some(&d) = dets.last() {
                        self.num_detectors = self.num_detectors.max(d + 1);
                    }
                    if let Some(&l) = obs.last() {
                        self.num_observables = self.num_observables.max(l + 1);
                    }
                    if dets.is_empty() && obs.is_empty() {
                        continue;
                    }
                    match self.index.get(&(dets.clone(), obs.clone())) {
                        Some(&j) => self.probs[j] = xor_probability(self.probs[j], *prob),
                        None => {
                            self.index.insert((dets.clone(), obs.clone()), self.dets.len());
                            self.dets.push(dets);
                            self.obs.push(obs);
                            self.probs.push(*prob);
                        }
                    }
                }
                DemItem::Detector(ds) => {
                    for d in ds {
                        self.num_detectors = self.num_detectors.max(d + self.offset + 1);
                    }
                }
                DemItem::Observable(ls) => {
                    for l in ls {
                        self.num_observables = self.num_observables.max(l + 1);
                    }
                }
                DemItem::Shift(n) => self.offset += n,
                DemItem::Repeat(count, body) => {
                    for _ in 0..*count {
                        self.run(body);
                    }
                }
            }
        }
    }
}

/// Parses detector-error-model text.
///
/// Fault lines with identical detector and observable signatures are merged
/// into one column whose prior is the XOR-combination of the merged priors.
/// `repeat` blocks are unrolled and `shift_detectors` offsets later detector
/// indices.
pub fn parse_dem_text(text: &str) -> Result<DetectorModel> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("").trim().to_string();
            (i + 1, l)
        })
        .filter(|(_, l)| !l.is_empty())
        .peekable();
    let items = parse_block(&mut lines, false)?;
    let mut b = DemBuilder::default();
    b.run(&items);
    if b.num_detectors == 0 {
        return Err(Error::Validation("model has no detectors".into()));
    }
    DetectorModel::new(
        SparseBinaryMatrix::from_col_supports(b.num_detectors, b.dets)?,
        SparseBinaryMatrix::from_col_supports(b.num_observables, b.obs)?,
        SoftInfo::new(b.probs),
    )
}

/// Code-capacity model: one column per data qubit with prior `p`.
pub fn build_code_capacity_model(
    hcss: &SparseBinaryMatrix,
    logicals: &SparseBinaryMatrix,
    p: f64,
) -> Result<DetectorModel> {
    ensure_len("logical matrix columns", logicals.num_cols(), hcss.num_cols())?;
    if !(p > 0.0 && p < 0.5) {
        return Err(invalid(format!("probability {p} outside (0, 0.5)")));
    }
    DetectorModel::new(
        hcss.clone(),
        logicals.clone(),
        SoftInfo::uniform(hcss.num_cols(), p),
    )
}

/// Repeated noisy syndrome extraction followed by one perfect readout.
///
/// With `m` checks there are `m·(rounds+1)` detectors: layer 1 holds the first
/// syndrome and layer `t` the difference of syndromes `t` and `t−1`. For every
/// round `t` the columns are the `n` data-qubit faults (the CSS column placed
/// at layer `t`, prior `p_data`) followed by the `m` measurement faults
/// (detectors `(t, i)` and `(t+1, i)`, prior `p_meas`). Data columns carry
/// the logical matrix column of their qubit; measurement columns carry none.
pub fn build_phenomenological_model(
    hcss: &SparseBinaryMatrix,
    logicals: &SparseBinaryMatrix,
    p_data: f64,
    p_meas: f64,
    rounds: usize,
) -> Result<DetectorModel> {
    if rounds == 0 {
        return Err(invalid("rounds must be at least 1"));
    }
    ensure_len("logical matrix columns", logicals.num_cols(), hcss.num_cols())?;
    for p in [p_data, p_meas] {
        if !(p > 0.0 && p < 0.5) {
            return Err(invalid(format!("probability {p} outside (0, 0.5)")));
        }
    }
    let m = hcss.num_rows();
    let n = hcss.num_cols();
    let mut dets = Vec::with_capacity(rounds * (n + m));
    let mut obs = Vec::with_capacity(rounds * (n + m));
    let mut priors = Vec::with_capacity(rounds * (n + m));
    for t in 0..rounds {
        let layer = t * m;
        for q in 0..n {
            dets.push(hcss.col(q).iter().map(|&i| layer + i).collect());
            obs.push(logicals.col(q).to_vec());
            priors.push(p_data);
        }
        for i in 0..m {
            dets.push(vec![layer + i, layer + m + i]);
            obs.push(Vec::new());
            priors.push(p_meas);
        }
    }
    DetectorModel::new(
        SparseBinaryMatrix::from_col_supports(m * (rounds + 1), dets)?,
        SparseBinaryMatrix::from_col_supports(logicals.num_rows(), obs)?,
        SoftInfo::new(priors),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(d: usize) -> SparseBinaryMatrix {
        SparseBinaryMatrix::from_row_supports(d, (0..d - 1).map(|i| vec![i, i + 1]).collect())
            .unwrap()
    }

    #[test]
    fn parse_single_error() {
        let m = parse_dem_text("error(0.1) D0 D1\n").unwrap();
        assert_eq!(m.num_detectors(), 2);
        assert_eq!(m.num_columns(), 1);
        assert_eq!(m.h().col(0), &[0, 1]);
        assert_eq!(m.priors().get(0), 0.1);
        assert_eq!(m.num_observables(), 0);
    }

    #[test]
    fn parse_merges_identical_signatures() {
        let m = parse_dem_text("error(0.1) D0\nerror(0.1) D0\n").unwrap();
        assert_eq!(m.num_columns(), 1);
        assert!((m.priors().get(0) - 0.18).abs() < 1e-15);
    }

    #[test]
    fn parse_observable() {
        let m = parse_dem_text("error(0.05) D0 L0").unwrap();
        assert_eq!(m.num_observables(), 1);
        assert!(m.observables().get(0, 0));
    }

    #[test]
    fn parse_ignores_annotations() {
        let text = "# comment\n\
                    detector(0, 0, 0) D0\n\
                    detector(1, 0, 0) D3\n\
                    logical_observable L1\n\
                    error[hook](0.01) D0 ^ D1 L0  # trailing\n\
                    shift_detectors(0, 0, 1) 2\n\
                    error(0.02) D0\n";
        let m = parse_dem_text(text).unwrap();
        assert_eq!(m.num_detectors(), 4);
        assert_eq!(m.num_observables(), 2);
        assert_eq!(m.h().col(0), &[0, 1]);
        assert_eq!(m.h().col(1), &[2]);
    }

    #[test]
    fn parse_unrolls_repeat() {
        let text = "error(0.1) D0\nrepeat 3 {\n  error(0.2) D0 D1\n  shift_detectors 1\n}\n";
        let m = parse_dem_text(text).unwrap();
        assert_eq!(m.num_columns(), 4);
        assert_eq!(m.num_detectors(), 4);
        assert_eq!(m.h().col(3), &[2, 3]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_dem_text("error(0.1) D0\nerror(0.1) X3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_dem_text("\n\nbogus D0") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_dem_text("error(1.5) D0"),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_dem_text("error(0) D0"),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_dem_text("error(0.7) D0"),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_dem_text("repeat 2 {\nerror(0.1) D0\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn dem_text_roundtrip() {
        let text = "error(0.1) D0 D1 L0\nerror(0.001) D1\nerror(1e-7) D2 D3\ndetector D5\nlogical_observable L2\n";
        let m = parse_dem_text(text).unwrap();
        let again = parse_dem_text(&m.to_dem_text()).unwrap();
        assert_eq!(m, again);
        assert_eq!(again.num_detectors(), 6);
        assert_eq!(again.num_observables(), 3);
    }

    #[test]
    fn json_roundtrip() {
        let m = parse_dem_text("error(0.1) D0 D1 L0\nerror(0.2) D1\n").unwrap();
        assert_eq!(DetectorModel::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn alist_with_priors() {
        let h = crate::gf2::write_alist(&rep(3));
        let obs = crate::gf2::write_alist(
            &SparseBinaryMatrix::from_row_supports(3, vec![vec![0, 1, 2]]).unwrap(),
        );
        let m = DetectorModel::from_alist(&h, "0.1 0.1\n0.2", Some(&obs)).unwrap();
        assert_eq!(m.num_columns(), 3);
        assert_eq!(m.priors().as_slice(), &[0.1, 0.1, 0.2]);
        assert!(DetectorModel::from_alist(&h, "0.1 0.1", None).is_err());
    }

    #[test]
    fn clip_examples() {
        let c = SoftInfo::new(vec![0.0, 0.3, 1.0, -0.5]).clip();
        assert_eq!(c.as_slice(), &[1e-80, 0.3, 1.0 - 1e-80, 1e-80]);
    }

    #[test]
    fn phenomenological_repetition_counts() {
        let h = rep(3);
        let logical = SparseBinaryMatrix::from_row_supports(3, vec![vec![0, 1, 2]]).unwrap();
        let m = build_phenomenological_model(&h, &logical, 0.01, 0.02, 2).unwrap();
        assert_eq!(m.num_detectors(), 6);
        assert_eq!(m.num_columns(), 10);
        let meas: Vec<usize> = (0..10).filter(|&j| m.priors().get(j) == 0.02).collect();
        assert_eq!(meas.len(), 4);
        assert!(meas.iter().all(|&j| m.h().col_weight(j) == 2));
        assert!(m.h().max_col_weight() <= 2);
        // Round 2 data column for qubit 1 sits on layer 2.
        assert_eq!(m.h().col(5 + 1), &[2, 3]);

        let one = build_phenomenological_model(&h, &logical, 0.01, 0.02, 1).unwrap();
        let meas_cols = (0..one.num_columns())
            .filter(|&j| one.priors().get(j) == 0.02)
            .count();
        assert_eq!(meas_cols, h.num_rows());
        assert!(build_phenomenological_model(&h, &logical, 0.01, 0.02, 0).is_err());
    }
}

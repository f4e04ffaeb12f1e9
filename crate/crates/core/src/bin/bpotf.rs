use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bpotf::codes::{build_repetition_code, build_rotated_surface_code};
use bpotf::gf2::{BinaryVector, SparseBinaryMatrix};
use bpotf::model::{build_code_capacity_model, build_phenomenological_model, DetectorModel};
use bpotf::pipeline::{Decoder, PipelineConfig, PipelineKind};
use bpotf::sim::{run_montecarlo, write_csv, CsvRow, MonteCarloConfig};
use bpotf::sparsify::{build_transfer_matrix, SparsifyConfig, TransferMatrix};

#[derive(Parser)]
#[command(name = "bpotf", version, about = "Belief propagation with ordered Tanner forest post-processing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode syndromes with a pipeline.
    Decode(DecodeArgs),
    /// Build the transfer matrix between a detector model and a sparsified model.
    Sparsify(SparsifyArgs),
    /// Estimate logical error rates by Monte Carlo sampling.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct StageArgs {
    /// Decoding pipeline.
    #[arg(long, default_value = "bp-bp-otf", value_parser = parse_pipeline)]
    pipeline: PipelineKind,
    /// Stage-1 iterations (BP on the detector model).
    #[arg(long)]
    iters1: Option<usize>,
    /// Stage-2 iterations (BP on the sparsified model).
    #[arg(long)]
    iters2: Option<usize>,
    /// Stage-3 iterations (BP on the ordered Tanner forest).
    #[arg(long)]
    iters3: Option<usize>,
    /// Prior of columns outside the forest.
    #[arg(long)]
    decimation: Option<f64>,
    /// Sparsified detector model.
    #[arg(long, requires = "transfer")]
    sdem: Option<PathBuf>,
    /// Transfer matrix JSON written by `sparsify`.
    #[arg(long, requires = "sdem")]
    transfer: Option<PathBuf>,
}

impl StageArgs {
    fn config(&self, surface: bool) -> PipelineConfig {
        let mut cfg = PipelineConfig::preset(self.pipeline, surface);
        if let Some(n) = self.iters1 {
            cfg.stage1.max_iters = n;
            if cfg.ensemble_stage1_iters.is_some() {
                cfg.ensemble_stage1_iters = Some(vec![n]);
            }
        }
        if let Some(n) = self.iters2 {
            cfg.stage2.max_iters = n;
        }
        if let Some(n) = self.iters3 {
            cfg.stage3.max_iters = n;
        }
        if let Some(x) = self.decimation {
            cfg.decimation = x;
        }
        cfg
    }

    fn sparsified(&self) -> bpotf::Result<Option<(DetectorModel, TransferMatrix)>> {
        match (&self.sdem, &self.transfer) {
            (Some(s), Some(t)) => Ok(Some((
                DetectorModel::load(s)?,
                TransferMatrix::from_json(&fs::read_to_string(t)?)?,
            ))),
            _ => Ok(None),
        }
    }
}

#[derive(Args)]
struct DecodeArgs {
    /// Detector model (.dem or .json).
    #[arg(long)]
    model: PathBuf,
    /// Syndrome bitstring; repeatable.
    #[arg(long)]
    syndrome: Vec<String>,
    /// File with one syndrome bitstring per line.
    #[arg(long)]
    syndromes: Option<PathBuf>,
    /// Use the rotated surface code iteration budgets.
    #[arg(long)]
    surface: bool,
    #[command(flatten)]
    stages: StageArgs,
    /// Output file for JSON lines; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SparsifyArgs {
    #[arg(long)]
    dem: PathBuf,
    #[arg(long)]
    sdem: PathBuf,
    /// Largest decomposition weight.
    #[arg(long, default_value_t = 4)]
    wmax: usize,
    /// Reject sparsified models with a heavier column.
    #[arg(long)]
    gamma: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CodeFamily {
    Repetition,
    RotatedSurface,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Noise {
    CodeCapacity,
    Phenomenological,
}

#[derive(Args)]
struct SimulateArgs {
    /// Detector model to sample from instead of a generated code.
    #[arg(long, conflicts_with = "code")]
    model: Option<PathBuf>,
    #[arg(long, value_enum)]
    code: Option<CodeFamily>,
    /// Code distances; comma separated.
    #[arg(short = 'd', long = "distance", value_delimiter = ',')]
    distance: Vec<usize>,
    #[arg(long, value_enum, default_value = "phenomenological")]
    noise: Noise,
    /// Physical error rates; comma separated.
    #[arg(short = 'p', long = "p", value_delimiter = ',')]
    p: Vec<f64>,
    /// Measurement error rate; defaults to the physical error rate.
    #[arg(long)]
    p_meas: Option<f64>,
    /// Syndrome rounds; defaults to the distance for phenomenological noise.
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
    /// Report zero decoding time so that output is reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    stages: StageArgs,
    /// Results file, .csv or .json; CSV to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pipeline(s: &str) -> Result<PipelineKind, String> {
    s.parse().map_err(|e: bpotf::Error| e.to_string())
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn decode(args: DecodeArgs) -> bpotf::Result<()> {
    let dem = DetectorModel::load(&args.model)?;
    let sparse = args.stages.sparsified()?;
    let decoder = Decoder::new(
        args.stages.pipeline,
        args.stages.config(args.surface),
        &dem,
        sparse.as_ref().map(|(s, t)| (s, t)),
    )?;
    let mut lines = args.syndrome.clone();
    if let Some(path) = &args.syndromes {
        lines.extend(
            fs::read_to_string(path)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from),
        );
    }
    if lines.is_empty() {
        return Err(bpotf::Error::InvalidArgument("no syndromes given".into()));
    }
    let mut out = output(args.out.as_deref())?;
    for line in &lines {
        let s = BinaryVector::parse(line)?;
        let o = decoder.decode(&s)?;
        let record = json!({
            "syndrome": s.to_string(),
            "estimate": o.result.estimate.to_string(),
            "observables": o.observables.to_string(),
            "converged": o.result.converged,
            "stage": o.result.stage,
            "iterations_used": o.result.iterations_used,
        });
        writeln!(out, "{record}")?;
    }
    out.flush()?;
    Ok(())
}

fn sparsify(args: SparsifyArgs) -> bpotf::Result<()> {
    let dem = DetectorModel::load(&args.dem)?;
    let sdem = DetectorModel::load(&args.sdem)?;
    let cfg = SparsifyConfig {
        w_max: args.wmax,
        gamma: args.gamma,
    };
    let t = build_transfer_matrix(&dem, &sdem, &cfg)?;
    fs::write(&args.out, t.to_json())?;
    eprintln!(
        "{} detector-model columns mapped onto {} sparsified columns",
        t.num_dem_columns(),
        t.num_sdem_columns()
    );
    Ok(())
}

fn generated_model(code: CodeFamily, noise: Noise, d: usize, p: f64, p_meas: f64, rounds: usize) -> bpotf::Result<DetectorModel> {
    let (h, logical) = match code {
        CodeFamily::Repetition => {
            let (h, _) = build_repetition_code(d)?;
            // Any single qubit distinguishes the two logical codewords.
            (h, SparseBinaryMatrix::from_row_supports(d, vec![vec![0]])?)
        }
        CodeFamily::RotatedSurface => {
            let c = build_rotated_surface_code(d)?;
            let lz: Vec<usize> = c.logical_z.support().collect();
            let n = c.num_qubits();
            (c.hz, SparseBinaryMatrix::from_row_supports(n, vec![lz])?)
        }
    };
    match noise {
        Noise::CodeCapacity => build_code_capacity_model(&h, &logical, p),
        Noise::Phenomenological => build_phenomenological_model(&h, &logical, p, p_meas, rounds),
    }
}

struct Point {
    p: f64,
    d: usize,
    stats: bpotf::sim::MonteCarloStats,
}

fn simulate(args: SimulateArgs) -> bpotf::Result<()> {
    let mc = |rounds: usize, p: f64| MonteCarloConfig {
        shots: args.shots,
        seed: args.seed,
        rounds,
        physical_p: p,
        threads: args.threads,
        record_timing: !args.no_timing,
    };
    let mut points = Vec::new();
    let surface = args.code == Some(CodeFamily::RotatedSurface);
    let cfg = args.stages.config(surface);

    if let Some(path) = &args.model {
        let dem = DetectorModel::load(path)?;
        let sparse = args.stages.sparsified()?;
        let decoder = Decoder::new(args.stages.pipeline, cfg.clone(), &dem, sparse.as_ref().map(|(s, t)| (s, t)))?;
        let p = args.p.first().copied().unwrap_or(0.0);
        let stats = run_montecarlo(&decoder, &mc(args.rounds.unwrap_or(1), p))?;
        points.push(Point {
            p,
            d: args.distance.first().copied().unwrap_or(0),
            stats,
        });
    } else {
        let code = args
            .code
            .ok_or_else(|| bpotf::Error::InvalidArgument("either --model or --code is required".into()))?;
        if args.distance.is_empty() || args.p.is_empty() {
            return Err(bpotf::Error::InvalidArgument("-d and -p are required with --code".into()));
        }
        if args.stages.sdem.is_some() {
            return Err(bpotf::Error::InvalidArgument("--sdem applies only with --model".into()));
        }
        for &d in &args.distance {
            for &p in &args.p {
                let rounds = match args.noise {
                    Noise::CodeCapacity => 1,
                    Noise::Phenomenological => args.rounds.unwrap_or(d),
                };
                let dem = generated_model(code, args.noise, d, p, args.p_meas.unwrap_or(p), rounds)?;
                let decoder = Decoder::new(args.stages.pipeline, cfg.clone(), &dem, None)?;
                let stats = run_montecarlo(&decoder, &mc(rounds, p))?;
                points.push(Point { p, d, stats });
            }
        }
    }

    let json_out = args
        .out
        .as_deref()
        .is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
    let mut out = output(args.out.as_deref())?;
    if json_out {
        let doc = json!({
            "pipeline": args.stages.pipeline,
            "config": cfg,
            "seed": args.seed,
            "ler_per_round": "1 - (1 - ler_total)^(1/rounds)",
            "confidence_interval": "wilson 95%",
            "results": points.iter().map(|pt| json!({ "p": pt.p, "d": pt.d, "stats": pt.stats })).collect::<Vec<_>>(),
        });
        serde_json::to_writer_pretty(&mut out, &doc)?;
        writeln!(out)?;
    } else {
        let rows: Vec<CsvRow> = points.iter().map(|pt| CsvRow::new(pt.p, pt.d, &pt.stats)).collect();
        write_csv(&mut out, &rows)?;
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decode(a) => decode(a),
        Command::Sparsify(a) => sparsify(a),
        Command::Simulate(a) => simulate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

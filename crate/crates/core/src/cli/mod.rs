//! Command-line front end: `generate`, `fit`, `score`, `eval`, `bench`.

mod bench;
mod files;

pub use bench::{BenchConfig, BenchExperiment, BenchTable};
pub use files::{
    parse_scores, scores_csv, DataFile, ModelFile, Provenance, ScoreRow, WhiteningFile,
    MODEL_FORMAT_VERSION,
};

use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use crate::detector::{fit, score_batch, FitOptions, Neighborhood, Shape, DEFAULT_RADIUS};
use crate::error::Error;
use crate::eval::{
    auc, gen_inliers, gen_outliers, gen_test_inliers, roc, roc_csv, Distribution, LabeledScores,
};
use crate::relaxation::MomentMatrixLayout;
use crate::sdp::symmetric_eigenvalues;
use files::{read_text, write_text};

/// Environment variable capping the scoring thread pool.
pub const THREADS_ENV: &str = "MOMENT_SENTINEL_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "moment-sentinel",
    version,
    about = "Anomaly detection with moment upper bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write seeded train and labeled test CSVs for a benchmark distribution.
    Generate(GenerateArgs),
    /// Estimate moments from data and save a model.
    Fit(FitArgs),
    /// Score every row of a data file against a model.
    Score(ScoreArgs),
    /// AUC and ROC curve of a score file against labeled data.
    Eval(EvalArgs),
    /// Run the benchmark experiments listed in a TOML config.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// bimodal, pshape or swissroll.
    pub dist: String,
    #[arg(long, default_value_t = 300)]
    pub n_train: usize,
    #[arg(long, default_value_t = 300)]
    pub n_inliers: usize,
    #[arg(long, default_value_t = 50)]
    pub n_outliers: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory; receives train.csv and test.csv.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct NeighborhoodArgs {
    /// Neighborhood radius in model coordinates.
    #[arg(long)]
    pub r: Option<f64>,
    /// ball or box.
    #[arg(long)]
    pub shape: Option<String>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Highest moment degree k (≥ 2).
    #[arg(long)]
    pub degree: usize,
    #[arg(long, overrides_with = "no_whiten")]
    pub whiten: bool,
    #[arg(long, overrides_with = "whiten")]
    pub no_whiten: bool,
    #[command(flatten)]
    pub neighborhood: NeighborhoodArgs,
    /// Recorded in the model's provenance.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[command(flatten)]
    pub neighborhood: NeighborhoodArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub scores: PathBuf,
    /// Labeled data the scores were computed on.
    #[arg(long)]
    pub data: PathBuf,
    /// ROC curve destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// AUC table destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failed command: message plus process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }

    fn numerical(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_NUMERICAL,
            message: msg.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) | Error::Unsupported(_) | Error::OrderTooSmall { .. } => {
                EXIT_USAGE
            }
            Error::NotOptimal(_) | Error::InvalidProgram(_) | Error::NotSymmetric(_) => {
                EXIT_NUMERICAL
            }
            _ => EXIT_DATA,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Caps the global rayon pool from [`THREADS_ENV`] when it is set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::usage(format!(
            "{THREADS_ENV} must be a positive integer, got '{v}'"
        ))
    })?;
    // A second initialization in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Runs one parsed command, writing human output to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Generate(a) => cmd_generate(a, stdout),
        Command::Fit(a) => cmd_fit(a, stdout),
        Command::Score(a) => cmd_score(a, stdout),
        Command::Eval(a) => cmd_eval(a, stdout),
        Command::Bench(a) => cmd_bench(a, stdout),
    }
}

fn parse_dist(s: &str) -> CliResult<Distribution> {
    s.parse::<Distribution>()
        .map_err(|e| CliError::usage(e.to_string()))
}

fn out_io(e: std::io::Error) -> CliError {
    CliError {
        code: EXIT_DATA,
        message: format!("writing output: {e}"),
    }
}

fn cmd_generate(a: GenerateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let dist = parse_dist(&a.dist)?;
    if a.n_train == 0 || a.n_inliers + a.n_outliers == 0 {
        return Err(CliError::usage("counts must be positive"));
    }
    let train = DataFile {
        points: gen_inliers(dist, a.n_train, a.seed),
        labels: None,
    };
    let mut test_points = gen_test_inliers(dist, a.n_inliers, a.seed);
    if a.n_outliers > 0 {
        test_points.extend(gen_outliers(dist, a.n_outliers, a.seed)?);
    }
    let mut labels = vec![true; a.n_inliers];
    labels.extend(vec![false; a.n_outliers]);
    let test = DataFile {
        points: test_points,
        labels: Some(labels),
    };
    let (tp, sp) = (a.out.join("train.csv"), a.out.join("test.csv"));
    write_text(&tp, &train.to_csv())?;
    write_text(&sp, &test.to_csv())?;
    writeln!(
        stdout,
        "wrote {} ({} rows) and {} ({} rows)",
        tp.display(),
        a.n_train,
        sp.display(),
        a.n_inliers + a.n_outliers
    )
    .map_err(out_io)
}

fn neighborhood_from(args: &NeighborhoodArgs, base: Neighborhood) -> CliResult<Neighborhood> {
    let shape = match &args.shape {
        Some(s) => s
            .parse::<Shape>()
            .map_err(|e| CliError::usage(e.to_string()))?,
        None => base.shape,
    };
    let radius = args.r.unwrap_or(base.radius);
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(CliError::usage(format!(
            "--r must be finite and ≥ 0, got {radius}"
        )));
    }
    Ok(Neighborhood { shape, radius })
}

fn cmd_fit(a: FitArgs, stdout: &mut dyn Write) -> CliResult<()> {
    if a.degree < 2 {
        return Err(CliError::usage(format!(
            "--degree must be ≥ 2, got {}",
            a.degree
        )));
    }
    let data = DataFile::read(&a.data)?;
    let nb = neighborhood_from(
        &a.neighborhood,
        Neighborhood {
            shape: Shape::Ball,
            radius: DEFAULT_RADIUS,
        },
    )?;
    let opts = FitOptions {
        degree: a.degree,
        whiten: !a.no_whiten,
        neighborhood: nb,
    };
    let model = fit(&data.points, opts)?;
    // SOURCE_DATE_EPOCH pins the timestamp for reproducible model files.
    let created_at = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse().ok())
        .or_else(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs())
        });
    let file = ModelFile::from_model(
        &model,
        Provenance {
            n_train: data.points.len(),
            seed: a.seed,
            created_at,
        },
    );
    write_text(&a.out, &file.to_json())?;

    // Conditioning of the largest moment matrix fully determined by the data.
    let layout = MomentMatrixLayout::new(model.dim(), model.degree() / 2)?;
    let ev = symmetric_eigenvalues(&layout.evaluate(model.gamma())?)?;
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    writeln!(
        stdout,
        "{} moments (n = {}, degree {}), whitening {}",
        file.moments.len(),
        model.dim(),
        model.degree(),
        if model.whitener().is_some() {
            "on"
        } else {
            "off"
        }
    )
    .map_err(out_io)?;
    writeln!(
        stdout,
        "M_{}: eigenvalues in [{lo:.3e}, {hi:.3e}], condition {:.3e}",
        layout.order(),
        if lo > 0.0 { hi / lo } else { f64::INFINITY }
    )
    .map_err(out_io)?;
    writeln!(stdout, "model written to {}", a.out.display()).map_err(out_io)
}

fn cmd_score(a: ScoreArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let file = ModelFile::from_json(&read_text(&a.model)?)?;
    let model = file.to_model()?;
    let nb = neighborhood_from(&a.neighborhood, model.neighborhood())?;
    let model = model.with_neighborhood(nb)?;
    let data = DataFile::read(&a.data)?;
    if data.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: data.dim(),
        }
        .into());
    }
    let scores = score_batch(&model, &data.points)?;
    let rows: Vec<ScoreRow> = scores
        .iter()
        .enumerate()
        .map(|(index, s)| ScoreRow {
            index,
            rho: s.rho,
            status: s.status,
        })
        .collect();
    let failed = rows
        .iter()
        .filter(|r| r.status != crate::sdp::SolveStatus::Optimal)
        .count();
    write_text(&a.out, &scores_csv(&rows))?;
    if failed > 0 {
        eprintln!(
            "warning: {failed} of {} rows did not solve to optimality",
            rows.len()
        );
    }
    if failed == rows.len() {
        return Err(CliError::numerical("no row solved to optimality"));
    }
    writeln!(
        stdout,
        "scored {} rows into {}",
        rows.len(),
        a.out.display()
    )
    .map_err(out_io)
}

fn cmd_eval(a: EvalArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let scores = parse_scores(&read_text(&a.scores)?)?;
    let data = DataFile::read(&a.data)?;
    let labels = data
        .labels
        .ok_or_else(|| Error::Parse(format!("{} has no label column", a.data.display())))?;
    if labels.len() != scores.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            got: scores.len(),
        }
        .into());
    }
    // Failed solves rank as most anomalous.
    let values = scores
        .iter()
        .map(|s| {
            if s.status == crate::sdp::SolveStatus::Optimal {
                s.rho
            } else {
                0.0
            }
        })
        .collect();
    let ls = LabeledScores::new(values, labels)?;
    let value = auc(&ls)?;
    if let Some(out) = &a.out {
        write_text(out, &roc_csv(&roc(&ls)?))?;
    }
    let n_pos = ls.labels.iter().filter(|&&l| l).count();
    let json = serde_json::json!({
        "auc": value,
        "n_pos": n_pos,
        "n_neg": ls.labels.len() - n_pos,
    });
    writeln!(stdout, "{json}").map_err(out_io)
}

fn cmd_bench(a: BenchArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let config = BenchConfig::from_toml(&read_text(&a.config)?)?;
    let table = config.run()?;
    if table.rows > 0 && table.failed_rows == table.rows {
        return Err(CliError::numerical("every benchmark row failed"));
    }
    match &a.out {
        Some(p) => {
            write_text(p, &table.csv)?;
            writeln!(stdout, "{} rows written to {}", table.rows, p.display()).map_err(out_io)
        }
        None => stdout.write_all(table.csv.as_bytes()).map_err(out_io),
    }
}

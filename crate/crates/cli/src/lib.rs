//! Subcommands behind the `breakwatch` binary.
//!
//! Every command writes its outputs plus a `manifest.json` echoing the fully
//! resolved options into `--out`, and is byte-reproducible for a fixed seed
//! (bench timings excepted).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use breakwatch::eval::{read_dataset, score, synthesize, write_labeled, EvalOutcome, SynthSpec};
use breakwatch::par::{map_indexed, Execution};
use breakwatch::sigtest::{analyze_with, TestOptions};
use breakwatch::{
    analyze, read_csv_file, smooth, BetweenSelection, BreakoutReport, DetectionConfig, Method,
    SmootherKind, SmootherSpec, TimeSeries,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const THREADS_ENV: &str = "BREAKWATCH_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] breakwatch::Error),
    #[error("{path}: {source}")]
    At {
        path: String,
        source: breakwatch::Error,
    },
}

fn at(path: &Path) -> impl FnOnce(breakwatch::Error) -> CliError + '_ {
    move |source| CliError::At {
        path: path.display().to_string(),
        source,
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Core(breakwatch::Error::Io(e.into()))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(breakwatch::Error::Io(e.into()))
    }
}

pub mod exit {
    pub const USAGE: u8 = 2;
    pub const IO: u8 = 3;
    pub const PARSE: u8 = 4;
    pub const DETECTOR: u8 = 5;
    pub const DATA: u8 = 6;
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use breakwatch::Error as E;
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Core(e) | CliError::At { source: e, .. } => match e {
                E::Io(_) => exit::IO,
                E::Parse { .. } => exit::PARSE,
                E::EmptySeries
                | E::NonFiniteValue { .. }
                | E::LabelOutOfRange { .. }
                | E::TimestampsNotIncreasing { .. }
                | E::TimestampLengthMismatch { .. }
                | E::MalformedLabels { .. }
                | E::InvalidSpec(_) => exit::DATA,
                _ => exit::DETECTOR,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "breakwatch",
    version,
    about = "Robust breakout detection for time series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Locate the most likely breakout in one series and test its significance.
    Detect(DetectArgs),
    /// Generate labeled synthetic series.
    Synth(SynthArgs),
    /// Score detectors over a directory of labeled series.
    Eval(EvalArgs),
    /// Time the detectors, permutation test included.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Edm,
    Edmx,
    Edivisive,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Edm => Method::Edm,
            MethodArg::Edmx => Method::Edmx,
            MethodArg::Edivisive => Method::Edivisive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BetweenArg {
    Head,
    Tail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothArg {
    None,
    Mean,
    Median,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Detect,
    Synth,
    Eval,
    Bench,
}

/// Detector and permutation-test options shared by detect, eval and bench.
#[derive(Clone, Debug, Args)]
pub struct ConfigArgs {
    /// Distance exponent in (0, 2].
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Minimum segment size and distance-window width (at least 2).
    #[arg(long, default_value_t = 24)]
    pub delta: usize,
    /// Interval-tree depth used by edm.
    #[arg(long, default_value_t = 10)]
    pub tree_depth: u32,
    /// Which end of the left segment pairs with the right segment's head.
    #[arg(long, value_enum, default_value_t = BetweenArg::Tail)]
    pub between: BetweenArg,
    /// Number of random permutations.
    #[arg(long, default_value_t = 199)]
    pub permutations: usize,
    /// Significance level in (0, 1).
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl ConfigArgs {
    pub fn resolve(&self) -> CliResult<DetectionConfig> {
        let config = DetectionConfig {
            alpha: self.alpha,
            delta: self.delta,
            tree_depth: self.tree_depth,
            between_selection: match self.between {
                BetweenArg::Head => BetweenSelection::Head,
                BetweenArg::Tail => BetweenSelection::Tail,
            },
            permutations: self.permutations,
            significance_level: self.level,
            rng_seed: self.seed,
        };
        config
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(config)
    }
}

#[derive(Clone, Debug, Args)]
pub struct SmoothArgs {
    /// Smooth the series before detection.
    #[arg(long, value_enum, default_value_t = SmoothArg::None)]
    pub smooth: SmoothArg,
    /// Smoother window, odd and at least 3.
    #[arg(long, default_value_t = 5)]
    pub window: usize,
}

impl SmoothArgs {
    pub fn resolve(&self) -> CliResult<Option<SmootherSpec>> {
        let kind = match self.smooth {
            SmoothArg::None => return Ok(None),
            SmoothArg::Mean => SmootherKind::RollingMean,
            SmoothArg::Median => SmootherKind::RollingMedian,
        };
        SmootherSpec::new(kind, self.window)
            .map(Some)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// CSV with one value per row, optional header and second timestamp column.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Edm)]
    pub method: MethodArg,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub smoothing: SmoothArgs,
    /// Format of the report printed to stdout.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Segment lengths, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub lengths: Vec<usize>,
    /// Segment means, comma separated, one per segment.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub means: Vec<f64>,
    /// Gaussian noise standard deviation.
    #[arg(long, default_value_t = 0.0)]
    pub sd: f64,
    /// Number of injected anomalies per series.
    #[arg(long, default_value_t = 0)]
    pub anomalies: usize,
    /// Anomaly offset in multiples of the largest mean shift.
    #[arg(long, default_value_t = 10.0)]
    pub magnitude: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of series; series i uses seed + i.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// File name stem.
    #[arg(long, default_value = "series")]
    pub name: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Directory of `<name>.csv` series with `<name>.json` labels.
    pub dataset: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::Edm, MethodArg::Edmx, MethodArg::Edivisive])]
    pub methods: Vec<MethodArg>,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub smoothing: SmoothArgs,
    /// A detection within this many observations of a truth is a hit.
    #[arg(long, default_value_t = breakwatch::eval::DEFAULT_MATCH_WINDOW)]
    pub match_window: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Series lengths to time.
    #[arg(long, value_delimiter = ',', default_values_t = [500usize, 1000, 2000])]
    pub sizes: Vec<usize>,
    /// Timed runs per size and method; the median is reported.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::Edm, MethodArg::Edmx, MethodArg::Edivisive])]
    pub methods: Vec<MethodArg>,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// Self-description written next to every command's outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: CommandKind,
    pub config: Option<DetectionConfig>,
    pub inputs: Vec<String>,
    /// Output file names, relative to the output directory.
    pub outputs: Vec<String>,
    pub format: Format,
    pub options: serde_json::Value,
}

/// What `detect` writes to `report.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectReport {
    #[serde(flatten)]
    pub report: BreakoutReport,
    pub config: DetectionConfig,
    pub smoothing: Option<SmootherSpec>,
    /// Relative to the report's directory.
    pub annotated_series: String,
}

pub fn run(cli: Cli) -> CliResult<()> {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {raw:?}"
            ))
        })?;
        breakwatch::par::configure_threads(threads);
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Detect(args) => cmd_detect(&args, &mut out),
        Command::Synth(args) => cmd_synth(&args, &mut out),
        Command::Eval(args) => cmd_eval(&args, &mut out),
        Command::Bench(args) => cmd_bench(&args, &mut out),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn write_manifest(dir: &Path, manifest: &RunManifest) -> CliResult<()> {
    write_json(&dir.join("manifest.json"), manifest)
}

fn prepare(series: TimeSeries, smoothing: Option<SmootherSpec>) -> CliResult<TimeSeries> {
    Ok(match smoothing {
        Some(spec) => smooth(&series, spec)?,
        None => series,
    })
}

#[derive(Serialize)]
struct AnnotatedRow {
    index: usize,
    value: f64,
    is_breakout_estimate: bool,
}

#[derive(Serialize)]
struct ReportRow {
    method: Method,
    tau_hat: Option<usize>,
    kappa_hat: Option<usize>,
    statistic: f64,
    p_value: f64,
    significant: bool,
}

pub fn cmd_detect(args: &DetectArgs, stdout: &mut impl Write) -> CliResult<()> {
    let config = args.config.resolve()?;
    let smoothing = args.smoothing.resolve()?;
    let raw = read_csv_file(&args.input).map_err(at(&args.input))?;
    let series = prepare(raw.clone(), smoothing)?;
    let method = Method::from(args.method);
    let report = analyze(&series, method, &config)?;

    fs::create_dir_all(&args.out)?;
    let mut wtr = csv::Writer::from_path(args.out.join("annotated.csv"))?;
    for (i, &value) in raw.values().iter().enumerate() {
        wtr.serialize(AnnotatedRow {
            index: i + 1,
            value,
            is_breakout_estimate: report.tau_hat == Some(i + 1),
        })?;
    }
    wtr.flush()?;

    let full = DetectReport {
        report: report.clone(),
        config: config.clone(),
        smoothing,
        annotated_series: "annotated.csv".into(),
    };
    write_json(&args.out.join("report.json"), &full)?;
    write_manifest(
        &args.out,
        &RunManifest {
            command: CommandKind::Detect,
            config: Some(config),
            inputs: vec![args.input.display().to_string()],
            outputs: vec!["report.json".into(), "annotated.csv".into()],
            format: args.format,
            options: serde_json::json!({ "method": method, "smoothing": smoothing }),
        },
    )?;

    match args.format {
        Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&full)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(stdout);
            w.serialize(ReportRow {
                method,
                tau_hat: report.tau_hat,
                kappa_hat: report.kappa_hat,
                statistic: report.statistic,
                p_value: report.p_value,
                significant: report.significant,
            })?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn cmd_synth(args: &SynthArgs, stdout: &mut impl Write) -> CliResult<()> {
    if args.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let base = SynthSpec {
        segment_lengths: args.lengths.clone(),
        segment_means: args.means.clone(),
        noise_sd: args.sd,
        anomaly_count: args.anomalies,
        anomaly_magnitude: args.magnitude,
        seed: args.seed,
    };
    base.validate()?;
    let width = (args.count - 1).to_string().len();
    let mut outputs = Vec::new();
    for i in 0..args.count {
        let spec = SynthSpec {
            seed: args.seed.wrapping_add(i as u64),
            ..base.clone()
        };
        let series = synthesize(&spec)?;
        let name = if args.count == 1 {
            args.name.clone()
        } else {
            format!("{}_{:0width$}", args.name, i)
        };
        write_labeled(&args.out, &name, &series)?;
        outputs.push(format!("{name}.csv"));
        outputs.push(format!("{name}.json"));
    }
    write_manifest(
        &args.out,
        &RunManifest {
            command: CommandKind::Synth,
            config: None,
            inputs: Vec::new(),
            outputs: outputs.clone(),
            format: args.format,
            options: serde_json::json!({ "spec": base, "count": args.count, "name": args.name }),
        },
    )?;
    match args.format {
        Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&outputs)?)?,
        Format::Csv => {
            for o in &outputs {
                writeln!(stdout, "{o}")?;
            }
        }
    }
    Ok(())
}

/// One scoreboard line: a series scored under one method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub series: String,
    pub method: Method,
    pub tau_hat: Option<usize>,
    pub kappa_hat: Option<usize>,
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
    /// Semicolon separated.
    pub true_breakouts: String,
    pub ttd: Option<usize>,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub series: usize,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// Over series with a significant detection and a labeled breakout.
    pub median_ttd: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub match_window: usize,
    pub methods: Vec<MethodSummary>,
}

/// Median of a non-empty list of counts, averaging the middle pair.
pub fn median_count(values: &[usize]) -> Option<f64> {
    let v: Vec<f64> = values.iter().map(|&x| x as f64).collect();
    breakwatch::median::median_by_sort(&v)
}

/// Runs every method on every series and scores the significant detections.
pub fn evaluate(
    dataset: &[(String, TimeSeries)],
    methods: &[Method],
    config: &DetectionConfig,
    smoothing: Option<SmootherSpec>,
    match_window: usize,
) -> CliResult<(Vec<ScoreRow>, EvalSummary)> {
    let jobs: Vec<(usize, Method)> = (0..dataset.len())
        .flat_map(|s| methods.iter().map(move |&m| (s, m)))
        .collect();
    let sequential = TestOptions {
        execution: Execution::Sequential,
        early_stop: false,
    };
    let results = map_indexed(
        jobs.len(),
        Execution::default(),
        |j| -> CliResult<ScoreRow> {
            let (s, method) = jobs[j];
            let (name, series) = &dataset[s];
            let prepared = prepare(series.clone(), smoothing)?;
            let report = analyze_with(&prepared, method, config, sequential)?;
            let truths = series.true_breakouts();
            let outcome = score(
                &report.detected().into_iter().collect::<Vec<_>>(),
                truths,
                match_window,
            );
            Ok(ScoreRow {
                series: name.clone(),
                method,
                tau_hat: report.tau_hat,
                kappa_hat: report.kappa_hat,
                statistic: report.statistic,
                p_value: report.p_value,
                significant: report.significant,
                true_breakouts: truths
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(";"),
                ttd: outcome.ttd,
                tp: outcome.tp,
                fp: outcome.fp,
                fn_: outcome.fn_,
            })
        },
    );
    let rows = results.into_iter().collect::<CliResult<Vec<_>>>()?;

    let summaries = methods
        .iter()
        .map(|&method| {
            let mine: Vec<&ScoreRow> = rows.iter().filter(|r| r.method == method).collect();
            let outcomes: Vec<EvalOutcome> = mine
                .iter()
                .map(|r| EvalOutcome::from_counts(r.tp, r.fp, r.fn_))
                .collect();
            let pooled = EvalOutcome::pooled(&outcomes);
            let ttds: Vec<usize> = mine.iter().filter_map(|r| r.ttd).collect();
            MethodSummary {
                method,
                series: mine.len(),
                tp: pooled.tp,
                fp: pooled.fp,
                fn_: pooled.fn_,
                precision: pooled.precision,
                recall: pooled.recall,
                f_measure: pooled.f_measure,
                median_ttd: median_count(&ttds),
            }
        })
        .collect();
    Ok((
        rows,
        EvalSummary {
            match_window,
            methods: summaries,
        },
    ))
}

fn dedup_methods(methods: &[MethodArg]) -> Vec<Method> {
    let mut out: Vec<Method> = Vec::new();
    for &m in methods {
        let m = Method::from(m);
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

pub fn cmd_eval(args: &EvalArgs, stdout: &mut impl Write) -> CliResult<()> {
    let config = args.config.resolve()?;
    let smoothing = args.smoothing.resolve()?;
    let methods = dedup_methods(&args.methods);
    let dataset = read_dataset(&args.dataset).map_err(at(&args.dataset))?;
    let (rows, summary) = evaluate(&dataset, &methods, &config, smoothing, args.match_window)?;

    fs::create_dir_all(&args.out)?;
    let mut wtr = csv::Writer::from_path(args.out.join("scoreboard.csv"))?;
    for row in &rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    write_json(&args.out.join("summary.json"), &summary)?;
    write_manifest(
        &args.out,
        &RunManifest {
            command: CommandKind::Eval,
            config: Some(config),
            inputs: vec![args.dataset.display().to_string()],
            outputs: vec!["scoreboard.csv".into(), "summary.json".into()],
            format: args.format,
            options: serde_json::json!({
                "methods": methods,
                "smoothing": smoothing,
                "match_window": args.match_window,
                "series": dataset.len(),
            }),
        },
    )?;
    match args.format {
        Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&summary)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(stdout);
            for s in &summary.methods {
                w.serialize(s)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub size: usize,
    pub method: Method,
    pub median_seconds: f64,
    pub min_seconds: f64,
    pub max_seconds: f64,
    pub repeats: usize,
    /// Median E-Divisive time divided by this method's median time.
    pub speedup_vs_edivisive: Option<f64>,
}

/// The series timed at size `n`: a mid-series unit step with mild noise and
/// one anomaly per hundred points.
pub fn bench_series(n: usize, seed: u64) -> CliResult<TimeSeries> {
    Ok(synthesize(&SynthSpec {
        segment_lengths: vec![n / 2, n - n / 2],
        segment_means: vec![0.0, 1.0],
        noise_sd: 0.2,
        anomaly_count: n / 100,
        anomaly_magnitude: 5.0,
        seed,
    })?)
}

/// Times the full permutation test of each method, `repeats` times per size.
pub fn run_bench(
    sizes: &[usize],
    methods: &[Method],
    repeats: usize,
    config: &DetectionConfig,
) -> CliResult<Vec<BenchRow>> {
    if repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &n in sizes {
        let series = bench_series(n, config.rng_seed)?;
        let mut size_rows = Vec::new();
        for &method in methods {
            let mut times = Vec::with_capacity(repeats);
            for _ in 0..repeats {
                let start = Instant::now();
                analyze(&series, method, config)?;
                times.push(start.elapsed().as_secs_f64());
            }
            times.sort_by(f64::total_cmp);
            size_rows.push(BenchRow {
                size: n,
                method,
                median_seconds: breakwatch::median::median_of_sorted(&times).unwrap_or(0.0),
                min_seconds: times[0],
                max_seconds: times[times.len() - 1],
                repeats,
                speedup_vs_edivisive: None,
            });
        }
        let baseline = size_rows
            .iter()
            .find(|r| r.method == Method::Edivisive)
            .map(|r| r.median_seconds);
        for r in &mut size_rows {
            r.speedup_vs_edivisive = baseline.map(|b| b / r.median_seconds);
        }
        rows.extend(size_rows);
    }
    Ok(rows)
}

pub fn cmd_bench(args: &BenchArgs, stdout: &mut impl Write) -> CliResult<()> {
    let config = args.config.resolve()?;
    let methods = dedup_methods(&args.methods);
    let rows = run_bench(&args.sizes, &methods, args.repeats, &config)?;

    fs::create_dir_all(&args.out)?;
    let mut wtr = csv::Writer::from_path(args.out.join("bench.csv"))?;
    for row in &rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    write_manifest(
        &args.out,
        &RunManifest {
            command: CommandKind::Bench,
            config: Some(config),
            inputs: Vec::new(),
            outputs: vec!["bench.csv".into()],
            format: args.format,
            options: serde_json::json!({
                "sizes": args.sizes,
                "methods": methods,
                "repeats": args.repeats,
            }),
        },
    )?;
    match args.format {
        Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&rows)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(stdout);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

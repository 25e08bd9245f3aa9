//! Command-line front end: ingest sampled data or synthesize demo signals,
//! run detection, and emit machine-readable reports.

mod csv;
mod error;
mod report;

use clap::{Args, Parser, Subcommand};
use error::CliError;
use jumpscope::{
    add_noise, build_signal, detect_with_options, make_step_policy_with_t, random_corpus,
    CorpusConstraints, DetectOptions, DetectionGrid, NoiseModel, PieceSpec, SignalSource,
    SmoothnessClass,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "jumpscope",
    about = "Stable differentiation of noisy data on [0,1] with jump, kink and critical-point detection",
    long_about = "Estimates f' from noisy samples with a guaranteed worst-case error bound, and\n\
                  locates discontinuities of f and f' with rigorous localization intervals and\n\
                  size bounds. All guarantees are conditional on the declared sup-norm noise\n\
                  bound (--delta) and derivative bounds (--m1, --m2/--alpha/--ma).\n\
                  Data on another interval [a, a+L] must be rescaled to [0,1] first; that\n\
                  multiplies m1 by L and m2 by L^2."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect features in a two-column x,value file on a uniform grid over `[0,1]`
    Detect(DetectArgs),
    /// Run detection on a synthetic signal described by a spec (JSON) file
    Demo(DemoArgs),
    /// Generate a reproducible corpus of piecewise-smooth signal specs
    Gen(GenArgs),
}

#[derive(Args)]
struct ClassArgs {
    /// Smoothness mode: auto, smooth, fractional or linear
    #[arg(long, default_value = "auto")]
    mode: String,
    /// Sup-norm noise bound of the data (required; never estimated)
    #[arg(long)]
    delta: f64,
    /// Bound on |f'| away from discontinuities
    #[arg(long)]
    m1: f64,
    /// Bound on |f''| away from discontinuities (0 selects linear mode under auto)
    #[arg(long)]
    m2: Option<f64>,
    /// Fractional smoothness order in (1,2]
    #[arg(long)]
    alpha: Option<f64>,
    /// Bound on the order-alpha norm (fractional mode)
    #[arg(long)]
    ma: Option<f64>,
    /// Slope-confidence parameter for linear mode
    #[arg(long, default_value_t = 10.0)]
    t: f64,
    /// Jump-flag exceedance factor over the smooth-region ceiling
    #[arg(long, default_value_t = 4.0)]
    kappa: f64,
}

#[derive(Args)]
struct DetectArgs {
    /// Input CSV file (x,value per line, optional header)
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    class: ClassArgs,
    /// Report file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write a plain-text x/f_j/flag table for plotting
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    /// Signal spec file: one spec document or an array of them
    #[arg(long)]
    input: PathBuf,
    /// Which entry to run when the file holds an array
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[command(flatten)]
    class: ClassArgs,
    /// Noise realization: uniform, checker or none (bounded by --delta)
    #[arg(long, default_value = "uniform")]
    noise: String,
    /// Noise seed (the JUMPSCOPE_SEED environment variable overrides this)
    #[arg(long, default_value_t = 17)]
    seed: u64,
    /// Report file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write a plain-text x/f_j/flag table for plotting
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Number of signals
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Minimum distance between features and from the domain ends
    #[arg(long, default_value_t = 0.12)]
    separation: f64,
    /// Smallest jump magnitude
    #[arg(long, default_value_t = 0.4)]
    p_min: f64,
    /// Smallest derivative-jump magnitude at kinks (0 disables kinks)
    #[arg(long, default_value_t = 0.3)]
    kink_min: f64,
    /// Slope budget for generated signals
    #[arg(long, default_value_t = 2.0)]
    m1_max: f64,
    /// Curvature budget for generated signals (0 gives piecewise-linear)
    #[arg(long, default_value_t = 12.0)]
    m2_max: f64,
    /// Corpus file (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(args) => run_detect(args),
        Command::Demo(args) => run_demo(args),
        Command::Gen(args) => run_gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn resolve_class(args: &ClassArgs) -> Result<SmoothnessClass, CliError> {
    let mode = match args.mode.as_str() {
        "auto" => {
            if args.alpha.is_some() {
                "fractional"
            } else {
                match args.m2 {
                    Some(m2) if m2 > 0.0 => "smooth",
                    Some(_) => "linear",
                    None => {
                        return Err(CliError::Config(
                            "auto mode needs --m2 (or --alpha for fractional)".into(),
                        ))
                    }
                }
            }
        }
        m @ ("smooth" | "fractional" | "linear") => m,
        other => return Err(CliError::Config(format!("unknown mode {other:?}"))),
    };
    let class = match mode {
        "smooth" => {
            let m2 = args
                .m2
                .ok_or_else(|| CliError::Config("smooth mode needs --m2".into()))?;
            SmoothnessClass::smooth(args.m1, m2)
        }
        "fractional" => {
            let a = args
                .alpha
                .ok_or_else(|| CliError::Config("fractional mode needs --alpha".into()))?;
            let ma = args
                .ma
                .ok_or_else(|| CliError::Config("fractional mode needs --ma".into()))?;
            SmoothnessClass::fractional(args.m1, a, ma)
        }
        _ => SmoothnessClass::linear(args.m1),
    };
    class.map_err(|e| CliError::Domain(e.to_string()))
}

fn run_pipeline<S: SignalSource>(
    src: &S,
    class_args: &ClassArgs,
    mut warnings: Vec<String>,
    output: Option<&Path>,
    plot: Option<&Path>,
) -> Result<(), CliError> {
    let class = resolve_class(class_args)?;
    if class.is_linear() {
        warnings.push("kink detection disabled in linear mode".to_string());
    }
    let opts = DetectOptions {
        kappa: class_args.kappa,
        t: class_args.t,
        require_kinks: false,
    };
    let detection = detect_with_options(src, class, &opts)?;
    let doc = report::build(&detection, warnings);
    let text = report::to_json(&doc);
    match output {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = plot {
        // Full table including masked nodes, recomputed on the table grid.
        let grid = DetectionGrid::new(detection.params.table_step)
            .map_err(|e| CliError::Domain(e.to_string()))?;
        let all: Vec<(f64, f64)> = grid
            .nodes()
            .map(|j| {
                let x = grid.node_x(j);
                let v = (src.eval(x + grid.h()) - src.eval(x - grid.h())) / (2.0 * grid.h());
                (x, v)
            })
            .collect();
        write_file(path, &report::plot_table(&detection, &all))?;
    }
    Ok(())
}

fn run_detect(args: DetectArgs) -> Result<(), CliError> {
    let src = csv::ingest_csv(&args.input, args.class.delta, args.class.m1)?;
    let mut warnings = Vec::new();
    // The grid should oversample the detection step, or interval membership
    // decisions get shaky and the quantization inflation grows.
    let class = resolve_class(&args.class)?;
    if let Ok(policy) = make_step_policy_with_t(class, src.delta(), args.class.t) {
        if src.dx() > policy.h() / 10.0 {
            let w = format!(
                "grid spacing {} exceeds h/10 = {}; results may be unreliable",
                src.dx(),
                policy.h() / 10.0
            );
            eprintln!("warning: {w}");
            warnings.push(w);
        }
    }
    run_pipeline(&src, &args.class, warnings, args.output.as_deref(), args.plot.as_deref())
}

fn run_demo(args: DemoArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|source| CliError::Io { path: args.input.clone(), source })?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Json { path: args.input.clone(), message: e.to_string() })?;
    let spec_value = match &value {
        serde_json::Value::Array(items) => items.get(args.index).cloned().ok_or_else(|| {
            CliError::Config(format!(
                "index {} out of range: the corpus holds {} specs",
                args.index,
                items.len()
            ))
        })?,
        other => other.clone(),
    };
    let spec: PieceSpec = serde_json::from_value(spec_value)
        .map_err(|e| CliError::Json { path: args.input.clone(), message: e.to_string() })?;
    let (signal, truth) = build_signal(&spec)
        .map_err(|e| CliError::Json { path: args.input.clone(), message: e.to_string() })?;
    eprintln!(
        "demo: {} true events, sup|f'| = {:.6}, sup|f''| = {:.6}",
        truth.events.len(),
        truth.m1_true,
        truth.m2_true
    );

    let seed = std::env::var("JUMPSCOPE_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(args.seed);
    let class = resolve_class(&args.class)?;
    let model = match args.noise.as_str() {
        "uniform" => NoiseModel::Uniform,
        "checker" => {
            let policy = make_step_policy_with_t(class, args.class.delta, args.class.t)?;
            NoiseModel::Checker { h: policy.h() }
        }
        "none" => NoiseModel::Zero,
        other => return Err(CliError::Config(format!("unknown noise model {other:?}"))),
    };
    let src = add_noise(signal, args.class.delta, model, seed);
    run_pipeline(&src, &args.class, Vec::new(), args.output.as_deref(), args.plot.as_deref())
}

fn run_gen(args: GenArgs) -> Result<(), CliError> {
    let constraints = CorpusConstraints {
        min_separation: args.separation,
        p_min: args.p_min,
        kink_min: args.kink_min,
        m1_max: args.m1_max,
        m2_max: args.m2_max,
    };
    let corpus = random_corpus(args.count, args.seed, &constraints)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let specs: Vec<&PieceSpec> = corpus.iter().map(|(spec, _)| spec).collect();
    let mut text = serde_json::to_string_pretty(&specs).expect("specs serialize");
    text.push('\n');
    match args.output.as_deref() {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;

use clap::{Parser, Subcommand, ValueEnum};
use entroflux_cli::{
    parse_config, run_scenario, write_csv, write_csv_to, CheckSuite, RunReport, ScenarioConfig,
};
use entroflux_core::{BoundMode, TrajectoryRecord};

const EXIT_INPUT: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "entroflux",
    version,
    about = "Entropy production and its flux-based upper bound for open quantum systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one or more scenarios and write their trajectories as CSV.
    Run(RunArgs),
    /// Run the built-in invariant suite.
    Check,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Scenario files; several files are run concurrently.
    #[arg(required = true)]
    configs: Vec<PathBuf>,

    #[arg(long)]
    dt: Option<f64>,

    #[arg(long = "t-max")]
    t_max: Option<f64>,

    #[arg(long, value_enum)]
    mode: Option<Mode>,

    /// CSV destination; defaults to the config's `output_path`, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Incremental,
    Resolve,
}

impl From<Mode> for BoundMode {
    fn from(mode: Mode) -> Self {
        match mode {
            Mode::Incremental => BoundMode::Incremental,
            Mode::Resolve => BoundMode::Resolve,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

fn load(path: &PathBuf, args: &RunArgs) -> Result<ScenarioConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let mut cfg =
        parse_config(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    if let Some(dt) = args.dt {
        cfg.dt = dt;
    }
    if let Some(t_max) = args.t_max {
        cfg.t_max = t_max;
    }
    if let Some(mode) = args.mode {
        cfg.mode = mode.into();
    }
    if let Some(out) = &args.out {
        cfg.output_path = Some(out.clone());
    }
    cfg.validate()
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(cfg)
}

/// Every model error raised after validation counts as a numerical failure.
fn execute(cfg: &ScenarioConfig) -> Result<(TrajectoryRecord, RunReport), Failure> {
    run_scenario(cfg).map_err(|e| Failure {
        code: EXIT_NUMERICAL,
        message: format!("numerical failure: {e}"),
    })
}

fn emit(cfg: &ScenarioConfig, record: &TrajectoryRecord) -> io::Result<()> {
    match &cfg.output_path {
        Some(path) => write_csv(record, path),
        None => write_csv_to(record, io::stdout().lock()),
    }
}

fn run(args: RunArgs) -> u8 {
    if args.out.is_some() && args.configs.len() > 1 {
        eprintln!("error: --out needs a single config file");
        return EXIT_INPUT;
    }
    let outcomes: Vec<_> = thread::scope(|scope| {
        let handles: Vec<_> = args
            .configs
            .iter()
            .map(|path| {
                let args = &args;
                scope.spawn(move || {
                    let cfg = load(path, args)?;
                    let (record, report) = execute(&cfg)?;
                    Ok::<_, Failure>((cfg, record, report))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread panicked"))
            .collect()
    });

    let mut code = 0;
    for (path, outcome) in args.configs.iter().zip(outcomes) {
        match outcome {
            Ok((cfg, record, report)) => {
                if let Err(e) = emit(&cfg, &record) {
                    eprintln!("error: writing output for {}: {e}", path.display());
                    code = code.max(EXIT_INPUT);
                    continue;
                }
                eprintln!("{}: {report}", path.display());
                if !report.passed() {
                    code = code.max(EXIT_INVARIANT);
                }
            }
            Err(failure) => {
                eprintln!("error: {}", failure.message);
                code = code.max(failure.code);
            }
        }
    }
    code
}

fn check() -> u8 {
    let results = CheckSuite::default().run();
    let mut out = io::stdout().lock();
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "[{status}] {}: {}", r.name, r.detail);
    }
    if results.iter().all(|r| r.passed) {
        0
    } else {
        EXIT_INVARIANT
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(args) => run(args),
        Command::Check => check(),
    };
    ExitCode::from(code)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hexbeam_cli::output::{emit, RunMetadata};
use hexbeam_cli::{commands, load_config, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "hexbeam", version, about = "Coverage and throughput of random 3D beamforming in hexagonal networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; absent fields take their defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV output path; metadata goes to PATH.meta.json
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// worker threads; results do not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// SINR coverage curve
    Coverage,
    /// mean throughput against interferer load
    Throughput,
    /// coverage curves of several scenarios side by side
    Compare,
    /// analytical mean ISR at one mobile position
    ExpectedIsr,
    /// horizontal and vertical beam patterns
    PatternDump,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Coverage => "coverage",
            Command::Throughput => "throughput",
            Command::Compare => "compare",
            Command::ExpectedIsr => "expected-isr",
            Command::PatternDump => "pattern-dump",
        }
    }
}

fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    let scenarios = std::iter::once(&mut cfg.scenario).chain(cfg.compare.iter_mut());
    for s in scenarios {
        if let Some(seed) = cli.seed {
            s.seed = seed;
        }
        if let Some(n) = cli.trials {
            s.n_trials = n;
        }
    }
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.display().to_string());
    }
    if cli.threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = effective_config(cli)?;
    let work = || match cli.command {
        Command::Coverage => commands::coverage(&cfg),
        Command::Throughput => commands::throughput(&cfg),
        Command::Compare => commands::compare(&cfg),
        Command::ExpectedIsr => commands::expected(&cfg),
        Command::PatternDump => commands::pattern_dump(&cfg),
    };
    let table = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Runtime(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let meta = RunMetadata::new(cli.command.name(), &cfg, &table);
    emit(&table, &meta, cfg.output.path.as_deref().map(std::path::Path::new))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hexbeam: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use clap::{Parser, Subcommand};
use secrecy_relay_cli::config::{ExperimentConfig, Mode, OutputFormat};
use secrecy_relay_cli::{dmc_run, emit, sweep, CliError};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "secrecy-relay",
    version,
    about = "Secrecy rates and outer bounds for the four-terminal relay-eavesdropper channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (JSON document).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the Monte-Carlo seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format: csv or json (sweep modes).
    #[arg(long, global = true)]
    format: Option<String>,

    /// Comma-separated strategy list override.
    #[arg(long, global = true, value_delimiter = ',')]
    strategies: Option<Vec<String>>,

    /// Echo the fully resolved config as JSON and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every requested strategy and the outer bound at one point.
    Rate,
    /// Relay-position sweep in the real channel model.
    Sweep,
    /// Relay-position sweep with phase-fading Monte Carlo for DF/AF.
    FadingSweep,
    /// Evaluate a discrete channel at a supplied input design.
    Dmc,
    /// Grid-search input designs for a discrete channel.
    DmcSearch,
}

impl Command {
    fn mode(&self) -> Mode {
        match self {
            Command::Rate => Mode::AwgnRate,
            Command::Sweep => Mode::AwgnSweep,
            Command::FadingSweep => Mode::AwgnFadingSweep,
            Command::Dmc => Mode::DmcPoint,
            Command::DmcSearch => Mode::DmcSearch,
        }
    }
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Ok(threads) = std::env::var("SECRECY_RELAY_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| CliError::Config(format!("SECRECY_RELAY_THREADS={threads} is not a count")))?;
        // speed knob only; results are index-ordered and thread-count free
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }

    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <file> is required".into()))?;
    let (mut cfg, base_dir) = ExperimentConfig::load(config_path)?;

    // flag overrides
    cfg.mode = cli.command.mode();
    if let Some(seed) = cli.seed {
        cfg.mc.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.display().to_string());
    }
    if let Some(fmt) = &cli.format {
        cfg.output.format = fmt.parse()?;
    }
    if let Some(strats) = &cli.strategies {
        cfg.strategies = strats.clone();
    }
    cfg.validate()?;

    if cli.print_config {
        let mut bytes = serde_json::to_vec_pretty(&cfg).expect("config serializes");
        bytes.push(b'\n');
        return write_output(&None, &bytes);
    }

    let out_path = cfg.output.path.clone().map(PathBuf::from);
    let bytes = match cfg.mode {
        Mode::AwgnRate => {
            let report = sweep::run_rate(&cfg)?;
            let mut b = serde_json::to_vec_pretty(&report).expect("report serializes");
            b.push(b'\n');
            b
        }
        Mode::AwgnSweep => {
            let table = sweep::run_awgn_sweep(&cfg)?;
            emit::emit(&table, cfg.output.format)
        }
        Mode::AwgnFadingSweep => {
            let table = sweep::run_fading_sweep(&cfg)?;
            emit::emit(&table, cfg.output.format)
        }
        Mode::DmcPoint | Mode::DmcSearch => {
            let report = dmc_run::run_dmc(&cfg, &base_dir)?;
            let mut b = serde_json::to_vec_pretty(&report).expect("report serializes");
            b.push(b'\n');
            b
        }
    };
    write_output(&out_path, &bytes)?;

    if cfg.output.format == OutputFormat::Csv && out_path.is_some() {
        // quiet on stdout by design; the artifact is the file
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("secrecy-relay: {e}");
        std::process::exit(e.exit_code());
    }
}

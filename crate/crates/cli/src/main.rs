use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use splitwalk_cli::{presets, run, validate, CliError, Config, Experiment};

#[derive(Parser)]
#[command(name = "splitwalk", version, about = "Disordered 2D split-step quantum walk experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Point-source spreading and envelope fits.
    Evolve(RunArgs),
    /// Quasienergy-averaged transmission with and without cuts.
    Scatter(RunArgs),
    /// Level-spacing statistics of the U² blocks.
    Spectrum(RunArgs),
    /// Multifractal exponent estimates.
    Critical(RunArgs),
    /// Transmission and spread over binary-disorder grids.
    BinarySweep(RunArgs),
    /// Check a config and print the report as JSON.
    Validate(RunArgs),
    /// List the built-in presets.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Overrides `seed_base`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn load(&self, experiment: Option<Experiment>) -> Result<Config, CliError> {
        let mut config = match (&self.config, &self.preset) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                Config::from_toml(&text)?
            }
            (None, Some(name)) => presets::preset(name)?,
            (None, None) => Config::default(),
        };
        if let Some(seed) = self.seed {
            config.seed_base = seed;
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        match (experiment, config.experiment) {
            (Some(want), Some(have)) if want != have => {
                return Err(CliError::Mismatch {
                    requested: want.name().into(),
                    configured: have.name().into(),
                })
            }
            (Some(want), None) => config.experiment = Some(want),
            _ => {}
        }
        Ok(config)
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (args, experiment) = match cli.command {
        Command::Presets => {
            for name in presets::names() {
                println!("{name}");
            }
            return Ok(());
        }
        Command::Validate(args) => {
            let config = args.load(None)?;
            let report = validate(&config);
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            return if report.has_errors() {
                Err(CliError::Invalid(report))
            } else {
                Ok(())
            };
        }
        Command::Evolve(a) => (a, Experiment::Evolve),
        Command::Scatter(a) => (a, Experiment::Scatter),
        Command::Spectrum(a) => (a, Experiment::Spectrum),
        Command::Critical(a) => (a, Experiment::Critical),
        Command::BinarySweep(a) => (a, Experiment::BinarySweep),
    };
    if let Some(n) = args.workers {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let config = args.load(Some(experiment))?;
    let out = config
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("out").join(experiment.name()));
    let manifest = run(&config, &out)?;
    eprintln!("wrote {} file(s) to {}", manifest.files.len() + 1, out.display());
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.json_line());
            ExitCode::FAILURE
        }
    }
}

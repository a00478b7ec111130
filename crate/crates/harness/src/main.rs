use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hybrid_actuator_harness::config::{load_config, load_scenario, LockSelection, RunConfig};
use hybrid_actuator_harness::{run, HarnessError};

#[derive(Parser)]
#[command(name = "hactuate", version, about = "Sweeps, contact runs and renders for the hybrid bending actuator")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Lock preset (1R, 2R, 4R, 6R); overrides the config.
    #[arg(long, global = true)]
    lock: Option<String>,

    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also write SVG frames.
    #[arg(long, global = true)]
    svg: bool,

    /// Scenario file; overrides the config.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    /// Target pressure in kPa for `adapt` and `render`.
    #[arg(long, global = true)]
    pressure: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the fitted torque and spring coefficients.
    Calibrate,
    /// Free bending sweep to bend_<lock>.csv.
    Bend,
    /// Blocked tip force sweep to force_<lock>.csv.
    Force,
    /// Ramped contact solve against a scenario to adapt_<scenario>_<lock>.csv.
    Adapt,
    /// Render one equilibrium to SVG.
    Render,
    /// List the lock presets.
    Presets,
}

fn configure(cli: &Cli) -> Result<RunConfig, HarnessError> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(name) = &cli.lock {
        cfg.lock = LockSelection::Preset(name.parse()?);
    }
    if let Some(dir) = &cli.out {
        cfg.output.dir = dir.clone();
    }
    if cli.svg {
        cfg.output.svg = true;
    }
    if let Some(path) = &cli.scenario {
        cfg.scenario = Some(load_scenario(path)?);
    }
    if let Some(p) = cli.pressure {
        if !(p.is_finite() && p >= 0.0) {
            return Err(HarnessError::Config(format!("`--pressure` must be >= 0, got {p}")));
        }
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<(), HarnessError> {
    let cfg = configure(cli)?;
    let report = |files: &[PathBuf]| {
        for f in files {
            println!("wrote {}", f.display());
        }
    };
    match cli.command {
        Command::Calibrate => print!("{}", run::calibration_report(&cfg)?),
        Command::Presets => print!("{}", run::presets_report(&cfg)?),
        Command::Bend => report(&run::run_bend(&cfg)?.files),
        Command::Force => report(&run::run_force(&cfg)?.files),
        Command::Adapt => report(&run::run_adapt(&cfg, cli.pressure)?.files),
        Command::Render => {
            let p = cli.pressure.unwrap_or_else(|| match cfg.scenario {
                Some(_) => run::adapt_pressure(&cfg),
                None => cfg.anchors.bend_pressure,
            });
            report(&[run::run_render(&cfg, p)?]);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if let HarnessError::Model(hybrid_actuator::Error::SolverFailure(d)) = &err {
                eprintln!(
                    "  pressure {} kPa, max penetration {:.3e} mm, residual {:.3e}, {} iterations",
                    d.pressure_kpa, d.max_penetration_mm, d.stationarity_residual, d.iterations
                );
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

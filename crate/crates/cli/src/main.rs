use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use movwell_cli::{
    compare, load_config_file, parse_method_spec, presets, resolve, run, write_compare, CliError, Method,
    RunConfig, RunOverrides, OUTPUT_DIR_ENV,
};

#[derive(Parser)]
#[command(name = "movwell", version, about = "Particle in a square well with a moving wall")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    overrides: RunOverrides,
    /// TOML file with run fields, or a manifest.json from an earlier run.
    /// Values in the file take precedence over flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write its observables and a manifest.
    Run(Common),
    /// Compare several resolutions against a reference at t_max.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Spectral truncations to run, e.g. 10,20,40,60.
        #[arg(long, value_delimiter = ',')]
        spectral: Vec<usize>,
        /// FD grid sizes to run, e.g. 30,60,100.
        #[arg(long, value_delimiter = ',')]
        fd: Vec<usize>,
        /// Reference run: `exact`, `spectral:<k_max>` or `fd:<N>`.
        #[arg(long, default_value = "exact", value_parser = parse_method_spec)]
        reference: (Method, Option<usize>),
        /// Output table (default: <output_path>/compare.csv).
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Write |b_k|²(t) of a spectral run.
    Coefficients {
        #[command(flatten)]
        common: Common,
        /// Modes to write, e.g. 1,2,3,4,5.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        modes: Vec<usize>,
    },
    /// List the built-in presets.
    ListPresets,
}

fn resolve_common(c: &Common) -> Result<RunConfig, CliError> {
    let file = c.config.as_deref().map(load_config_file).transpose()?;
    let env = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    resolve(&c.overrides, file, env)
}

fn with_method(base: &RunConfig, method: Method, resolution: usize) -> RunConfig {
    RunConfig {
        method,
        resolution,
        ..base.clone()
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(common) => {
            let config = resolve_common(&common)?;
            let manifest = run(&config)?;
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "{} {} (resolution {}): final norm drift {:.3e}, {:.2} s",
                config.scenario, config.method, config.resolution, manifest.final_norm_drift, manifest.wall_time_seconds
            );
            println!("wrote {}", config.output_path.join(movwell_cli::MANIFEST_FILE).display());
        }
        Command::Compare {
            common,
            spectral,
            fd,
            reference,
            table,
        } => {
            let base = resolve_common(&common)?;
            let mut runs: Vec<RunConfig> = spectral.iter().map(|&k| with_method(&base, Method::Spectral, k)).collect();
            runs.extend(fd.iter().map(|&n| with_method(&base, Method::Fd, n)));
            if runs.is_empty() {
                return Err(CliError::usage("spectral", "give at least one --spectral or --fd resolution"));
            }
            let (method, resolution) = reference;
            let resolution = match (method, resolution) {
                (_, Some(r)) => r,
                (Method::Exact, None) => base.resolution.max(base.initial.j),
                (_, None) => return Err(CliError::usage("reference", "give a resolution, e.g. spectral:40")),
            };
            let reference = with_method(&base, method, resolution);
            for c in runs.iter().chain([&reference]) {
                c.validate()?;
            }
            let rows = compare(&runs, &reference)?;
            let path = table.unwrap_or_else(|| base.output_path.join("compare.csv"));
            write_compare(&path, &rows)?;
            for r in &rows {
                println!(
                    "{:>8} {:>5}  odes {:>4}  average error {:.4e}  norm drift {:.3e}",
                    r.method, r.resolution, r.n_complex_odes, r.average_error, r.final_norm_drift
                );
            }
            println!("wrote {}", path.display());
        }
        Command::Coefficients { common, modes } => {
            let config = resolve_common(&common)?;
            let path = movwell_cli::coefficients(&config, &modes)?;
            println!("wrote {}", path.display());
        }
        Command::ListPresets => {
            for p in presets::all() {
                let c = &p.config;
                println!("{:<26} {}", p.name, p.description);
                println!(
                    "{:<26} initial {}, t_max {}, dt {:e}, k_max {}, fd N {}",
                    "", c.initial, c.t_max, c.dt, p.resolutions.spectral, p.resolutions.fd
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use daqc_cli::config::{config_kind, ConfigKind, RunConfig, SweepConfig};
use daqc_cli::runner::{self, Format};
use daqc_cli::exit_code;
use daqc_core::{Error, Result};

#[derive(Parser)]
#[command(name = "daqc", version, about = "Digital-analog Hubbard-Holstein simulations")]
struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(clap::Args)]
struct Lattice {
    /// Lattice rows (the shorter side).
    #[arg(long, default_value_t = 1)]
    rows: usize,
    #[arg(long, default_value_t = 2)]
    cols: usize,
    /// Trotter steps.
    #[arg(long, default_value_t = 50)]
    steps: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Time-resolved run: fidelity, double occupations and phonon number.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Two-parameter fidelity map.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// CNOT counts of the bosonic gates and depth scaling.
    Resources {
        #[command(flatten)]
        lattice: Lattice,
        /// Gate angle used for synthesis.
        #[arg(long, default_value_t = 0.3)]
        theta: f64,
        /// Directory for resources.<ext> and scaling.<ext>; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Circuit depth of the digital-analog schedule.
    Depth {
        #[command(flatten)]
        lattice: Lattice,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Parses and checks a run or sweep config without running it.
    ValidateConfig {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read_config(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config {
        path: String::new(),
        reason: format!("cannot read {}: {e}", path.display()),
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out, format } => {
            let cfg = RunConfig::from_toml(&read_config(&config)?)?;
            report(&runner::run_to_dir(&cfg, &out, format.into())?);
        }
        Command::Sweep { config, out, format } => {
            let cfg = SweepConfig::from_toml(&read_config(&config)?)?;
            report(&runner::sweep_to_dir(&cfg, &out, format.into())?);
        }
        Command::Resources {
            lattice,
            theta,
            out,
            format,
        } => {
            let rep = runner::resources(lattice.rows, lattice.cols, lattice.steps, theta)?;
            let format = Format::from(format);
            let files = match format {
                Format::Csv => vec![("resources", rep.gates_csv()), ("scaling", rep.scaling_csv())],
                Format::Json => vec![("resources", rep.to_json()?)],
            };
            match out {
                None => {
                    let texts: Vec<&str> = files.iter().map(|(_, t)| t.as_str()).collect();
                    print!("{}", texts.join("\n"));
                }
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|e| Error::Io(e.to_string()))?;
                    let mut written = Vec::new();
                    for (stem, text) in files {
                        let path = dir.join(format!("{stem}.{}", format.extension()));
                        std::fs::write(&path, text).map_err(|e| Error::Io(e.to_string()))?;
                        written.push(path);
                    }
                    report(&written);
                }
            }
        }
        Command::Depth { lattice, format } => {
            let rep = runner::depth(lattice.rows, lattice.cols, lattice.steps)?;
            match Format::from(format) {
                Format::Csv => println!("{}\n{}", runner::DepthReport::CSV_HEADER, rep.csv_row()),
                Format::Json => println!("{}", to_json(&rep)?),
            }
        }
        Command::ValidateConfig { config } => {
            let text = read_config(&config)?;
            match config_kind(&text)? {
                ConfigKind::Run => {
                    RunConfig::from_toml(&text)?;
                }
                ConfigKind::Sweep => {
                    SweepConfig::from_toml(&text)?;
                }
            }
            println!("{}: ok", config.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

use std::io::Read;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use ruelle_cli::{parse_document, render_json, render_text, run, validate, CliError, Command, Options};

#[derive(Parser, Debug)]
#[command(name = "ruelle", version, about = "Transfer operators, Gibbs measures and RPF certificates")]
struct Cli {
    /// Problem document; `-` reads standard input.
    #[arg(long, global = true, default_value = "-")]
    input: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Lift level; defaults to max(1, memory - 1).
    #[arg(long, global = true)]
    level: Option<usize>,
    /// Relative width of the eigenvalue bracket at termination.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Leading eigenvalue, eigenfunction, eigenmeasure and spectrum.
    Perron,
    /// Eigenvalues of the lift.
    Spectrum,
    /// Explicit RPF constants.
    Certificate,
    /// Every certificate check.
    Verify {
        #[arg(long, default_value_t = 40)]
        steps: usize,
    },
    /// Shift invariance of the equilibrium measure on short cylinders.
    Invariance {
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Correlations of two named observables.
    Correlate {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Samples an orbit of the equilibrium measure.
    Sample {
        #[arg(long, default_value_t = 10_000)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Topological pressure log λ.
    Pressure,
}

fn read_input(path: &str) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(CliError::Usage(format!("--tol must be in (0, 1), got {}", cli.tol)));
    }
    let command = match &cli.command {
        Sub::Perron => Command::Perron,
        Sub::Spectrum => Command::Spectrum,
        Sub::Certificate => Command::Certificate,
        Sub::Verify { steps } => Command::Verify { steps: *steps },
        Sub::Invariance { depth } => Command::Invariance { depth: *depth },
        Sub::Correlate { u, v, steps } => Command::Correlate {
            u: u.clone(),
            v: v.clone(),
            steps: *steps,
        },
        Sub::Sample { length, seed } => Command::Sample {
            length: *length,
            seed: *seed,
        },
        Sub::Pressure => Command::Pressure,
    };
    let problem = validate(parse_document(&read_input(&cli.input)?)?)?;
    let options = Options {
        level: cli.level,
        tol: cli.tol,
    };
    let report = run(&command, &problem, &options)?;
    let rendered = match cli.format {
        Format::Json => render_json(&report),
        Format::Text => render_text(&report),
    };
    print!("{rendered}");
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

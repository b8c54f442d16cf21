// SPDX-License-Identifier: Apache-2.0

use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twistlat_verify::commands::{self, InputError};
use twistlat_verify::example43::run_example43;
use twistlat_verify::{parse_spec, Report, SpecDocument};

/// Exact lattice and Hodge computations for twisted abelian and Kummer
/// surfaces.
///
/// Exit status: 0 verified, 1 refuted, 2 inconclusive, 3 input error.
#[derive(Parser, Debug)]
#[command(name = "twistlat", version)]
struct Cli {
    /// Entry bound for isometry searches.
    #[arg(long, global = true, env = "TWISTLAT_BOUND", default_value_t = 3)]
    bound: u32,
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Print only the overall verdict.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical rendering of the lattices in FILE.
    LatticeInfo { file: String, name: Option<String> },
    /// Discriminant forms of the lattices in FILE.
    Disc { file: String, name: Option<String> },
    /// T(X) and NS(X) of a surface.
    Transcendental {
        file: String,
        surface: Option<String>,
    },
    /// T(X,B) in the Mukai lattice and the exp(B) maps.
    Twist {
        file: String,
        surface: Option<String>,
    },
    /// Kernel of the Brauer class of B and its index.
    Kernel {
        file: String,
        surface: Option<String>,
    },
    /// The Kummer side: T_km and the class Theta(B).
    Theta {
        file: String,
        surface: Option<String>,
    },
    /// T-equivalence of two twisted surfaces.
    Tequiv {
        file1: String,
        file2: String,
        #[arg(long)]
        surface1: Option<String>,
        #[arg(long)]
        surface2: Option<String>,
    },
    /// The Picard-number-two family for a given n.
    Example43 {
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
        n: i64,
    },
}

fn load(path: &str) -> Result<SpecDocument, InputError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| InputError::Other(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(Path::new(path))
            .map_err(|e| InputError::Other(format!("{path}: {e}")))?
    };
    parse_spec(&text).map_err(|e| InputError::Other(format!("{path}: {e}")))
}

fn run(cli: &Cli) -> Result<Report, InputError> {
    match &cli.command {
        Command::LatticeInfo { file, name } => {
            commands::lattice_info(&load(file)?, name.as_deref())
        }
        Command::Disc { file, name } => commands::disc(&load(file)?, name.as_deref()),
        Command::Transcendental { file, surface } => {
            commands::transcendental(&load(file)?, surface.as_deref())
        }
        Command::Twist { file, surface } => commands::twist(&load(file)?, surface.as_deref()),
        Command::Kernel { file, surface } => commands::kernel(&load(file)?, surface.as_deref()),
        Command::Theta { file, surface } => {
            commands::theta_report(&load(file)?, surface.as_deref())
        }
        Command::Tequiv {
            file1,
            file2,
            surface1,
            surface2,
        } => commands::t_equiv_report(
            &load(file1)?,
            &load(file2)?,
            (surface1.as_deref(), surface2.as_deref()),
            cli.bound,
        ),
        Command::Example43 { n } => Ok(run_example43(*n, cli.bound)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(3);
        }
    }
    if cli.quiet {
        println!("overall: {}", report.overall);
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.exit_code() as u8)
}

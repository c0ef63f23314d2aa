mod commands;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mdr_core::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(
    name = "mdr",
    version,
    about = "Exact de Rham cohomology, transfers and realizations of curve motives"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bifiltered de Rham cohomology of a curve, P1 with a log divisor, or a product.
    Cohomology {
        file: PathBuf,
        /// Pole-order window; stability at +1 and +2 is always rechecked.
        #[arg(long, default_value_t = mdr_core::derham::DEFAULT_WINDOW)]
        window: usize,
    },
    /// Transfer a differential form along a finite correspondence.
    Transfer { corr: PathBuf, form: PathBuf },
    /// Compose two finite correspondences `a: X -> Y` and `b: Y -> Z`.
    Compose { a: PathBuf, b: PathBuf },
    /// Realize a complex of curve motives.
    Realize {
        motive: PathBuf,
        #[arg(long, default_value_t = mdr_core::derham::DEFAULT_WINDOW)]
        window: usize,
    },
    /// Hom set `X -> Y` in the localization of a finite category at `S`.
    Localize {
        cat: PathBuf,
        /// A JSON file listing arrow names, or a comma-separated list.
        s: String,
        x: String,
        y: String,
    },
    /// Sheaf cohomology on a finite site via the Godement resolution.
    Godement {
        site: PathBuf,
        sheaf: PathBuf,
        #[arg(long, default_value_t = mdr_core::godement::DEFAULT_LEVELS)]
        levels: usize,
    },
    /// Run the built-in invariant checks.
    Selftest {
        #[arg(long)]
        filter: Option<String>,
    },
}

fn exit_code(e: &Error) -> u8 {
    if e.is_internal() {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cohomology { file, window } => commands::cohomology(&file, window, cli.format),
        Command::Transfer { corr, form } => commands::transfer(&corr, &form, cli.format),
        Command::Compose { a, b } => commands::compose(&a, &b, cli.format),
        Command::Realize { motive, window } => commands::realize(&motive, window, cli.format),
        Command::Localize { cat, s, x, y } => commands::localize(&cat, &s, &x, &y, cli.format),
        Command::Godement {
            site,
            sheaf,
            levels,
        } => commands::godement(&site, &sheaf, levels, cli.format),
        Command::Selftest { filter } => {
            let (report, ok) = selftest::run(filter.as_deref(), cli.format);
            print!("{report}");
            return if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            };
        }
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.tag());
            ExitCode::from(exit_code(&e))
        }
    }
}

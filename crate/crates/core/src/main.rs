use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kuroda::cli::{run, Command, RunConfig};
use kuroda::reduction::DEFAULT_BUDGET;

/// Type-check λΠ-modulo files encoding higher-order logic and translate
/// classical proofs into intuitionistic ones.
#[derive(Parser)]
#[command(name = "kuroda", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check files against the HOL base.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Translate a classical file and re-check the result intuitionistically.
    Translate {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the translation instead of writing a file.
        #[arg(long)]
        stdout: bool,
        /// Keep the Prf and all translations unreduced.
        #[arg(long, visible_alias = "raw")]
        no_tidy: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Count proofs, classical proofs, higher-order results and inference rules.
    Stats {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Write the tab-separated counters to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the tab-separated counters instead of the table.
        #[arg(long)]
        stdout: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Check against intuitionistic HOL (without pem).
    #[arg(long)]
    intuitionistic_base: bool,
    /// Do not inject the HOL base.
    #[arg(long)]
    no_base: bool,
    /// Reduction step budget per conversion.
    #[arg(long, default_value_t = DEFAULT_BUDGET as u64, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Reject every rule headed by Prf or all.
    #[arg(long)]
    pedantic: bool,
}

fn config(command: Command, inputs: Vec<PathBuf>, common: Common) -> RunConfig {
    let mut cfg = RunConfig::new(command, inputs);
    cfg.classical = !common.intuitionistic_base;
    cfg.inject_base = !common.no_base;
    cfg.budget = usize::try_from(common.budget).unwrap_or(usize::MAX);
    cfg.pedantic = common.pedantic;
    cfg
}

fn main() -> ExitCode {
    let cfg = match Cli::parse().command {
        Cmd::Check { files, common } => config(Command::Check, files, common),
        Cmd::Translate {
            file,
            output,
            stdout,
            no_tidy,
            common,
        } => {
            let mut cfg = config(Command::Translate, vec![file], common);
            cfg.output = output;
            cfg.to_stdout = stdout;
            cfg.tidy = !no_tidy;
            cfg
        }
        Cmd::Stats {
            files,
            output,
            stdout,
            common,
        } => {
            let mut cfg = config(Command::Stats, files, common);
            cfg.output = output;
            cfg.to_stdout = stdout;
            cfg
        }
    };
    match run(&cfg) {
        Ok(report) => {
            print!("{}", report.output);
            for m in &report.messages {
                eprintln!("{m}");
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

mod commands;
mod load;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "occ", version, about = "Open-closed string-topology cobordisms")]
struct Cli {
    /// emit the report as JSON
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant tuple of every component
    Invariants { file: PathBuf },
    /// Vanishing verdict per component
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// check dimension hypotheses against declared brane dimensions
        #[arg(long)]
        strict_dims: bool,
    },
    /// Sew B onto A along a plan
    Sew {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        /// also compare the evaluation of the result with the composite
        /// under the shadow assignment
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        shadow: ShadowArgs,
    },
    /// Evaluate the induced linear map
    Eval {
        file: PathBuf,
        /// `shadow` (the default) or omitted when --assignment is given
        #[arg(long)]
        model: Option<String>,
        #[arg(long, conflicts_with = "model")]
        assignment: Option<PathBuf>,
        #[command(flatten)]
        shadow: ShadowArgs,
    },
    /// Transfer identities and vanishing facts over exact models
    VerifyTransfers {
        /// built-in model name (case-insensitive, `AxB` for products) or model file
        #[arg(long)]
        model: Option<String>,
        /// point, identity, diagonal, a built-in embedding name or an embedding file
        #[arg(long)]
        embedding: Option<String>,
    },
    /// Exhaustive classifier check, optionally with the shadow family sweep
    Enumerate {
        #[arg(long, default_value_t = 4)]
        bound: u32,
        /// also sweep the enumerated surface family under the shadow assignment
        #[arg(long)]
        family: bool,
        #[command(flatten)]
        family_bounds: FamilyArgs,
        /// disable worker threads
        #[arg(long)]
        sequential: bool,
    },
    /// Canonical key of the labelled homeomorphism type
    Canonical { file: PathBuf },
}

#[derive(Args, Clone, Copy)]
struct ShadowArgs {
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long = "chi-M", default_value_t = 2, allow_negative_numbers = true)]
    chi_m: i64,
}

#[derive(Args, Clone, Copy)]
struct FamilyArgs {
    #[arg(long, default_value_t = 2)]
    genus: u32,
    #[arg(long, default_value_t = 2)]
    windows: u32,
    #[arg(long, default_value_t = 5)]
    circles: usize,
    #[arg(long, default_value_t = 6)]
    arcs: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let body = if cli.json {
                serde_json::to_string_pretty(&report.json).expect("json values serialize") + "\n"
            } else {
                report.text
            };
            let _ = out.write_all(body.as_bytes());
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

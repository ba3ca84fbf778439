use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use mrp_cli::{
    dyadic_instance, parse_named, run_command, serialize_instance, Command, Report, RunOptions,
};
use mrp_core::{PieceCriterion, Rational};

/// Exact-arithmetic analysis of set families and measure decompositions.
///
/// Exit status: 0 when the computation succeeds and any checked property
/// holds, 1 when a property fails (a witness is printed), 2 on input
/// errors.
#[derive(Parser)]
#[command(name = "mrp", version, about, max_term_width = 80)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file; `.json` switches to the structured format
    instance: PathBuf,
    /// Restrict to one named family
    #[arg(long)]
    family: Option<String>,
    /// Restrict to one named decomposition
    #[arg(long)]
    decomposition: Option<String>,
    /// Append decimal approximations to exact rationals
    #[arg(long)]
    decimal: bool,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Exact intersection number with optimality certificates
    Intnum {
        #[command(flatten)]
        common: InstanceArgs,
        /// Also run the multiset oracle up to this size and compare
        #[arg(long)]
        oracle: Option<usize>,
    },
    /// Per-piece intersection numbers of a decomposition
    KelleyCheck {
        #[command(flatten)]
        common: InstanceArgs,
    },
    /// Weighted strictly positive measure from a decomposition
    KelleyBuild {
        #[command(flatten)]
        common: InstanceArgs,
    },
    /// Check every piece against the 1-eps threshold
    ApproxCheck {
        #[command(flatten)]
        common: InstanceArgs,
        /// Threshold parameter in (0, 1), as p/q
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
    },
    /// Nesting, intersection-bound, and splitting conditions
    NonatomicCheck {
        #[command(flatten)]
        common: InstanceArgs,
    },
    /// Deepest-level measure with per-level floor certificates
    NonatomicBuild {
        #[command(flatten)]
        common: InstanceArgs,
    },
    /// Positive subsets of mass below eps for every member
    SmallSubset {
        #[command(flatten)]
        common: InstanceArgs,
        /// Mass bound, as p/q
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
    },
    /// n-linkedness table next to the intersection number
    Linked {
        #[command(flatten)]
        common: InstanceArgs,
        /// Largest subset size to check
        #[arg(long)]
        n: usize,
    },
    /// Minimum pieces with every piece centered, n-linked, or above beta
    MinPieces {
        #[command(flatten)]
        common: InstanceArgs,
        /// Piece criterion: intersection number at least beta, as p/q
        #[arg(long, value_parser = parse_rational, conflicts_with = "n")]
        beta: Option<Rational>,
        /// Piece criterion: n-linked
        #[arg(long)]
        n: Option<usize>,
    },
    /// Write the binary-tree instance of the given depth
    Dyadic {
        /// Output path, or `-` for stdout
        out: PathBuf,
        /// Tree depth; the universe gets 2^depth atoms
        #[arg(long)]
        depth: usize,
    },
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    Rational::from_str(text).map_err(|e| format!("expected a rational like 3/7: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let (common, command) = match cli.command {
        CliCommand::Dyadic { out, depth } => return run_dyadic(&out, depth),
        CliCommand::Intnum { common, oracle } => (common, Command::IntNum { oracle }),
        CliCommand::KelleyCheck { common } => (common, Command::KelleyCheck),
        CliCommand::KelleyBuild { common } => (common, Command::KelleyBuild),
        CliCommand::ApproxCheck { common, eps } => (common, Command::ApproxCheck { eps }),
        CliCommand::NonatomicCheck { common } => (common, Command::NonatomicCheck),
        CliCommand::NonatomicBuild { common } => (common, Command::NonatomicBuild),
        CliCommand::SmallSubset { common, eps } => (common, Command::SmallSubset { eps }),
        CliCommand::Linked { common, n } => (common, Command::Linked { n }),
        CliCommand::MinPieces { common, beta, n } => {
            let criterion = match (beta, n) {
                (Some(beta), None) => PieceCriterion::IntAtLeast(beta),
                (None, Some(n)) => PieceCriterion::NLinked(n),
                (None, None) => PieceCriterion::Centered,
                (Some(_), Some(_)) => unreachable!("clap rejects conflicting flags"),
            };
            (common, Command::MinPieces { criterion })
        }
    };

    let text = match std::fs::read_to_string(&common.instance) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("error: cannot read {}: {err}", common.instance.display());
            return ExitCode::from(2);
        }
    };
    let instance = match parse_named(&common.instance.to_string_lossy(), &text) {
        Ok(instance) => instance,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    let options = RunOptions {
        family: common.family,
        decomposition: common.decomposition,
        decimal: common.decimal,
    };
    match run_command(&instance, &command, &options) {
        Ok(Report { text, ok }) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run_dyadic(out: &PathBuf, depth: usize) -> ExitCode {
    let instance = match dyadic_instance(depth) {
        Ok(instance) => instance,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };
    let text = serialize_instance(&instance);
    if out.as_os_str() == "-" {
        print!("{text}");
        return ExitCode::SUCCESS;
    }
    match std::fs::write(out, text) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: cannot write {}: {err}", out.display());
            ExitCode::from(2)
        }
    }
}

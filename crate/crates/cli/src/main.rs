//! `towertree`: trees of prime factorization towers from the command line.
//!
//! Tree arguments are either a decimal `n` (meaning `t(n)`) or a parenthesis
//! code such as `(()(()))`. Exit status: 0 on success, 2 for unparsable input,
//! 3 for domain errors, 4 for resource or tolerance failures.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use towertree::analytic::Tolerance;
use towertree::asymptotics::ProbeOptions;
use towertree::census::CensusOptions;
use towertree::tree::BirthBudget;
use towertree::{Error, ErrorKind, Tree};

#[derive(Parser, Debug)]
#[command(
    name = "towertree",
    version,
    about = "Rooted trees of prime factorization towers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Truncation target for zeta evaluations (at least 2^-48).
    #[arg(long, default_value_t = 1e-12, value_parser = positive_f64, global = true)]
    tol: f64,

    /// Integers per census segment.
    #[arg(long, default_value_t = towertree::census::DEFAULT_SEGMENT,
          value_parser = clap::value_parser!(u64).range(1..), global = true)]
    segment: u64,

    /// Worker threads for the census.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..4096), global = true)]
    threads: Option<u64>,

    /// Largest birth, in bits, that will be computed exactly.
    #[arg(long, default_value_t = 1_000_000,
          value_parser = clap::value_parser!(u64).range(1..), global = true)]
    birth_bits: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Code, birth, signature and decomposition of a tree.
    Tree { tree: String },
    /// Count of every tree among 1..=X.
    Census { x: u64 },
    /// Number of n <= X with the given tree.
    Count { x: u64, tree: String },
    /// The first COUNT trees in order of birth.
    Seq {
        count: usize,
        /// Scan integers up to this bound.
        #[arg(long, default_value_t = 1_000_000)]
        search_bound: u64,
    },
    /// Tree zeta function at a real point.
    Zeta {
        tree: String,
        sigma: f64,
        #[arg(value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Largest n summed by the direct method.
        #[arg(long, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Main term of the counting function at X.
    Predict { tree: String, x: u64 },
    /// Census counts against the main term.
    Verify {
        tree: String,
        #[arg(required = true)]
        xs: Vec<u64>,
    },
    /// Tree zeta function just right of its abscissa of convergence.
    Probe {
        tree: String,
        #[arg(required = true, allow_negative_numbers = true)]
        epsilons: Vec<f64>,
        /// Smallest epsilon accepted.
        #[arg(long, default_value_t = towertree::asymptotics::DEFAULT_EPSILON_FLOOR,
              value_parser = positive_f64)]
        epsilon_floor: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Partition,
    Both,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

/// A decimal `n` means `t(n)`; anything starting with `(` is a tree code.
fn parse_tree(arg: &str) -> towertree::Result<Tree> {
    let arg = arg.trim();
    if arg.starts_with('(') {
        return arg.parse();
    }
    if let Some(i) = arg.bytes().position(|b| !b.is_ascii_digit()) {
        return Err(Error::Parse {
            position: i,
            message: "expected a decimal integer or a tree code".into(),
        });
    }
    let n: u64 = arg.parse().map_err(|_| Error::Parse {
        position: 0,
        message: format!("`{arg}` is not an integer in 1..2^64"),
    })?;
    towertree::tree_of(n)
}

struct Config {
    format: Format,
    out: Option<PathBuf>,
    tol: Tolerance,
    census: CensusOptions,
    birth: BirthBudget,
}

fn run(cli: Cli) -> towertree::Result<()> {
    let birth = BirthBudget {
        bits: cli.birth_bits,
    };
    let mut tol = Tolerance::new(cli.tol)?;
    tol.birth_budget = birth;
    let cfg = Config {
        format: cli.format,
        out: cli.out,
        tol,
        census: CensusOptions {
            segment: cli.segment,
            threads: cli.threads.map(|t| t as usize),
        },
        birth,
    };
    match cli.command {
        Command::Tree { tree } => report::tree(&cfg, &parse_tree(&tree)?),
        Command::Census { x } => report::census(&cfg, x),
        Command::Count { x, tree } => report::count(&cfg, x, &parse_tree(&tree)?),
        Command::Seq {
            count,
            search_bound,
        } => report::seq(&cfg, count, search_bound),
        Command::Zeta {
            tree,
            sigma,
            method,
            budget,
        } => report::zeta(&cfg, &parse_tree(&tree)?, sigma, method, budget),
        Command::Predict { tree, x } => report::predict(&cfg, &parse_tree(&tree)?, x),
        Command::Verify { tree, xs } => report::verify(&cfg, &parse_tree(&tree)?, &xs),
        Command::Probe {
            tree,
            epsilons,
            epsilon_floor,
        } => {
            let opts = ProbeOptions {
                epsilon_floor,
                tol: cfg.tol,
            };
            report::probe(&cfg, &parse_tree(&tree)?, &epsilons, opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("towertree: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Parse => 2,
                ErrorKind::Domain => 3,
                ErrorKind::Resource => 4,
            })
        }
    }
}

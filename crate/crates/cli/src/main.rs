//! `bigwitt`: JSON front end for the big Witt vector library.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 when two computations that
//! must agree do not.

mod commands;
mod selftest;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use bigwitt::json::SCHEMA_VERSION;

#[derive(Parser, Debug)]
#[command(name = "bigwitt", about = "Big Witt vectors over finite fields and nilpotent test rings", disable_version_flag = true)]
struct Cli {
    /// Print the JSON schema version and exit
    #[arg(long)]
    version: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

/// Coefficient ring: either a full descriptor or an order and nilpotency.
#[derive(Args, Debug, Clone)]
pub struct RingArgs {
    /// Ring descriptor, e.g. '{"p":2,"e":2,"modulus":[1,1,1],"nil":2}'
    #[arg(long, conflicts_with_all = ["q", "nil"])]
    ring: Option<String>,
    /// Field order q; the built-in modulus for q is used
    #[arg(long)]
    q: Option<u64>,
    /// Nilpotency: coefficients live in F_q[ε]/(ε^nil)
    #[arg(long, default_value_t = 1)]
    nil: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Witt addition (series product)
    Add { #[command(flatten)] ring: RingArgs, a: String, b: String },
    /// Additive inverse (series inverse)
    Neg { #[command(flatten)] ring: RingArgs, a: String },
    /// Witt ring multiplication
    Mul { #[command(flatten)] ring: RingArgs, a: String, b: String },
    /// Witt coordinates r_ν with λ = ∏ (1 − r_ν t^ν)
    Coords { #[command(flatten)] ring: RingArgs, a: String },
    /// Series from Witt coordinates
    FromCoords { #[command(flatten)] ring: RingArgs, c: String },
    /// One-variable components along primitive directions
    Decompose { #[command(flatten)] ring: RingArgs, a: String },
    /// Artin–Hasse exponential E(x, t^j) mod t^d
    AhExp {
        #[command(flatten)]
        ring: RingArgs,
        /// Ring element as nested arrays, e.g. '[[1],[0]]'
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1)]
        j: u32,
        #[arg(long)]
        d: u32,
    },
    /// Cartier pairing of a polynomial unit f with g
    Pair {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, group = "route")]
        algebraic: bool,
        #[arg(long, group = "route")]
        geometric: bool,
        #[arg(long, group = "route")]
        both: bool,
        /// Truncation level; defaults to the conductor of f
        #[arg(long)]
        d: Option<u32>,
        f: String,
        g: String,
    },
    /// Structure of Λⁿ(F_q) modulo total degree d
    Pi1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: u32,
        /// Enumerate the group and cross-check the formula
        #[arg(long)]
        oracle: bool,
    },
    /// Kernel of the Lang map on Λⁿ(F_{q^s}) modulo degree d
    LangCensus {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        d: u32,
    },
    /// Seeded property checks
    Selftest {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

/// Failure of a command, mapped to an exit code.
pub enum Failure {
    Input(bigwitt::Error),
    Disagreement(Value),
}

impl From<bigwitt::Error> for Failure {
    fn from(e: bigwitt::Error) -> Self {
        Failure::Input(e)
    }
}

fn run(command: Command) -> Result<Value, Failure> {
    use commands as c;
    match command {
        Command::Add { ring, a, b } => c::add(&ring, &a, &b),
        Command::Neg { ring, a } => c::neg(&ring, &a),
        Command::Mul { ring, a, b } => c::mul(&ring, &a, &b),
        Command::Coords { ring, a } => c::coords(&ring, &a),
        Command::FromCoords { ring, c: coords } => c::from_coords(&ring, &coords),
        Command::Decompose { ring, a } => c::decompose(&ring, &a),
        Command::AhExp { ring, x, j, d } => c::ah_exp(&ring, &x, j, d),
        Command::Pair { ring, algebraic, geometric, both, d, f, g } => {
            let route = match (algebraic, geometric, both) {
                (_, true, false) => c::Route::Geometric,
                (_, false, true) => c::Route::Both,
                _ => c::Route::Algebraic,
            };
            c::pair(&ring, route, d, &f, &g)
        }
        Command::Pi1 { n, q, d, oracle } => c::pi1(n, q, d, oracle),
        Command::LangCensus { n, q, s, d } => c::lang_census(n, q, s, d),
        Command::Selftest { suite, seed, cases } => selftest::run(&suite, seed, cases),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.version {
        println!("{}", json!({ "schema": SCHEMA_VERSION, "version": env!("CARGO_PKG_VERSION") }));
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        let e = bigwitt::Error::InvalidArgument("no subcommand given; see --help".into());
        println!("{}", json!({ "error": { "kind": e.kind(), "detail": e.to_string() } }));
        return ExitCode::from(1);
    };
    match run(command) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(e)) => {
            println!("{}", json!({ "error": { "kind": e.kind(), "detail": e.to_string() } }));
            ExitCode::from(1)
        }
        Err(Failure::Disagreement(v)) => {
            println!("{v}");
            ExitCode::from(2)
        }
    }
}

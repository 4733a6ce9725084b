//! Command-line front end: normal forms, the involution, the module
//! action, Fredholm indices, automorphism recognition and inversion, and
//! the ideal calculus.
//!
//! Exit codes: 0 on success, 1 on a domain error (reported on stderr),
//! 2 on a usage error.

mod docs;
mod parser;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser as ClapParser, Subcommand};

use intdiff_core::aut::recognize;
use intdiff_core::ideal::{enumerate_ideals, invariant_ideals, parse_descriptor, stabilizer};
use intdiff_core::poly::parse_poly;
use intdiff_core::quotient::fredholm_index;
use intdiff_core::selftest;

use docs::{AutDoc, ImagesDoc};
use parser::parse_operator;

#[derive(ClapParser)]
#[command(
    name = "intdiff",
    about = "Exact calculator for polynomial integro-differential operators",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression and print its canonical normal form.
    Normalize {
        /// Number of variables.
        #[arg(short)]
        n: usize,
        expr: String,
    },
    /// Multiply two expressions.
    Mul {
        #[arg(short)]
        n: usize,
        lhs: String,
        rhs: String,
    },
    /// Apply the involution exchanging differentiation and integration.
    Star {
        #[arg(short)]
        n: usize,
        expr: String,
    },
    /// Apply an operator to a divided-power polynomial.
    Apply {
        #[arg(short)]
        n: usize,
        expr: String,
        poly: String,
    },
    /// Fredholm index of a one-variable operator.
    Index { expr: String },
    /// Recognize the canonical form of an automorphism from generator
    /// images.
    Recognize {
        /// JSON file with fields n, d, i, h.
        #[arg(long)]
        images: PathBuf,
    },
    /// Invert an automorphism given in canonical form.
    InvertAut {
        /// JSON file with fields n, perm, lambda, phi, phiInv.
        #[arg(long)]
        aut: PathBuf,
    },
    /// Compose two automorphisms (the second is applied first).
    ComposeAut { first: PathBuf, second: PathBuf },
    /// Ideal lattice operations.
    Ideals {
        #[command(subcommand)]
        cmd: IdealCmd,
    },
    /// Run the acceptance checks.
    Selftest,
}

#[derive(Subcommand)]
enum IdealCmd {
    /// List every ideal (the count is a Dedekind number).
    Enumerate {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Stabilizer of an ideal under slot permutations.
    Stabilizer {
        #[arg(short)]
        n: usize,
        /// Descriptor such as "min{ {1}, {2,3} }", or "0" / "1".
        descriptor: String,
    },
    /// The n + 2 ideals fixed by every automorphism.
    Invariant {
        #[arg(short)]
        n: usize,
    },
}

fn run(cmd: Cmd) -> Result<(), String> {
    match cmd {
        Cmd::Normalize { n, expr } => {
            check_n(n)?;
            let op = parse_operator(&expr, n).map_err(|e| e.to_string())?;
            println!("{op}");
        }
        Cmd::Mul { n, lhs, rhs } => {
            check_n(n)?;
            let a = parse_operator(&lhs, n).map_err(|e| e.to_string())?;
            let b = parse_operator(&rhs, n).map_err(|e| e.to_string())?;
            println!("{}", &a * &b);
        }
        Cmd::Star { n, expr } => {
            check_n(n)?;
            let op = parse_operator(&expr, n).map_err(|e| e.to_string())?;
            println!("{}", op.star());
        }
        Cmd::Apply { n, expr, poly } => {
            check_n(n)?;
            let op = parse_operator(&expr, n).map_err(|e| e.to_string())?;
            let p = parse_poly(&poly, n).map_err(|e| e.to_string())?;
            println!("{}", intdiff_core::poly::apply(&op, &p));
        }
        Cmd::Index { expr } => {
            let op = parse_operator(&expr, 1).map_err(|e| e.to_string())?;
            let index = fredholm_index(&op).map_err(|e| e.to_string())?;
            println!("{index}");
        }
        Cmd::Recognize { images } => {
            let doc: ImagesDoc = read_json(&images)?;
            let images = doc.into_images()?;
            let aut = recognize(&images).map_err(|e| e.to_string())?;
            print_json(&AutDoc::from_automorphism(&aut))?;
        }
        Cmd::InvertAut { aut } => {
            let doc: AutDoc = read_json(&aut)?;
            let aut = doc.into_automorphism()?;
            print_json(&AutDoc::from_automorphism(&aut.invert()))?;
        }
        Cmd::ComposeAut { first, second } => {
            let a: AutDoc = read_json(&first)?;
            let b: AutDoc = read_json(&second)?;
            let composed = a.into_automorphism()?.compose(&b.into_automorphism()?);
            print_json(&AutDoc::from_automorphism(&composed))?;
        }
        Cmd::Ideals { cmd } => run_ideals(cmd)?,
        Cmd::Selftest => {
            let outcomes = selftest::run_all();
            let mut ok = true;
            for o in &outcomes {
                println!(
                    "criterion {:2} ({}): {} — {}",
                    o.id,
                    o.label,
                    if o.pass { "PASS" } else { "FAIL" },
                    o.detail
                );
                ok &= o.pass;
            }
            if !ok {
                return Err("selftest failed".into());
            }
        }
    }
    Ok(())
}

fn run_ideals(cmd: IdealCmd) -> Result<(), String> {
    match cmd {
        IdealCmd::Enumerate { n, count_only } => {
            let ideals = enumerate_ideals(n).map_err(|e| e.to_string())?;
            if count_only {
                println!("{}", ideals.len());
            } else {
                for ideal in ideals {
                    println!("{ideal}");
                }
            }
        }
        IdealCmd::Stabilizer { n, descriptor } => {
            check_n(n)?;
            let ideal = parse_descriptor(&descriptor, n).map_err(|e| e.to_string())?;
            let report = stabilizer(&ideal).map_err(|e| e.to_string())?;
            print!("{report}");
        }
        IdealCmd::Invariant { n } => {
            check_n(n)?;
            for ideal in invariant_ideals(n) {
                println!("{ideal}");
            }
        }
    }
    Ok(())
}

fn check_n(n: usize) -> Result<(), String> {
    if n == 0 {
        Err("n must be at least 1".into())
    } else {
        Ok(())
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    println!("{text}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cyclic_units::arithmetic::{guaranteed_summands, recover_structure, ExtensionDatum, Status};
use cyclic_units::cohomology::yakovlev_diagram;
use cyclic_units::gamma::{mab_lattice, permutation_lattice, GroupParams};
use cyclic_units::primes::{density_report, find_qualifying};
use cyclic_units::Error;

mod documents;
mod selftest;

use documents::{canonical_json, DiagramDocument, ReportDocument};

const EXIT_INPUT: u8 = 2;
const EXIT_PARTIAL: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser)]
#[command(name = "cyclic-units", version, about = "Unit lattices of cyclic p-extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Perm,
    Mab,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Lemma,
    Stability,
    Corollary,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Yakovlev diagram of a library lattice.
    Diagram {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, default_value_t = 0)]
        b: u32,
        /// Subgroup index of the permutation lattice Z_p[Γ/Γ_i].
        #[arg(long, default_value_t = 0)]
        i: u32,
    },
    /// Predict the S-unit structure for an extension datum.
    Predict {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List qualifying primes below a bound.
    Primes {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        bound: u64,
        /// Print the density report instead of the list.
        #[arg(long)]
        density: bool,
    },
    /// Density of qualifying primes among primes ≡ 1 (mod p).
    Density {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        bound: u64,
    },
    /// Run a built-in check suite.
    Selftest {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnsupportedRegime(_) => EXIT_UNSUPPORTED,
            Error::InvariantViolation(_) | Error::InfinitePresentation => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<(), Failure> {
    let text = canonical_json(value).map_err(|e| Failure { code: EXIT_INTERNAL, message: e.to_string() })?;
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| input_error(format!("{}: {e}", path.display()))),
        None => {
            // a closed pipe on stdout is not an error for a filter-style tool
            let _ = writeln!(io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Diagram { p, n, kind, a, b, i } => {
            let params = GroupParams::new(p, n)?;
            let lattice = match kind {
                Kind::Perm => permutation_lattice(params, i)?,
                Kind::Mab => mab_lattice(params, a, b)?,
            };
            let d = yakovlev_diagram(&lattice)?;
            let label = match kind {
                Kind::Perm => format!("perm({i})"),
                Kind::Mab => format!("M({a},{b})"),
            };
            emit(&DiagramDocument::new(label, lattice.rank(), &d), None)?;
            Ok(0)
        }
        Command::Predict { input, out } => {
            let text = fs::read_to_string(&input).map_err(|e| input_error(format!("{}: {e}", input.display())))?;
            let datum: ExtensionDatum =
                serde_json::from_str(&text).map_err(|e| input_error(format!("invalid datum: {e}")))?;
            datum.validate()?;
            let report = recover_structure(&datum)?;
            let guaranteed = guaranteed_summands(&datum)?;
            let status = report.status;
            emit(&ReportDocument::new(datum, report, guaranteed), out.as_ref())?;
            Ok(if status == Status::Resolved { 0 } else { EXIT_PARTIAL })
        }
        Command::Primes { p, bound, density } => {
            if density {
                emit(&density_report(p, bound)?, None)?;
            } else {
                let mut stdout = io::stdout().lock();
                for q in find_qualifying(p, bound)?.qualifying {
                    if writeln!(stdout, "{q}").is_err() {
                        break;
                    }
                }
            }
            Ok(0)
        }
        Command::Density { p, bound } => {
            emit(&density_report(p, bound)?, None)?;
            Ok(0)
        }
        Command::Selftest { suite, seed } => {
            let suites: &[Suite] = match suite {
                Suite::All => &[Suite::Lemma, Suite::Stability, Suite::Corollary],
                Suite::Lemma => &[Suite::Lemma],
                Suite::Stability => &[Suite::Stability],
                Suite::Corollary => &[Suite::Corollary],
            };
            let mut checks = Vec::new();
            for s in suites {
                checks.extend(match s {
                    Suite::Lemma => selftest::lemma(),
                    Suite::Stability => selftest::stability(seed),
                    Suite::Corollary => selftest::corollary(),
                    Suite::All => unreachable!(),
                });
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            checks.sort_by(|x, y| x.name.cmp(&y.name));
            for c in &checks {
                println!("{:<4}  {:<44} {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
            }
            println!("{} checks, {failed} failed", checks.len());
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

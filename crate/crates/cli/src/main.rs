//! `bowling`: compute bowling-ball braid matrices and run the relation checks.
//!
//! Exit codes: 0 success / all checks pass, 1 some check failed, 2 usage error.

mod suite;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bowling::cabled::{rho_cabled_matrix, FallDistribution};
use bowling::multiball::rho_matrix;
use bowling::qpoly::{parse_scalar, QScalar};
use bowling::{BraidWord, StateSpace, TransitionMatrix};
use clap::{Parser, Subcommand, ValueEnum};

use suite::{Suite, SuiteParams};

/// Largest state space the CLI will build.
pub const MAX_DIM: usize = 4096;

#[derive(Parser, Debug)]
#[command(
    name = "bowling",
    version,
    about = "Bowling-ball representations of positive braids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Matrix of the multi-ball representation for a braid word.
    Rho {
        /// Whitespace-separated generator indices, e.g. "1 2 1".
        word: String,
        #[arg(long)]
        n: usize,
        /// Maximum number of balls per lane.
        #[arg(long = "max-balls")]
        max_balls: u32,
        /// Substitute a rational value ("p/q" or an integer) for q.
        #[arg(long = "eval-q", allow_negative_numbers = true)]
        eval_q: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Matrix of the cabled representation for a braid word.
    Cabled {
        word: String,
        #[arg(long)]
        n: usize,
        /// Number of parallel lanes per strand.
        #[arg(long)]
        cable: u32,
        #[arg(long = "eval-q", allow_negative_numbers = true)]
        eval_q: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Distribution of the number of balls falling at one cabled crossing.
    Fall {
        #[arg(long)]
        cable: u32,
        /// Balls entering the over group.
        #[arg(long)]
        a: u32,
        /// Balls entering the under group.
        #[arg(long)]
        b: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Verify the representation identities.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long = "max-balls", default_value_t = 2)]
        max_balls: u32,
        #[arg(long, default_value_t = 2)]
        cable: u32,
        /// Window start for the Specht check; all admissible windows if omitted.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Corrupt one generator matrix in the Hecke check (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// Reasons a command can end.
enum Failure {
    Usage(String),
    ChecksFailed(String),
}

impl From<bowling::Error> for Failure {
    fn from(e: bowling::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed(output)) => {
            print!("{output}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

pub(crate) fn check_dim(strands: usize, capacity: u32) -> Result<(), Failure> {
    let space = StateSpace::new(strands, capacity)?;
    match space.checked_dim() {
        Some(dim) if dim <= MAX_DIM => Ok(()),
        _ => Err(Failure::Usage(format!(
            "state space ({} + 1)^{strands} exceeds the limit of {MAX_DIM} states",
            capacity
        ))),
    }
}

fn parse_q(text: Option<&str>) -> Result<Option<QScalar>, Failure> {
    text.map(parse_scalar).transpose().map_err(Failure::from)
}

fn render_matrix(m: &TransitionMatrix, q: Option<&QScalar>, format: Format) -> String {
    match format {
        Format::Json => {
            let v = match q {
                Some(x) => m.eval_json(x),
                None => m.to_json(),
            };
            format!("{v}\n")
        }
        Format::Pretty => m.pretty(q),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Rho {
            word,
            n,
            max_balls,
            eval_q,
            out,
            format,
        } => {
            let word = BraidWord::parse(&word, n)?;
            check_dim(n, max_balls)?;
            let q = parse_q(eval_q.as_deref())?;
            let m = rho_matrix(&word, max_balls)?;
            emit(&render_matrix(&m, q.as_ref(), format), out.as_ref())
        }
        Command::Cabled {
            word,
            n,
            cable,
            eval_q,
            out,
            format,
        } => {
            let word = BraidWord::parse(&word, n)?;
            check_dim(n, cable)?;
            let q = parse_q(eval_q.as_deref())?;
            let m = rho_cabled_matrix(&word, cable)?;
            emit(&render_matrix(&m, q.as_ref(), format), out.as_ref())
        }
        Command::Fall {
            cable,
            a,
            b,
            out,
            format,
        } => {
            let d = FallDistribution::from_formula(cable, a, b)?;
            let text = match format {
                Format::Json => format!("{}\n", d.to_json()),
                Format::Pretty => d.pretty(),
            };
            emit(&text, out.as_ref())
        }
        Command::Check {
            suite,
            n,
            max_balls,
            cable,
            k,
            format,
            out,
            inject_fault,
        } => {
            let params = SuiteParams {
                strands: n,
                capacity: max_balls,
                cable,
                window: k,
                inject_fault,
            };
            let outcome = suite::run(suite, &params)?;
            let text = match format {
                Format::Json => format!("{}\n", outcome.to_json()),
                Format::Pretty => outcome.pretty(),
            };
            if outcome.passed() {
                emit(&text, out.as_ref())
            } else if let Some(path) = out.as_ref() {
                emit(&text, Some(path))?;
                Err(Failure::ChecksFailed(String::new()))
            } else {
                Err(Failure::ChecksFailed(text))
            }
        }
    }
}

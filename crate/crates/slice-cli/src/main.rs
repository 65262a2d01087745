//! `slice`: describe a single-cycle class of `SL(l+1)`, print its invariant
//! generators, or run the verification suites.

/// `writeln!` into a `String` buffer.
macro_rules! outln {
    ($buf:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        writeln!($buf, $($arg)*).expect("writing to a String");
    }};
}

mod describe;
mod invariants;
mod verify;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "slice", version, about = "Transverse slices to single-cycle Weyl group elements in SL(l+1)")]
struct Cli {
    /// Print intermediate matrices (s, symbolic z').
    #[arg(long, global = true)]
    dump_matrices: bool,
    /// Print the rewriting engine's stage-by-stage words.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class data, layers and root classes.
    Describe(PointArgs),
    /// The generators C_κ, κ ∈ Δ_s.
    Invariants(InvariantArgs),
    /// Run a check suite and report verdicts.
    Verify(verify::VerifyArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct PointArgs {
    #[arg(long)]
    l: usize,
    #[arg(long)]
    lprime: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct InvariantArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Which reading of the closed form to expand.
    #[arg(long, value_enum, default_value_t = invariants::Formula::PerRound)]
    formula: invariants::Formula,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy)]
pub struct DebugFlags {
    pub dump_matrices: bool,
    pub trace: bool,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification,
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

/// Writes the buffered output. A closed pipe is not an error.
pub fn emit(out: &str) -> Result<(), Failure> {
    match io::stdout().lock().write_all(out.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Runtime(e.into())),
        _ => Ok(()),
    }
}

pub fn check_point(l: usize, lprime: usize) -> Result<(), Failure> {
    if l == 0 {
        return Err(Failure::Usage("--l must be at least 1".into()));
    }
    if lprime == 0 || lprime > l {
        return Err(Failure::Usage(format!("--lprime must lie in 1..={l}, got {lprime}")));
    }
    if l > u16::MAX as usize - 2 {
        return Err(Failure::Usage(format!("--l {l} is too large")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let dbg = DebugFlags { dump_matrices: cli.dump_matrices, trace: cli.trace };
    match cli.command {
        Command::Describe(p) => {
            check_point(p.l, p.lprime)?;
            describe::run(p, dbg)
        }
        Command::Invariants(a) => {
            check_point(a.point.l, a.point.lprime)?;
            invariants::run(a, dbg)
        }
        Command::Verify(a) => verify::run(a, dbg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

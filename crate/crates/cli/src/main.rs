mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nilsep::counting::DEFAULT_BUDGET;
use nilsep::invariants::SetKind;

/// Orbits of GL2 on tuples of nilpotent 2x2 matrices, orbit counts, and
/// separating invariants.
#[derive(Parser, Debug)]
#[command(name = "nilsep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Field: `q=4`, `q=3^2`, `q=2^3;poly=1,0,1,1` or `rational`.
    #[arg(long)]
    pub field: String,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    #[value(name = "S")]
    S,
    #[value(name = "S2")]
    S2,
    #[value(name = "H")]
    H,
    #[value(name = "H2")]
    H2,
}

impl From<SetArg> for SetKind {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::S => SetKind::S,
            SetArg::S2 => SetKind::S2,
            SetArg::H => SetKind::H,
            SetArg::H2 => SetKind::H2,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Formula,
    Representatives,
    BruteForce,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List one canonical form per orbit.
    Orbits {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: usize,
    },
    /// Count orbits, optionally cross-checking methods.
    Count {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Check::Formula)]
        check: Check,
        /// Cap on matrix operations for brute force.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Check that a set separates all orbits, and whether it is minimal.
    VerifySeparating {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        set: SetArg,
    },
    /// Find, for each member of a set, two orbits only it separates, and
    /// replay the fixed witness pairs.
    VerifyMinimal {
        #[command(flatten)]
        common: Common,
        /// Required for finite fields.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum)]
        set: SetArg,
    },
    /// Build the gamma-element separating set from orbit indicators.
    BuildH {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: usize,
        /// Also expand every h_i as a reduced polynomial.
        #[arg(long)]
        polys: bool,
    },
    /// Brute-force orbit counts for n x n matrices over several fields.
    ConjectureScan {
        /// Repeat for several fields.
        #[arg(long = "field", required = true)]
        fields: Vec<String>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonicalize a tuple and evaluate a set on it.
    Eval {
        #[command(flatten)]
        common: Common,
        /// JSON array of matrices, each `[a11, a12, a21, a22]`.
        #[arg(long)]
        tuple: String,
        #[arg(long, value_enum)]
        set: Option<SetArg>,
    },
}

/// Result of a command that completed without a usage error.
pub enum Verdict {
    Verified,
    Violated,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Orbits { common, m } => commands::orbits(&common, m),
        Command::Count { common, m, n, check, budget } => commands::count(&common, m, n, check, budget),
        Command::VerifySeparating { common, m, set } => commands::verify_separating(&common, m, set.into()),
        Command::VerifyMinimal { common, m, set } => commands::verify_minimal(&common, m, set.into()),
        Command::BuildH { common, m, polys } => commands::build_h(&common, m, polys),
        Command::ConjectureScan { fields, n, m, budget, format, out } => {
            commands::conjecture_scan(&fields, n, m, budget, format, out.as_deref())
        }
        Command::Eval { common, tuple, set } => commands::eval(&common, &tuple, set.map(Into::into)),
    };
    match result {
        Ok(Verdict::Verified) => ExitCode::SUCCESS,
        Ok(Verdict::Violated) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

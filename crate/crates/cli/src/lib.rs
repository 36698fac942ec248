//! `apxalg`: command-line checks for rings with algebra-compatible closures.
//!
//! Exit status is 0 on success, 1 when a checked property fails, 2 on usage,
//! parse or precondition errors and 3 when a resource guard trips.

use std::ffi::OsString;
use std::path::PathBuf;

use approx_algebra::closure::axioms::DEFAULT_SEED;
use approx_algebra::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
pub mod report;
pub mod scenario;

pub use report::Report;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "apxalg",
    version,
    about = "Approximate ideals, spectra, localization and modules"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,
    /// Check mode for axiom suites.
    #[arg(long, global = true, value_enum, default_value = "auto")]
    pub mode: ModeArg,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Samples drawn in sampled mode.
    #[arg(long, global = true, default_value_t = approx_algebra::closure::axioms::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Enumeration bound for generators on Z.
    #[arg(long, global = true)]
    pub bound: Option<u64>,
    /// Largest finite ring enumerated.
    #[arg(long, global = true, default_value_t = 4096)]
    pub guard: usize,
    /// Reading of A + B in the additivity axiom.
    #[arg(long, global = true, value_enum, default_value = "span")]
    pub sum: SumArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exhaustive,
    Subgroups,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SumArg {
    Span,
    Minkowski,
}

#[derive(Debug, Clone, Args)]
pub struct RingArgs {
    #[arg(long)]
    pub ring: String,
    #[arg(long, default_value = "gen")]
    pub closure: String,
}

#[derive(Debug, Clone, Args)]
pub struct IdealArgs {
    #[command(flatten)]
    pub rc: RingArgs,
    /// Generators, comma separated.
    #[arg(long)]
    pub ideal: String,
}

#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub rc: RingArgs,
    /// Give twice, once per factor.
    #[arg(long, required = true)]
    pub ideal: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct LocArgs {
    #[command(flatten)]
    pub rc: RingArgs,
    /// Generators of the multiplicative set.
    #[arg(long = "mult-set")]
    pub mult_set: String,
}

#[derive(Debug, Clone, Args)]
pub struct RadArgs {
    #[command(flatten)]
    pub rc: RingArgs,
    /// Defaults to the zero ideal.
    #[arg(long)]
    pub ideal: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModCheck {
    Axioms,
    Submodule,
    Quotient,
    Kernel,
    Iso1,
    Iso2,
    Iso3,
    Family,
}

#[derive(Debug, Clone, Args)]
pub struct ModArgs {
    /// Group such as Z/12 or Z/2xZ/4.
    #[arg(long)]
    pub module: Option<String>,
    #[arg(long, default_value = "Z")]
    pub scalars: String,
    #[arg(long, default_value = "gen")]
    pub closure: String,
    /// Closure on the target of --map, when it differs.
    #[arg(long)]
    pub target_closure: Option<String>,
    #[arg(long, value_enum, default_value = "axioms")]
    pub check: ModCheck,
    /// Submodule generators; give N then K.
    #[arg(long)]
    pub sub: Vec<String>,
    /// mul:k, zero, gens:[..] or table:[..].
    #[arg(long)]
    pub map: Option<String>,
    /// TOML file with [[instance]] entries.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct NullArgs {
    #[arg(long)]
    pub ring: String,
    #[arg(long, default_value = "pointwise")]
    pub closure: String,
    /// Ideal generators; repeat for several ideals. Defaults to every ideal.
    #[arg(long)]
    pub ideal: Vec<String>,
    /// Also run the tolerance balanced-rule grid.
    #[arg(long)]
    pub grid: bool,
    /// Also check the Galois connection between ideals and point sets.
    #[arg(long)]
    pub galois: bool,
    /// Search closures with ESEP but without PP.
    #[arg(long)]
    pub search: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Scenario file (TOML).
    pub path: Option<PathBuf>,
    /// A bundled suite instead of a file.
    #[arg(long)]
    pub suite: Option<String>,
    /// Run only scenarios whose name contains this.
    #[arg(long)]
    pub only: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct MemberArgs {
    #[command(flatten)]
    pub rc: RingArgs,
    #[arg(long)]
    pub elem: String,
    /// Elements of A, comma separated.
    #[arg(long)]
    pub set: String,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Cmd {
    /// Closure axioms C1-C4b and absorption.
    Axioms(RingArgs),
    /// The approximate spectrum.
    Spec(RingArgs),
    /// Primes in V(I).
    Vset(IdealArgs),
    /// Primes in D(I), the complement of V(I).
    Dset(IdealArgs),
    /// Whether an ideal is approximately prime.
    IsPrime(IdealArgs),
    /// The approximate product of two ideals.
    Product(PairArgs),
    /// The quotient R/I.
    Quotient(IdealArgs),
    /// Closed-set laws and separation of the spectrum.
    Topology(RingArgs),
    /// Localization with the transferred closure.
    Localize(LocArgs),
    /// The approximate radical.
    Radical(RadArgs),
    /// Module closures and the isomorphism theorems.
    Modules(ModArgs),
    /// The Nullstellensatz schema on function rings.
    Nullstellensatz(NullArgs),
    /// Run a scenario suite.
    Scenario(ScenarioArgs),
    /// Membership x in cl(A).
    #[command(hide = true)]
    Member(MemberArgs),
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit { .. } => 3,
        _ => 2,
    }
}

/// Parses and executes one command line, including the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let shown = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: shown,
                }
            } else {
                Output {
                    code: 0,
                    stdout: shown,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => Output {
            code: if report.all_pass() { 0 } else { 1 },
            stdout: report.render(cli.format),
            stderr: String::new(),
        },
        Err(e) => Output {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub fn execute(cli: &Cli) -> approx_algebra::Result<Report> {
    commands::dispatch(cli)
}

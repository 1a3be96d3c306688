use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rmatrix::ybe::{Identity, SignConvention};
use rmatrix::{Backend, Kind, Variant};

#[derive(Parser, Debug)]
#[command(name = "rmatrix", version, about = "Graded trigonometric and quantum R matrices of U_q[gl(m|1)]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the tensor of a table at a parameter point (or the table itself with --format rmt).
    Emit(EmitArgs),
    /// Check a Yang–Baxter identity at seeded random points.
    Verify(VerifyArgs),
    /// Recover the projectors and check their structure.
    Projectors(ProjectorArgs),
    /// Distance between the trigonometric matrix at large u and the quantum matrix.
    Limits(LimitArgs),
    /// Time one TYBE evaluation per level.
    Bench(BenchArgs),
    /// Counts, duplicates, grading conservation and helper coverage of the tables.
    ValidateTables(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Trig,
    Quantum,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Trig => Kind::Trig,
            KindArg::Quantum => Kind::Quantum,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Literal,
    Corrected,
    /// Every variant that exists (verify, validate-tables).
    All,
}

impl VariantArg {
    pub fn variants(self) -> Vec<Variant> {
        match self {
            VariantArg::Literal => vec![Variant::Literal],
            VariantArg::Corrected => vec![Variant::Corrected],
            VariantArg::All => vec![Variant::Literal, Variant::Corrected],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Binary64,
    HighPrecision,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Binary64 => Backend::Binary64,
            BackendArg::HighPrecision => Backend::HighPrecision,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Rmt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdentityArg {
    Gybe,
    Tybe,
    Qybe,
    Alt,
}

impl From<IdentityArg> for Identity {
    fn from(i: IdentityArg) -> Identity {
        match i {
            IdentityArg::Gybe => Identity::Gybe,
            IdentityArg::Tybe => Identity::Tybe,
            IdentityArg::Qybe => Identity::Qybe,
            IdentityArg::Alt => Identity::Alt,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignsArg {
    /// Strip sign on every factor.
    Strip,
    /// The two four-term parity exponents.
    Printed,
}

impl From<SignsArg> for SignConvention {
    fn from(s: SignsArg) -> SignConvention {
        match s {
            SignsArg::Strip => SignConvention::StripPerFactor,
            SignsArg::Printed => SignConvention::AsPrinted,
        }
    }
}

/// Output options shared by every command.
#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "binary64")]
    pub backend: BackendArg,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    #[arg(long, default_value_t = 1.3, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, default_value_t = 0.7, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.37, allow_negative_numbers = true)]
    pub u: f64,
}

#[derive(Args, Debug)]
pub struct EmitArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub m: u8,
    #[arg(long, value_enum, default_value = "trig")]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value = "corrected")]
    pub variant: VariantArg,
    /// Keep the graded signs (default).
    #[arg(long, conflicts_with = "ungraded")]
    pub graded: bool,
    /// Negate boldface entries (the ungraded form).
    #[arg(long)]
    pub ungraded: bool,
    #[command(flatten)]
    pub point: PointArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "tybe")]
    pub identity: IdentityArg,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub m: u8,
    /// Defaults to quantum for qybe and trig otherwise.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long, value_enum, default_value = "corrected")]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Pass threshold on the relative residual.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Parity factors for gybe.
    #[arg(long, value_enum, default_value = "strip")]
    pub signs: SignsArg,
    /// Fixed point instead of random sampling (all four of --q --alpha --u --v).
    #[arg(long, allow_negative_numbers = true, requires_all = ["alpha", "u", "v"])]
    pub q: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "q")]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "q")]
    pub u: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "q")]
    pub v: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ProjectorArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub m: u8,
    #[arg(long, value_enum, default_value = "trig")]
    pub kind: KindArg,
    #[arg(long, value_enum, default_value = "corrected")]
    pub variant: VariantArg,
    #[command(flatten)]
    pub point: PointArgs,
    /// Second spectral parameter for the u-independence check (default u + 0.53).
    #[arg(long, allow_negative_numbers = true)]
    pub u1: Option<f64>,
    /// Threshold for axiom, eigenvalue and reconstruction residuals.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    /// Level; all four when omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub m: Option<u8>,
    #[arg(long, value_enum, default_value = "corrected")]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 1.3)]
    pub q: f64,
    #[arg(long, default_value_t = 0.7, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Bound on the relative deviation at u = 40.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Level; all four when omitted.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub m: Option<u8>,
    #[arg(long, value_enum, default_value = "corrected")]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub m: Option<u8>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long, value_enum, default_value = "corrected")]
    pub variant: VariantArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

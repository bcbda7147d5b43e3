use clap::{Args, Parser, Subcommand, ValueEnum};

use blochapprox::verify::Suite;

#[derive(Debug, Parser)]
#[command(
    name = "blochapprox",
    version,
    about = "Optimal convex approximation of qubit states by eigenstates of real logic gates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form approximation with an oracle cross-check.
    Approx(ProblemArgs),
    /// Exact projection onto the convex hull of the basis.
    Oracle(ProblemArgs),
    /// Decomposability over the eigenstates of three gates.
    Decompose(ProblemArgs),
    /// Spin variances and the triple uncertainty relations.
    Uncertainty(ProblemArgs),
    /// Seeded analytic-versus-oracle property suites.
    Verify(VerifyArgs),
    /// Grid sweep over two parameters.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetKind {
    /// Eigenstates of Z and U_{2 theta}.
    Sprime,
    /// Eigenstates of U_{2 vartheta} and the sigma_y pair.
    Sdoubleprime,
    /// Eigenstates of Z, U_{2 theta} and the sigma_y pair.
    Striple,
    /// Eigenstates of U_alpha and U_beta.
    S1,
    /// Eigenstates of U_beta and the sigma_y pair.
    S2,
    /// Eigenstates of U_alpha and the sigma_y pair.
    S3,
    /// Eigenstates of U_alpha, U_beta and the sigma_y pair.
    Three,
    /// S'(theta) and S''(vartheta) together (sweeps only).
    Pair,
}

impl SetKind {
    pub fn name(self) -> &'static str {
        match self {
            SetKind::Sprime => "sprime",
            SetKind::Sdoubleprime => "sdoubleprime",
            SetKind::Striple => "striple",
            SetKind::S1 => "s1",
            SetKind::S2 => "s2",
            SetKind::S3 => "s3",
            SetKind::Three => "three",
            SetKind::Pair => "pair",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, Args)]
pub struct StateArgs {
    /// Population of |1>, in [0, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Coherence factor, in [0, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    /// Coherence phase.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
}

#[derive(Clone, Debug, Args)]
pub struct AngleArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub vartheta: Option<f64>,
    /// Basis set; inferred from the given angles when omitted.
    #[arg(long, value_enum)]
    pub set: Option<SetKind>,
    /// Read every angle (phi included) in degrees.
    #[arg(long)]
    pub deg: bool,
    /// Route inputs outside the canonical region to the oracle.
    #[arg(long)]
    pub oracle_fallback: bool,
}

#[derive(Clone, Debug, Args)]
pub struct ProblemArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub angles: AngleArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub out: OutputFormat,
    /// Grid size for angle scans (validity ranges, decomposability scan).
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value = "oracle")]
    pub suite: Suite,
    /// Angle grid of the decompose suite.
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub out: OutputFormat,
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub angles: AngleArgs,
    /// First (outer) axis: NAME or NAME:MIN:MAX with NAME among a, k, phi, theta, vartheta.
    #[arg(long)]
    pub axis1: String,
    /// Second (inner) axis.
    #[arg(long)]
    pub axis2: String,
    /// Points per axis.
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: OutputFormat,
}

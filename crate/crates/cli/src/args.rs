use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "coconvex", version, about = "Moduli of smoothness, (co)convex approximation and separation checks")]
pub struct Cli {
    /// Print only the verdict line.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// How floats are written in the report.
    #[arg(long, global = true, value_enum, default_value_t = FloatFormat::Shortest)]
    pub float_format: FloatFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FloatFormat {
    /// Shortest representation that reads back to the same value.
    Shortest,
    /// Seventeen significant digits in scientific notation.
    Fixed17,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a polynomial or piecewise function at a point.
    Eval(EvalArgs),
    /// Real roots of a polynomial on a domain.
    Roots(InputArgs),
    /// Inflection points of a polynomial on a domain.
    Inflect(InputArgs),
    /// Subintervals of the domain mapped into a target interval.
    Preimage(PreimageArgs),
    /// Weighted Ditzian–Totik modulus of smoothness.
    Modulus(ModulusArgs),
    /// Sampled secant convexity test.
    Convexity(ConvexityArgs),
    /// Membership in the coconvexity class of a partition.
    Delta2(Delta2Args),
    /// Best uniform (co)convex polynomial approximation on a grid.
    Approx(ApproxArgs),
    /// Jackson constant of a polynomial approximant.
    Jackson(JacksonArgs),
    /// Domain-of-convex-polynomial check.
    CheckDcp(DcpArgs),
    /// Domain-of-coconvex-polynomial check.
    CheckDccp(DccpArgs),
    /// Supporting, strictly separating or strong hyperplane predicates.
    Separate(SeparateArgs),
    /// Re-run a built-in worked example.
    Replicate(ReplicateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct InputArgs {
    /// Polynomial expression in x.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Piecewise function file.
    #[arg(long = "fn", value_name = "FILE")]
    pub fn_file: Option<PathBuf>,
    /// Key-value configuration file.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Interval such as "[-3, 3]".
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PreimageArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Target interval of values.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Standard,
    Replication,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModulusFlags {
    /// Order of the difference.
    #[arg(long)]
    pub k: Option<u32>,
    /// Power of the weight.
    #[arg(long)]
    pub r: Option<u32>,
    /// Largest step.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Fixed step for replication mode.
    #[arg(long)]
    pub h: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ModulusArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub modulus: ModulusFlags,
}

#[derive(Debug, Args)]
pub struct ConvexityArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Number of sampled pairs.
    #[arg(long)]
    pub pairs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Delta2Args {
    #[command(flatten)]
    pub input: InputArgs,
    /// Comma-separated interior points, e.g. "-2,-1,1,2".
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Sampled pairs per subinterval (piecewise input).
    #[arg(long)]
    pub pairs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Polynomials of degree below n.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Grid size.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Double the grid until the error settles.
    #[arg(long)]
    pub refine: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct JacksonFlags {
    #[command(flatten)]
    pub modulus: ModulusFlags,
    /// File with the second derivative of the target.
    #[arg(long, value_name = "FILE")]
    pub f2: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Measure the deviation at this point instead of over the domain.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Use this difference value instead of computing the modulus.
    #[arg(long)]
    pub quoted_delta: Option<f64>,
    /// Test the bound with this constant.
    #[arg(long)]
    pub claimed_c: Option<f64>,
}

#[derive(Debug, Args)]
pub struct JacksonArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub jackson: JacksonFlags,
}

#[derive(Debug, Args)]
pub struct DcpArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub jackson: JacksonFlags,
    /// Point outside the domain; searched for when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub witness: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DccpArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub jackson: JacksonFlags,
    /// Declared inflection points.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["strict", "strong", "support"])))]
pub struct SeparateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// sup of p over the domain < b < p(x).
    #[arg(long)]
    pub strict: bool,
    /// inf of p over the domain > sup of q over the second domain.
    #[arg(long)]
    pub strong: bool,
    /// p ≥ alpha over the domain.
    #[arg(long)]
    pub support: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Second polynomial.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub domain2: Option<String>,
    /// Weight on [0, 1], written as an expression in x.
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<String>,
    /// Weight argument: a value in [0, 1] or "all".
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ReplicateArgs {
    /// example1 or example2.
    pub example: String,
}

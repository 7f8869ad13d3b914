use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ansatzkit",
    version,
    about = "Guess, convert and combine recurrences for integer sequences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Download an OEIS b-file (cached) and print it.
    Fetch(FetchArgs),
    /// Fit a recurrence or polynomial to sequence terms.
    Guess(GuessArgs),
    /// Generating function or differential equation of a recurrence.
    Genfun(GenfunArgs),
    /// Closed form of a polynomial or C-finite sequence.
    Closedform(RecurrenceArgs),
    /// Recurrence for a sum, product, partial sum or subsequence.
    Closure(ClosureArgs),
    /// Formal asymptotic expansions of a holonomic recurrence.
    Asymptotics(AsymptoticsArgs),
    /// Prove or refute an identity among C-finite sequences.
    Prove(ProveArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Poly,
    Cfinite,
    Holonomic,
    C2,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Add,
    Termwise,
    Cauchy,
    PartialSum,
    Subsequence,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, value_enum)]
    pub class: Option<Class>,
    #[arg(long, default_value_t = 6)]
    pub max_order: usize,
    #[arg(long, default_value_t = 3)]
    pub max_degree: usize,
    /// Terms held out to check each fitted shape.
    #[arg(long, default_value_t = 5)]
    pub margin: usize,
    /// Write a machine-readable result to this path.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Named coefficient sequence, `NAME=cfinite:OPERATOR;INITIALS` or
    /// `NAME=exppoly:EXPRESSION`.
    #[arg(long, value_name = "NAME=SPEC")]
    pub coeff: Vec<String>,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SeqInput {
    /// OEIS id such as A000045.
    #[arg(long)]
    pub oeis: Option<String>,
    /// Comma-separated terms starting at index 0.
    #[arg(long)]
    pub terms: Option<String>,
    /// b-file, or a JSON document written by `--json`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[group(id = "input", required = true, multiple = false)]
pub struct RecInput {
    /// OEIS id; a recurrence is guessed from its terms.
    #[arg(long)]
    pub oeis: Option<String>,
    /// Comma-separated terms from index 0; a recurrence is guessed.
    #[arg(long)]
    pub terms: Option<String>,
    /// b-file, sequence JSON or recurrence JSON.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Operator text such as `N^2 - N - 1` or `(4*n+2) - (n+2)*N`.
    #[arg(long)]
    pub op: Option<String>,
}

#[derive(Args, Debug)]
pub struct FetchArgs {
    /// OEIS id such as A000045.
    #[arg(long)]
    pub oeis: String,
    /// Also write the terms as sequence JSON.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GuessArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub input: SeqInput,
}

#[derive(Args, Debug)]
pub struct RecurrenceArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub input: RecInput,
    /// Initial values for `--op`, from index 0.
    #[arg(long, requires = "op")]
    pub initials: Option<String>,
}

#[derive(Args, Debug)]
pub struct GenfunArgs {
    #[command(flatten)]
    pub rec: RecurrenceArgs,
    /// Clear the inhomogeneous part of the differential equation.
    #[arg(long)]
    pub homogenize: bool,
}

#[derive(Args, Debug)]
pub struct ClosureArgs {
    #[command(flatten)]
    pub rec: RecurrenceArgs,
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Step of `subsequence`.
    #[arg(long, default_value_t = 2)]
    pub step: u64,
    /// Second operand for `add`, `termwise` and `cauchy`.
    #[arg(long, requires = "initials2")]
    pub op2: Option<String>,
    /// Initial values for `--op2`, from index 0.
    #[arg(long, requires = "op2")]
    pub initials2: Option<String>,
}

#[derive(Args, Debug)]
pub struct AsymptoticsArgs {
    #[command(flatten)]
    pub rec: RecurrenceArgs,
    /// Number of correction terms.
    #[arg(long, default_value_t = 3)]
    pub refine: usize,
}

#[derive(Args, Debug)]
pub struct ProveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Sum of monomials in shifted values, such as `a(n+1)^2 - a(n)*a(n+2)`.
    #[arg(long)]
    pub claim: String,
    /// Constant-coefficient operator applied to the claim.
    #[arg(long)]
    pub outer: Option<String>,
    /// First index at which the claim is asserted.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub from: i64,
    /// Show how the order bound was assembled.
    #[arg(long)]
    pub bound_report: bool,
}

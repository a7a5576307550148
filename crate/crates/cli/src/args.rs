use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use storagecode::code::DEFAULT_MAX_K;

#[derive(Debug, Parser)]
#[command(name = "storagecode", version, about = "Storage codes on triangle-free Cayley graphs")]
pub struct Cli {
    /// Override the dense-matrix arity ceiling (same as STORAGECODE_MAX_ARITY).
    #[arg(long, global = true)]
    pub max_arity: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a family element; writes the polynomial and a JSON sidecar.
    Family(FamilyArgs),
    /// Exact rate and graph statistics of a code.
    Rate(RateArgs),
    /// Triangle, storage, repair, ceiling and consistency checks on a code.
    Verify(VerifyArgs),
    /// Rate table over a parameter range of one family.
    Table(TableArgs),
    /// Check the ideal-rate identities in P_n.
    IdealVerify(IdealVerifyArgs),
    /// Export the coset matrix, graph, code basis or connection set.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum InputFormat {
    /// Polynomial text (`n=5` header, `x1*x2 + 1` terms).
    #[default]
    Poly,
    /// Connection-set file (`n=5` header, one hex mask per line).
    Masks,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input file.
    pub path: PathBuf,
    #[arg(long = "input", value_enum, default_value_t)]
    pub input_format: InputFormat,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// hamming, seven_eighths or generalized.
    #[arg(long)]
    pub name: String,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Polynomial output path; the sidecar goes to `<out>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Largest row-subset size for the necessary-condition ceiling.
    #[arg(long, default_value_t = DEFAULT_MAX_K)]
    pub max_k: u32,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_MAX_K)]
    pub max_k: u32,
    #[arg(long, default_value_t = storagecode::verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Random codewords checked.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Codewords whose every vertex is erased and repaired.
    #[arg(long, default_value_t = 10)]
    pub repair_samples: usize,
}

/// Inclusive integer range: `3`, `3..8` or `3..=8`. `5..4` is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamRange {
    pub lo: u32,
    pub hi: u32,
}

impl ParamRange {
    pub fn values(self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

impl FromStr for ParamRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad range `{s}` (expected N, A..B or A..=B)");
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        match s.split_once("..") {
            None => {
                let v = parse(s)?;
                Ok(ParamRange { lo: v, hi: v })
            }
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                Ok(ParamRange {
                    lo: parse(a)?,
                    hi: parse(b)?,
                })
            }
        }
    }
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub r: Option<ParamRange>,
    #[arg(long)]
    pub k: Option<ParamRange>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Defaults to r for the generalized family and 3 otherwise.
    #[arg(long)]
    pub max_k: Option<u32>,
}

#[derive(Debug, Args)]
pub struct IdealVerifyArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = storagecode::ideal::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = storagecode::ideal::DEFAULT_PARTITIONS)]
    pub partitions: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    /// Coset matrix in `gf2 <rows> <cols>` hex-word format.
    Matrix,
    /// Edge list, `u v` per line.
    Graph,
    /// DIMACS edge format.
    Dimacs,
    /// One bit string per code basis vector.
    Codewords,
    /// Connection-set file.
    ConnectionSet,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(value_enum)]
    pub kind: ExportKind,
    #[command(flatten)]
    pub input: InputArgs,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

//! `entrolab`: certified topological-entropy bounds from the command line.

mod commands;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entrolab::Rational;

const ENTROPY_HELP: &str = "\
TSV output (logistic):
  h in [lo,hi] PROVENANCE
  below  <d>  <witness period or ->  <entropy bound>
  above  <d>  <witness period or ->  <entropy bound>
  periods  <comma-separated periods examined>
Wall time goes to stderr.

TSV output (pwl, horseshoe): one line per improving bound
  p  n  bound_lo  bound_hi
TSV output (pwl, variation):
  h in [lo,hi] VARIATION  CERTIFIED|ESTIMATE  [n]";

const CENTERS_HELP: &str = "\
TSV output: one line per center, sorted by period then parameter
  period  r_lo  r_hi  h_lo  h_hi";

const SFT_HELP: &str = "\
SFT files are JSON: {\"alphabet\":k,\"allowed\":[[0/1,...],...]}.
TSV output: `h in [lo,hi] SFT`, `MIXING`/`NOT_MIXING`, or the recoded word.";

#[derive(Parser, Debug)]
#[command(name = "entrolab", version, about = "Certified topological-entropy bounds for one-dimensional dynamics")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Working precision in bits.
    #[arg(long, global = true, value_parser = positive_u32)]
    pub bits: Option<u32>,
    /// Center cache file (JSON lines). ENTROLAB_CACHE takes precedence.
    #[arg(long, global = true)]
    pub cache_path: Option<PathBuf>,
    /// Wall-clock budget in seconds.
    #[arg(long, global = true, value_parser = positive_f64)]
    pub budget_seconds: Option<f64>,
    /// Node cap for iterates of piecewise-linear maps.
    #[arg(long, global = true, value_parser = positive_usize)]
    pub node_cap: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Entropy of a logistic parameter or a piecewise-linear map.
    #[command(subcommand, after_long_help = ENTROPY_HELP)]
    Entropy(EntropyCommand),
    /// Write a constant-slope map with entropy close to h.
    Realize {
        /// Target entropy in [0,1], decimal or p/q.
        #[arg(long, value_parser = rational)]
        h: Rational,
        /// Output map file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Subshifts of finite type.
    #[command(subcommand, after_long_help = SFT_HELP)]
    Sft(SftCommand),
    /// Check a horseshoe certificate against a map.
    Check {
        /// Map file (piecewise-linear nodes or {"r":...}).
        #[arg(long)]
        file: PathBuf,
        /// Certificate file {"n":..,"intervals":[[lo,hi],..]}.
        #[arg(long)]
        cert: PathBuf,
    },
    /// Superattracting centers of the logistic family.
    #[command(after_long_help = CENTERS_HELP)]
    Centers {
        #[arg(long, value_parser = positive_u32)]
        max_period: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum EntropyCommand {
    /// h(r) for x -> r x (1-x), by the sandwich method.
    Logistic {
        /// Parameter in [0,4], decimal or p/q; parsed exactly.
        #[arg(long, value_parser = rational)]
        r: Rational,
        /// Target width of the entropy bracket.
        #[arg(long, value_parser = positive_rational)]
        eps: Rational,
        /// Largest center period used.
        #[arg(long, value_parser = positive_u32)]
        max_period: Option<u32>,
    },
    /// Entropy of a piecewise-linear map (or a logistic map for horseshoes).
    Pwl {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Largest iterate examined.
        #[arg(long, value_parser = positive_u32)]
        max_n: Option<u32>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Horseshoe,
    Variation,
}

#[derive(Subcommand, Debug)]
pub enum SftCommand {
    /// Enclosure of the entropy.
    Entropy {
        #[arg(long)]
        file: PathBuf,
        /// Target width of the enclosure.
        #[arg(long, value_parser = positive_rational)]
        eps: Rational,
    },
    /// MIXING or NOT_MIXING.
    Mixing {
        #[arg(long)]
        file: PathBuf,
    },
    /// Number of words of length n.
    Count {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Binary prefix recoding of a binary mixing SFT.
    Kappa {
        #[arg(long)]
        file: PathBuf,
        /// Encode a language word.
        #[arg(long, group = "op")]
        encode: Option<String>,
        /// Decode a binary word.
        #[arg(long, group = "op")]
        decode: Option<String>,
        /// Input length needed for m output symbols.
        #[arg(long, group = "op")]
        modulus: Option<usize>,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

fn positive_rational(s: &str) -> Result<Rational, String> {
    let q = rational(s)?;
    if q.is_positive() {
        Ok(q)
    } else {
        Err(format!("{s} must be positive"))
    }
}

fn positive_u32(s: &str) -> Result<u32, String> {
    match s.parse::<u32>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("{s} is not a positive integer")),
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("{s} is not a positive integer")),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("{s} is not a positive number")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(msg) = e.message() {
                eprintln!("entrolab: {msg}");
            }
            ExitCode::from(e.code())
        }
    }
}

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cantor",
    version,
    about = "Exact computations on mixed-radix infinite products and Thue-Morse type words"
)]
pub struct Cli {
    /// Write the report here instead of stdout. A `<PATH>.meta.json` sidecar
    /// with run metadata is written next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SpecArg {
    /// JSON spec file.
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Thm21Choice {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Prop23Choice {
    Main,
    Remark,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mixed-radix digits of an integer.
    Digits {
        /// Radix file; a product or word spec also works. Binary if omitted.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        n: String,
    },
    /// Least `x` with `l x` starting `1, 0, ..., 0` (t zeros) in its digits.
    SparseMultiple {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1 << 24)]
        cap: u64,
    },
    /// First N coefficients of the product.
    Expand {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, alias = "N")]
        count: usize,
    },
    /// First N coefficients of the tail product `f_n`.
    TailExpand {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n: usize,
        #[arg(long, alias = "N")]
        count: usize,
    },
    /// Block scalars of the copy structure at level n.
    CopyStructure {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        blocks: u64,
    },
    /// Certified enclosure of the product at 1/b.
    Evaluate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        b: u64,
        /// Target absolute error, `p/q`.
        #[arg(long, default_value = "1/1000000000000000000000000000000")]
        target: String,
    },
    /// Largest observed `|a_n(m)| / |a_0(m)|`.
    BoundedReport {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        m_max: u64,
    },
    /// Repetition witness of the tail product `f_n`.
    Witness {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n: usize,
        /// Search window; every index up to it is inspected.
        #[arg(long, alias = "L", default_value_t = 64)]
        window: u64,
    },
    /// Rational approximant built from the witness.
    Approximant {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n: usize,
        #[arg(long, alias = "L", default_value_t = 64)]
        window: u64,
    },
    /// Approximation inequality over a range of levels.
    CheckThm21 {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value_t = Thm21Choice::First)]
        variant: Thm21Choice,
        /// Inclusive level range, `lo..hi` or `lo,hi`.
        #[arg(long, value_parser = parse_range)]
        range: RangeInclusive<usize>,
        /// Bound on `s_n + t_n`; the largest observed value if omitted.
        #[arg(long = "L")]
        l: Option<u64>,
    },
    /// Integer-sequence inequality; the spec holds `{"f": ..., "F": ...}`.
    CheckProp23 {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value_t = Prop23Choice::Main)]
        variant: Prop23Choice,
        #[arg(long, value_parser = parse_range)]
        range: RangeInclusive<usize>,
    },
    /// Specialized inequality for the factorial-support product.
    Cor22 {
        #[arg(long, default_value_t = 2)]
        b0: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_parser = parse_range)]
        range: RangeInclusive<usize>,
    },
    /// Integer triples and their linear forms.
    SchmidtReport {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        b: u64,
        #[arg(long, value_parser = parse_range)]
        range: RangeInclusive<usize>,
    },
    /// Prefix `A_n` of the word.
    TmBuild {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n: usize,
        /// Also give a text form with this many letters per line.
        #[arg(long)]
        block: Option<usize>,
    },
    /// Letter at position m.
    TmLetter {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        m: String,
    },
    /// Decide ultimate periodicity.
    TmPeriod {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 64)]
        depth: usize,
    },
    /// Enclosure of `sum_n v(a(N + n l)) / b^(n + 1)`.
    TmSubseqValue {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long = "start", alias = "N", default_value_t = 0)]
        start: u64,
        #[arg(long, default_value_t = 1)]
        step: u64,
        #[arg(long)]
        b: u64,
        #[arg(long, default_value = "1/1000000000000000")]
        target: String,
        /// Comma-separated value of each residue, `p/q`; roots of unity if omitted.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<String>>,
    },
    /// Bounded period search on `a(N + n l)`.
    TmSubseqScan {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long = "start", alias = "N", default_value_t = 0)]
        start: u64,
        #[arg(long, default_value_t = 1)]
        step: u64,
        #[arg(long, default_value_t = 64)]
        max_period: u64,
        #[arg(long, default_value_t = 8192)]
        horizon: u64,
    },
    /// The word's generating function as a product spec.
    TmToProduct {
        #[command(flatten)]
        spec: SpecArg,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Digits { .. } => "digits",
            Command::SparseMultiple { .. } => "sparse-multiple",
            Command::Expand { .. } => "expand",
            Command::TailExpand { .. } => "tail-expand",
            Command::CopyStructure { .. } => "copy-structure",
            Command::Evaluate { .. } => "evaluate",
            Command::BoundedReport { .. } => "bounded-report",
            Command::Witness { .. } => "witness",
            Command::Approximant { .. } => "approximant",
            Command::CheckThm21 { .. } => "check-thm21",
            Command::CheckProp23 { .. } => "check-prop23",
            Command::Cor22 { .. } => "cor22",
            Command::SchmidtReport { .. } => "schmidt-report",
            Command::TmBuild { .. } => "tm-build",
            Command::TmLetter { .. } => "tm-letter",
            Command::TmPeriod { .. } => "tm-period",
            Command::TmSubseqValue { .. } => "tm-subseq-value",
            Command::TmSubseqScan { .. } => "tm-subseq-scan",
            Command::TmToProduct { .. } => "tm-to-product",
        }
    }
}

fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = text
        .split_once("..")
        .or_else(|| text.split_once(','))
        .ok_or_else(|| format!("expected lo..hi or lo,hi, got {text:?}"))?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|e| format!("bad range end: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

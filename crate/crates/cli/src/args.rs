use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fatpairs::arith::prime_power;
use fatpairs::{Field, GroupDescriptor};

#[derive(Parser, Debug)]
#[command(name = "fatpairs", version, about = "Fat elements, fat pairs and their reducibility in GL(d,q)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify one matrix as fat and/or ppd
    Fatcheck {
        /// Matrix file in the text format
        #[arg(long)]
        matrix: PathBuf,
        /// Test ppd for this degree instead of the fat degree
        #[arg(long)]
        ppd: Option<usize>,
    },
    /// Number of w-dimensional subspaces of F_q^d
    Gaussian {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        w: usize,
        #[arg(long, value_parser = parse_q)]
        q: FieldOrder,
    },
    /// Per-cell and aggregate bounds for dimension d
    Bounds {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_q)]
        q: FieldOrder,
    },
    /// Exact pair statistics by enumeration
    Exact {
        #[command(flatten)]
        group: GroupArgs,
        /// Largest group order to enumerate
        #[arg(long, default_value_t = fatpairs::proportions::DEFAULT_PAIR_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo pair statistics
    Mc {
        #[command(flatten)]
        group: GroupArgs,
        /// Number of uniform pairs to draw
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        pairs: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Reduce a fat pair to an irreducible fat pair on a composition factor
    Reduce {
        /// File with two matrices separated by a blank line
        #[arg(long)]
        pair: PathBuf,
        /// Largest number of vectors scanned exhaustively
        #[arg(long, default_value_t = fatpairs::reduction::DEFAULT_SCAN_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Desk)]
        level: Level,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        workers: Option<u64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Desk,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    /// gl, sl, or detindex:M for the subgroup of index M in the determinant image
    #[arg(long, value_parser = parse_group, default_value = "gl")]
    pub group: GroupKind,
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_parser = parse_q)]
    pub q: FieldOrder,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldOrder {
    pub p: u64,
    pub k: u32,
}

impl FieldOrder {
    pub fn q(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn field(&self) -> fatpairs::Result<Field> {
        Field::new(self.p, self.k)
    }
}

/// `9`, `3^2`, or `9=3^2`.
pub fn parse_q(s: &str) -> Result<FieldOrder, String> {
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("not an integer: {t:?}"));
    let power = |t: &str| -> Result<FieldOrder, String> {
        match t.split_once('^') {
            Some((p, k)) => {
                let (p, k) = (parse(p)?, parse(k)?);
                if prime_power(p) != Some((p, 1)) || k == 0 || k > 64 {
                    return Err(format!("{t} is not p^k with p prime and k >= 1"));
                }
                p.checked_pow(k as u32).ok_or_else(|| format!("{t} overflows"))?;
                Ok(FieldOrder { p, k: k as u32 })
            }
            None => {
                let q = parse(t)?;
                let (p, k) = prime_power(q).ok_or_else(|| format!("{q} is not a prime power"))?;
                Ok(FieldOrder { p, k })
            }
        }
    };
    match s.split_once('=') {
        Some((q, pk)) => {
            let (a, b) = (power(q)?, power(pk)?);
            if a != b {
                return Err(format!("{q} and {pk} disagree"));
            }
            Ok(a)
        }
        None => power(s),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Gl,
    Sl,
    DetIndex(u32),
}

pub fn parse_group(s: &str) -> Result<GroupKind, String> {
    match s {
        "gl" => Ok(GroupKind::Gl),
        "sl" => Ok(GroupKind::Sl),
        _ => match s.strip_prefix("detindex:") {
            Some(m) => m.parse().map(GroupKind::DetIndex).map_err(|_| format!("bad index in {s:?}")),
            None => Err(format!("unknown group {s:?}; expected gl, sl or detindex:M")),
        },
    }
}

impl GroupArgs {
    pub fn descriptor(&self) -> fatpairs::Result<GroupDescriptor> {
        let field = self.q.field()?;
        match self.group {
            GroupKind::Gl => GroupDescriptor::gl(&field, self.d),
            GroupKind::Sl => GroupDescriptor::sl(&field, self.d),
            GroupKind::DetIndex(m) => GroupDescriptor::new(&field, self.d, m),
        }
    }
}

//! Command-line arguments and their validation into core parameter types.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use st_forge_core::{GridParams, Ring, SlopeParams};

use crate::error::{CliError, Result};

/// Environment variable capping the counting work of a run.
pub const MAX_CELLS_VAR: &str = "ST_FORGE_MAX_CELLS";
pub const DEFAULT_MAX_CELLS: u128 = 1 << 40;

#[derive(Parser, Debug)]
#[command(
    name = "st-forge",
    version,
    about = "Exact ℤ[√k] incidence constructions: generate, count, verify"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the coordinate, slope and line sets
    Generate(GenerateArgs),
    /// Count richness and evaluate sharpness of the line set
    Verify(VerifyArgs),
    /// Tabulate set sizes, richness and sharpness over several scales
    Sweep(SweepArgs),
    /// Additive energies E⁺(A, xA) over the slope set
    Energy(CommonArgs),
    /// Projection sizes of P along every slope of S
    Project(CommonArgs),
    /// Projection size of an n × n integer lattice along p/q
    Lattice(LatticeArgs),
}

/// A cutoff `c = num/den`, parsed from `"p/q"` or a decimal like `0.75`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cutoff {
    pub num: u64,
    pub den: u64,
}

impl FromStr for Cutoff {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("cannot parse cutoff {s:?}; expected \"p/q\" or a decimal");
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let num = p.trim().parse().map_err(|_| bad())?;
            let den = q.trim().parse().map_err(|_| bad())?;
            return Ok(Cutoff { num, den });
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac.len() as u32);
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Ok(Cutoff { num, den })
    }
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Construction parameters shared by most commands.
#[derive(Args, Clone, Debug)]
pub struct ParamArgs {
    /// Radicand: a non-square integer ≥ 2
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    pub k: i64,

    /// Scale N; the side parameter becomes s = ⌊√N⌋
    #[arg(
        long = "N",
        value_name = "N",
        conflicts_with = "side",
        allow_negative_numbers = true
    )]
    pub n: Option<i64>,

    /// Side parameter s (coordinates x₁, x₂ ∈ {−s, …, s−1})
    #[arg(long, allow_negative_numbers = true)]
    pub side: Option<i64>,

    /// Slope scale M
    #[arg(long = "M", value_name = "M", conflicts_with = "r")]
    pub m: Option<u64>,

    /// Richness r; sets M = ⌊N/r⌋
    #[arg(long)]
    pub r: Option<u64>,

    /// Lower magnitude cutoff c in (0, 1), as "p/q" or a decimal
    #[arg(long, default_value = "1/2")]
    pub c: Cutoff,

    /// Cap on gcd(norm p, norm q) and gcd(p₁, p₂)
    #[arg(long, default_value_t = SlopeParams::DEFAULT_GCD_CAP)]
    pub gcd_cap: u64,
}

#[derive(Args, Clone, Debug)]
pub struct CommonArgs {
    #[command(flatten)]
    pub params: ParamArgs,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file (default: standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub params: ParamArgs,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output directory; receives A, S and L files
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Cross-check a deterministic sample of lines against the brute-force counters
    #[arg(long)]
    pub oracle: bool,

    /// Include the richness of every line in the report
    #[arg(long)]
    pub per_line: bool,
}

#[derive(Args, Clone, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    pub k: i64,

    /// Scales N, comma separated
    #[arg(
        long = "N",
        value_name = "N",
        value_delimiter = ',',
        conflicts_with = "side"
    )]
    pub n: Vec<i64>,

    /// Side parameters s, comma separated
    #[arg(long, value_delimiter = ',')]
    pub side: Vec<i64>,

    /// Slope scales M, comma separated
    #[arg(
        long = "M",
        value_name = "M",
        value_delimiter = ',',
        conflicts_with = "r"
    )]
    pub m: Vec<u64>,

    /// Richness r; each row uses M = ⌊N/r⌋
    #[arg(long)]
    pub r: Option<u64>,

    #[arg(long, default_value = "1/2")]
    pub c: Cutoff,

    #[arg(long, default_value_t = SlopeParams::DEFAULT_GCD_CAP)]
    pub gcd_cap: u64,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct LatticeArgs {
    /// Lattice side
    #[arg(long)]
    pub n: u64,

    /// Slope numerator
    #[arg(long, allow_negative_numbers = true)]
    pub p: i64,

    /// Slope denominator
    #[arg(long, allow_negative_numbers = true)]
    pub q: i64,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated parameters for one construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub ring: Ring,
    pub grid: GridParams,
    pub slopes: SlopeParams,
    pub cutoff: Cutoff,
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// Either scale or side, and either M or r, resolved into a run.
pub fn resolve(
    k: i64,
    n: Option<i64>,
    side: Option<i64>,
    m: Option<u64>,
    r: Option<u64>,
    c: Cutoff,
    gcd_cap: u64,
) -> Result<RunConfig> {
    let ring = Ring::new(k).map_err(|e| validation(e.to_string()))?;
    let (grid, scale) = match (n, side) {
        (Some(n), None) => (GridParams::from_scale(n), n),
        (None, Some(s)) => (GridParams::from_side(s), s.saturating_mul(s)),
        (None, None) => return Err(validation("one of --N or --side is required")),
        (Some(_), Some(_)) => return Err(validation("--N and --side are mutually exclusive")),
    };
    let grid = grid.map_err(|e| validation(e.to_string()))?;
    let m = match (m, r) {
        (Some(m), None) => m,
        (None, Some(0)) => return Err(validation("richness r must be at least 1")),
        (None, Some(r)) => scale as u64 / r,
        (None, None) => return Err(validation("one of --M or --r is required")),
        (Some(_), Some(_)) => return Err(validation("--M and --r are mutually exclusive")),
    };
    if m == 0 {
        return Err(validation("M = ⌊N/r⌋ is 0; r must not exceed N"));
    }
    if m > scale as u64 {
        return Err(validation(format!(
            "M = {m} exceeds N = {scale}; r = N/M must be at least 1"
        )));
    }
    let slopes =
        SlopeParams::new(m, c.num, c.den, gcd_cap).map_err(|e| validation(e.to_string()))?;
    Ok(RunConfig {
        ring,
        grid,
        slopes,
        cutoff: c,
    })
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        resolve(
            self.k,
            self.n,
            self.side,
            self.m,
            self.r,
            self.c,
            self.gcd_cap,
        )
    }
}

impl SweepArgs {
    /// One run per (scale, M) pair, scales outermost.
    pub fn resolve(&self) -> Result<Vec<RunConfig>> {
        let scales: Vec<(Option<i64>, Option<i64>)> = if !self.side.is_empty() {
            self.side.iter().map(|&s| (None, Some(s))).collect()
        } else if !self.n.is_empty() {
            self.n.iter().map(|&n| (Some(n), None)).collect()
        } else {
            return Err(validation("sweep needs --side or --N values"));
        };
        let ms: Vec<(Option<u64>, Option<u64>)> = match (self.m.is_empty(), self.r) {
            (false, _) => self.m.iter().map(|&m| (Some(m), None)).collect(),
            (true, Some(r)) => vec![(None, Some(r))],
            (true, None) => return Err(validation("sweep needs --M values or --r")),
        };
        let mut out = Vec::new();
        for &(n, side) in &scales {
            for &(m, r) in &ms {
                out.push(resolve(self.k, n, side, m, r, self.c, self.gcd_cap)?);
            }
        }
        Ok(out)
    }
}

/// The work cap from the environment.
pub fn max_cells() -> Result<u128> {
    match std::env::var(MAX_CELLS_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            validation(format!(
                "{MAX_CELLS_VAR} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_MAX_CELLS),
    }
}

pub fn check_cells(cells: u128) -> Result<()> {
    let cap = max_cells()?;
    if cells > cap {
        return Err(CliError::WorkCap { cells, cap });
    }
    Ok(())
}

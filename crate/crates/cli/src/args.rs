use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "fewroots", version, about = "Real roots of sparse systems, discriminant chambers and certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize a configuration, report its facets and an odd cell.
    OddCell(ConfigArgs),
    /// Print the Horn-Kapranov linear forms and reduced exponent matrix.
    HkParam(ConfigArgs),
    /// Critical points and the chamber atlas of the reduced discriminant.
    Chambers(ChambersArgs),
    /// Alpha-certify points of a polynomial system.
    Certify(CertifyArgs),
    /// Root counts for the Haas family, its signature table and the five-root chamber.
    Haas(HaasArgs),
    /// Evaluate the counting bounds at one dimension.
    Bound(BoundArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// `{"n": .., "points": [..]}`, or `{"system": [..]}` for the Cayley configuration of a system.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Use the Cayley configuration of the Haas family with this `d` instead of a file.
    #[arg(long, conflicts_with = "config")]
    pub haas: Option<u32>,
    /// Index of the point moved to the origin; default is the lexicographic minimum.
    #[arg(long)]
    pub origin: Option<usize>,
    /// Odd cell as 0-based positions in the normalized configuration.
    #[arg(long, value_delimiter = ',')]
    pub cell: Option<Vec<usize>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ChambersArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Width of certified node enclosures, in `(0, 1)`.
    #[arg(long, env = "FEWROOTS_PRECISION", default_value_t = 1e-13)]
    pub precision: f64,
    /// Sign flips from reduced to chamber coordinates, e.g. `-1,-1`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub signs: Option<Vec<i8>>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Render the SVG in `(ln a, ln b)` over the positive quadrant.
    #[arg(long)]
    pub log: bool,
    /// SVG window `xmin,xmax,ymin,ymax` (log coordinates with `--log`).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub window: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    /// `{"system": [{"exponents": [..], "coefficients": [..]}, ..]}`.
    #[arg(long)]
    pub system: PathBuf,
    /// A list of points, each a list of decimal or fraction strings (or numbers).
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct HaasArgs {
    #[arg(long, default_value = "44/31", allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, default_value = "44/31", allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, default_value_t = 3)]
    pub d: u32,
    /// Also reproduce the thirteen-row signature table for `d = 3`.
    #[arg(long)]
    pub table: bool,
    /// Also compute the vertices, area and probability bound of the five-root chamber.
    #[arg(long)]
    pub e3: bool,
    /// Also run the emptiness probe at this `d`.
    #[arg(long)]
    pub probe: Option<u32>,
    /// Coefficients of the degree-36 polynomial, a JSON list of integers or
    /// integer strings, constant term first.
    #[arg(long)]
    pub adata: Option<PathBuf>,
    /// Starting points to certify; defaults to the five printed points at `(44/31, 44/31, 3)`.
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: u64,
    /// Value the floor of the cubic variant is compared with; `237920` for `n = 3`.
    #[arg(long)]
    pub expected: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

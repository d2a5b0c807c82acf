//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dcat",
    version,
    about = "Schmidt spectra and entanglement of parity-adapted U(D)-spin coherent states",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropies on a Cartesian grid of |z_i|.
    Grid(GridArgs),
    /// Entropies on a sphere ||z|| = R as a function of the hyperspherical angles.
    Angular(AngularArgs),
    /// (linear, von Neumann) entropy point clouds from random z or random spectra.
    Infodiag(InfodiagArgs),
    /// Exact limit spectra (thermodynamic, double and rescaled double) on a grid.
    Limit(LimitArgs),
    /// Compare closed-form spectra with a brute-force reduced density matrix.
    /// Fock bases are capped at 2e6 states and density matrices at 5000 rows.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Colormap {
    /// The normalized von Neumann entropy.
    Entropy,
    /// Euclidean distance of the coordinates to `--ref`.
    Dist,
    /// Angle between the coordinate vector and `--ref`.
    Angle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LimitKind {
    /// N -> infinity at fixed z and M.
    Tl,
    /// N, M -> infinity at fixed z.
    Dtl,
    /// N, M -> infinity with sqrt(N) z = alpha and M/N = 1 - eta.
    Rstl,
}

/// Options shared by every subcommand. Any of them may also be given as
/// `key = value` lines of a `--config` file; flags on the command line win.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Number of levels D of each particle.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,

    /// Total number of particles N.
    #[arg(long, default_value_t = 6)]
    pub particles: u32,

    /// Size M of the subsystem whose reduced density matrix is diagonalized.
    #[arg(long, default_value_t = 1)]
    pub traced: u32,

    /// Parity c as a bitstring b_1 b_2 ... b_{D-1}, e.g. 101 [default: all zeros].
    #[arg(long)]
    pub parity: Option<String>,

    /// Coordinate range lo:hi, one for all axes or comma-separated per axis.
    #[arg(long)]
    pub range: Option<String>,

    /// Grid points per axis.
    #[arg(long, default_value_t = 51)]
    pub points: usize,

    /// Radius ||z|| = R for angular maps and sphere sampling.
    #[arg(long)]
    pub radius: Option<f64>,

    /// Transmissivity eta in [1/2, 1) of the rescaled limit.
    #[arg(long)]
    pub eta: Option<f64>,

    /// Seed of the random generator.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Extra scalar emitted in the `colormap` column.
    #[arg(long, value_enum)]
    pub colormap: Option<Colormap>,

    /// Reference point or direction for the colormap [default: all ones].
    #[arg(long, value_delimiter = ',')]
    pub r#ref: Option<Vec<f64>>,

    /// Output file [default: standard output].
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// key = value file with defaults for any of these options.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Worker threads [default: all cores]. Output does not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct AngularArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Also emit the exact ||z|| -> infinity spectrum along each direction.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct InfodiagArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Number of sample points.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,

    /// Sample random spectra of this dimension (chi-squared eigenvalues)
    /// instead of random coherent-state labels.
    #[arg(long)]
    pub chi2: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    #[arg(long, value_enum, default_value_t = LimitKind::Tl)]
    pub kind: LimitKind,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Number of random cases when no explicit `--z` is given.
    #[arg(long, default_value_t = 50)]
    pub cases: usize,

    /// Check the single case with these |z_i| (uses --dim, --particles,
    /// --traced, --parity).
    #[arg(long, value_delimiter = ',')]
    pub z: Option<Vec<f64>>,

    /// Test hook: perturb every closed-form spectrum before comparing.
    #[arg(long, hide = true)]
    pub corrupt: bool,
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Grid(a) => &a.common,
            Command::Angular(a) => &a.common,
            Command::Infodiag(a) => &a.common,
            Command::Limit(a) => &a.common,
            Command::OracleCheck(a) => &a.common,
        }
    }
}

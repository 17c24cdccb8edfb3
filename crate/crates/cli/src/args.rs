use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "rotlab", version, about = "Rotation theory on compact abelian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Map spec: a JSON file path or inline JSON.
    #[arg(long, global = true)]
    pub map: Option<String>,
    /// Iterations (orbit length); each command has its own default.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Profinite depth K (residues mod K!).
    #[arg(long, global = true)]
    pub depth: Option<u32>,
    /// Character denominator / frequency cap.
    #[arg(long, global = true, default_value_t = 64)]
    pub cap: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupArg {
    Circle,
    Torus,
    Profinite,
    Solenoid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestArg {
    Monothetic,
    Character,
    Equidistribution,
    Birkhoff,
    Fourier,
    Halmos,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rotation number (circle) or rotation vector (torus) from one orbit.
    Rotnum {
        /// Start point: `x`, `a/b`, or `x,y` on the torus.
        #[arg(long, default_value = "0")]
        start: String,
    },
    /// Rotation set from a grid of start points.
    Rotset {
        /// Starts per coordinate.
        #[arg(long, default_value_t = 8)]
        grid: usize,
    },
    /// Rotation element of a solenoid map with per-level rotation numbers.
    Solrot {
        /// Levels b of the induced maps on ℝ/bℤ (comma separated).
        #[arg(long, value_delimiter = ',')]
        levels: Vec<u64>,
        /// Leaf coordinate of the start point.
        #[arg(long, default_value = "0")]
        start: String,
        /// Fiber residue of the start point.
        #[arg(long, default_value_t = 0)]
        fiber: i64,
    },
    /// Monothetic, ergodicity and equidistribution diagnostics for translations.
    TranslateDiagnose {
        #[arg(long, value_enum)]
        group: Option<GroupArg>,
        /// Translation amount: `a/b` or a float; `x,y` on the torus; an
        /// integer on Ẑ; `t` or `t;r` (leaf; fiber residue) on the solenoid.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, value_enum, default_value_t = TestArg::Monothetic)]
        test: TestArg,
        /// Dyadic bins for circle equidistribution.
        #[arg(long, default_value_t = 16)]
        bins: u64,
        /// Residue level for Ẑ / solenoid equidistribution.
        #[arg(long, default_value_t = 6)]
        level: u64,
        /// Observable JSON, e.g. `{"type":"interval","lo":0,"hi":0.5}`.
        #[arg(long)]
        observable: Option<String>,
        /// Character JSON, e.g. `{"group":"circle","k":1}`.
        #[arg(long)]
        character: Option<String>,
        /// Multiplier `u/v` for the automorphism test.
        #[arg(long)]
        multiplier: Option<String>,
        /// Monte Carlo samples for Fourier coefficients.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Empirical semiconjugacy to the rotation by ρ.
    Semiconj {
        /// Grid size for the table of h.
        #[arg(long, default_value_t = 1024)]
        m: usize,
        /// Rotation number; estimated from the orbit when absent.
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        /// Also search for a periodic orbit of type `p/q`.
        #[arg(long)]
        periodic: Option<String>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Bounded mean variation profile.
    Bmv {
        /// Rotation estimate τ (`x` or `x,y`); estimated when absent.
        #[arg(long)]
        tau: Option<String>,
        /// Number of Haar-random start points.
        #[arg(long, default_value_t = 8)]
        starts: usize,
    },
    /// Flow, cocycle and defining-relation identities of the suspension.
    SuspensionCheck {
        /// Random triples per character.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 3.0)]
        t_max: f64,
    },
    /// Separated-set entropy estimate.
    Entropy {
        /// ε values, `a/b` or floats.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<String>,
        /// Orbit lengths; `--n` sets the largest one when absent.
        #[arg(long, value_delimiter = ',')]
        n_values: Vec<usize>,
        /// Start points per coordinate.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Rotation number and entropy over an Arnold (c, a) grid.
    EntropyScan {
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75")]
        c_values: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1,0.15")]
        a_values: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        eps: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        n_values: Vec<usize>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Raw orbit with cumulative lift displacement.
    Orbit {
        #[arg(long, default_value = "0")]
        start: String,
    },
    /// Print the JSON schema of a command's output.
    Schema { command: String },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rotnum { .. } => "rotnum",
            Command::Rotset { .. } => "rotset",
            Command::Solrot { .. } => "solrot",
            Command::TranslateDiagnose { .. } => "translate-diagnose",
            Command::Semiconj { .. } => "semiconj",
            Command::Bmv { .. } => "bmv",
            Command::SuspensionCheck { .. } => "suspension-check",
            Command::Entropy { .. } => "entropy",
            Command::EntropyScan { .. } => "entropy-scan",
            Command::Orbit { .. } => "orbit",
            Command::Schema { .. } => "schema",
        }
    }
}

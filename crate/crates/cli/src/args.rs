use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "toric-ding", version, about = "Exact relative Ding-stability invariants of toric Fano manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Volume, barycenter, extremal affine function, ϑ and the stability verdict.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Non-Archimedean functionals and DH measure of a test-configuration.
    TcEval {
        #[command(flatten)]
        common: Common,
        /// Test-configuration JSON file.
        #[arg(long)]
        tc: PathBuf,
        /// Direction ρ for the inner product, as `a,b,...`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        rho: Vec<String>,
    },
    /// Reduced J-functional: exact minimization over twists.
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tc: PathBuf,
        /// Segment `a1,a2:b1,b2` along which to sample J(ρ) for plotting.
        #[arg(long, allow_hyphen_values = true)]
        segment: Option<String>,
        /// Number of samples along the segment.
        #[arg(long, default_value_t = 21)]
        samples: usize,
    },
    /// Deformation to the normal cone of a torus-fixed point.
    NormalCone {
        #[command(flatten)]
        common: Common,
        /// Grid of c values `c1,c2,...`; defaults to a halving grid under min(c_max,1)/2.
        #[arg(long)]
        grid: Option<String>,
        /// `auto` for the θ-maximizing vertex, or a vertex index in lexicographic order.
        #[arg(long, default_value = "auto")]
        vertex: String,
    },
    /// Finite-k lattice-point oracle and its convergence table.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tc: PathBuf,
        /// Strictly increasing list of k values.
        #[arg(long, default_value = "8,16,32,64")]
        k_ladder: String,
        /// Integer direction for the discrete inner product; defaults to e₁.
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
        /// Exit 0 only if every error at the final k is at most this value.
        #[arg(long, default_value = "1/8")]
        tol: String,
    },
    /// List the built-in polytopes or print one as JSON.
    Corpus { name: Option<String> },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Polytope JSON file.
    #[arg(long)]
    pub polytope: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Digits after the decimal point in float renderings.
    #[arg(long, default_value_t = 6)]
    pub precision: usize,
    /// Write plot-ready CSV series (`series,x,y`) to this file.
    #[arg(long)]
    pub emit_plot_data: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

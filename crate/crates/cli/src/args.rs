use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact Mertens-sum identities and spectral experiments on A(N) = (⌊N²/(mn)⌋).
///
/// Every subcommand prints one report. JSON reports carry `"schema": 1`,
/// the subcommand name and an `ok` flag; CSV output is the report's row
/// table (or a single row of its fields when it has none). The exit status
/// is 0 when every hard assertion of the subcommand held, 1 when one
/// failed, 2 on a usage error and 3 on a runtime failure.
#[derive(Debug, Parser)]
#[command(name = "mertens-lab", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout. Relative paths are taken
    /// against MERTENS_LAB_OUT_DIR when it is set.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Directory for reports when --output is absent; each report goes to
    /// <dir>/<subcommand>.<format>.
    #[arg(long, env = "MERTENS_LAB_OUT_DIR", global = true, hide_env_values = true)]
    pub out_dir: Option<PathBuf>,
    /// Seed for every randomized check.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Worker threads for the row-parallel kernels. Results do not depend on it.
    #[arg(long, default_value_t = 1, global = true)]
    pub threads: usize,
    /// Permit the long runs (N beyond the documented caps).
    #[arg(long, global = true)]
    pub allow_slow: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

const G_HELP: &str = "weight g: principal | liouville | legendre:P | power:RE[,IM]";

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Möbius sieve; rows n, mu, mertens.
    Sieve {
        #[arg(long)]
        limit: u64,
    },
    /// M(g, x) by direct summation.
    Mertens {
        #[arg(long)]
        x: f64,
        #[arg(long, default_value = "principal", help = G_HELP)]
        g: String,
    },
    /// One of the Mertens-sum identities against the direct sum.
    Identity(IdentityArgs),
    /// μ(K) recovered from the flexible identity at K and K − 1.
    Mobius {
        #[arg(long = "K")]
        k: u64,
        /// Comma-separated N₁,…,N_d; defaults to ⌈√K⌉,⌈√K⌉.
        #[arg(long, value_delimiter = ',')]
        ranges: Option<Vec<u64>>,
    },
    /// Σ μ(n)⌊x/n⌋, which is 1 for x ≥ 1 and 0 below.
    Meissel {
        #[arg(long)]
        x: f64,
    },
    /// π(N²) − π(N) + 1 against the inclusion-exclusion sum over squarefree d.
    PiCheck {
        #[arg(long = "N")]
        n: u64,
    },
    /// Term counts of the uniform identity; rows N, d, term_count, ratio.
    Terms {
        #[arg(long)]
        d: u32,
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Double sums of A(N) and the trace asymptotic.
    Stats {
        #[arg(long = "N")]
        n: u64,
    },
    /// Eigenvalues of A(N) or Z(N); rows N, k, lambda, residual.
    Spectrum(SpectrumArgs),
    /// Eigenvalue and eigenvector bounds; rows name, passed, detail.
    Bounds {
        #[arg(long = "N")]
        n: usize,
        /// Only λ₁ and λ_N (the interior checks are skipped).
        #[arg(long)]
        extreme: bool,
        #[arg(long, default_value_t = mertens_lab::spectral::DEFAULT_DENSE_CAP)]
        dense_cap: usize,
    },
    /// φ(N) against its limit β.
    Phi(LimitArgs),
    /// wᵀAw/N² against its limit c₄.
    Wform(LimitArgs),
    /// λ_index/N across N; rows k, N, index, lambda_over_n, tail.
    Scan {
        /// Comma-separated k: k > 0 is λ_{N−k}, k < 0 is λ_{|k|}.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        k: Vec<i64>,
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = mertens_lab::spectral::DEFAULT_DENSE_CAP)]
        dense_cap: usize,
    },
    /// M(n) from the cardinal system U, T, V.
    Cardinal {
        #[arg(long)]
        n: u64,
        /// Also check the matrix identity itself.
        #[arg(long)]
        verify: bool,
        /// Include the index set and the matrices U, T, V in the report.
        #[arg(long)]
        matrices: bool,
    },
    /// Quadratic forms mᵀAm and mᵀZm.
    #[command(subcommand)]
    Quadform(QuadformCommand),
    /// Named constants with notes; rows name, value, note.
    Constants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityMode {
    Bilinear,
    Uniform,
    Flexible,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    #[arg(long, value_enum)]
    pub mode: IdentityMode,
    #[arg(long, default_value = "principal", help = G_HELP)]
    pub g: String,
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long = "K")]
    pub k: Option<u64>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub ranges: Option<Vec<u64>>,
    /// Enumerate the inner sums literally instead of folding them.
    #[arg(long)]
    pub literal: bool,
    /// Seeded random tuple checks of the inclusion-exclusion step
    /// (uniform and flexible modes).
    #[arg(long, default_value_t = 0)]
    pub ie_trials: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorChoice {
    A,
    Z,
    ZFourier,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long = "N")]
    pub n: usize,
    /// Only λ₁ and λ_N, by power iteration (matrix-free above the dense cap).
    #[arg(long)]
    pub extreme: bool,
    #[arg(long, value_enum, default_value_t = OperatorChoice::A)]
    pub operator: OperatorChoice,
    /// Weight for operator `a`; anything but principal gives ⌊·⌋ replaced by G(N²/(mn)).
    #[arg(long, default_value = "principal", help = G_HELP)]
    pub g: String,
    /// Frequency for operator `z-fourier`.
    #[arg(long, default_value_t = 1)]
    pub h: u64,
    #[arg(long, default_value_t = mertens_lab::spectral::DEFAULT_DENSE_CAP)]
    pub dense_cap: usize,
    #[arg(long, default_value_t = mertens_lab::spectral::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, default_value_t = mertens_lab::spectral::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long = "N")]
    pub n: u64,
    /// Fail unless the gap to the limit is below this.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum QuadformCommand {
    /// A = N²ffᵀ − ½uuᵀ + Z, entrywise and on m.
    Ranksplit {
        #[arg(long = "N")]
        n: usize,
    },
    /// Truncated spectral sums of mᵀAm; one row per K.
    Spectral(TruncationArgs),
    /// Truncated spectral sums of mᵀZm; one row per K.
    ZSpectral(TruncationArgs),
    /// Fourier truncation of mᵀZm; rows H, eta, error, ratio.
    Fourier {
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "H", value_delimiter = ',', required = true)]
        h: Vec<u64>,
    },
    /// Tr(Z²)/N² against c₅.
    TraceZ2(LimitArgs),
}

#[derive(Debug, Args)]
pub struct TruncationArgs {
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "K", value_delimiter = ',', required = true)]
    pub k: Vec<u64>,
    #[arg(long, default_value_t = mertens_lab::spectral::DEFAULT_DENSE_CAP)]
    pub dense_cap: usize,
}

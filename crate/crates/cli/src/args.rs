use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "torus-hopf", version, about = "Hopf bifurcations of vdP/vdPl oscillator lattices on the 3-torus")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-mode spectral scalars and eigenvalues of the origin.
    Spectrum(SpectrumArgs),
    /// Hopf bifurcation catalog with symmetry classes and branch counts.
    Catalog(CatalogArgs),
    /// Stability threshold, sign table and instability witnesses of the origin.
    Stability(StabilityArgs),
    /// Integrate the lattice from a synchronized or single-mode initial state.
    Simulate(SimulateArgs),
    /// Compute one periodic orbit by shooting, with Floquet multipliers.
    Orbit(OrbitArgs),
    /// Continue a Hopf branch in `a`.
    Trace(TraceArgs),
    /// Check a spatio-temporal symmetry of a saved orbit.
    Verify(VerifyArgs),
    /// Prescribed-period solutions of the bidirectional lattice.
    Existence(ExistenceArgs),
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Spectrum(c) => &c.out,
            Command::Catalog(c) => &c.out,
            Command::Stability(c) => &c.out,
            Command::Simulate(c) => &c.out,
            Command::Orbit(c) => &c.out,
            Command::Trace(c) => &c.out,
            Command::Verify(c) => &c.out,
            Command::Existence(c) => &c.out,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Vdp,
    Vdpl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CubicArg {
    Unit,
    Third,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct LatticeArgs {
    /// Lattice system [default: vdp]
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Lattice side, odd and at least 3 [default: 3]
    #[arg(short = 'N')]
    pub n: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Bifurcation parameter [default: 0]
    #[arg(short = 'a')]
    pub a: Option<f64>,
    /// Restoring constant, positive [default: 1]
    #[arg(short = 'b')]
    pub b: Option<f64>,
    /// Damping scale of the vdP node, positive [default: 1]
    #[arg(long)]
    pub nu: Option<f64>,
    /// Normalization of the vdP cubic term: x^3 or x^3/3 [default: unit]
    #[arg(long, value_enum)]
    pub cubic: Option<CubicArg>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads for parallel sweeps [default: available parallelism]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct CatalogArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Only this mode, as t1,t2,t3
    #[arg(long)]
    pub mode: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Also tabulate all eight sign patterns of |delta|, |zeta|, |epsilon| (vdpl)
    #[arg(long)]
    pub table: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SeedArgs {
    /// Mode of the initial perturbation, as t1,t2,t3
    #[arg(long)]
    pub mode: Option<String>,
    /// Amplitude of the initial perturbation
    #[arg(long)]
    pub amp: Option<f64>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Uniform offset of every x_i at t = 0
    #[arg(long, default_value_t = 0.1)]
    pub x0: f64,
    #[arg(long, default_value_t = 50.0)]
    pub t_end: f64,
    /// Output sampling interval
    #[arg(long, default_value_t = 0.1)]
    pub dt: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    /// Twisted subgroup imposed during shooting, e.g. "(Z3 x Z3 x Z3)^(1,1,1)"
    #[arg(long)]
    pub symmetry: Option<String>,
    /// Initial period guess [default: from the linearization]
    #[arg(long)]
    pub period_guess: Option<f64>,
    #[arg(long, default_value_t = 120)]
    pub samples: usize,
    /// Skip the monodromy computation.
    #[arg(long)]
    pub no_floquet: bool,
    /// Stability margin on the multiplier moduli
    #[arg(long, default_value_t = 1e-3)]
    pub margin: f64,
    /// Relative defect tolerance of the symmetry check
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    /// Also write the orbit alone as JSON here.
    #[arg(long)]
    pub save_orbit: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct TraceArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Mode of the branch, as t1,t2,t3
    #[arg(long)]
    pub mode: String,
    /// Symmetry class to follow [default: every class of the mode]
    #[arg(long)]
    pub symmetry: Option<String>,
    /// First `a` [default: critical a + step]
    #[arg(long)]
    pub a_start: Option<f64>,
    /// Last `a` [default: critical a + 5 step]
    #[arg(long)]
    pub a_end: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub a_step: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// Orbit JSON, as written by `orbit --format json` or `--save-orbit`
    #[arg(long)]
    pub orbit: PathBuf,
    #[arg(long)]
    pub symmetry: String,
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct ExistenceArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Prescribed period
    #[arg(short = 'p')]
    pub p: f64,
    /// Search this mode; without it only the admissible catalog is reported
    #[arg(long)]
    pub mode: Option<String>,
    /// Symmetry class to search [default: every class of the mode]
    #[arg(long)]
    pub symmetry: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    pub nu_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub nu_max: f64,
    #[arg(long, default_value_t = 30)]
    pub nu_count: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

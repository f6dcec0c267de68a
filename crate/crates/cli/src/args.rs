use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "microswim", version, about = "Propulsion models for micron-scale robots in viscous fluids")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Scenario: `low`, `high` or `file:<path>` (key=value, SI units).
    #[arg(long, global = true, default_value = "low")]
    pub scenario: String,
    /// Output file, written atomically. Standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Scenario parameters, Reynolds number and drag.
    Table1,
    /// Equatorial band performance: closed form and surface quadrature.
    Table2(BandArgs),
    /// Rotation with a cos φ band.
    Table3(RotationArgs),
    /// Treadmill structure, loads and sliding friction.
    Table4(TreadmillArgs),
    /// Oscillation frequency and quasi-static criteria.
    #[command(name = "table4-osc")]
    Table4Osc(SpectrumArgs),
    /// Oscillating sphere performance and rod friction.
    Table5(SpectrumArgs),
    /// Brownian motion of the sphere.
    Table6(Table6Args),
    /// Performance of a band with arbitrary angle and speed.
    Tangential(TangentialArgs),
    /// Performance of an oscillation spectrum, optionally checked by the BEM oracle.
    Oscillation(OscillationArgs),
    /// Maximum fluid speed, shear and stress against distance.
    #[command(visible_alias = "fig8")]
    Fieldscan(FieldArgs),
    /// Constrained spheroid designs relative to the sphere.
    #[command(name = "shape-sweep", visible_alias = "fig7")]
    ShapeSweep(ShapeArgs),
    /// Dead-reckoning speed for constrained spheroids.
    #[command(name = "brownian-sweep", visible_alias = "fig10")]
    BrownianSweep(NavArgs),
    /// Constraint checks over speed and viscosity.
    #[command(visible_alias = "fig11")]
    Tradeoff(GridArgs),
}

#[derive(Debug, Clone, Args)]
pub struct BandArgs {
    /// Band angle, degrees.
    #[arg(long, default_value_t = 60.0)]
    pub gamma_deg: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RotationArgs {
    #[arg(long, default_value_t = 60.0)]
    pub gamma_deg: f64,
    /// Peak surface speed, m/s.
    #[arg(long, default_value_t = 267e-6)]
    pub v: f64,
    /// Turn angle for the turn-time row, degrees.
    #[arg(long, default_value_t = 90.0)]
    pub turn_deg: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TreadmillArgs {
    #[arg(long, default_value_t = 60.0)]
    pub gamma_deg: f64,
    /// Distance to a nearby wall, m.
    #[arg(long, default_value_t = 100e-9)]
    pub wall_distance: f64,
    /// Sliding friction coefficient, kg/(m² s).
    #[arg(long, default_value_t = 1000.0)]
    pub k_friction: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    /// Lowest mode.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Number of modes above the lowest.
    #[arg(long, default_value_t = 10)]
    pub p: usize,
    #[arg(long, default_value_t = 1000.0)]
    pub k_friction: f64,
}

#[derive(Debug, Clone, Args)]
pub struct Table6Args {
    /// Travel distance for the rms displacement row, m.
    #[arg(long, default_value_t = 100e-6)]
    pub travel: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TangentialArgs {
    #[arg(long, default_value_t = 60.0)]
    pub gamma_deg: f64,
    /// Band speed, m/s. Solved from the scenario speed when absent.
    #[arg(long)]
    pub v: Option<f64>,
    /// Use surface quadrature instead of closed forms.
    #[arg(long)]
    pub quadrature: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OscillationArgs {
    #[command(flatten)]
    pub spectrum: SpectrumArgs,
    /// Mode spectrum JSON; replaces the optimal k, p spectrum.
    #[arg(long)]
    pub spectrum_file: Option<PathBuf>,
    /// Also run the boundary-element oracle.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 128)]
    pub elements: usize,
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
    #[arg(long, default_value_t = 1)]
    pub periods: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Smallest distance from the surface, in robot radii.
    #[arg(long, default_value_t = 0.05)]
    pub d_min: f64,
    /// Largest distance from the surface, in robot radii.
    #[arg(long, default_value_t = 100.0)]
    pub d_max: f64,
    #[arg(long, default_value_t = 41)]
    pub points: usize,
    /// Report the full strain-rate norm instead of the envelope slope.
    #[arg(long)]
    pub strain_rate: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ShapeArgs {
    /// Smallest semi-minor axis, m.
    #[arg(long, default_value_t = 0.4e-6)]
    pub b_min: f64,
    /// Largest semi-minor axis, m.
    #[arg(long, default_value_t = 1e-6)]
    pub b_max: f64,
    #[arg(long, default_value_t = 13)]
    pub points: usize,
    /// Boundary elements per solve.
    #[arg(long, default_value_t = 256)]
    pub elements: usize,
    #[arg(long, default_value_t = 1000.0)]
    pub k_friction: f64,
    /// Write mesh and traction of the sphere solve to this CSV.
    #[arg(long)]
    pub bem_dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct NavArgs {
    #[arg(long, default_value_t = 0.4e-6)]
    pub b_min: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub b_max: f64,
    #[arg(long, default_value_t = 13)]
    pub points: usize,
    /// Dead-reckoning distance, m.
    #[arg(long, default_value_t = 20e-6)]
    pub distance: f64,
    /// rms heading error, degrees.
    #[arg(long, default_value_t = 20.0)]
    pub alpha_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Both,
    Tangential,
    Oscillating,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// m/s.
    #[arg(long, default_value_t = 1e-6)]
    pub u_min: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub u_max: f64,
    /// Pa·s.
    #[arg(long, default_value_t = 1e-3)]
    pub eta_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub eta_max: f64,
    #[arg(long, default_value_t = 25)]
    pub points_u: usize,
    #[arg(long, default_value_t = 25)]
    pub points_eta: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 1e-12)]
    pub p_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub stress_max: f64,
}

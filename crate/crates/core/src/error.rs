//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("metric degenerate: lambda({node}) = {value} is not positive")]
    MetricDegenerate { node: usize, value: f64 },
    #[error("grid resolution {got} below minimum {min}")]
    ResolutionTooCoarse { got: usize, min: usize },
    #[error("torus side must be positive, got {0}")]
    NonPositiveSide(f64),
    #[error("lambda sample count {got} does not match node count {expected}")]
    LambdaSizeMismatch { got: usize, expected: usize },
}

#[derive(Debug, Error)]
pub enum InitError {
    #[error("interface width eps = {eps} under-resolved: requires eps >= 4h = {}", 4.0 * h)]
    Resolution { eps: f64, h: f64 },
    #[error("initial interface within 4 eps of a chart-degenerate region: {detail}")]
    Geometry { detail: String },
    #[error("surface-tension quadrature did not converge (last error {err:e})")]
    Quadrature { err: f64 },
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error("dt = {dt} rejected: stability requires dt <= {dt_max}")]
    RejectedStep { dt: f64, dt_max: f64 },
    #[error("solver blow-up (non-finite values) at t = {t}")]
    SolverBlowUp { t: f64 },
    #[error("conjugate gradient stalled at relative residual {residual:e} after {iters} iterations")]
    CgStall { residual: f64, iters: usize },
    #[error("phase fields live on different grids")]
    GridMismatch,
}

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("empty series")]
    Empty,
    #[error("series too short: got {got}, need at least {need}")]
    TooShort { got: usize, need: usize },
    #[error("kernel evaluated at t = {t} >= anchor time s = {s}")]
    AnchorTime { t: f64, s: f64 },
    #[error("ball radius {r} outside (0, {r0})")]
    RadiusRange { r: f64, r0: f64 },
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Init(#[from] InitError),
    #[error("step failed at t = {t}: {source}")]
    Step { t: f64, source: StepError },
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config constraint violations:\n{}", .0.join("\n"))]
    Constraints(Vec<String>),
}

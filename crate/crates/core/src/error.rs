use thiserror::Error;

/// Snapshot of a failed contact solve, kept in `f64` regardless of the model scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverDiagnostics {
    pub pressure_kpa: f64,
    pub angles_rad: Vec<f64>,
    pub max_penetration_mm: f64,
    pub stationarity_residual: f64,
    pub iterations: usize,
    pub penalty: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} joint angles, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("pin lock (start {start_module}, span {span}) is out of range for a {module_count}-module actuator")]
    PinOutOfRange {
        start_module: usize,
        span: usize,
        module_count: usize,
    },

    #[error("unknown configuration `{0}` (expected one of 1R, 2R, 4R, 6R)")]
    UnknownPreset(String),

    #[error("calibration infeasible: anchor needs {per_joint_deg:.4} deg per joint but the joint limit is {limit_deg:.4} deg")]
    InfeasibleCalibration { per_joint_deg: f64, limit_deg: f64 },

    #[error("degenerate actuator: {0}")]
    DegenerateSpec(String),

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("pressure must be non-negative and finite, got {0} kPa")]
    InvalidPressure(f64),

    #[error("initial pose penetrates the obstacle by {penetration_mm:.6} mm")]
    InfeasibleScene { penetration_mm: f64 },

    #[error(
        "contact solver did not converge at {} kPa after {} iterations (penetration {:.3e} mm, residual {:.3e} N*mm)",
        .0.pressure_kpa, .0.iterations, .0.max_penetration_mm, .0.stationarity_residual
    )]
    SolverFailure(Box<SolverDiagnostics>),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

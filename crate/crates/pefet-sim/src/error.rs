//! Error types shared across the simulator.

/// Simulation error.
#[derive(Debug, Clone, thiserror::Error)]
pub enum SimError {
    /// The Landau landscape has no double well (requires alpha < 0).
    #[error("no double-well landscape: alpha = {alpha:.4e} m/F must be negative")]
    NoDoubleWell { alpha: f64 },

    /// An iterative solve did not converge within its iteration budget.
    #[error("{context}: no convergence after {iterations} iterations (residual {residual:.3e})")]
    ConvergenceFailure {
        context: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// Geometry violates the hammer-and-nail constraint a_pe >= a_tmd.
    #[error("geometry error: a_pe = {a_pe:.4e} m^2 smaller than a_tmd = {a_tmd:.4e} m^2")]
    GeometryError { a_pe: f64, a_tmd: f64 },

    /// A dimension or parameter is out of its physical range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Calibration fit residual exceeded tolerance.
    #[error("fit failure: {message} (worst ratio deviation {worst_dev:.1}%, tolerance {tol_pct:.0}%)")]
    FitFailure {
        message: String,
        worst_dev: f64,
        tol_pct: f64,
    },

    /// Gate-to-back bias too close to the coercive voltage during a read.
    #[error(
        "read disturb risk: |v_gb| = {v_gb:.3} V within {margin:.3} V of v_c = {v_c:.3} V \
         (required margin {required:.3} V)"
    )]
    ReadDisturbRisk {
        v_gb: f64,
        v_c: f64,
        margin: f64,
        required: f64,
    },

    /// Requested operation is not defined for this architecture.
    #[error("unsupported architecture: {0}")]
    UnsupportedArch(String),

    /// An accessed cell did not reach its polarization target within the phase.
    #[error(
        "write incomplete: cell reached p = {reached:.4} C/m^2, target {target:.4} C/m^2 \
         within {duration:.3e} s"
    )]
    WriteIncomplete {
        reached: f64,
        target: f64,
        duration: f64,
    },

    /// Worst-case LRS/HRS ratio below the configured sensing minimum.
    #[error("sense margin failure: worst LRS/HRS ratio {ratio:.3} below minimum {minimum:.3}")]
    SenseMarginFailure { ratio: f64, minimum: f64 },

    /// A bias plan puts a cell not meant to switch at or beyond the
    /// coercive voltage.
    #[error(
        "disturb violation in phase {phase}: {class} cells see |v_gb| = {v_gb:.3} V \
         >= v_c = {v_c:.3} V"
    )]
    DisturbViolation {
        phase: &'static str,
        class: &'static str,
        v_gb: f64,
        v_c: f64,
    },

    /// Configuration file problem (parse error, missing section, unknown key).
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem or output error.
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, SimError>;

impl From<std::io::Error> for SimError {
    fn from(e: std::io::Error) -> Self {
        SimError::Io(e.to_string())
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension n = {n} not supported here ({reason})")]
    Dimension { n: usize, reason: &'static str },

    #[error("non-finite evaluation of {what} at t = {t}")]
    NonFinite { what: &'static str, t: f64 },

    #[error("no zero crossing up to r_max = {r_max} (u = {u_final})")]
    NoZeroCrossing { r_max: f64, u_final: f64 },

    #[error("step size underflow at r = {r} (h = {h})")]
    StepSizeUnderflow { r: f64, h: f64 },

    #[error("solution point not converged: residual {residual:.3e} > {tolerance:.3e}")]
    Unconverged { residual: f64, tolerance: f64 },

    #[error("lower bound violated at t = {t}: margin {margin:.3e}")]
    LowerBoundViolated { t: f64, margin: f64 },

    #[error("certificate does not hold; nothing to derive")]
    CertificateNotHolding,

    #[error("sweep aborted: {failed} of {total} points failed")]
    SweepAborted { failed: usize, total: usize },

    #[error("Morse index decreased from {from} to {to} between a = {a_lo} and a = {a_hi}")]
    IndexNotMonotone {
        a_lo: f64,
        a_hi: f64,
        from: usize,
        to: usize,
    },

    #[error("table nonlinearity: {0}")]
    Table(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

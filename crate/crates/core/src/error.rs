use thiserror::Error;

/// Errors raised by the counting, series and asymptotics routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid operand: {0}")]
    InvalidOperand(String),

    /// A value that must be nonnegative came out negative, or two exact
    /// computations that must agree did not.
    #[error("internal consistency fault: {0}")]
    InternalConsistency(String),

    #[error("brute-force enumeration refused: n = {n} exceeds the cap of {cap} vertices")]
    CapExceeded { n: usize, cap: usize },

    #[error("no root of psi(z, s) = rho_k found on (0, {z_max}] for k = {k}, tau = {tau}, s = {s}")]
    NoRoot { k: u32, tau: u32, s: f64, z_max: f64 },

    #[error("ambiguous root bracket [{lo}, {hi}] for k = {k}, tau = {tau}, s = {s}")]
    AmbiguousRoot { k: u32, tau: u32, s: f64, lo: f64, hi: f64 },

    #[error("degenerate root: |F_z| = {fz:e} at z = {z}")]
    DegenerateRoot { z: f64, fz: f64 },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Cache(err.to_string())
    }
}

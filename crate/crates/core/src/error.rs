//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fell outside the range an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// Series inversion requires a constant term that is a unit.
    #[error("series is not invertible: constant term {0}")]
    NotInvertible(String),

    /// A coefficient has a denominator divisible by p, so the series has no
    /// reduction modulo a power of p.
    #[error("coefficient of q^{power} is not {p}-integral: {coeff}")]
    NonPIntegral { power: usize, p: u64, coeff: String },

    /// Two residue series with different moduli were combined.
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    /// Malformed series text or witness input.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Divisor sums and q-expansions of the level-one Eisenstein series and Delta.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bernoulli::bernoulli;
use crate::error::{Error, Result};
use crate::series::{linear_combine, rat_int, series_mul, series_pow, QSeries, Rational};

/// Which normalization of the weight-k series to expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EisensteinKind {
    /// Constant term -B_k/(2k), integer higher coefficients.
    G,
    /// Constant term 1.
    E,
}

/// A requested Eisenstein expansion, as it arrives from the CLI.
#[derive(Clone, Copy, Debug)]
pub struct EisensteinSpec {
    pub kind: EisensteinKind,
    pub weight: u64,
    pub precision: usize,
}

impl EisensteinSpec {
    pub fn expand(&self) -> Result<QSeries> {
        match self.kind {
            EisensteinKind::G => eisenstein_g(self.weight, self.precision),
            EisensteinKind::E => eisenstein_e(self.weight, self.precision),
        }
    }
}

/// sigma_e(n) = sum of d^e over the divisors d of n, by trial division.
pub fn sigma(n: u64, e: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("sigma is only defined for n >= 1".into()));
    }
    let exp: u32 = e
        .try_into()
        .map_err(|_| Error::Domain(format!("sigma exponent {e} is out of range")))?;
    let mut sum = BigUint::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            sum += BigUint::from(d).pow(exp);
            if d != n / d {
                sum += BigUint::from(n / d).pow(exp);
            }
        }
        d += 1;
    }
    Ok(sum)
}

fn check_eisenstein_args(k: u64, precision: usize) -> Result<()> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::Domain(format!("Eisenstein weight {k} must be even and >= 2")));
    }
    if precision == 0 {
        return Err(Error::Domain("Eisenstein precision must be >= 1".into()));
    }
    Ok(())
}

/// G_k = -B_k/(2k) + sum_{n>=1} sigma_{k-1}(n) q^n, tagged with weight k.
pub fn eisenstein_g(k: u64, precision: usize) -> Result<QSeries> {
    check_eisenstein_args(k, precision)?;
    let mut coeffs = Vec::with_capacity(precision);
    coeffs.push(-bernoulli(k) / BigRational::from_integer(BigInt::from(2 * k)));
    for n in 1..precision as u64 {
        coeffs.push(Rational::from_integer(sigma(n, k - 1)?.into()));
    }
    QSeries::new(coeffs, Some(k))
}

/// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n; exactly (-2k/B_k) * G_k.
pub fn eisenstein_e(k: u64, precision: usize) -> Result<QSeries> {
    let g = eisenstein_g(k, precision)?;
    let factor = -BigRational::from_integer(BigInt::from(2 * k)) / bernoulli(k);
    Ok(g.scale(&factor))
}

/// The normalized weight-12 cusp form (E_4^3 - E_6^2) / 1728.
///
/// Deriving it from E_4 and E_6 makes the expansion a self-test: the quotient
/// must come out integral, which is asserted.
pub fn delta_series(precision: usize) -> Result<QSeries> {
    if precision < 2 {
        return Err(Error::Domain("Delta precision must be >= 2".into()));
    }
    let e4 = eisenstein_e(4, precision)?;
    let e6 = eisenstein_e(6, precision)?;
    let diff = linear_combine(
        &rat_int(1),
        &series_pow(&e4, 3),
        &rat_int(-1),
        &series_mul(&e6, &e6),
    );
    let delta = diff.scale(&Rational::new(BigInt::one(), BigInt::from(1728)));
    for (n, c) in delta.coeffs().iter().enumerate() {
        assert!(
            c.is_integer(),
            "(E_4^3 - E_6^2)/1728 must have integer coefficients, q^{n} is {c}"
        );
    }
    delta.retag(Some(12))
}

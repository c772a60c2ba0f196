//! Exact relations tying products of Eisenstein series to the derivative of
//! G_{2k-2}.
//!
//! For 1 <= m <= 2k-3 and the complementary index mt = 2k-2-m, the identity
//!
//!   c(k, m) G_{2k} = (1/24) d(G_{2k-2}) + F_m - H_m + F_mt
//!
//! holds over the rationals, where H_j = G_{j+1} G_{jt+1} for odd j (zero for
//! even j) and F_m is the binomial-weighted sum of H_j over odd j from 3 to m.
//! Everything here is computed over exact rationals; no reduction happens
//! inside the check.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::One;

use crate::eisenstein::eisenstein_g;
use crate::error::{Error, Result};
use crate::operators::{ramanujan_serre, WeightedSeries};
use crate::series::{linear_combine, rat_int, series_mul, QSeries, Rational};

/// Validated parameter pair (k, m) with 1 <= m <= 2k-3.
#[derive(Clone, Copy, Debug)]
pub struct IdentityParams {
    k: u64,
    m: u64,
}

impl IdentityParams {
    pub fn new(k: u64, m: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::Domain(format!("k = {k} must be >= 2")));
        }
        if m < 1 || m > 2 * k - 3 {
            return Err(Error::Domain(format!("m = {m} must satisfy 1 <= m <= 2k-3 = {}", 2 * k - 3)));
        }
        Ok(IdentityParams { k, m })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// The complementary index 2k - 2 - m (same parity as m).
    pub fn m_tilde(&self) -> u64 {
        2 * self.k - 2 - self.m
    }
}

fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// c(k, m) = k / ((m+1)(mt+1)) + (-1)^m m! mt! / (2 (2k-1)!), exactly.
pub fn identity_coefficient(params: IdentityParams) -> Rational {
    let k = params.k();
    let m = params.m();
    let mt = params.m_tilde();
    let first = Rational::new(BigInt::from(k), BigInt::from((m + 1) * (mt + 1)));
    let num = BigInt::from(factorial(m) * factorial(mt));
    let den = BigInt::from(2u32) * BigInt::from(factorial(2 * k - 1));
    let second = Rational::new(num, den);
    if m % 2 == 0 {
        first + second
    } else {
        first - second
    }
}

/// H_j: zero for even j, and G_{j+1} G_{jt+1} for odd j with jt = 2k-2-j.
pub fn paired_product(j: u64, k: u64, precision: usize) -> Result<QSeries> {
    let params = IdentityParams::new(k, j)?;
    if j % 2 == 0 {
        return Ok(QSeries::zero(precision));
    }
    let jt = params.m_tilde();
    Ok(series_mul(&eisenstein_g(j + 1, precision)?, &eisenstein_g(jt + 1, precision)?))
}

/// F_m = sum over odd j from 3 to m of C(m, j) H_j; an empty sum is zero.
pub fn weighted_product_sum(m: u64, k: u64, precision: usize) -> Result<QSeries> {
    IdentityParams::new(k, m)?;
    let mut acc = QSeries::zero(precision);
    let mut j = 3;
    while j <= m {
        let coeff = Rational::from_integer(binomial(BigInt::from(m), BigInt::from(j)));
        acc = linear_combine(&rat_int(1), &acc, &coeff, &paired_product(j, k, precision)?);
        j += 2;
    }
    Ok(acc)
}

/// The three right-hand terms: (1/24) d(G_{2k-2}), F_m - H_m, and F_mt.
pub fn identity_terms(k: u64, m: u64, precision: usize) -> Result<(QSeries, QSeries, QSeries)> {
    if k < 3 {
        return Err(Error::Domain(format!("k = {k} must be >= 3 so that G_2k-2 is modular")));
    }
    let params = IdentityParams::new(k, m)?;
    let g = WeightedSeries::from_tagged(eisenstein_g(2 * k - 2, precision)?)?;
    let a = ramanujan_serre(&g)?.scale(&Rational::new(BigInt::one(), BigInt::from(24)));
    let b = linear_combine(
        &rat_int(1),
        &weighted_product_sum(m, k, precision)?,
        &rat_int(-1),
        &paired_product(m, k, precision)?,
    );
    let c = weighted_product_sum(params.m_tilde(), k, precision)?;
    Ok((a, b, c))
}

/// True when the identity holds coefficient by coefficient to the given
/// precision.
pub fn identity_check(k: u64, m: u64, precision: usize) -> Result<bool> {
    Ok(identity_residual(k, m, precision)?.is_zero())
}

/// Left side minus right side; the zero series exactly when the identity
/// holds.
pub fn identity_residual(k: u64, m: u64, precision: usize) -> Result<QSeries> {
    let params = IdentityParams::new(k, m)?;
    let (a, b, c) = identity_terms(k, m, precision)?;
    let lhs = eisenstein_g(2 * k, precision)?.scale(&identity_coefficient(params));
    let rhs = linear_combine(&rat_int(1), &linear_combine(&rat_int(1), &a, &rat_int(1), &b), &rat_int(1), &c);
    Ok(linear_combine(&rat_int(1), &lhs, &rat_int(-1), &rhs))
}

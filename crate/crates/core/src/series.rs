//! Truncated q-expansions over the rationals and over Z/p^m.
//!
//! Every value is immutable after construction and every operation is a pure
//! function, so series may be shared freely across threads.  Binary operations
//! truncate to the minimum operand precision; nothing ever extends a series
//! with coefficients it does not know.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction, always in lowest terms with a positive
/// denominator (both guaranteed by the representation).
pub type Rational = BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand constructor for small integers as rationals.
pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// p-adic valuation of a nonzero rational; `None` for zero.
pub fn padic_valuation(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let bp = BigUint::from(p);
    let count = |mut n: BigUint| -> i64 {
        let mut v = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            v += 1;
        }
        v
    };
    let num = x.numer().magnitude().clone();
    let den = x.denom().magnitude().clone();
    Some(count(num) - count(den))
}

/// Deterministic trial-division primality test for the small moduli used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Inverse of `a` modulo `modulus`, if it exists.
pub fn mod_inverse(a: u64, modulus: u64) -> Option<u64> {
    let (mut r0, mut r1) = (modulus as i128, (a % modulus) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(modulus as i128) as u64)
}

fn checked_prime_power(p: u64, m: u32) -> Result<u64> {
    if !is_prime(p) || p < 5 {
        return Err(Error::Domain(format!("modulus base {p} must be a prime >= 5")));
    }
    if m < 1 {
        return Err(Error::Domain("modulus exponent must be >= 1".into()));
    }
    let mut acc: u64 = 1;
    for _ in 0..m {
        acc = acc
            .checked_mul(p)
            .ok_or_else(|| Error::Domain(format!("{p}^{m} overflows")))?;
    }
    Ok(acc)
}

fn check_weight(weight: Option<u64>) -> Result<()> {
    if let Some(w) = weight {
        if w % 2 != 0 {
            return Err(Error::Domain(format!("weight tag {w} must be even")));
        }
    }
    Ok(())
}

/// Truncated q-expansion with rational coefficients.
///
/// `precision` is the number of known coefficients: a series of precision N
/// stores the coefficients of q^0 .. q^{N-1}.  The weight tag is advisory
/// metadata; it is never an arithmetic constraint (the quasi-modular weight-2
/// series must flow through the same arithmetic as everything else).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
    weight: Option<u64>,
}

impl QSeries {
    pub fn new(coeffs: Vec<Rational>, weight: Option<u64>) -> Result<Self> {
        check_weight(weight)?;
        Ok(QSeries { coeffs, weight })
    }

    pub fn zero(precision: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); precision], weight: None }
    }

    pub fn one(precision: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); precision];
        if precision > 0 {
            coeffs[0] = Rational::one();
        }
        QSeries { coeffs, weight: None }
    }

    /// Convenience constructor from small integers, mainly for tests.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        QSeries { coeffs: coeffs.iter().map(|&c| rat_int(c)).collect(), weight: None }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn weight(&self) -> Option<u64> {
        self.weight
    }

    /// Same coefficients with a different weight tag.
    pub fn retag(mut self, weight: Option<u64>) -> Result<Self> {
        check_weight(weight)?;
        self.weight = weight;
        Ok(self)
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Coefficientwise comparison ignoring weight tags.
    pub fn eq_coeffs(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }

    pub fn truncate(&self, precision: usize) -> Self {
        QSeries {
            coeffs: self.coeffs[..precision.min(self.coeffs.len())].to_vec(),
            weight: self.weight,
        }
    }

    /// Scalar multiple; keeps the weight tag.
    pub fn scale(&self, c: &Rational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect(), weight: self.weight }
    }

    /// True when every coefficient is p-integral.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let bp = BigInt::from(p);
        self.coeffs.iter().all(|c| !(c.denom() % &bp).is_zero())
    }
}

/// a*f + b*g, truncated to the minimum operand precision.  The weight tag is
/// kept only when both operands carry the same tag.
pub fn linear_combine(a: &Rational, f: &QSeries, b: &Rational, g: &QSeries) -> QSeries {
    let prec = f.precision().min(g.precision());
    let coeffs = (0..prec).map(|n| a * &f.coeffs[n] + b * &g.coeffs[n]).collect();
    let weight = match (f.weight, g.weight) {
        (Some(u), Some(v)) if u == v => Some(u),
        _ => None,
    };
    QSeries { coeffs, weight }
}

/// Cauchy product truncated to the minimum operand precision.  Weight tags add
/// when both are present.
pub fn series_mul(f: &QSeries, g: &QSeries) -> QSeries {
    let prec = f.precision().min(g.precision());
    let mut coeffs = vec![Rational::zero(); prec];
    for i in 0..prec {
        if f.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..prec - i {
            if g.coeffs[j].is_zero() {
                continue;
            }
            coeffs[i + j] += &f.coeffs[i] * &g.coeffs[j];
        }
    }
    let weight = match (f.weight, g.weight) {
        (Some(u), Some(v)) => Some(u + v),
        _ => None,
    };
    QSeries { coeffs, weight }
}

/// f^e by binary exponentiation, truncated to the precision of f; f^0 = 1.
pub fn series_pow(f: &QSeries, e: u64) -> QSeries {
    let weight = f.weight.map(|w| w * e);
    let mut result = QSeries::one(f.precision());
    let mut base = f.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = series_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = series_mul(&base, &base);
        }
    }
    result.weight = weight;
    result
}

/// Multiplicative inverse to the precision of f, by the direct recurrence
/// g(n) = -(1/f(0)) * sum_{i=1..n} f(i) g(n-i).
///
/// Errors when the constant term is zero.
pub fn series_inverse(f: &QSeries) -> Result<QSeries> {
    let prec = f.precision();
    if prec == 0 {
        return Ok(QSeries::zero(0));
    }
    if f.coeffs[0].is_zero() {
        return Err(Error::NotInvertible("0".into()));
    }
    let inv0 = f.coeffs[0].recip();
    let mut coeffs = vec![Rational::zero(); prec];
    coeffs[0] = inv0.clone();
    for n in 1..prec {
        let mut sum = Rational::zero();
        for i in 1..=n {
            if !f.coeffs[i].is_zero() && !coeffs[n - i].is_zero() {
                sum += &f.coeffs[i] * &coeffs[n - i];
            }
        }
        coeffs[n] = -&inv0 * sum;
    }
    Ok(QSeries { coeffs, weight: None })
}

/// Reduce a rational series modulo p^m.  Every coefficient must be p-integral;
/// the first one that is not aborts the reduction.
pub fn reduce_mod(f: &QSeries, p: u64, m: u32) -> Result<ResidueSeries> {
    let modulus = checked_prime_power(p, m)?;
    let big_mod = BigInt::from(modulus);
    let mut coeffs = Vec::with_capacity(f.precision());
    for (n, c) in f.coeffs.iter().enumerate() {
        let den_mod = c.denom().mod_floor(&big_mod).to_u64().unwrap();
        let den_inv = mod_inverse(den_mod, modulus).ok_or(Error::NonPIntegral {
            power: n,
            p,
            coeff: c.to_string(),
        })?;
        let num_mod = c.numer().mod_floor(&big_mod).to_u64().unwrap();
        coeffs.push((num_mod as u128 * den_inv as u128 % modulus as u128) as u64);
    }
    Ok(ResidueSeries { p, m, modulus, coeffs, weight: f.weight })
}

/// Truncated q-expansion with coefficients in Z/p^m, stored as canonical
/// representatives in [0, p^m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSeries {
    p: u64,
    m: u32,
    modulus: u64,
    coeffs: Vec<u64>,
    weight: Option<u64>,
}

impl ResidueSeries {
    pub fn new(p: u64, m: u32, coeffs: Vec<u64>, weight: Option<u64>) -> Result<Self> {
        let modulus = checked_prime_power(p, m)?;
        check_weight(weight)?;
        let coeffs = coeffs.into_iter().map(|c| c % modulus).collect();
        Ok(ResidueSeries { p, m, modulus, coeffs, weight })
    }

    pub fn zero(p: u64, m: u32, precision: usize) -> Result<Self> {
        Self::new(p, m, vec![0; precision], None)
    }

    pub fn one(p: u64, m: u32, precision: usize) -> Result<Self> {
        let mut coeffs = vec![0; precision];
        if precision > 0 {
            coeffs[0] = 1;
        }
        Self::new(p, m, coeffs, None)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn weight(&self) -> Option<u64> {
        self.weight
    }

    pub fn retag(mut self, weight: Option<u64>) -> Result<Self> {
        check_weight(weight)?;
        self.weight = weight;
        Ok(self)
    }

    pub fn coeff(&self, n: usize) -> u64 {
        self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn eq_coeffs(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.coeffs == other.coeffs
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(precision);
        out
    }

    fn assert_same_modulus(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.assert_same_modulus(other)?;
        let prec = self.precision().min(other.precision());
        let coeffs = (0..prec)
            .map(|n| ((self.coeffs[n] as u128 + other.coeffs[n] as u128) % self.modulus as u128) as u64)
            .collect();
        Ok(ResidueSeries {
            p: self.p,
            m: self.m,
            modulus: self.modulus,
            coeffs,
            weight: match (self.weight, other.weight) {
                (Some(u), Some(v)) if u == v => Some(u),
                _ => None,
            },
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.assert_same_modulus(other)?;
        let prec = self.precision().min(other.precision());
        let md = self.modulus as u128;
        let coeffs = (0..prec)
            .map(|n| ((self.coeffs[n] as u128 + md - other.coeffs[n] as u128) % md) as u64)
            .collect();
        Ok(ResidueSeries {
            p: self.p,
            m: self.m,
            modulus: self.modulus,
            coeffs,
            weight: match (self.weight, other.weight) {
                (Some(u), Some(v)) if u == v => Some(u),
                _ => None,
            },
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.assert_same_modulus(other)?;
        let prec = self.precision().min(other.precision());
        let md = self.modulus as u128;
        let mut coeffs = vec![0u64; prec];
        for i in 0..prec {
            if self.coeffs[i] == 0 {
                continue;
            }
            let a = self.coeffs[i] as u128;
            for j in 0..prec - i {
                if other.coeffs[j] == 0 {
                    continue;
                }
                coeffs[i + j] = ((coeffs[i + j] as u128 + a * other.coeffs[j] as u128) % md) as u64;
            }
        }
        Ok(ResidueSeries {
            p: self.p,
            m: self.m,
            modulus: self.modulus,
            coeffs,
            weight: match (self.weight, other.weight) {
                (Some(u), Some(v)) => Some(u + v),
                _ => None,
            },
        })
    }

    pub fn pow(&self, e: u64) -> Self {
        let weight = self.weight.map(|w| w * e);
        let mut result = ResidueSeries::one(self.p, self.m, self.precision()).unwrap();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).unwrap();
            }
        }
        result.weight = weight;
        result
    }

    /// Multiply every coefficient by an integer scalar (reduced into the ring).
    pub fn scalar_mul(&self, c: i64) -> Self {
        let md = self.modulus as i128;
        let cr = (c as i128).rem_euclid(md) as u128;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&x| (x as u128 * cr % self.modulus as u128) as u64)
            .collect();
        ResidueSeries { p: self.p, m: self.m, modulus: self.modulus, coeffs, weight: self.weight }
    }

    /// Multiplicative inverse by the same recurrence as the rational variant.
    /// The constant term must be a unit, i.e. not divisible by p.
    pub fn inverse(&self) -> Result<Self> {
        let prec = self.precision();
        if prec == 0 {
            return ResidueSeries::zero(self.p, self.m, 0);
        }
        let inv0 = mod_inverse(self.coeffs[0], self.modulus)
            .ok_or_else(|| Error::NotInvertible(self.coeffs[0].to_string()))?;
        let md = self.modulus as u128;
        let mut coeffs = vec![0u64; prec];
        coeffs[0] = inv0;
        for n in 1..prec {
            let mut sum: u128 = 0;
            for i in 1..=n {
                sum = (sum + self.coeffs[i] as u128 * coeffs[n - i] as u128) % md;
            }
            coeffs[n] = ((md - inv0 as u128 * sum % md) % md) as u64;
        }
        Ok(ResidueSeries { p: self.p, m: self.m, modulus: self.modulus, coeffs, weight: None })
    }

    /// The same series modulo a smaller power of p.
    pub fn reduce_to(&self, m: u32) -> Result<Self> {
        if m > self.m {
            return Err(Error::Domain(format!(
                "cannot lift a series mod {}^{} to mod {}^{}",
                self.p, self.m, self.p, m
            )));
        }
        let modulus = checked_prime_power(self.p, m)?;
        Ok(ResidueSeries {
            p: self.p,
            m,
            modulus,
            coeffs: self.coeffs.iter().map(|&c| c % modulus).collect(),
            weight: self.weight,
        })
    }
}

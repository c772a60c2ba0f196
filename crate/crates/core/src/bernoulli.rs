//! Exact Bernoulli numbers via the defining recurrence, with a global memo
//! table.
//!
//! The recurrence sum_{j=0..m} C(m+1, j) B_j = 0 (seeded with B_0 = 1) is the
//! only computation path; every downstream congruence check demands exact
//! values.  The table only ever grows and access is serialized behind a mutex.

use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::{is_prime, Rational};

static TABLE: LazyLock<Mutex<Vec<Rational>>> = LazyLock::new(|| {
    Mutex::new(vec![Rational::one(), Rational::new(BigInt::from(-1), BigInt::from(2))])
});

/// Extend the memo table by one entry (the recurrence step for index m).
///
/// The inner sum is accumulated over a common denominator so that only one
/// rational normalization happens per new Bernoulli number.
fn extend(table: &mut Vec<Rational>) {
    let m = table.len();
    if m % 2 == 1 {
        // Odd index > 1: the recurrence sum telescopes to zero.
        table.push(Rational::zero());
        return;
    }
    let mut common_den = BigInt::one();
    for b in table.iter() {
        if !b.is_zero() {
            common_den = common_den.lcm(b.denom());
        }
    }
    // Binomial row C(m+1, j), built incrementally.
    let mut binom = BigInt::one();
    let mut sum = BigInt::zero();
    for (j, b) in table.iter().enumerate() {
        if !b.is_zero() {
            sum += &binom * b.numer() * (&common_den / b.denom());
        }
        binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
    }
    table.push(Rational::new(-sum, common_den * BigInt::from(m + 1)));
}

/// Exact B_k.  Results are memoized; recomputation never happens.
pub fn bernoulli(k: u64) -> Rational {
    let mut table = TABLE.lock().unwrap();
    while table.len() <= k as usize {
        extend(&mut table);
    }
    table[k as usize].clone()
}

/// Numerator of B_k (with sign).
pub fn bernoulli_numerator(k: u64) -> BigInt {
    bernoulli(k).numer().clone()
}

/// True when p divides the numerator of B_{k0}, i.e. (p, k0) is an irregular
/// pair.  Requires p prime >= 5 and even 2 <= k0 <= p-3.
pub fn is_irregular_pair(p: u64, k0: u64) -> Result<bool> {
    if !is_prime(p) || p < 5 {
        return Err(Error::Domain(format!("p = {p} must be a prime >= 5")));
    }
    if k0 % 2 != 0 || k0 < 2 || k0 > p - 3 {
        return Err(Error::Domain(format!(
            "k0 = {k0} must be even with 2 <= k0 <= p-3 = {}",
            p - 3
        )));
    }
    let numer = bernoulli_numerator(k0);
    Ok((numer.abs() % BigInt::from(p)).is_zero())
}

/// Product of the primes q with (q-1) | k; for even k this is exactly the
/// denominator of B_k.
pub fn clausen_von_staudt_denominator(k: u64) -> BigInt {
    let mut prod = BigInt::one();
    for q in 2..=(k + 1) {
        if is_prime(q) && k % (q - 1) == 0 {
            prod *= BigInt::from(q);
        }
    }
    prod
}

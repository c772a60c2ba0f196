//! Plain-text series format used by the cache and the CLI dump.
//!
//! Header line: `weight W prec N mod M` where `W` is the even weight tag or
//! `-` when the series carries none, and `M` is the modulus p^m (0 for a
//! rational series).  Then one line per coefficient, `n num/den` for rational
//! series or `n r` for residue series.  Round-trips are bit-exact.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::series::{QSeries, Rational, ResidueSeries};

/// A series of either coefficient domain, as read back from text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnySeries {
    Rational(QSeries),
    Residue(ResidueSeries),
}

fn weight_field(weight: Option<u64>) -> String {
    match weight {
        Some(w) => w.to_string(),
        None => "-".into(),
    }
}

pub fn write_qseries(f: &QSeries) -> String {
    let mut out = format!("weight {} prec {} mod 0\n", weight_field(f.weight()), f.precision());
    for (n, c) in f.coeffs().iter().enumerate() {
        out.push_str(&format!("{} {}/{}\n", n, c.numer(), c.denom()));
    }
    out
}

pub fn write_residue(f: &ResidueSeries) -> String {
    let mut out =
        format!("weight {} prec {} mod {}\n", weight_field(f.weight()), f.precision(), f.modulus());
    for (n, &c) in f.coeffs().iter().enumerate() {
        out.push_str(&format!("{} {}\n", n, c));
    }
    out
}

pub fn write_series(f: &AnySeries) -> String {
    match f {
        AnySeries::Rational(q) => write_qseries(q),
        AnySeries::Residue(r) => write_residue(r),
    }
}

/// Split a prime-power modulus into (p, m).
fn factor_prime_power(modulus: u64) -> Result<(u64, u32)> {
    if modulus < 2 {
        return Err(Error::Parse(format!("bad modulus {modulus}")));
    }
    let mut p = 2;
    while p * p <= modulus && modulus % p != 0 {
        p += 1;
    }
    if p * p > modulus {
        p = modulus;
    }
    let mut m = 0;
    let mut rest = modulus;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    if rest != 1 {
        return Err(Error::Parse(format!("modulus {modulus} is not a prime power")));
    }
    Ok((p, m))
}

fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational coefficient {text:?}"));
    match text.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num).map_err(|_| bad())?;
            let den = BigInt::from_str(den).map_err(|_| bad())?;
            if den <= BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
        None => {
            let num = BigInt::from_str(text).map_err(|_| bad())?;
            Ok(Rational::new(num, BigInt::one()))
        }
    }
}

pub fn parse_series(text: &str) -> Result<AnySeries> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty series text".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [kw_w, w, kw_p, prec, kw_m, modulus] = fields.as_slice() else {
        return Err(Error::Parse(format!("bad header {header:?}")));
    };
    if *kw_w != "weight" || *kw_p != "prec" || *kw_m != "mod" {
        return Err(Error::Parse(format!("bad header {header:?}")));
    }
    let weight = if *w == "-" {
        None
    } else {
        Some(w.parse::<u64>().map_err(|_| Error::Parse(format!("bad weight {w:?}")))?)
    };
    let prec: usize = prec.parse().map_err(|_| Error::Parse(format!("bad precision {prec:?}")))?;
    let modulus: u64 =
        modulus.parse().map_err(|_| Error::Parse(format!("bad modulus {modulus:?}")))?;

    let mut body = Vec::with_capacity(prec);
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (idx, value) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::Parse(format!("bad coefficient line {line:?}")))?;
        let idx: usize =
            idx.parse().map_err(|_| Error::Parse(format!("bad coefficient index {idx:?}")))?;
        if idx != body.len() {
            return Err(Error::Parse(format!(
                "coefficient {} missing, found index {idx}",
                body.len()
            )));
        }
        body.push(value.trim().to_string());
    }
    if body.len() != prec {
        return Err(Error::Parse(format!("expected {} coefficients, found {}", prec, body.len())));
    }

    if modulus == 0 {
        let coeffs = body.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>()?;
        Ok(AnySeries::Rational(QSeries::new(coeffs, weight)?))
    } else {
        let (p, m) = factor_prime_power(modulus)?;
        let coeffs = body
            .iter()
            .map(|v| {
                let r: u64 =
                    v.parse().map_err(|_| Error::Parse(format!("bad residue {v:?}")))?;
                if r >= modulus {
                    return Err(Error::Parse(format!("residue {r} out of range [0, {modulus})")));
                }
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AnySeries::Residue(ResidueSeries::new(p, m, coeffs, weight)?))
    }
}

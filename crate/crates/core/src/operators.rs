//! The theta operator and the weight-raising derivative 12*theta(f) - k*E_2*f.

use crate::basis::{solve_mod_pm, sturm_precision, CongruenceWitness};
use crate::eisenstein::eisenstein_e;
use crate::error::{Error, Result};
use crate::series::{linear_combine, rat_int, reduce_mod, series_mul, QSeries};

/// A q-expansion together with the weight it is declared to live in.  When the
/// series already carries a weight tag the declaration must agree with it.
#[derive(Clone, Debug)]
pub struct WeightedSeries {
    series: QSeries,
    weight: u64,
}

impl WeightedSeries {
    pub fn new(series: QSeries, weight: u64) -> Result<Self> {
        if weight % 2 != 0 {
            return Err(Error::Domain(format!("declared weight {weight} must be even")));
        }
        if let Some(tag) = series.weight() {
            if tag != weight {
                return Err(Error::Domain(format!(
                    "declared weight {weight} disagrees with series tag {tag}"
                )));
            }
        }
        Ok(WeightedSeries { series, weight })
    }

    /// Adopt the weight tag already carried by the series.
    pub fn from_tagged(series: QSeries) -> Result<Self> {
        let weight = series
            .weight()
            .ok_or_else(|| Error::Domain("series carries no weight tag".into()))?;
        Ok(WeightedSeries { series, weight })
    }

    pub fn series(&self) -> &QSeries {
        &self.series
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }
}

/// theta f = sum n a(n) q^n.  The weight tag is dropped: theta does not
/// preserve modularity, and the type should say so.
pub fn theta(f: &QSeries) -> QSeries {
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| a * rat_int(n as i64))
        .collect();
    QSeries::new(coeffs, None).expect("untagged series is always valid")
}

/// The Ramanujan-Serre derivative 12*theta(f) - k*E_2*f of a declared-weight
/// series, tagged with weight k + 2.
pub fn ramanujan_serre(f: &WeightedSeries) -> Result<QSeries> {
    let prec = f.series.precision();
    let e2 = eisenstein_e(2, prec)?;
    let out = linear_combine(
        &rat_int(12),
        &theta(&f.series),
        &rat_int(-(f.weight as i64)),
        &series_mul(&e2, &f.series),
    );
    out.retag(Some(f.weight + 2))
}

/// Realize theta(f) mod p as a modular form of weight k + p + 1: reduce
/// theta(f) modulo p and solve it against the monomial basis.  A failing
/// verdict would falsify the classical lift statement, so callers treat it as
/// a hard error.
pub fn theta_lift_mod_p(f: &WeightedSeries, p: u64) -> Result<CongruenceWitness> {
    let lift_weight = f.weight + p + 1;
    if f.series.precision() < sturm_precision(lift_weight) {
        return Err(Error::Domain(format!(
            "precision {} is too small to certify a weight-{lift_weight} lift (need {})",
            f.series.precision(),
            sturm_precision(lift_weight)
        )));
    }
    let target = reduce_mod(&theta(&f.series), p, 1)?;
    solve_mod_pm(&target, lift_weight)
}

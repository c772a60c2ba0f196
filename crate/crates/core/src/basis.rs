//! Monomial bases of the level-one modular form spaces, the precision policy
//! for certifying congruences, and linear solving over Z/p^m.
//!
//! The space of weight-w forms is spanned by the monomials E4^a E6^b Delta^c
//! with 4a + 6b + 12c = w and b in {0, 1}.  Ordered by ascending Delta-order c
//! the expansion matrix is lower triangular with unit diagonal, so systems
//! against it reduce deterministically.

use serde::Serialize;

use crate::eisenstein::{delta_series, eisenstein_e};
use crate::error::{Error, Result};
use crate::series::{mod_inverse, reduce_mod, ResidueSeries};

/// Exponent triple (a, b, c) for the monomial E4^a E6^b Delta^c.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl BasisElement {
    pub fn weight(&self) -> u64 {
        4 * self.a as u64 + 6 * self.b as u64 + 12 * self.c as u64
    }
}

/// Dimension of the weight-w space (w even, w >= 0).
pub fn dim_mw(w: u64) -> u64 {
    if w % 12 == 2 {
        w / 12
    } else {
        w / 12 + 1
    }
}

/// The monomial basis of weight w, ordered by ascending Delta exponent.
pub fn basis_exponents(w: u64) -> Result<Vec<BasisElement>> {
    if w % 2 != 0 {
        return Err(Error::Domain(format!("weight {w} must be even")));
    }
    let b = (w / 2 % 2) as u32;
    let dim = dim_mw(w);
    let mut out = Vec::with_capacity(dim as usize);
    for c in 0..dim {
        let rest = w - 6 * b as u64 - 12 * c;
        out.push(BasisElement { a: (rest / 4) as u32, b, c: c as u32 });
    }
    Ok(out)
}

/// Number of initial q-coefficients that certify an identity or congruence in
/// weight w: floor(w/12) + 1 plus a safety margin.
pub fn sturm_precision_with_margin(w: u64, margin: usize) -> usize {
    (w / 12) as usize + 1 + margin
}

/// The default policy margin.
pub const DEFAULT_MARGIN: usize = 8;

pub fn sturm_precision(w: u64) -> usize {
    sturm_precision_with_margin(w, DEFAULT_MARGIN)
}

/// q-expansions of the weight-w monomial basis modulo p^m, in basis order.
pub fn basis_matrix(w: u64, p: u64, m: u32, precision: usize) -> Result<Vec<ResidueSeries>> {
    let elements = basis_exponents(w)?;
    let e4 = reduce_mod(&eisenstein_e(4, precision)?, p, m)?;
    let e6 = reduce_mod(&eisenstein_e(6, precision)?, p, m)?;
    let delta = reduce_mod(&delta_series(precision.max(2))?.truncate(precision), p, m)?;
    elements
        .iter()
        .map(|el| {
            let mut f = e4.pow(el.a as u64);
            if el.b > 0 {
                f = f.mul(&e6.pow(el.b as u64))?;
            }
            if el.c > 0 {
                f = f.mul(&delta.pow(el.c as u64))?;
            }
            f.retag(Some(w))
        })
        .collect()
}

/// Expansion of a single monomial modulo p^m.
pub fn monomial_mod(el: BasisElement, p: u64, m: u32, precision: usize) -> Result<ResidueSeries> {
    let e4 = reduce_mod(&eisenstein_e(4, precision)?, p, m)?;
    let mut f = e4.pow(el.a as u64);
    if el.b > 0 {
        let e6 = reduce_mod(&eisenstein_e(6, precision)?, p, m)?;
        f = f.mul(&e6.pow(el.b as u64))?;
    }
    if el.c > 0 {
        let delta = reduce_mod(&delta_series(precision.max(2))?.truncate(precision), p, m)?;
        f = f.mul(&delta.pow(el.c as u64))?;
    }
    f.retag(Some(el.weight()))
}

/// Linear combination sum r_i * monomial_i modulo p^m, at the given precision.
pub fn substitute(
    coefficients: &[(BasisElement, u64)],
    w: u64,
    p: u64,
    m: u32,
    precision: usize,
) -> Result<ResidueSeries> {
    let elements = basis_exponents(w)?;
    let mut acc = ResidueSeries::zero(p, m, precision)?;
    for (el, r) in coefficients {
        if !elements.contains(el) {
            return Err(Error::Domain(format!("{el:?} is not a weight-{w} basis element")));
        }
        acc = acc.add(&monomial_mod(*el, p, m, precision)?.scalar_mul(*r as i64))?;
    }
    acc.retag(Some(w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A solved coefficient vector over Z/p^m together with everything needed to
/// audit it: the kernel rank seen by the reduction, the precision at which the
/// substitution was re-checked, and the verdict.
#[derive(Clone, Debug)]
pub struct CongruenceWitness {
    pub weight: u64,
    pub p: u64,
    pub m: u32,
    pub coefficients: Vec<(BasisElement, u64)>,
    pub kernel_rank: usize,
    pub checked_precision: usize,
    pub verdict: Verdict,
    /// q-power of the first failing coefficient, when the verdict is fail.
    pub first_failure: Option<usize>,
}

impl CongruenceWitness {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Witness coefficients reduced from Z/p^m to Z/p.
    pub fn coefficients_mod_p(&self) -> Vec<(BasisElement, u64)> {
        self.coefficients.iter().map(|&(el, r)| (el, r % self.p)).collect()
    }
}

fn valuation_u64(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x != 0 && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Solve sum x_i * basis_i = target over Z/p^m.
///
/// Row reduction picks unit pivots first and falls back to p-divisible pivots
/// (smallest p-valuation wins, then lowest q-power), which keeps the
/// reduction deterministic over the ring.  Whatever the elimination produced,
/// the returned verdict comes from substituting the solution back into the
/// full system at the complete target precision.
pub fn solve_mod_pm(target: &ResidueSeries, w: u64) -> Result<CongruenceWitness> {
    let p = target.p();
    let m = target.m();
    let modulus = target.modulus();
    let rows = target.precision();
    if rows < (w / 12) as usize + 1 {
        return Err(Error::Domain(format!(
            "target precision {rows} is below the weight-{w} certification bound {}",
            w / 12 + 1
        )));
    }
    let elements = basis_exponents(w)?;
    let matrix = basis_matrix(w, p, m, rows)?;
    let dim = elements.len();

    // Augmented working copy: rows indexed by q-power, dim coefficient
    // columns plus the target column.
    let mut work: Vec<Vec<u64>> = (0..rows)
        .map(|n| {
            let mut row: Vec<u64> = matrix.iter().map(|col| col.coeff(n)).collect();
            row.push(target.coeff(n));
            row
        })
        .collect();

    let md = modulus as u128;
    let sub_row = |row: &mut Vec<u64>, pivot: &[u64], factor: u64| {
        for (x, &pv) in row.iter_mut().zip(pivot) {
            *x = ((*x as u128 + md - factor as u128 * pv as u128 % md) % md) as u64;
        }
    };

    let mut pivot_of_col: Vec<Option<(usize, u32)>> = vec![None; dim];
    let mut used = vec![false; rows];
    let mut kernel_rank = 0usize;

    for col in 0..dim {
        // Best pivot: minimal p-valuation, then lowest q-power.
        let mut best: Option<(u32, usize)> = None;
        for (r, row) in work.iter().enumerate() {
            if used[r] || row[col] == 0 {
                continue;
            }
            let v = valuation_u64(row[col], p);
            if best.map_or(true, |(bv, _)| v < bv) {
                best = Some((v, r));
            }
        }
        let Some((v, r)) = best else {
            // Free column: canonical solution sets it to zero.
            kernel_rank += 1;
            continue;
        };
        if v > 0 {
            // A p-divisible pivot pins its variable only modulo p^{m-v}.
            kernel_rank += 1;
        }
        let pv = p.pow(v);
        let unit = work[r][col] / pv;
        let unit_inv = mod_inverse(unit, modulus).expect("unit part is invertible");
        for x in work[r].iter_mut() {
            *x = (*x as u128 * unit_inv as u128 % md) as u64;
        }
        let pivot_row = work[r].clone();
        for (r2, row) in work.iter_mut().enumerate() {
            if r2 == r || row[col] == 0 {
                continue;
            }
            if valuation_u64(row[col], p) >= v {
                let factor = row[col] / pv;
                sub_row(row, &pivot_row, factor);
            }
        }
        used[r] = true;
        pivot_of_col[col] = Some((r, v));
    }

    // Rows without pivots must have become trivial; a nonzero target entry
    // there is the first inconsistency.
    let mut first_failure: Option<usize> = None;
    for (r, row) in work.iter().enumerate() {
        if !used[r] && row[dim] != 0 {
            first_failure = Some(r);
            break;
        }
    }

    // Back-substitution.  Pivot rows may still reference other pivot columns
    // when valuations blocked elimination, so resolve in dependency order.
    let mut solution = vec![0u64; dim];
    if first_failure.is_none() {
        let mut known = vec![false; dim];
        for (col, pivot) in pivot_of_col.iter().enumerate() {
            if pivot.is_none() {
                known[col] = true; // free column, canonical zero
            }
        }
        loop {
            let mut progressed = false;
            let mut all_known = true;
            for col in 0..dim {
                if known[col] {
                    continue;
                }
                all_known = false;
                let (r, v) = pivot_of_col[col].unwrap();
                let ready = (0..dim).all(|c| c == col || work[r][c] == 0 || known[c]);
                if !ready {
                    continue;
                }
                let mut rhs = work[r][dim] as u128;
                for c in 0..dim {
                    if c != col && work[r][c] != 0 {
                        rhs = (rhs + md - work[r][c] as u128 * solution[c] as u128 % md) % md;
                    }
                }
                let pv = p.pow(v) as u128;
                if rhs % pv != 0 {
                    first_failure = Some(r);
                } else {
                    solution[col] = (rhs / pv) as u64;
                }
                known[col] = true;
                progressed = true;
            }
            if all_known || first_failure.is_some() {
                break;
            }
            assert!(progressed, "cyclic pivot dependency in Z/p^m reduction");
        }
    }

    // Substitution re-check at full target precision decides the verdict.
    if first_failure.is_none() {
        'outer: for n in 0..rows {
            let mut acc: u128 = 0;
            for (x, col) in solution.iter().zip(&matrix) {
                acc = (acc + *x as u128 * col.coeff(n) as u128) % md;
            }
            if acc as u64 != target.coeff(n) {
                first_failure = Some(n);
                break 'outer;
            }
        }
    }

    Ok(CongruenceWitness {
        weight: w,
        p,
        m,
        coefficients: elements.into_iter().zip(solution).collect(),
        kernel_rank,
        checked_precision: rows,
        verdict: if first_failure.is_none() { Verdict::Pass } else { Verdict::Fail },
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::eisenstein_g;
    use crate::series::reduce_mod;

    #[test]
    fn weight_68_exponents() {
        let got = basis_exponents(68).unwrap();
        let want = [(17, 0, 0), (14, 0, 1), (11, 0, 2), (8, 0, 3), (5, 0, 4), (2, 0, 5)];
        assert_eq!(got.len(), want.len());
        for (el, (a, b, c)) in got.iter().zip(want) {
            assert_eq!((el.a, el.b, el.c), (a, b, c));
            assert_eq!(el.weight(), 68);
        }
    }

    #[test]
    fn degenerate_weights() {
        assert!(basis_exponents(2).unwrap().is_empty());
        let w14 = basis_exponents(14).unwrap();
        assert_eq!(w14.len(), 1);
        assert_eq!((w14[0].a, w14[0].b, w14[0].c), (2, 1, 0));
        let w0 = basis_exponents(0).unwrap();
        assert_eq!((w0[0].a, w0[0].b, w0[0].c), (0, 0, 0));
        assert!(basis_exponents(7).is_err());
    }

    #[test]
    fn sturm_policy_formula() {
        assert_eq!(sturm_precision(12), 10);
        assert_eq!(sturm_precision(284), 32);
        assert_eq!(sturm_precision(0), 9);
        assert_eq!(sturm_precision_with_margin(12, 0), 2);
    }

    #[test]
    fn basis_matrix_is_unit_triangular() {
        for w in (0..=120u64).step_by(2) {
            let matrix = basis_matrix(w, 5, 2, dim_mw(w) as usize + 2).unwrap();
            for (c, col) in matrix.iter().enumerate() {
                for n in 0..c {
                    assert_eq!(col.coeff(n), 0, "w={w} column {c} power {n}");
                }
                assert_eq!(col.coeff(c), 1, "w={w} column {c} diagonal");
            }
        }
    }

    #[test]
    fn solve_zero_target_passes_with_zero_witness() {
        let target = ResidueSeries::zero(7, 2, 12).unwrap();
        let witness = solve_mod_pm(&target, 12).unwrap();
        assert!(witness.passed());
        assert!(witness.coefficients.iter().all(|&(_, r)| r == 0));
        assert_eq!(witness.kernel_rank, 0);
    }

    #[test]
    fn solve_weight_12_paper_combination() {
        // E_2 E_10 - 11 E_12^11 mod 121 solves to -10 E_4^3 + 15 Delta.
        let prec = sturm_precision(2 + 2 * 11 * 10);
        let e2 = reduce_mod(&crate::eisenstein::eisenstein_e(2, prec).unwrap(), 11, 2).unwrap();
        let e10 = reduce_mod(&crate::eisenstein::eisenstein_e(10, prec).unwrap(), 11, 2).unwrap();
        let e12 = reduce_mod(&crate::eisenstein::eisenstein_e(12, prec).unwrap(), 11, 2).unwrap();
        let target = e2.mul(&e10).unwrap().sub(&e12.pow(11).scalar_mul(11)).unwrap();
        let witness = solve_mod_pm(&target, 12).unwrap();
        assert!(witness.passed());
        let values: Vec<u64> = witness.coefficients.iter().map(|&(_, r)| r).collect();
        assert_eq!(values, vec![111, 15]); // 111 = -10 mod 121
        assert_eq!(witness.kernel_rank, 0);
    }

    #[test]
    fn solver_is_deterministic() {
        let prec = sturm_precision(16);
        let target = reduce_mod(&eisenstein_g(16, prec).unwrap(), 7, 2).unwrap();
        let a = solve_mod_pm(&target, 16).unwrap();
        let b = solve_mod_pm(&target, 16).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert_eq!(a.kernel_rank, b.kernel_rank);
        assert!(a.passed());
    }

    #[test]
    fn solve_reports_first_failing_power() {
        // E_6 is not a weight-4 form; the solve matches the constant term,
        // then hits the first inconsistency at q^1.
        let prec = sturm_precision(6);
        let e6 = crate::eisenstein::eisenstein_e(6, prec).unwrap();
        let target = reduce_mod(&e6, 5, 2).unwrap();
        let witness = solve_mod_pm(&target, 4).unwrap();
        assert!(!witness.passed());
        assert_eq!(witness.first_failure, Some(1));
    }

    #[test]
    fn kernel_rank_zero_below_first_relation_weight() {
        // Over Z/p with w < p - 1 + 12 no relation can appear.
        for (p, w) in [(7u64, 12u64), (7, 16), (11, 20), (13, 22)] {
            assert!(w < p - 1 + 12);
            let prec = sturm_precision(w);
            let target = ResidueSeries::zero(p, 1, prec).unwrap();
            let witness = solve_mod_pm(&target, w).unwrap();
            assert_eq!(witness.kernel_rank, 0, "p={p} w={w}");
        }
    }

    #[test]
    fn substitute_rejects_foreign_elements() {
        let el = BasisElement { a: 1, b: 0, c: 0 };
        assert!(substitute(&[(el, 1)], 12, 5, 1, 10).is_err());
    }
}

//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every congruence here is exact; "precision" is the number of q-coefficients
//! compared.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Signed;

use eiscong_core::basis::{
    basis_matrix, dim_mw, solve_mod_pm, substitute, sturm_precision, BasisElement,
};
use eiscong_core::bernoulli::{bernoulli, clausen_von_staudt_denominator, is_irregular_pair};
use eiscong_core::eisenstein::{delta_series, eisenstein_e, eisenstein_g};
use eiscong_core::operators::{ramanujan_serre, theta, WeightedSeries};
use eiscong_core::relations::identity_check;
use eiscong_core::series::{
    linear_combine, padic_valuation, rat, rat_int, reduce_mod, series_inverse, series_mul,
    series_pow, QSeries, ResidueSeries,
};
use eiscong_core::verify::{
    verify_classical, verify_theorem1, verify_theorem1_batch, verify_theorem2, verify_theorem3,
    ClassicalCheck, VerifyConfig,
};

struct Criterion {
    name: &'static str,
    started: Instant,
    budget: Duration,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str, budget_secs: u64) -> Self {
        Criterion {
            name,
            started: Instant::now(),
            budget: Duration::from_secs(budget_secs),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn conclude(mut self) {
        let elapsed = self.started.elapsed();
        if elapsed > self.budget {
            self.failures.push(format!(
                "runtime {elapsed:?} exceeded the {:?} budget",
                self.budget
            ));
        }
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} ({} ms)", self.name, elapsed.as_millis());
        assert!(
            self.failures.is_empty(),
            "criterion {} failed:\n  {}",
            self.name,
            self.failures.join("\n  ")
        );
    }
}

fn el(a: u32, b: u32, c: u32) -> BasisElement {
    BasisElement { a, b, c }
}

fn head(series: &ResidueSeries, n: usize) -> Vec<u64> {
    series.coeffs()[..n].to_vec()
}

/// Congruence target f / E_{p-1}^n reduced into Z/p^2.
fn quotient(f: &QSeries, p: u64, n: u64, precision: usize) -> ResidueSeries {
    let reduced = reduce_mod(f, p, 2).unwrap();
    let epm1 = reduce_mod(&eisenstein_e(p - 1, precision).unwrap(), p, 2).unwrap();
    reduced.mul(&epm1.pow(n).inverse().unwrap()).unwrap()
}

#[test]
fn criterion_1_irregular_pair_witness() {
    let mut c = Criterion::new("1 (witness for the irregular pair at p=37)", 10);
    let (p, k0, n) = (37u64, 32u64, 6u64);
    let precision = sturm_precision(k0 + (n + 1) * (p - 1));
    c.check(precision == 32, format!("policy precision {precision}, expected 32"));

    // The displayed expansion belongs to the weight-284 series itself.
    let g284 = eisenstein_g(284, precision).unwrap();
    c.check(
        head(&reduce_mod(&g284, p, 2).unwrap(), 4) == [0, 1, 652, 68],
        "G_284 mod 37^2 must begin 0, 1, 652, 68",
    );

    // Substituting the published coefficients reproduces the quotient target.
    let target = quotient(&g284, p, n, precision);
    let combo = [
        (el(14, 0, 1), 1),
        (el(11, 0, 2), 498),
        (el(8, 0, 3), 1310),
        (el(5, 0, 4), 240),
        (el(2, 0, 5), 415),
    ];
    let substituted = substitute(&combo, 68, p, 2, precision).unwrap();
    c.check(substituted.eq_coeffs(&target), "published coefficients must solve the congruence");

    // The generic pipeline agrees.
    let report = verify_theorem1(p, k0, n, &VerifyConfig::default()).unwrap();
    c.check(report.passed(), "verify_theorem1(37, 32, 6) must pass");
    c.conclude();
}

#[test]
fn criterion_2_regular_pair_e_variant() {
    let mut c = Criterion::new("2 (E-variant witness for the regular pair at p=37)", 10);
    let (p, k0, n) = (37u64, 2u64, 6u64);
    let precision = sturm_precision(k0 + (n + 1) * (p - 1));

    let e254 = eisenstein_e(254, precision).unwrap();
    let reduced = reduce_mod(&e254, p, 2).unwrap();
    c.check(head(&reduced, 3) == [1, 272, 705], "E_254 mod 37^2 must begin 1, 272, 705");

    // E_36^6 * (E_4^8 E_6 + 669 E_4^5 E_6 Delta + 162 E_4^2 E_6 Delta^2) = E_254.
    let combo = [(el(8, 1, 0), 1), (el(5, 1, 1), 669), (el(2, 1, 2), 162)];
    let witness_form = substitute(&combo, 38, p, 2, precision).unwrap();
    let e36_pow = reduce_mod(&eisenstein_e(36, precision).unwrap(), p, 2).unwrap().pow(6);
    c.check(
        e36_pow.mul(&witness_form).unwrap().eq_coeffs(&reduced),
        "published combination times E_36^6 must reproduce E_254 mod 37^2",
    );

    let report = verify_theorem1(p, k0, n, &VerifyConfig::default()).unwrap();
    c.check(report.passed(), "verify_theorem1(37, 2, 6) must pass");
    c.conclude();
}

#[test]
fn criterion_3_e2_descriptions() {
    // Published weight-(p+1) combinations for f = the derivative of E_{p-1}.
    let cases: [(u64, Vec<(BasisElement, i64)>); 3] = [
        (11, vec![(el(3, 0, 0), -10), (el(0, 0, 1), 15)]),
        (13, vec![(el(2, 1, 0), -12)]),
        (17, vec![(el(3, 1, 0), -16), (el(0, 1, 1), 219)]),
    ];
    for (p, combo) in cases {
        let mut c = Criterion::new(match p {
            11 => "3 (E_2 description, p=11)",
            13 => "3 (E_2 description, p=13)",
            _ => "3 (E_2 description, p=17)",
        }, 5);
        let precision = sturm_precision(2 + 2 * p * (p - 1));
        let modulus = (p * p) as i64;
        let combo: Vec<(BasisElement, u64)> =
            combo.iter().map(|&(e, r)| (e, r.rem_euclid(modulus) as u64)).collect();

        // The displayed congruence E_2 E_{p-1} = combo + p E_{p+1}^p mod p^2.
        let e2 = reduce_mod(&eisenstein_e(2, precision).unwrap(), p, 2).unwrap();
        let epm1 = reduce_mod(&eisenstein_e(p - 1, precision).unwrap(), p, 2).unwrap();
        let epp1 = reduce_mod(&eisenstein_e(p + 1, precision).unwrap(), p, 2).unwrap();
        let substituted = substitute(&combo, p + 1, p, 2, precision).unwrap();
        let rhs = substituted.add(&epp1.pow(p).scalar_mul(p as i64)).unwrap();
        c.check(
            e2.mul(&epm1).unwrap().eq_coeffs(&rhs),
            format!("displayed congruence must hold mod {p}^2"),
        );

        // f itself reproduces the displayed weight-(p+1) form.
        let f = ramanujan_serre(
            &WeightedSeries::new(eisenstein_e(p - 1, precision).unwrap(), p - 1).unwrap(),
        )
        .unwrap();
        c.check(
            reduce_mod(&f, p, 2).unwrap().eq_coeffs(&substituted),
            format!("derivative of E_{} must equal the displayed form mod {p}^2", p - 1),
        );

        let report = verify_theorem2(p, &VerifyConfig::default()).unwrap();
        c.check(report.passed(), format!("verify_theorem2({p}) must pass"));
        c.check(report.precision == precision, "report must use the policy precision");
        c.conclude();
    }
}

#[test]
fn criterion_4_prime_power_sweep() {
    let mut c = Criterion::new("4 (E-power congruences modulo p^{k+1})", 30);
    let cfg = VerifyConfig::default();
    for p in [5u64, 7, 11] {
        for k in [1u32, 2] {
            for r in [1u64, 2, 3] {
                let report = verify_theorem3(p, k, r, &cfg).unwrap();
                c.check(report.precision == 40, format!("({p},{k},{r}) must run at precision 40"));
                c.check(report.passed(), format!("({p},{k},{r}) must pass"));
            }
        }
    }
    c.conclude();
}

#[test]
fn criterion_5_weight_two_expansion() {
    let mut c = Criterion::new("5 (weight-2 expansion mod p^2)", 10);
    let cfg = VerifyConfig::default();
    for p in [5u64, 7, 11, 13] {
        let reports = verify_classical(p, ClassicalCheck::ChenKiming, &cfg).unwrap();
        for report in &reports {
            c.check(report.precision == 40, format!("p={p} must run at precision 40"));
            c.check(report.passed(), format!("p={p} must pass"));
        }
    }
    c.conclude();
}

#[test]
fn criterion_6_product_identity_sweep() {
    let mut c = Criterion::new("6 (exact product identity sweep)", 60);
    for k in 3..=10u64 {
        for m in 1..=(2 * k - 3) {
            let ok = identity_check(k, m, 40).unwrap();
            let endpoint = m == 1 || m == 2 * k - 3;
            if endpoint {
                println!("  endpoint verdict k={k} m={m}: {}", if ok { "pass" } else { "fail" });
            } else {
                println!("  verdict k={k} m={m}: {}", if ok { "pass" } else { "fail" });
            }
            c.check(ok, format!("identity must hold exactly at k={k} m={m}"));
        }
    }
    c.conclude();
}

#[test]
fn criterion_7_bernoulli_suite() {
    let mut c = Criterion::new("7 (Bernoulli suite)", 10);

    // Denominators match the prime product for every even k <= 60.
    for k in (2..=60u64).step_by(2) {
        c.check(
            bernoulli(k).denom() == &clausen_von_staudt_denominator(k),
            format!("denominator of B_{k}"),
        );
    }

    // Known irregular pairs.
    for (p, k0) in [(37u64, 32u64), (59, 44), (67, 58), (101, 68), (103, 24)] {
        c.check(is_irregular_pair(p, k0).unwrap(), format!("({p}, {k0}) must be irregular"));
    }
    c.check(!is_irregular_pair(37, 2).unwrap(), "(37, 2) must be regular");

    let small_primes: Vec<u64> = (5..=50).filter(|&p| eiscong_core::series::is_prime(p)).collect();

    // v_p(B_k/k) >= 0 when (p-1) does not divide k.
    for k in (2..=200u64).step_by(2) {
        let bk_over_k = bernoulli(k) / rat_int(k as i64);
        for &p in &small_primes {
            let vp = padic_valuation(&bk_over_k, p).unwrap();
            if k % (p - 1) != 0 {
                c.check(vp >= 0, format!("v_{p}(B_{k}/{k}) = {vp} must be >= 0"));
            } else {
                // And exactly -v_p(k) - 1 when (p-1) | k.
                let vk = padic_valuation(&rat_int(k as i64), p).unwrap();
                c.check(vp == -vk - 1, format!("v_{p}(B_{k}/{k}) = {vp} must equal {}", -vk - 1));
            }
        }
    }

    // Sampled congruences between B_k/k at weights congruent mod p^{r-1}(p-1).
    for p in [5u64, 7, 11, 13] {
        for r in [1u32, 2] {
            let step = p.pow(r - 1) * (p - 1);
            for base in (2..2 + 2 * (p - 1)).step_by(2) {
                if base % (p - 1) == 0 {
                    continue;
                }
                for t in [1u64, 2] {
                    let k = base;
                    let k2 = base + t * step;
                    let euler = |k: u64| {
                        rat_int(1)
                            - eiscong_core::series::Rational::new(
                                BigInt::from(p).pow(k as u32 - 1),
                                BigInt::from(1),
                            )
                    };
                    let lhs = euler(k) * bernoulli(k) / rat_int(k as i64);
                    let rhs = euler(k2) * bernoulli(k2) / rat_int(k2 as i64);
                    let vp = padic_valuation(&(lhs - rhs), p);
                    c.check(
                        vp.map_or(true, |v| v >= r as i64),
                        format!("Kummer congruence p={p} r={r} k={k} k'={k2}"),
                    );
                }
            }
        }
    }

    // 1/B_k = -p mod p^2 when (p-1) | k.
    for &p in &small_primes {
        for t in 1..=3u64 {
            let k = t * (p - 1);
            let diff = bernoulli(k).recip() + rat(p as i64, 1);
            c.check(
                padic_valuation(&diff, p).map_or(true, |v| v >= 2),
                format!("1/B_{k} + {p} must vanish mod {p}^2"),
            );
        }
    }

    // Sign alternation.
    for n in 1..=60u64 {
        let b = bernoulli(2 * n);
        c.check(
            if n % 2 == 1 { b.is_positive() } else { b.is_negative() },
            format!("sign of B_{}", 2 * n),
        );
    }
    c.conclude();
}

#[test]
fn criterion_8_exhaustive_small_primes() {
    let mut c = Criterion::new("8 (exhaustive small-prime witness runs)", 120);
    // The default config re-verifies every witness at doubled precision.
    let cfg = VerifyConfig::default();
    assert!(cfg.double_recheck);
    for p in [5u64, 7] {
        let reports = verify_theorem1_batch(p, &cfg).unwrap();
        let expected = ((p - 3) / 2) * p;
        c.check(
            reports.len() as u64 == expected,
            format!("p={p} must produce {expected} reports"),
        );
        for report in &reports {
            c.check(report.passed(), format!("p={p} {:?} must pass", report.params));
        }
    }
    c.conclude();
}

#[test]
fn criterion_9_property_suites() {
    let mut c = Criterion::new("9 (deterministic property suites)", 30);

    let e4 = eisenstein_e(4, 16).unwrap();
    let e6 = eisenstein_e(6, 16).unwrap();
    let delta = delta_series(16).unwrap();
    let mixed = QSeries::new(
        vec![rat(3, 5), rat(-1, 6), rat_int(2), rat(5, 4)],
        None,
    )
    .unwrap();

    // Ring axioms on concrete series.
    c.check(
        series_mul(&e4, &e6).eq_coeffs(&series_mul(&e6, &e4)),
        "multiplication must commute",
    );
    c.check(
        series_mul(&series_mul(&e4, &e6), &delta)
            .eq_coeffs(&series_mul(&e4, &series_mul(&e6, &delta))),
        "multiplication must associate",
    );
    let a = rat(2, 3);
    let b = rat(-7, 5);
    c.check(
        series_mul(&linear_combine(&a, &e4, &b, &e6), &delta).eq_coeffs(&linear_combine(
            &a,
            &series_mul(&e4, &delta),
            &b,
            &series_mul(&e6, &delta),
        )),
        "linear combinations must distribute over products",
    );

    // Inverse round-trips.
    for f in [&e4, &e6] {
        c.check(
            series_mul(f, &series_inverse(f).unwrap()).eq_coeffs(&QSeries::one(16)),
            "inverse round trip",
        );
    }

    // Powers agree with iterated multiplication.
    let mut acc = QSeries::one(16);
    for e in 0..=8u64 {
        c.check(series_pow(&e4, e).eq_coeffs(&acc), format!("E_4^{e}"));
        acc = series_mul(&acc, &e4);
    }

    // Reduction is a ring homomorphism.
    let rf = reduce_mod(&e4, 7, 2).unwrap();
    let rg = reduce_mod(&mixed.truncate(4), 7, 2).unwrap();
    c.check(
        reduce_mod(&series_mul(&e4, &mixed), 7, 2)
            .unwrap()
            .eq_coeffs(&rf.truncate(4).mul(&rg).unwrap()),
        "reduction must preserve products",
    );
    c.check(
        reduce_mod(&linear_combine(&rat_int(1), &e4, &rat_int(1), &mixed), 7, 2)
            .unwrap()
            .eq_coeffs(&rf.truncate(4).add(&rg).unwrap()),
        "reduction must preserve sums",
    );

    // theta satisfies the Leibniz rule.
    c.check(
        theta(&series_mul(&e4, &e6)).eq_coeffs(&linear_combine(
            &rat_int(1),
            &series_mul(&theta(&e4), &e6),
            &rat_int(1),
            &series_mul(&e4, &theta(&e6)),
        )),
        "theta Leibniz rule",
    );

    // Derivative identities.
    c.check(
        ramanujan_serre(&WeightedSeries::from_tagged(delta.clone()).unwrap())
            .unwrap()
            .is_zero(),
        "derivative of Delta must vanish",
    );
    c.check(
        ramanujan_serre(&WeightedSeries::from_tagged(e4.clone()).unwrap())
            .unwrap()
            .eq_coeffs(&e6.scale(&rat_int(-4))),
        "derivative of E_4 must be -4 E_6",
    );

    // Basis matrices are unit lower triangular.
    for w in (0..=120u64).step_by(2) {
        let matrix = basis_matrix(w, 5, 2, dim_mw(w) as usize + 2).unwrap();
        for (col_idx, col) in matrix.iter().enumerate() {
            for n in 0..col_idx {
                c.check(col.coeff(n) == 0, format!("w={w} col={col_idx} q^{n} must vanish"));
            }
            c.check(col.coeff(col_idx) == 1, format!("w={w} col={col_idx} diagonal must be 1"));
        }
    }

    // Solver determinism.
    let precision = sturm_precision(2 + 2 * 11 * 10);
    let f = ramanujan_serre(
        &WeightedSeries::new(eisenstein_e(10, precision).unwrap(), 10).unwrap(),
    )
    .unwrap();
    let target = reduce_mod(&f, 11, 2).unwrap();
    let first = solve_mod_pm(&target, 12).unwrap();
    let second = solve_mod_pm(&target, 12).unwrap();
    c.check(
        first.coefficients == second.coefficients && first.kernel_rank == second.kernel_rank,
        "solver must be deterministic",
    );
    c.check(first.passed(), "determinism probe must pass");

    c.conclude();
}

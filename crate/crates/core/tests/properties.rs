use std::collections::BTreeSet;

use dioph::algapprox::{factor_small, is_irreducible, StarStudy};
use dioph::bounds::{consistency_check, evaluate_rule, tomcat1, Exponent, ExponentProfile, RuleId, RuleStatus};
use dioph::intpoly::{enumerate, enumeration_count, gcd, ZeroStatus};
use dioph::polysearch::{exhaustive_threshold, psi, Grid, Policy, Source, Strategy as Search, Study};
use dioph::realnum::parse_target;
use dioph::resultants::resultant;
use dioph::{IntPolynomial, RealTarget};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn poly(max_deg: usize, h: i64) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-h..=h, 1..=max_deg + 1).prop_map(|c| IntPolynomial::from_i64(&c))
}

fn nonconstant(max_deg: usize, h: i64) -> impl Strategy<Value = IntPolynomial> {
    poly(max_deg, h).prop_filter("degree >= 1", |p| !p.is_zero() && p.degree() >= 1)
}

fn target_spec() -> impl Strategy<Value = String> {
    prop_oneof![
        (0u64..1000).prop_map(|s| format!("digits:seed={s}")),
        (1i64..50, 1i64..50).prop_map(|(p, q)| format!("rational:{p}/{q}")),
        Just("algroot:[-2,0,1]:1".to_string()),
        Just("algroot:[-2,0,0,1]:0".to_string()),
        Just("extremal:1,2".to_string()),
        Just("liouville:10:factorial".to_string()),
        (1u64..6, 1u64..6).prop_map(|(a, b)| format!("cf:[{a};({b})]")),
    ]
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enclosures_nest_and_shrink(spec in target_spec(), p in 2u32..120, extra in 1u32..80) {
        let t = parse_target(&spec).unwrap();
        let coarse = t.eval(p).unwrap();
        let fine = t.eval(p + extra).unwrap();
        prop_assert!(fine.is_subset_of(&coarse), "{spec}: {fine} not inside {coarse}");
        prop_assert!(fine.width_at_most(i64::from(p + extra)));
        if let Some(r) = t.as_rational() {
            prop_assert!(fine.contains(&r));
        }
    }

    #[test]
    fn ring_operations(a in poly(4, 20), b in poly(4, 20), c in poly(3, 20), x in (-30i64..30, 1i64..20)) {
        let x = rat(x.0, x.1);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a - &a, IntPolynomial::zero());
        prop_assert_eq!((&a * &b).eval_rational(&x), a.eval_rational(&x) * b.eval_rational(&x));
        prop_assert_eq!((&a + &b).eval_rational(&x), a.eval_rational(&x) + b.eval_rational(&x));
    }

    #[test]
    fn vanishing_agrees_with_exact_evaluation(q in poly(3, 9), a in -12i64..12, b in 1i64..12, force in any::<bool>()) {
        prop_assume!(!q.is_zero());
        let r = rat(a, b);
        let lin = IntPolynomial::from_rational_root(&r);
        let p = if force { &lin * &q } else { q.clone() };
        let t = RealTarget::from_rational(r.clone()).unwrap();
        let exact = p.eval_rational(&r).is_zero();
        let status = p.vanishes_exactly(&t, 64, 4096);
        prop_assert_eq!(status == ZeroStatus::Zero, exact, "{} at {}", p, r);
        prop_assert!(status != ZeroStatus::Unknown);
    }

    #[test]
    fn resultant_symmetry_and_common_factors(p in nonconstant(3, 6), q in nonconstant(3, 6), shared in nonconstant(1, 4), join in any::<bool>()) {
        let (p, q) = if join { (&p * &shared, &q * &shared) } else { (p, q) };
        let rpq = resultant(&p, &q).unwrap();
        let rqp = resultant(&q, &p).unwrap();
        let sign = if (p.degree() * q.degree()) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(&rpq, &(&rqp * BigInt::from(sign)));
        prop_assert_eq!(rpq.is_zero(), !gcd(&p, &q).is_constant());
    }

    #[test]
    fn factorization_roundtrip(p in nonconstant(4, 12)) {
        let f = factor_small(&p).unwrap();
        prop_assert_eq!(f.expand(), p.clone());
        for (g, _) in &f.factors {
            prop_assert!(g.degree() >= 1);
            prop_assert!(is_irreducible(g).unwrap(), "{} listed as a factor of {}", g, p);
        }
    }

    #[test]
    fn quadratic_minimal_polynomials_are_minimal(a0 in 0u64..6, period in prop::collection::vec(1u64..5, 1..3)) {
        let body: Vec<String> = period.iter().map(u64::to_string).collect();
        let t = parse_target(&format!("cf:[{a0};({})]", body.join(","))).unwrap();
        let m = t.minimal_polynomial().unwrap().clone();
        prop_assert_eq!(m.degree(), 2);
        prop_assert!(is_irreducible(&m).unwrap());
        prop_assert_eq!(m.vanishes_exactly(&t, 64, 4096), ZeroStatus::Zero);
        for lin in enumerate(1, 6).unwrap() {
            prop_assert_eq!(lin.vanishes_exactly(&t, 64, 4096), ZeroStatus::Nonzero, "{} vanishes", lin);
        }
    }

    #[test]
    fn tomcat1_ladder(n in 3u32..200) {
        let (t, next) = (tomcat1(n).to_f64(), tomcat1(n + 1).to_f64());
        let nf = f64::from(n);
        prop_assert!(2.0 * nf - 2.0 < t && t < 2.0 * nf - 1.0);
        let eps = t - (2.0 * nf - 1.5);
        let eps_next = next - (2.0 * nf + 0.5);
        prop_assert!(eps > 0.0 && eps_next < eps);
    }

    #[test]
    fn r4a_is_sharper_than_r2c(n in 2usize..30, u in 0.0f64..1.0) {
        let top = tomcat1(n as u32).to_f64();
        let ceiling = 2.0 * n as f64 - 1.0;
        let x = top + u * (ceiling - top);
        prop_assume!(x > top + 1e-5);
        let p = ExponentProfile::default().with(Exponent::WHat, n, x);
        let r2 = evaluate_rule(RuleId::R2c, &p);
        let r4 = evaluate_rule(RuleId::R4a, &p);
        prop_assert!(!r2.iter().any(|r| r.status.is_violated()));
        prop_assert!(r4.iter().any(|r| r.n == Some(n) && r.status.is_violated()));
    }

    #[test]
    fn slack_is_monotone_in_the_bounded_exponent(a in 3.0f64..6.0, b in 3.0f64..6.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let slack = |x: f64| {
            let p = ExponentProfile::default().with(Exponent::WHat, 3, x);
            evaluate_rule(RuleId::R4b, &p)[0].status.slack().unwrap()
        };
        prop_assert!(slack(lo) >= slack(hi));
    }

    #[test]
    fn bracket_never_hides_a_point_violation(x in 3.0f64..6.0, d in 0.0f64..0.5) {
        let point = ExponentProfile::default().with(Exponent::WHat, 3, x);
        let mut wide = ExponentProfile::default();
        wide.set(Exponent::WHat, 3, dioph::bounds::ProfileValue::measured(x - d, x + d));
        let ps = &evaluate_rule(RuleId::R4b, &point)[0].status;
        let ws = &evaluate_rule(RuleId::R4b, &wide)[0].status;
        let wide_ok = matches!(ws, RuleStatus::Satisfied { .. });
        if ps.is_violated() {
            prop_assert!(!wide_ok);
        }
        if matches!(ps, RuleStatus::Satisfied { .. }) {
            prop_assert!(!ws.is_violated());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn psi_is_monotone_in_height_and_degree(seed in 0u64..10_000, h_max in 6u64..40) {
        let t = RealTarget::digits(seed);
        let pol = Policy::default();
        let heights = Grid::Explicit((1..=h_max).collect()).heights();
        let tables: Vec<_> = (1..=3)
            .map(|n| Study::run(&t, n, h_max, Search::Exhaustive, &pol).unwrap().table(&heights).unwrap())
            .collect();
        for tab in &tables {
            for w in tab.rows.windows(2) {
                prop_assert!(w[1].psi.hi() <= w[0].psi.hi());
            }
        }
        for n in 1..3 {
            for (lower, upper) in tables[n - 1].rows.iter().zip(&tables[n].rows) {
                prop_assert!(upper.psi.hi() <= lower.psi.hi(), "n={} H={}", n + 1, upper.h);
            }
        }
    }

    #[test]
    fn dirichlet_bound_holds(spec in target_spec(), n in 1usize..=3, h in 1u64..25) {
        let t = parse_target(&spec).unwrap();
        // the pigeonhole difference could vanish at an algebraic point of low degree
        prop_assume!(t.minimal_polynomial().map_or(true, |m| m.degree() > n));
        let v = psi(&t, n, h, &Policy::default()).unwrap();
        let m = t.eval(64).unwrap().mag().to_f64().max(1.0);
        let hf = h as f64;
        let bound = (n as f64 + 1.0) * m.powi(n as i32) * hf / ((hf + 1.0).powi(n as i32 + 1) - 1.0);
        prop_assert!(v.value.hi().to_f64() <= bound * (1.0 + 1e-12), "{spec} n={n} H={h}");
    }

    #[test]
    fn lattice_records_never_beat_exhaustive(spec in target_spec(), n in 1usize..=2, t_exh in 3u64..8) {
        let t = parse_target(&spec).unwrap();
        let h_max = 60;
        let small = Policy { budget: enumeration_count(n, t_exh), ..Policy::default() };
        prop_assert_eq!(exhaustive_threshold(n, h_max, small.budget), t_exh);
        let hybrid = Study::run(&t, n, h_max, Search::Hybrid, &small).unwrap();
        let full = Study::run(&t, n, h_max, Search::Exhaustive, &Policy::default()).unwrap();
        for r in hybrid.records().unwrap().entries.iter().filter(|r| r.source == Source::Lattice) {
            let best = full.psi(r.height).unwrap();
            prop_assert!(r.value.hi() >= best.value.lo(), "{} at H={} beats psi", r.poly, r.height);
        }
    }

    #[test]
    fn star_records_are_consistent_with_polynomial_minima(spec in target_spec(), n in 1usize..=2) {
        let t = parse_target(&spec).unwrap();
        let pol = Policy::default();
        let h_max = 25;
        let star = StarStudy::run(&t, n, h_max, &pol).unwrap();
        let xi = t.eval(64).unwrap().mid_f64();
        for r in star.records() {
            let d = r.distance.hi().to_f64();
            let m = (xi.abs() + d).max(1.0);
            let deriv: f64 = (1..=n).map(|k| k as f64 * m.powi(k as i32 - 1)).sum();
            let bound = d * r.height as f64 * deriv;
            let v = psi(&t, n, r.height, &pol).unwrap();
            prop_assert!(v.value.lo().to_f64() <= bound * (1.0 + 1e-9) + 1e-300, "{spec}: alpha {} at H={}", r.alpha.minpoly, r.height);
        }
    }
}

#[test]
fn enumeration_is_complete_and_canonical() {
    for n in 1..=3usize {
        for h in 1..=3i64 {
            let got: Vec<IntPolynomial> = enumerate(n, h as u64).unwrap().collect();
            assert_eq!(got.len() as u128, enumeration_count(n, h as u64));
            let set: BTreeSet<Vec<BigInt>> = got.iter().map(|p| p.coeffs().to_vec()).collect();
            assert_eq!(set.len(), got.len(), "duplicates at n={n} h={h}");
            // naive oracle: every coefficient vector with a positive leading coefficient
            let mut want = BTreeSet::new();
            let side = (2 * h + 1) as usize;
            for code in 0..side.pow(n as u32 + 1) {
                let mut c = Vec::new();
                let mut k = code;
                for _ in 0..=n {
                    c.push((k % side) as i64 - h);
                    k /= side;
                }
                let p = IntPolynomial::from_i64(&c);
                if !p.is_zero() && p.lead().is_positive() {
                    want.insert(p.coeffs().to_vec());
                }
            }
            assert_eq!(set, want, "n={n} h={h}");
        }
    }
}

#[test]
fn derived_profiles_of_exact_values_are_consistent() {
    assert!(consistency_check(&ExponentProfile::extremal_exact()).violations().next().is_none());
    assert!(consistency_check(&ExponentProfile::liouville(4)).violations().next().is_none());
}

use dioph::algapprox::{estimate_star_ordinary, StarStudy};
use dioph::polysearch::Policy;
use dioph::RealTarget;

/// Distance records among rationals `p/q != xi` with `max(|p|, q) <= h_max`, by a plain scan.
fn naive_rational_records(xi: f64, h_max: i64) -> Vec<(u64, f64)> {
    let mut out = Vec::new();
    let mut best = f64::INFINITY;
    for h in 1..=h_max {
        let mut here = f64::INFINITY;
        for q in 1..=h {
            for p in -h..=h {
                if p.abs() != h && q != h {
                    continue;
                }
                let d = (xi - p as f64 / q as f64).abs();
                if d > 0.0 {
                    here = here.min(d);
                }
            }
        }
        if here < best * (1.0 - 1e-9) {
            best = here;
            out.push((h as u64, here));
        }
    }
    out
}

fn oracle_estimate(records: &[(u64, f64)], skip: usize) -> f64 {
    records
        .iter()
        .filter(|r| r.0 >= 2)
        .skip(skip)
        .map(|&(h, d)| -d.ln() / (h as f64).ln() - 1.0)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Checks records and estimate against the scan, and returns the estimate.
fn check(target: &RealTarget, h_max: u64, skip: usize) -> f64 {
    let s = StarStudy::run(target, 1, h_max, &Policy::default()).unwrap();
    let recs = s.records();
    let xi = target.eval(80).unwrap().mid_f64();
    let oracle = naive_rational_records(xi, h_max as i64);
    let heights: Vec<u64> = recs.iter().map(|r| r.height).collect();
    let want: Vec<u64> = oracle.iter().map(|r| r.0).collect();
    assert_eq!(heights, want, "{target}");
    let e = estimate_star_ordinary(&recs, skip).unwrap();
    let o = oracle_estimate(&oracle, skip);
    assert!((e.point - o).abs() < 1e-6, "{target}: {} vs oracle {o}", e.point);
    e.point
}

#[test]
fn sqrt2_star_estimate() {
    let w = check(&RealTarget::sqrt2(), 12, 0);
    assert!((0.8..=1.6).contains(&w), "{w}");
}

#[test]
fn generic_star_records_match_scan() {
    check(&RealTarget::digits(42), 500, 2);
}

/// Partial quotients of this stream start 0; 3, 1, 4, 2, 7, so the records at heights 4 and 42
/// give slopes 2.19 and 1.56.
#[test]
#[ignore = "known gap: digit stream for seed 42 has early large partial quotients"]
fn generic_star_estimate_near_one() {
    let w = check(&RealTarget::digits(42), 500, 2);
    assert!((0.7..=1.5).contains(&w), "{w}");
}

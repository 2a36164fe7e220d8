//! Exhaustive minimization of `|P(xi)|` over all polynomials of bounded degree and height.
//!
//! For each tuple `(c_1, ..., c_n)` the sum `S = sum c_i xi^i` is formed once in fixed
//! point; only the few constant terms `c_0` near `-S` can give `|P(xi)| <= 1`, and since
//! the constant polynomial `1` always reaches 1, every minimizer is among them.

use std::cmp::Ordering;

use rayon::prelude::*;

use super::fixed::FixedPowers;
use super::{Candidate, Policy, Refiner};
use crate::error::{Error, Result};
use crate::intpoly::{enumeration_count, IntPolynomial, ZeroStatus};
use crate::realnum::{Nature, RealTarget};

/// A polynomial that survived the fixed-point filter.
#[derive(Clone, Debug)]
pub(crate) struct RawHit {
    /// Coefficients, constant first, exactly `n + 1` long.
    pub coeffs: Vec<i64>,
    pub height: u64,
    /// Fixed-point value of `P(xi)`.
    pub value: i128,
}

/// Lexicographic order from the top coefficient down, i.e. degree first.
pub(crate) fn lex_cmp_i64(a: &[i64], b: &[i64]) -> Ordering {
    let deg = |c: &[i64]| c.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    let (da, db) = (deg(a), deg(b));
    da.cmp(&db).then_with(|| a[..da].iter().rev().cmp(b[..db].iter().rev()))
}

/// Visit every canonical tuple `(c_1..c_n)` (top nonzero entry positive, all `|c_i| <= h`)
/// with its fixed-point sum and height, in lexicographic order, in parallel blocks.
pub(crate) fn scan<F>(fx: &FixedPowers, n: usize, h: u64, visit: F) -> Vec<RawHit>
where
    F: Fn(&mut [i64], i128, u64, &mut Vec<RawHit>) + Sync,
{
    let hh = h as i64;
    let width = 2 * h + 1;
    let mut blocks = Vec::new();
    for d in 1..=n {
        let per_top = width.saturating_pow(d as u32 - 1).max(1);
        let chunk = (65_536 / per_top).max(1) as i64;
        let mut t = 1;
        while t <= hh {
            let end = (t + chunk - 1).min(hh);
            blocks.push((d, t, end));
            t = end + 1;
        }
    }
    let parts: Vec<Vec<RawHit>> = blocks
        .par_iter()
        .map(|&(d, t0, t1)| {
            let mut out = Vec::new();
            let mut c = vec![0i64; n + 1];
            for top in t0..=t1 {
                scan_top(fx, hh, d, top, &mut c, &visit, &mut out);
            }
            out
        })
        .collect();
    parts.into_iter().flatten().collect()
}

fn scan_top<F>(fx: &FixedPowers, hh: i64, d: usize, top: i64, c: &mut [i64], visit: &F, out: &mut Vec<RawHit>)
where
    F: Fn(&mut [i64], i128, u64, &mut Vec<RawHit>),
{
    for x in c.iter_mut() {
        *x = 0;
    }
    c[d] = top;
    if d == 1 {
        let s = i128::from(top) * fx.mid[1];
        visit(c, s, top as u64, out);
        return;
    }
    for x in c[2..d].iter_mut() {
        *x = -hh;
    }
    let m1 = fx.mid[1];
    loop {
        let mut base = 0i128;
        let mut hr = 0u64;
        for i in 2..=d {
            base += i128::from(c[i]) * fx.mid[i];
            hr = hr.max(c[i].unsigned_abs());
        }
        let mut s = base - i128::from(hh) * m1;
        for c1 in -hh..=hh {
            c[1] = c1;
            visit(c, s, hr.max(c1.unsigned_abs()), out);
            s += m1;
        }
        let mut i = 2;
        while i < d {
            if c[i] < hh {
                c[i] += 1;
                break;
            }
            c[i] = -hh;
            i += 1;
        }
        if i == d {
            break;
        }
    }
}

/// Pigeonhole bound: some nonzero `P` of degree `<= e` and height `<= h` has
/// `|P(xi)| <= (e+1) M^e h / ((h+1)^(e+1) - 1)` where `M = max(1, |xi|)`.
pub fn dirichlet_bound(e: usize, mag: f64, h: u64) -> f64 {
    let h = h as f64;
    let den = (h + 1.0).powi(e as i32 + 1) - 1.0;
    (e as f64 + 1.0) * mag.powi(e as i32) * h / den
}

/// Result of an exhaustive scan: prefix minima of `|P(xi)|` for every height bound.
#[derive(Clone, Debug)]
pub struct ExhaustiveSearch {
    pub n: usize,
    pub h_max: u64,
    /// `best[h-1]` minimizes `|P(xi)|` over heights `<= h` (lexicographically least on ties).
    pub(crate) best: Vec<Candidate>,
    /// Strict, certified improvements of the prefix minimum, by increasing height.
    pub(crate) records: Vec<Candidate>,
    pub warnings: Vec<String>,
}

impl ExhaustiveSearch {
    pub fn run(target: &RealTarget, n: usize, h_max: u64, policy: &Policy) -> Result<Self> {
        assert!(n >= 1 && h_max >= 1, "degree and height must be positive");
        let count = enumeration_count(n, h_max);
        if count > policy.budget {
            return Err(Error::OverflowGuard { count, budget: policy.budget });
        }
        let first = Self::run_filtered(target, n, h_max, policy, true)?;
        if first.1 {
            // an undecidable zero means the pigeonhole bound may not hold: drop the filter
            return Ok(Self::run_filtered(target, n, h_max, policy, false)?.0);
        }
        Ok(first.0)
    }

    fn run_filtered(
        target: &RealTarget,
        n: usize,
        h_max: u64,
        policy: &Policy,
        filter: bool,
    ) -> Result<(Self, bool)> {
        let fx = FixedPowers::new(target, n, h_max)?;
        let e = match target.nature() {
            Nature::Algebraic { degree } if degree <= n => degree - 1,
            _ => n,
        };
        let one = fx.one();
        let slack = 1.0 + 1e-6;
        let thr: Vec<i128> = (0..=h_max)
            .map(|h| {
                let d = if filter && h > 0 { dirichlet_bound(e, fx.mag, h).min(1.0) } else { 1.0 };
                (d * slack * (fx.frac as f64).exp2()) as i128
            })
            .collect();
        let r = fx.error_bound(h_max);
        let hh = h_max as i64;
        let frac = fx.frac;
        let mut hits = scan(&fx, n, h_max, |c, s, hr, out| {
            let k = ((-s) >> frac) as i64;
            for c0 in (k - 1).max(-hh)..=(k + 2).min(hh) {
                let v = i128::from(c0) * one + s;
                let h = hr.max(c0.unsigned_abs());
                if v.abs() <= thr[h as usize] + r {
                    c[0] = c0;
                    out.push(RawHit { coeffs: c.to_vec(), height: h, value: v });
                }
            }
        });
        let mut unit = vec![0i64; n + 1];
        unit[0] = 1;
        hits.push(RawHit { coeffs: unit, height: 1, value: one });
        hits.sort_by(|a, b| a.height.cmp(&b.height).then_with(|| lex_cmp_i64(&a.coeffs, &b.coeffs)));

        let mut warnings = Vec::new();
        let mut undecided = false;
        let mut cands = Vec::with_capacity(hits.len());
        for hit in hits {
            let poly = IntPolynomial::from_i64(&hit.coeffs);
            if hit.value.abs() <= r {
                match poly.vanishes_exactly(target, policy.precision_start, policy.precision_cap) {
                    ZeroStatus::Zero => continue,
                    ZeroStatus::Unknown => {
                        warnings.push(format!("excluded {poly}: zero status unknown at {} bits", policy.precision_cap));
                        undecided = true;
                        continue;
                    }
                    ZeroStatus::Nonzero => {}
                }
            }
            let abs = fx.enclosure(hit.value, r).abs();
            cands.push(Candidate::new(poly, hit.height, abs));
        }

        let mut refiner = Refiner::new(target, policy);
        let mut best: Vec<Candidate> = Vec::with_capacity(h_max as usize);
        let mut records = Vec::new();
        let mut cur: Option<Candidate> = None;
        let mut it = cands.into_iter().peekable();
        for h in 1..=h_max {
            let mut improved = false;
            while let Some(c) = it.next_if(|c| c.height == h) {
                let mut c = c;
                match cur.as_mut() {
                    None => {
                        improved = true;
                        cur = Some(c);
                    }
                    Some(b) => match refiner.compare(&mut c, b) {
                        Ordering::Less => {
                            improved = true;
                            *b = c;
                        }
                        Ordering::Equal => {
                            if c.poly.lex_cmp(&b.poly) == Ordering::Less {
                                *b = c;
                            }
                        }
                        Ordering::Greater => {}
                    },
                }
            }
            let b = cur.clone().expect("the constant 1 has height 1");
            if improved {
                records.push(b.clone());
            }
            best.push(b);
        }
        warnings.extend(refiner.warnings);
        Ok((ExhaustiveSearch { n, h_max, best, records, warnings }, undecided))
    }

    pub(crate) fn best_at(&self, h: u64) -> &Candidate {
        assert!(h >= 1 && h <= self.h_max, "height {h} outside the searched range");
        &self.best[h as usize - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_on_raw_vectors() {
        assert_eq!(lex_cmp_i64(&[0, 1], &[-1, 2]), Ordering::Less);
        assert_eq!(lex_cmp_i64(&[5, 0], &[-9, 1]), Ordering::Less);
        assert_eq!(lex_cmp_i64(&[-1, 1, 0], &[0, 1, 0]), Ordering::Less);
    }

    #[test]
    fn dirichlet_rational_case_is_one() {
        assert_eq!(dirichlet_bound(0, 1.0, 17), 1.0);
        assert!((dirichlet_bound(1, 1.0, 1) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn scan_visits_every_tuple_once() {
        let fx = FixedPowers::new(&RealTarget::rational(7, 10).unwrap(), 3, 2).unwrap();
        let hits = scan(&fx, 3, 2, |c, _s, _h, out| {
            out.push(RawHit { coeffs: c.to_vec(), height: 0, value: 0 });
        });
        // canonical tuples (c1,c2,c3): ((2h+1)^3 - 1) / 2
        assert_eq!(hits.len(), 62);
        for w in hits.windows(2) {
            assert_eq!(lex_cmp_i64(&w[0].coeffs, &w[1].coeffs), Ordering::Less);
        }
    }
}

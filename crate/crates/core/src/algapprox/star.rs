//! `psi*_n(H) = min H(alpha) |xi - alpha|` over real algebraic `alpha != xi` of degree `<= n`
//! and height `<= H`, plus distance records `|xi - alpha|` for the ordinary star exponent.
//!
//! The search reuses the fixed-point sums of the polynomial search. A root `alpha` of `Q`
//! with `|xi - alpha| <= delta <= 1` forces `|Q(xi)| <= H(Q) D delta` with
//! `D = sum i (|xi| + delta)^(i-1)`, and the best rational of height `<= h` already sits at
//! distance `V(h)`, so only `|Q(xi)| <= D h V(h)` can matter at height `h`. Survivors then go
//! through a Taylor test, an irreducibility check and exact root isolation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;

use super::factor::is_irreducible;
use super::roots::{isolate_real_roots, refine_root, squarefree_part};
use crate::error::{Error, Result};
use crate::intpoly::{enumeration_count, IntPolynomial};
use crate::polysearch::{scan, slope, EstimateStrategy, ExponentEstimate, FixedPowers, Policy, RawHit};
use crate::realnum::{Dyadic, Enclosure, RealTarget};

/// A real algebraic number given by its minimal polynomial and the index of the root
/// among the real roots in ascending order.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    pub minpoly: IntPolynomial,
    pub root_index: usize,
    /// Isolating interval with rational, non-root endpoints (degenerate for rationals).
    pub isolating: (BigRational, BigRational),
}

impl AlgebraicNumber {
    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn height(&self) -> BigInt {
        self.minpoly.height_or_zero()
    }

    /// Enclosure of width at most `2^-precision`.
    pub fn enclosure(&self, precision: u32) -> Enclosure {
        let w = BigRational::new(BigInt::one(), BigInt::one() << (precision + 1));
        let s = squarefree_part(&self.minpoly);
        let (a, b) = refine_root(&s, &self.isolating, &w);
        let q = i64::from(precision) + 1;
        Enclosure::new(Enclosure::from_rational(&a, q).lo().clone(), Enclosure::from_rational(&b, q).hi().clone())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        (self.degree() == 1).then(|| BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
    }

    /// `true` when this is the target itself.
    pub fn equals_target(&self, target: &RealTarget) -> bool {
        target.minimal_polynomial() == Some(&self.minpoly) && target.root_index() == Some(self.root_index)
    }

    /// Ordering key: degree, height, minimal polynomial, root index.
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.height().cmp(&other.height()))
            .then_with(|| self.minpoly.lex_cmp(&other.minpoly))
            .then_with(|| self.root_index.cmp(&other.root_index))
    }

    fn roots_of(minpoly: &IntPolynomial) -> Vec<AlgebraicNumber> {
        isolate_real_roots(minpoly)
            .into_iter()
            .enumerate()
            .map(|(i, iv)| AlgebraicNumber { minpoly: minpoly.clone(), root_index: i, isolating: iv })
            .collect()
    }
}

impl std::fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}#{}", self.minpoly, self.root_index)
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    if n > 4 {
        return Err(Error::DegreeTooLarge(n));
    }
    Ok(())
}

/// Every real algebraic number of degree `<= n` and height `<= h`, except the target itself,
/// ordered by degree, height, minimal polynomial and root index.
pub fn approximants(target: &RealTarget, n: usize, h: u64, policy: &Policy) -> Result<Vec<AlgebraicNumber>> {
    check_degree(n)?;
    let polys: Vec<IntPolynomial> = crate::intpoly::Enumeration::with_budget(n, h, policy.budget)?
        .filter(|p| p.degree() >= 1 && p.content().is_one())
        .collect();
    let mut out: Vec<AlgebraicNumber> = polys
        .par_iter()
        .filter(|p| is_irreducible(p).unwrap_or(false))
        .flat_map_iter(|p| AlgebraicNumber::roots_of(p))
        .filter(|a| !a.equals_target(target))
        .collect();
    out.sort_by(|a, b| a.key_cmp(b));
    Ok(out)
}

/// An algebraic number near the target with rigorous distance enclosure.
#[derive(Clone, Debug)]
pub struct StarCandidate {
    pub alpha: AlgebraicNumber,
    pub height: u64,
    /// `|xi - alpha|`.
    pub distance: Enclosure,
    prec: u32,
}

impl StarCandidate {
    /// `H(alpha) |xi - alpha|`.
    pub fn value(&self) -> Enclosure {
        self.distance.scale(&BigInt::from(self.height))
    }
}

#[derive(Clone, Debug)]
pub struct StarRow {
    pub h: u64,
    pub psi_star: Enclosure,
    pub witness: AlgebraicNumber,
}

#[derive(Clone, Debug)]
pub struct StarTable {
    pub target: String,
    pub n: usize,
    pub rows: Vec<StarRow>,
}

/// Algebraic numbers strictly closer to the target than all others of no greater height.
#[derive(Clone, Debug)]
pub struct StarRecord {
    pub height: u64,
    pub distance: Enclosure,
    pub alpha: AlgebraicNumber,
}

fn distance(alpha: &AlgebraicNumber, target: &RealTarget, prec: u32) -> Result<Enclosure> {
    let xi = target.eval(prec)?;
    Ok((&xi - &alpha.enclosure(prec)).abs())
}

/// Distance with about 40 bits of relative accuracy, or whatever the cap allows.
fn rigorous_distance(alpha: &AlgebraicNumber, target: &RealTarget, policy: &Policy) -> Result<(Enclosure, u32)> {
    let mut prec = policy.precision_start.max(8);
    loop {
        let d = distance(alpha, target, prec)?;
        let ok = d.lo().signum() > 0 && d.width().log2_abs() <= d.lo().log2_abs() - 40.0;
        if ok || prec >= policy.precision_cap {
            return Ok((d, prec));
        }
        let want = if d.lo().signum() > 0 { (-d.lo().log2_abs()).max(0.0) as u32 + 48 } else { 0 };
        prec = want.max(prec * 2).min(policy.precision_cap);
    }
}

/// Upper bounds `V(h)` for the distance to the nearest rational `p/q != xi`, `max(|p|,q) <= h`.
fn rational_distance_bounds(target: &RealTarget, h_max: u64) -> Result<Vec<f64>> {
    let xi = target.eval(64 + 2 * crate::realnum::bits_for(h_max as f64 + 1.0))?;
    let exact = target.as_rational();
    let mut best = vec![f64::INFINITY; h_max as usize + 1];
    let up = |e: &Enclosure| e.abs().hi().to_f64() * (1.0 + 1e-9);
    let mut cur = f64::INFINITY;
    for h in 1..=h_max as i64 {
        let hb = BigInt::from(h);
        let mut consider = |p: &BigInt, q: i64| {
            if p.abs() > hb || q > h {
                return;
            }
            if let Some(r) = &exact {
                if r.numer() * BigInt::from(q) == r.denom() * p {
                    return;
                }
            }
            let d = up(&xi.scale(&BigInt::from(q)).add_int(&-p)) / q as f64;
            cur = cur.min(d);
        };
        // new pairs at height exactly h: q = h with any p, and p = +-h with q <= h
        let f = xi.scale(&hb).lo().floor();
        for p in [&f - 1, f.clone(), &f + 1, &f + 2] {
            consider(&p, h);
        }
        for q in 1..=h {
            consider(&hb, q);
            consider(&-&hb, q);
        }
        best[h as usize] = cur;
    }
    Ok(best)
}

/// Star search over degree `<= n` up to height `h_max`.
#[derive(Clone, Debug)]
pub struct StarStudy {
    target: RealTarget,
    pub n: usize,
    pub h_max: u64,
    /// Prefix minima of `H(alpha)|xi - alpha|`, indexed by `h - 1`.
    best: Vec<StarCandidate>,
    records: Vec<StarCandidate>,
    pub warnings: Vec<String>,
}

struct Ranker<'a> {
    target: &'a RealTarget,
    policy: &'a Policy,
    warnings: Vec<String>,
}

impl Ranker<'_> {
    fn exact(&self, a: &StarCandidate, b: &StarCandidate, weighted: bool) -> Option<Ordering> {
        let xi = self.target.as_rational()?;
        let (ra, rb) = (a.alpha.as_rational()?, b.alpha.as_rational()?);
        let (wa, wb) = if weighted {
            (BigRational::from_integer(a.height.into()), BigRational::from_integer(b.height.into()))
        } else {
            (BigRational::one(), BigRational::one())
        };
        Some(((&xi - ra).abs() * wa).cmp(&((&xi - rb).abs() * wb)))
    }

    fn refine(&mut self, c: &mut StarCandidate) -> bool {
        if c.prec >= self.policy.precision_cap {
            return false;
        }
        let prec = (c.prec * 2).min(self.policy.precision_cap);
        match distance(&c.alpha, self.target, prec) {
            Ok(d) => {
                c.distance = c.distance.intersect(&d).unwrap_or(d);
                c.prec = prec;
                true
            }
            Err(_) => {
                c.prec = self.policy.precision_cap;
                false
            }
        }
    }

    fn compare(&mut self, a: &mut StarCandidate, b: &mut StarCandidate, weighted: bool) -> Ordering {
        let get = |c: &StarCandidate| if weighted { c.value() } else { c.distance.clone() };
        if let Some(o) = get(a).certain_cmp(&get(b)) {
            return o;
        }
        if let Some(o) = self.exact(a, b, weighted) {
            return o;
        }
        loop {
            let ra = self.refine(a);
            let rb = self.refine(b);
            if let Some(o) = get(a).certain_cmp(&get(b)) {
                return o;
            }
            if !ra && !rb {
                self.warnings.push(format!(
                    "unresolved tie between {} and {} at {} bits; ordered by degree and height",
                    a.alpha, b.alpha, self.policy.precision_cap
                ));
                return Ordering::Equal;
            }
        }
    }
}

impl StarStudy {
    pub fn run(target: &RealTarget, n: usize, h_max: u64, policy: &Policy) -> Result<Self> {
        check_degree(n)?;
        assert!(h_max >= 1, "height bound must be positive");
        let count = enumeration_count(n, h_max);
        if count > policy.budget {
            return Err(Error::OverflowGuard { count, budget: policy.budget });
        }
        let v = rational_distance_bounds(target, h_max)?;
        let fx = FixedPowers::new(target, n, h_max)?;
        let delta_max = v[1].min(1.0);
        let base = fx.mag + delta_max;
        let d: f64 = (1..=n).map(|i| i as f64 * base.powi(i as i32 - 1)).sum();
        let one = fx.one();
        let cap = (2 * h_max as i128 + 2) * one;
        let thr: Vec<i128> = (0..=h_max as usize)
            .map(|h| {
                if h == 0 {
                    return 0;
                }
                let w = d * h as f64 * v[h] * (1.0 + 1e-6) * (fx.frac as f64).exp2();
                if w >= cap as f64 {
                    cap
                } else {
                    w as i128 + 1
                }
            })
            .collect();
        let wmax = *thr.iter().max().unwrap_or(&0);
        let r = fx.error_bound(h_max);
        let span = ((wmax + r) >> fx.frac) as i64 + 2;
        let hh = h_max as i64;
        let frac = fx.frac;
        let xf = fx.to_f64(fx.mid[1]);
        let hits = scan(&fx, n, h_max, |c, s, hr, out| {
            let k = ((-s) >> frac) as i64;
            for c0 in (k - span).max(-hh)..=(k + span).min(hh) {
                let val = i128::from(c0) * one + s;
                let h = hr.max(c0.unsigned_abs());
                if val.abs() > thr[h as usize] + r {
                    continue;
                }
                c[0] = c0;
                if taylor_excludes(c, xf, v[h as usize]) {
                    continue;
                }
                out.push(RawHit { coeffs: c.to_vec(), height: h, value: val });
            }
        });

        let mut cands: Vec<StarCandidate> = hits
            .par_iter()
            .map(|hit| -> Result<Vec<StarCandidate>> {
                let q = IntPolynomial::from_i64(&hit.coeffs);
                if !q.content().is_one() || !is_irreducible(&q)? {
                    return Ok(Vec::new());
                }
                let delta = v[hit.height as usize] * (1.0 + 1e-6);
                let mut found = Vec::new();
                for alpha in AlgebraicNumber::roots_of(&q) {
                    if alpha.equals_target(target) {
                        continue;
                    }
                    let coarse = distance(&alpha, target, 32)?;
                    if coarse.lo().to_f64() > delta * (1.0 + 1e-6) + 1e-9 {
                        continue;
                    }
                    let (dist, prec) = rigorous_distance(&alpha, target, policy)?;
                    found.push(StarCandidate { alpha, height: hit.height, distance: dist, prec });
                }
                Ok(found)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        // the search window assumed a rational witness at every height
        for h in 1..=h_max {
            if v[h as usize].is_finite() {
                continue;
            }
            return Err(Error::InvalidTarget(format!("no rational approximation of height {h}")));
        }
        cands.sort_by(|a, b| a.height.cmp(&b.height).then_with(|| a.alpha.key_cmp(&b.alpha)));

        let mut ranker = Ranker { target, policy, warnings: Vec::new() };
        let mut best: Vec<StarCandidate> = Vec::with_capacity(h_max as usize);
        let mut records: Vec<StarCandidate> = Vec::new();
        let mut cur: Option<StarCandidate> = None;
        let mut closest: Option<StarCandidate> = None;
        let mut it = cands.into_iter().peekable();
        for h in 1..=h_max {
            let mut improved = false;
            while let Some(mut c) = it.next_if(|c| c.height == h) {
                match cur.as_mut() {
                    None => cur = Some(c.clone()),
                    Some(b) => {
                        if ranker.compare(&mut c, b, true) == Ordering::Less {
                            *b = c.clone();
                        }
                    }
                }
                match closest.as_mut() {
                    None => {
                        improved = true;
                        closest = Some(c);
                    }
                    Some(b) => {
                        if ranker.compare(&mut c, b, false) == Ordering::Less {
                            improved = true;
                            *b = c;
                        }
                    }
                }
            }
            if improved {
                records.push(closest.clone().expect("set when improved"));
            }
            match &cur {
                Some(c) => best.push(c.clone()),
                None => {
                    return Err(Error::InvalidTarget(format!("no algebraic approximation of height {h} found")));
                }
            }
        }
        Ok(StarStudy { target: target.clone(), n, h_max, best, records, warnings: ranker.warnings })
    }

    pub fn table(&self, heights: &[u64]) -> StarTable {
        let rows = heights
            .iter()
            .filter(|&&h| h >= 1 && h <= self.h_max)
            .map(|&h| {
                let c = &self.best[h as usize - 1];
                StarRow { h, psi_star: c.value(), witness: c.alpha.clone() }
            })
            .collect();
        StarTable { target: self.target.label().to_string(), n: self.n, rows }
    }

    pub fn records(&self) -> Vec<StarRecord> {
        self.records
            .iter()
            .map(|c| StarRecord { height: c.height, distance: c.distance.clone(), alpha: c.alpha.clone() })
            .collect()
    }
}

/// `true` when no root of `c` (constant first) can lie within `delta` of `x`, judged on the
/// Taylor expansion at `x` with a generous allowance for floating-point error.
fn taylor_excludes(c: &[i64], x: f64, delta: f64) -> bool {
    let n = c.len() - 1;
    // repeated synthetic division leaves the Taylor coefficients at x in place
    let mut t: Vec<f64> = c.iter().map(|&v| v as f64).collect();
    for k in 0..n {
        for i in (k..n).rev() {
            t[i] += x * t[i + 1];
        }
    }
    let size: f64 = c.iter().map(|&v| (v as f64).abs()).sum::<f64>() * (x.abs() + 1.0).powi(n as i32) * (1u64 << n) as f64;
    let err = 1e-12 * size;
    let d = delta * (1.0 + 1e-6);
    let mut rhs = 0.0;
    let mut dk = 1.0;
    for tk in &t[1..] {
        dk *= d;
        rhs += tk.abs() * dk;
    }
    t[0].abs() > rhs + 2.0 * err
}

/// `psi*_n` on a set of heights.
pub fn psi_star_table(target: &RealTarget, n: usize, heights: &[u64], policy: &Policy) -> Result<StarTable> {
    let h_max = *heights.iter().max().ok_or_else(|| Error::Parse("empty grid".into()))?;
    Ok(StarStudy::run(target, n, h_max, policy)?.table(heights))
}

/// Ordinary star estimate: the largest `-log|xi - alpha| / log H(alpha) - 1` over distance
/// records of height at least 2, after skipping the first `skip` of them.
pub fn estimate_star_ordinary(records: &[StarRecord], skip: usize) -> Result<ExponentEstimate> {
    let kept: Vec<&StarRecord> = records.iter().filter(|r| r.height >= 2).skip(skip).collect();
    if kept.len() < 3 {
        return Err(Error::TooFewRecords { have: kept.len(), need: 3 });
    }
    let star_slope = |d: &Dyadic, h: u64| slope(d, h as f64) - 1.0;
    let point = kept.iter().map(|r| star_slope(r.distance.hi(), r.height)).fold(f64::NEG_INFINITY, f64::max);
    let upper = kept.iter().map(|r| star_slope(r.distance.lo(), r.height)).fold(f64::NEG_INFINITY, f64::max);
    Ok(ExponentEstimate {
        point,
        lower: point,
        upper,
        samples: kept.len(),
        strategy: EstimateStrategy::Exhaustive,
    })
}

/// Uniform star estimate: the smallest `-log psi*(H) / log H` over the tail rows.
pub fn estimate_star_uniform(table: &StarTable, tail: f64) -> Result<ExponentEstimate> {
    assert!(tail > 0.0 && tail <= 1.0, "tail fraction must lie in (0, 1]");
    let usable: Vec<&StarRow> = table.rows.iter().filter(|r| r.h >= 2).collect();
    if usable.len() < 3 {
        return Err(Error::TooFewRecords { have: usable.len(), need: 3 });
    }
    let take = ((tail * usable.len() as f64).ceil() as usize).clamp(1, usable.len());
    let rows = &usable[usable.len() - take..];
    let point = rows.iter().map(|r| slope(r.psi_star.hi(), r.h as f64)).fold(f64::INFINITY, f64::min);
    let upper = rows.iter().map(|r| slope(r.psi_star.lo(), r.h as f64)).fold(f64::INFINITY, f64::min);
    Ok(ExponentEstimate {
        point,
        lower: point,
        upper,
        samples: rows.len(),
        strategy: EstimateStrategy::Exhaustive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn approximants_of_low_height() {
        let pol = Policy::default();
        let a = approximants(&RealTarget::sqrt2(), 1, 2, &pol).unwrap();
        let mut vals: Vec<BigRational> = a.iter().map(|x| x.as_rational().unwrap()).collect();
        vals.sort();
        let want: Vec<BigRational> =
            [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)].iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect();
        assert_eq!(vals, want);

        let b = approximants(&RealTarget::sqrt2(), 2, 1, &pol).unwrap();
        assert!(b.iter().any(|x| x.minpoly == p(&[-1, 1, 1])));
        assert!(b.iter().any(|x| x.minpoly == p(&[-1, -1, 1])));
    }

    #[test]
    fn excludes_the_target() {
        let a = approximants(&RealTarget::sqrt2(), 2, 2, &Policy::default()).unwrap();
        assert!(a.iter().any(|x| x.minpoly == p(&[-2, 0, 1]) && x.root_index == 0));
        assert!(!a.iter().any(|x| x.minpoly == p(&[-2, 0, 1]) && x.root_index == 1));
    }

    #[test]
    fn sqrt2_star_rows() {
        let t = psi_star_table(&RealTarget::sqrt2(), 1, &[2, 5, 7, 12, 17], &Policy::default()).unwrap();
        let w: Vec<String> = t.rows.iter().map(|r| r.witness.as_rational().unwrap().to_string()).collect();
        assert_eq!(w, vec!["1", "3/2", "7/5", "7/5", "17/12"]);
    }

    #[test]
    fn third_excludes_itself() {
        let t = psi_star_table(&RealTarget::rational(1, 3).unwrap(), 1, &[3], &Policy::default()).unwrap();
        // 0 and 1/2 tie at 1/3; the lower height wins
        assert_eq!(t.rows[0].witness.as_rational().unwrap(), BigRational::from_integer(0.into()));
        assert!(t.rows[0].psi_star.contains(&BigRational::new(1.into(), 3.into())));
    }

    #[test]
    fn taylor_test_keeps_nearby_roots() {
        // x - 1 at 1.001 with delta 0.01 has a root inside
        assert!(!taylor_excludes(&[-1, 1], 1.001, 0.01));
        assert!(taylor_excludes(&[-1, 1], 1.1, 0.01));
        // x^2 - 2 near sqrt 2
        assert!(!taylor_excludes(&[-2, 0, 1], 1.4142, 0.001));
        assert!(taylor_excludes(&[-2, 0, 1], 1.5, 0.001));
    }

    #[test]
    fn two_records_are_too_few() {
        let s = StarStudy::run(&RealTarget::sqrt2(), 1, 12, &Policy::default()).unwrap();
        let r = s.records();
        assert!(matches!(estimate_star_ordinary(&r[..2], 0), Err(Error::TooFewRecords { .. })));
    }
}

//! Minimal values `psi_n(H)` of `|P(xi)|`, best-approximation records and exponent estimates.

mod estimate;
mod exhaustive;
mod fixed;
mod lattice;

pub use estimate::{estimate_ordinary, estimate_uniform, EstimateStrategy, ExponentEstimate};
pub use exhaustive::{dirichlet_bound, ExhaustiveSearch};
pub use fixed::FixedPowers;
pub use lattice::{lattice_candidates, lll_reduce};

pub(crate) use estimate::slope;
pub(crate) use exhaustive::{scan, RawHit};

use std::cmp::Ordering;

use num_traits::Signed;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::intpoly::{enumeration_count, IntPolynomial, ZeroStatus};
use crate::realnum::{bits_for, Enclosure, RealTarget};

/// Search budgets and precision escalation limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Policy {
    pub precision_start: u32,
    pub precision_cap: u32,
    /// Maximum number of polynomials an exhaustive enumeration may cover.
    pub budget: u128,
    /// Largest exponent `j` of the lattice scales `C = 4^j`.
    pub lattice_scale_cap: u32,
}

impl Default for Policy {
    fn default() -> Self {
        Policy { precision_start: 64, precision_cap: 4096, budget: 1_000_000_000, lattice_scale_cap: 48 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    /// Exhaustive up to the budget, lattice reduction beyond.
    Hybrid,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Hybrid => "hybrid",
        })
    }
}

/// How a row or record was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Exact minimum over the full enumeration.
    Exhaustive,
    /// Verified value of a lattice candidate: an upper bound for the minimum.
    Lattice,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Exhaustive => "exhaustive",
            Source::Lattice => "lattice",
        })
    }
}

/// A polynomial together with a rigorous enclosure of `|P(xi)|`.
#[derive(Clone, Debug)]
pub(crate) struct Candidate {
    pub poly: IntPolynomial,
    pub height: u64,
    pub abs: Enclosure,
    /// Precision of the last rigorous evaluation; 0 if the enclosure came from fixed point.
    pub prec: u32,
}

impl Candidate {
    pub fn new(poly: IntPolynomial, height: u64, abs: Enclosure) -> Self {
        Candidate { poly, height, abs, prec: 0 }
    }
}

/// Bits needed so that an evaluation of `p` resolves a value of size about `2^-log_value`.
fn precision_for(p: &IntPolynomial, target: &RealTarget, value_log2: f64) -> u32 {
    let mag = target.magnitude_bound().unwrap_or(1.0);
    let h = p.height_or_zero().to_string().parse::<f64>().unwrap_or(f64::MAX);
    let d = p.degree() as f64;
    let scale = h * (d + 1.0) * mag.powf(d);
    let need = (-value_log2).max(0.0).ceil() as u32 + bits_for(scale) + 40;
    need
}

/// Deterministic rigorous enclosure of `|P(xi)|` with about 40 bits of relative accuracy,
/// depending only on `(P, xi, policy)`.
pub(crate) fn rigorous_abs(p: &IntPolynomial, target: &RealTarget, policy: &Policy) -> Result<(Enclosure, u32)> {
    let mut prec = policy.precision_start.max(1);
    loop {
        let e = p.evaluate(target, prec)?.abs();
        let lo_log = e.lo().log2_abs();
        let ok = e.lo().signum() > 0 && (e.width().log2_abs() <= lo_log - 40.0);
        if ok || prec >= policy.precision_cap {
            return Ok((e, prec));
        }
        let want = if e.lo().signum() > 0 { precision_for(p, target, lo_log) } else { 0 };
        prec = want.max(prec * 2).min(policy.precision_cap);
    }
}

/// Orders candidates by `|P(xi)|`, refining enclosures on demand and deciding exact ties.
pub(crate) struct Refiner<'a> {
    target: &'a RealTarget,
    policy: &'a Policy,
    pub warnings: Vec<String>,
}

impl<'a> Refiner<'a> {
    pub fn new(target: &'a RealTarget, policy: &'a Policy) -> Self {
        Refiner { target, policy, warnings: Vec::new() }
    }

    /// Tighten the enclosure; `false` once the precision cap is reached.
    fn refine(&mut self, c: &mut Candidate) -> bool {
        if c.prec >= self.policy.precision_cap {
            return false;
        }
        let guess = precision_for(&c.poly, self.target, c.abs.hi().log2_abs());
        let prec = guess.max(c.prec * 2).max(self.policy.precision_start).min(self.policy.precision_cap);
        match c.poly.evaluate(self.target, prec) {
            Ok(e) => {
                let e = e.abs();
                c.abs = c.abs.intersect(&e).unwrap_or(e);
                c.prec = prec;
                true
            }
            Err(_) => {
                c.prec = self.policy.precision_cap;
                false
            }
        }
    }

    fn exact(&self, a: &IntPolynomial, b: &IntPolynomial) -> Option<Ordering> {
        if let Some(r) = self.target.as_rational() {
            return Some(a.eval_rational(&r).abs().cmp(&b.eval_rational(&r).abs()));
        }
        let m = self.target.minimal_polynomial()?;
        if (a - b).divisible_by(m) || (a + b).divisible_by(m) {
            return Some(Ordering::Equal);
        }
        None
    }

    pub fn compare(&mut self, a: &mut Candidate, b: &mut Candidate) -> Ordering {
        if a.poly == b.poly {
            return Ordering::Equal;
        }
        if let Some(o) = a.abs.certain_cmp(&b.abs) {
            return o;
        }
        if let Some(o) = self.exact(&a.poly, &b.poly) {
            return o;
        }
        loop {
            let ra = self.refine(a);
            let rb = self.refine(b);
            if let Some(o) = a.abs.certain_cmp(&b.abs) {
                return o;
            }
            if !ra && !rb {
                self.warnings.push(format!(
                    "unresolved tie between {} and {} at {} bits; lexicographic order used",
                    a.poly, b.poly, self.policy.precision_cap
                ));
                return Ordering::Equal;
            }
        }
    }
}

/// `psi_n(H)` with its lexicographically least minimizer.
#[derive(Clone, Debug)]
pub struct PsiValue {
    pub value: Enclosure,
    pub witness: IntPolynomial,
    pub source: Source,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub h: u64,
    pub psi: Enclosure,
    pub witness: IntPolynomial,
    pub source: Source,
}

#[derive(Clone, Debug)]
pub struct ApproximationTable {
    pub target: String,
    pub n: usize,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Debug)]
pub struct Record {
    pub height: u64,
    pub value: Enclosure,
    pub poly: IntPolynomial,
    pub source: Source,
}

#[derive(Clone, Debug)]
pub struct RecordSequence {
    pub target: String,
    pub n: usize,
    pub entries: Vec<Record>,
}

/// Geometric or explicit list of height bounds.
#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    /// `H_0 = h0`, `H_{j+1} = round(ratio * H_j)` (at least `H_j + 1`), `points` entries.
    Geometric { h0: u64, ratio: f64, points: usize },
    Explicit(Vec<u64>),
}

impl Grid {
    pub fn heights(&self) -> Vec<u64> {
        let mut v: Vec<u64> = match self {
            Grid::Geometric { h0, ratio, points } => {
                let mut v = Vec::with_capacity(*points);
                let mut h = *h0;
                for _ in 0..*points {
                    v.push(h);
                    h = ((h as f64 * ratio).round() as u64).max(h + 1);
                }
                v
            }
            Grid::Explicit(v) => v.clone(),
        };
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Geometric grid running from `h0` up to `h_max` inclusive.
    pub fn up_to(h0: u64, ratio: f64, h_max: u64) -> Self {
        let mut points = 1;
        let mut h = h0;
        loop {
            h = ((h as f64 * ratio).round() as u64).max(h + 1);
            if h > h_max {
                break;
            }
            points += 1;
        }
        Grid::Geometric { h0, ratio, points }
    }
}

/// Everything a single degree needs: exhaustive prefix minima up to a threshold, and
/// verified lattice improvements beyond it.
#[derive(Clone, Debug)]
pub struct Study {
    target: RealTarget,
    policy: Policy,
    pub n: usize,
    pub h_max: u64,
    pub strategy: Strategy,
    exhaustive: ExhaustiveSearch,
    /// Improvements beyond the exhaustive range, by increasing height.
    beyond: Vec<Candidate>,
    pub warnings: Vec<String>,
}

/// Largest height whose full enumeration fits the budget.
pub fn exhaustive_threshold(n: usize, h_max: u64, budget: u128) -> u64 {
    let (mut lo, mut hi) = (0u64, h_max);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if enumeration_count(n, mid) <= budget {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

impl Study {
    pub fn run(target: &RealTarget, n: usize, h_max: u64, strategy: Strategy, policy: &Policy) -> Result<Self> {
        let t = match strategy {
            Strategy::Exhaustive => h_max,
            Strategy::Hybrid => exhaustive_threshold(n, h_max, policy.budget),
        };
        if t == 0 {
            return Err(Error::OverflowGuard { count: enumeration_count(n, 1), budget: policy.budget });
        }
        let exhaustive = ExhaustiveSearch::run(target, n, t, policy)?;
        let mut warnings = exhaustive.warnings.clone();
        let mut beyond = Vec::new();
        if t < h_max {
            let mut seen = std::collections::HashSet::new();
            let mut found: Vec<IntPolynomial> = Vec::new();
            for j in 1..=policy.lattice_scale_cap {
                let c = num_bigint::BigInt::from(1) << (2 * j);
                let prec = 2 * j + 64;
                let list = match lattice_candidates(target, n, &c, prec, policy) {
                    Ok(l) => l,
                    Err(e) => {
                        warnings.push(format!("lattice scale 4^{j} skipped: {e}"));
                        continue;
                    }
                };
                let mut smallest = u64::MAX;
                for p in list {
                    let h = height_u64(&p);
                    smallest = smallest.min(h);
                    if h > t && h <= h_max && seen.insert(p.clone()) {
                        found.push(p);
                    }
                }
                if smallest > h_max {
                    break;
                }
            }
            found.sort_by(|a, b| height_u64(a).cmp(&height_u64(b)).then_with(|| a.lex_cmp(b)));
            let mut refiner = Refiner::new(target, policy);
            let mut cur = exhaustive.best_at(t).clone();
            for p in found {
                let (abs, prec) = rigorous_abs(&p, target, policy)?;
                let mut c = Candidate { height: height_u64(&p), poly: p, abs, prec };
                match refiner.compare(&mut c, &mut cur) {
                    Ordering::Less => {
                        if beyond.last().is_some_and(|b: &Candidate| b.height == c.height) {
                            beyond.pop();
                        }
                        beyond.push(c.clone());
                        cur = c;
                    }
                    // lattice rows are upper bounds only; ties keep the earlier witness
                    _ => {}
                }
            }
            warnings.extend(refiner.warnings);
        }
        Ok(Study { target: target.clone(), policy: policy.clone(), n, h_max, strategy, exhaustive, beyond, warnings })
    }

    /// Largest height covered by the exhaustive enumeration.
    pub fn threshold(&self) -> u64 {
        self.exhaustive.h_max
    }

    fn witness_at(&self, h: u64) -> (&Candidate, Source) {
        let t = self.threshold();
        if h <= t {
            return (self.exhaustive.best_at(h), Source::Exhaustive);
        }
        let c = self.beyond.iter().rev().find(|c| c.height <= h).unwrap_or_else(|| self.exhaustive.best_at(t));
        (c, Source::Lattice)
    }

    pub fn psi(&self, h: u64) -> Result<PsiValue> {
        assert!(h >= 1 && h <= self.h_max, "height {h} outside 1..={}", self.h_max);
        let (c, source) = self.witness_at(h);
        let (value, _) = rigorous_abs(&c.poly, &self.target, &self.policy)?;
        Ok(PsiValue { value, witness: c.poly.clone(), source, warnings: self.warnings.clone() })
    }

    pub fn table(&self, heights: &[u64]) -> Result<ApproximationTable> {
        let mut cache: HashMap<IntPolynomial, Enclosure> = HashMap::new();
        let mut rows = Vec::new();
        for &h in heights.iter().filter(|&&h| h >= 1 && h <= self.h_max) {
            let (c, source) = self.witness_at(h);
            let psi = match cache.get(&c.poly) {
                Some(e) => e.clone(),
                None => {
                    let e = rigorous_abs(&c.poly, &self.target, &self.policy)?.0;
                    cache.insert(c.poly.clone(), e.clone());
                    e
                }
            };
            rows.push(TableRow { h, psi, witness: c.poly.clone(), source });
        }
        Ok(ApproximationTable { target: self.target.label().to_string(), n: self.n, rows })
    }

    pub fn records(&self) -> Result<RecordSequence> {
        let mut entries = Vec::new();
        let tagged = self
            .exhaustive
            .records
            .iter()
            .map(|c| (c, Source::Exhaustive))
            .chain(self.beyond.iter().map(|c| (c, Source::Lattice)));
        for (c, source) in tagged {
            let (value, _) = rigorous_abs(&c.poly, &self.target, &self.policy)?;
            entries.push(Record { height: c.height, value, poly: c.poly.clone(), source });
        }
        Ok(RecordSequence { target: self.target.label().to_string(), n: self.n, entries })
    }
}

pub(crate) fn height_u64(p: &IntPolynomial) -> u64 {
    u64::try_from(p.height_or_zero()).unwrap_or(u64::MAX)
}

/// `psi_n(H)` by exhaustive search.
pub fn psi(target: &RealTarget, n: usize, h: u64, policy: &Policy) -> Result<PsiValue> {
    Study::run(target, n, h, Strategy::Exhaustive, policy)?.psi(h)
}

/// Best-approximation records up to height `h_max`.
pub fn records(target: &RealTarget, n: usize, h_max: u64, strategy: Strategy, policy: &Policy) -> Result<RecordSequence> {
    Study::run(target, n, h_max, strategy, policy)?.records()
}

/// `psi_n` on a grid of height bounds; rows beyond the exhaustive budget are lattice upper bounds.
pub fn psi_table(target: &RealTarget, n: usize, grid: &Grid, strategy: Strategy, policy: &Policy) -> Result<ApproximationTable> {
    let heights = grid.heights();
    let h_max = *heights.last().ok_or_else(|| Error::Parse("empty grid".into()))?;
    Study::run(target, n, h_max, strategy, policy)?.table(&heights)
}

/// Nonzero status of a polynomial under the policy's precision limits.
pub fn zero_status(p: &IntPolynomial, target: &RealTarget, policy: &Policy) -> ZeroStatus {
    p.vanishes_exactly(target, policy.precision_start, policy.precision_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn sqrt2_small_heights() {
        let t = RealTarget::sqrt2();
        let pol = Policy::default();
        let a = psi(&t, 1, 2, &pol).unwrap();
        assert_eq!(a.witness, p(&[-1, 1]));
        assert!((a.value.mid_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let b = psi(&t, 1, 7, &pol).unwrap();
        assert_eq!(b.witness, p(&[-7, 5]));
    }

    #[test]
    fn third_is_constant() {
        let t = RealTarget::rational(1, 3).unwrap();
        let r = psi(&t, 1, 10, &Policy::default()).unwrap();
        assert_eq!(r.witness, p(&[0, 1]));
        assert!(r.value.contains(&BigRational::new(1.into(), 3.into())));
    }

    #[test]
    fn grid_heights() {
        let g = Grid::Geometric { h0: 5, ratio: 1.5, points: 6 };
        assert_eq!(g.heights(), vec![5, 8, 12, 18, 27, 41]);
        assert_eq!(Grid::up_to(5, 1.5, 40).heights().last(), Some(&27));
    }

    #[test]
    fn threshold_respects_budget() {
        assert_eq!(exhaustive_threshold(1, 100, 12), 2);
        assert_eq!(exhaustive_threshold(2, 10, 10), 0);
    }
}

//! Slope estimators for the ordinary and uniform exponents.

use std::fmt;

use super::{ApproximationTable, RecordSequence, Source};
use crate::error::{Error, Result};
use crate::realnum::Dyadic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateStrategy {
    Exhaustive,
    LatticeAssisted,
}

impl fmt::Display for EstimateStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimateStrategy::Exhaustive => "exhaustive",
            EstimateStrategy::LatticeAssisted => "lattice-assisted",
        })
    }
}

/// Finite-height exponent estimate. The bracket only reflects enclosure widths.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentEstimate {
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub samples: usize,
    pub strategy: EstimateStrategy,
}

/// `-log v / log h`, with `v = 0` mapped to `+inf`.
pub(crate) fn slope(v: &Dyadic, h: f64) -> f64 {
    if v.signum() <= 0 {
        return f64::INFINITY;
    }
    -v.log2_abs() / h.log2()
}

fn strategy_of<I: IntoIterator<Item = Source>>(it: I) -> EstimateStrategy {
    if it.into_iter().any(|s| s == Source::Lattice) {
        EstimateStrategy::LatticeAssisted
    } else {
        EstimateStrategy::Exhaustive
    }
}

/// Largest record slope, ignoring records of height 1 and the first `skip` of the rest.
pub fn estimate_ordinary(rs: &RecordSequence, skip: usize) -> Result<ExponentEstimate> {
    let kept: Vec<_> = rs.entries.iter().filter(|r| r.height >= 2).skip(skip).collect();
    if kept.is_empty() {
        let have = rs.entries.iter().filter(|r| r.height >= 2).count();
        return Err(Error::TooFewRecords { have, need: skip + 1 });
    }
    let mut point = f64::NEG_INFINITY;
    let mut upper = f64::NEG_INFINITY;
    for r in &kept {
        let h = r.height as f64;
        point = point.max(slope(r.value.hi(), h));
        upper = upper.max(slope(r.value.lo(), h));
    }
    Ok(ExponentEstimate {
        point,
        lower: point,
        upper,
        samples: kept.len(),
        strategy: strategy_of(kept.iter().map(|r| r.source)),
    })
}

/// Smallest slope over the last `tail` fraction of the table rows.
pub fn estimate_uniform(table: &ApproximationTable, tail: f64) -> Result<ExponentEstimate> {
    assert!(tail > 0.0 && tail <= 1.0, "tail fraction must lie in (0, 1]");
    let len = table.rows.len();
    if len < 4 {
        return Err(Error::TooFewRows { have: len, need: 4 });
    }
    let take = ((tail * len as f64).ceil() as usize).clamp(1, len);
    let rows: Vec<_> = table.rows[len - take..].iter().filter(|r| r.h >= 2).collect();
    if rows.is_empty() {
        return Err(Error::TooFewRows { have: 0, need: 1 });
    }
    let mut point = f64::INFINITY;
    let mut upper = f64::INFINITY;
    for r in &rows {
        let h = r.h as f64;
        point = point.min(slope(r.psi.hi(), h));
        upper = upper.min(slope(r.psi.lo(), h));
    }
    Ok(ExponentEstimate {
        point,
        lower: point,
        upper,
        samples: rows.len(),
        strategy: strategy_of(rows.iter().map(|r| r.source)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::IntPolynomial;
    use crate::polysearch::{Record, TableRow};
    use crate::realnum::Enclosure;
    use num_bigint::BigInt;

    // exact dyadic values only: 1/2^k
    fn point(v: f64) -> Enclosure {
        let k = (-v.log2()).round() as i64;
        Enclosure::point(Dyadic::pow2(-k))
    }

    #[test]
    fn ordinary_takes_the_largest_slope() {
        let mk = |h: u64, v: f64| Record { height: h, value: point(v), poly: IntPolynomial::one(), source: Source::Exhaustive };
        let rs = RecordSequence { target: "t".into(), n: 1, entries: vec![mk(1, 0.5), mk(4, 1.0 / 16.0), mk(8, 1.0 / 8.0)] };
        let e = estimate_ordinary(&rs, 0).unwrap();
        assert!((e.point - 2.0).abs() < 1e-12);
        assert_eq!(e.samples, 2);
        let e = estimate_ordinary(&rs, 1).unwrap();
        assert!((e.point - 1.0).abs() < 1e-12);
        assert!(matches!(estimate_ordinary(&rs, 2), Err(Error::TooFewRecords { .. })));
    }

    #[test]
    fn uniform_needs_four_rows() {
        let row = |h: u64| TableRow { h, psi: point(1.0 / h as f64), witness: IntPolynomial::one(), source: Source::Exhaustive };
        let t = ApproximationTable { target: "t".into(), n: 1, rows: vec![row(2), row(4), row(8)] };
        assert!(matches!(estimate_uniform(&t, 0.5), Err(Error::TooFewRows { have: 3, need: 4 })));
        let t = ApproximationTable { target: "t".into(), n: 1, rows: vec![row(2), row(4), row(8), row(16)] };
        let e = estimate_uniform(&t, 0.5).unwrap();
        assert!((e.point - 1.0).abs() < 1e-12);
        assert_eq!(e.samples, 2);
    }

    #[test]
    fn zero_value_slope_is_infinite() {
        assert_eq!(slope(&Dyadic::from_int(BigInt::from(0)), 10.0), f64::INFINITY);
    }
}

//! Real root isolation with Sturm sequences and exact rational sign evaluation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::intpoly::{gcd, IntPolynomial};
use crate::realnum::Enclosure;

/// Remainder of `a` by `b` over the rationals, scaled by a positive integer.
fn positive_rem(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let lb = b.lead();
    let mut r = a.clone();
    let mut k = 0u32;
    while !r.is_zero() && r.degree() >= b.degree() {
        let shift = r.degree() - b.degree();
        let lr = r.lead();
        let mut next: Vec<BigInt> = r.coeffs().iter().map(|c| c * &lb).collect();
        for (i, c) in b.coeffs().iter().enumerate() {
            next[i + shift] -= c * &lr;
        }
        r = IntPolynomial::new(next);
        k += 1;
    }
    if lb.is_negative() && k % 2 == 1 {
        r = -&r;
    }
    r.primitive_part()
}

/// Squarefree part, primitive with positive leading coefficient.
pub fn squarefree_part(p: &IntPolynomial) -> IntPolynomial {
    if p.is_constant() {
        return p.primitive_part().canonical();
    }
    let g = gcd(p, &p.derivative());
    let s = if g.is_constant() { p.clone() } else { p.exact_div_rational(&g) };
    s.primitive_part().canonical()
}

struct Sturm {
    seq: Vec<IntPolynomial>,
}

impl Sturm {
    fn new(p: &IntPolynomial) -> Self {
        let mut seq = vec![p.clone(), p.derivative().primitive_part()];
        loop {
            let n = seq.len();
            let r = positive_rem(&seq[n - 2], &seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        Sturm { seq }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0;
        for s in &self.seq {
            let v = s.sign_at(x);
            if v != 0 {
                if last != 0 && v != last {
                    count += 1;
                }
                last = v;
            }
        }
        count
    }
}

/// Bound strictly exceeding the modulus of every root.
fn cauchy_bound(p: &IntPolynomial) -> BigInt {
    let lead = p.lead().abs();
    let m = p.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default();
    m / lead + 2
}

/// Disjoint open intervals `(a, b)` with rational, non-root endpoints, each holding
/// exactly one real root of `p`; ascending. Multiple roots are reported once.
pub fn isolate_real_roots(p: &IntPolynomial) -> Vec<(BigRational, BigRational)> {
    if p.is_constant() {
        return Vec::new();
    }
    let s = squarefree_part(p);
    if s.degree() == 1 {
        let r = BigRational::new(-s.coeff(0), s.coeff(1));
        let one = BigRational::one();
        return vec![(&r - &one, &r + &one)];
    }
    let sturm = Sturm::new(&s);
    let b = BigRational::from_integer(cauchy_bound(&s));
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm.variations(&lo) - sturm.variations(&hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((lo, hi));
            continue;
        }
        let half = (&hi - &lo) / BigRational::from_integer(2.into());
        let mut mid = &lo + &half;
        let mut k = 2u32;
        while s.sign_at(&mid) == 0 {
            // nudge off a rational root so endpoints stay root-free
            mid = &lo + &half + &half / BigRational::from_integer(BigInt::one() << k);
            k += 1;
        }
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Shrink an isolating interval of a simple root of `s` to width at most `width`.
/// Returns a degenerate interval when a bisection point hits the root exactly.
pub fn refine_root(
    s: &IntPolynomial,
    iv: &(BigRational, BigRational),
    width: &BigRational,
) -> (BigRational, BigRational) {
    let (mut lo, mut hi) = iv.clone();
    if s.degree() == 1 {
        let r = BigRational::new(-s.coeff(0), s.coeff(1));
        return (r.clone(), r);
    }
    let slo = s.sign_at(&lo);
    let two = BigRational::from_integer(2.into());
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        match s.sign_at(&mid) {
            0 => return (mid.clone(), mid),
            v if v == slo => lo = mid,
            _ => hi = mid,
        }
    }
    (lo, hi)
}

/// Isolating enclosures of all real roots of `p`, each of width at most `2^-precision`.
pub fn real_roots(p: &IntPolynomial, precision: u32) -> Vec<Enclosure> {
    assert!(!p.is_zero(), "real roots of the zero polynomial");
    let s = squarefree_part(p);
    let w = BigRational::new(BigInt::one(), BigInt::one() << (precision + 1));
    let q = i64::from(precision) + 1;
    isolate_real_roots(p)
        .iter()
        .map(|iv| {
            let (a, b) = refine_root(&s, iv, &w);
            let lo = Enclosure::from_rational(&a, q);
            let hi = Enclosure::from_rational(&b, q);
            Enclosure::new(lo.lo().clone(), hi.hi().clone())
        })
        .collect()
}

impl IntPolynomial {
    /// Quotient by a divisor over the rationals, made primitive.
    pub(crate) fn exact_div_rational(&self, m: &IntPolynomial) -> IntPolynomial {
        // work with lc(m)^k * self so the integer division is exact
        let k = self.degree() + 1 - m.degree();
        let scaled = self.scale(&num_traits::pow(m.lead(), k));
        scaled
            .exact_div(m)
            .expect("divisor over the rationals divides the scaled polynomial")
            .primitive_part()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn sqrt2_pair() {
        let r = real_roots(&p(&[-2, 0, 1]), 30);
        assert_eq!(r.len(), 2);
        assert!((r[0].mid_f64() + 2f64.sqrt()).abs() < 1e-8);
        assert!((r[1].mid_f64() - 2f64.sqrt()).abs() < 1e-8);
        assert!(r.iter().all(|e| e.width_at_most(30)));
    }

    #[test]
    fn no_real_roots() {
        assert!(real_roots(&p(&[1, 0, 1]), 10).is_empty());
    }

    #[test]
    fn repeated_root_once() {
        let r = real_roots(&p(&[1, -2, 1]), 10);
        assert_eq!(r.len(), 1);
        assert!(r[0].contains(&BigRational::one()));
    }

    #[test]
    fn close_and_rational_roots() {
        // (2x - 1)(x - 1)(1000x - 501)
        let f = &(&p(&[-1, 2]) * &p(&[-1, 1])) * &p(&[-501, 1000]);
        let r = real_roots(&f, 20);
        assert_eq!(r.len(), 3);
        assert!(r[0].contains(&BigRational::new(1.into(), 2.into())));
        assert!(r[1].contains(&BigRational::new(501.into(), 1000.into())));
        assert!(r[2].contains(&BigRational::one()));
        for w in r.windows(2) {
            assert!(w[0].hi() < w[1].lo());
        }
    }
}

//! Complete factorization over the integers for degrees up to four.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::roots::{isolate_real_roots, refine_root, squarefree_part};
use crate::error::{Error, Result};
use crate::intpoly::IntPolynomial;

/// `content * prod f_i^{m_i}` with each `f_i` primitive, irreducible, positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPolynomial, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::new(vec![self.content.clone()]);
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = &acc * f;
            }
        }
        acc
    }

    /// `true` when the input was a unit multiple of one irreducible polynomial.
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

fn push_factor(out: &mut Vec<(IntPolynomial, usize)>, f: IntPolynomial, m: usize) {
    if let Some(slot) = out.iter_mut().find(|(g, _)| *g == f) {
        slot.1 += m;
    } else {
        out.push((f, m));
    }
}

/// Positive divisors by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Factor a polynomial of degree between 1 and 4.
pub fn factor_small(p: &IntPolynomial) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() > 4 {
        return Err(Error::DegreeTooLarge(p.degree()));
    }
    let mut content = p.content();
    if p.lead().is_negative() {
        content = -content;
    }
    let mut rest = IntPolynomial::new(p.coeffs().iter().map(|c| c / &content).collect());
    let mut factors = Vec::new();

    // rational roots: every root p/q has q | lead, so lead * root is an integer
    if rest.degree() >= 1 {
        let s = squarefree_part(&rest);
        let lead = BigRational::from_integer(rest.lead().abs());
        let half = BigRational::new(BigInt::one(), 2 * rest.lead().abs() + 2);
        for iv in isolate_real_roots(&s) {
            let (a, b) = refine_root(&s, &iv, &half);
            let m = ((&a + &b) / BigRational::from_integer(2.into()) * &lead).round().to_integer();
            let r = BigRational::new(m, rest.lead().abs());
            if s.sign_at(&r) == 0 {
                let lin = IntPolynomial::from_rational_root(&r);
                let mut mult = 0;
                while let Some(q) = rest.exact_div(&lin) {
                    rest = q;
                    mult += 1;
                }
                push_factor(&mut factors, lin, mult);
            }
        }
    }

    match rest.degree() {
        0 => {}
        1..=3 => push_factor(&mut factors, rest, 1),
        _ => match split_quartic(&rest) {
            Some((a, b)) => {
                push_factor(&mut factors, a, 1);
                push_factor(&mut factors, b, 1);
            }
            None => push_factor(&mut factors, rest, 1),
        },
    }
    factors.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.lex_cmp(&b.0)));
    Ok(Factorization { content, factors })
}

/// Write a primitive quartic without rational roots as a product of two integer quadratics.
fn split_quartic(r: &IntPolynomial) -> Option<(IntPolynomial, IntPolynomial)> {
    let c4 = r.coeff(4);
    let c3 = r.coeff(3);
    let c2 = r.coeff(2);
    let c1 = r.coeff(1);
    let c0 = r.coeff(0);
    // (a x^2 + b x + c)(d x^2 + e x + f)
    for a in divisors(&c4) {
        let d = &c4 / &a;
        for cabs in divisors(&c0) {
            for c in [cabs.clone(), -cabs] {
                let f = &c0 / &c;
                // d b + a e = c3 ; f b + c e = c1
                let det = &d * &c - &a * &f;
                let mut cands = Vec::new();
                if !det.is_zero() {
                    let bn = &c3 * &c - &a * &c1;
                    let en = &d * &c1 - &f * &c3;
                    if (&bn % &det).is_zero() && (&en % &det).is_zero() {
                        cands.push((&bn / &det, &en / &det));
                    }
                } else {
                    // b e = c2 - a f - c d with e = (c3 - d b)/a:  d b^2 - c3 b + a K = 0
                    let k = &c2 - &a * &f - &c * &d;
                    let disc = &c3 * &c3 - BigInt::from(4) * &d * &a * &k;
                    if !disc.is_negative() {
                        let sq = disc.sqrt();
                        if &sq * &sq == disc {
                            for num in [&c3 + &sq, &c3 - &sq] {
                                let den = BigInt::from(2) * &d;
                                if (&num % &den).is_zero() {
                                    let b = &num / &den;
                                    let en = &c3 - &d * &b;
                                    if (&en % &a).is_zero() {
                                        cands.push((b, en / &a));
                                    }
                                }
                            }
                        }
                    }
                }
                for (b, e) in cands {
                    let q1 = IntPolynomial::new(vec![c.clone(), b.clone(), a.clone()]);
                    let q2 = IntPolynomial::new(vec![f.clone(), e, d.clone()]);
                    if &(&q1 * &q2) == r {
                        let (q1, q2) = (q1.primitive_part().canonical(), q2.primitive_part().canonical());
                        let (q1, q2) = if q1.lex_cmp(&q2).is_le() { (q1, q2) } else { (q2, q1) };
                        return Some((q1, q2));
                    }
                }
            }
        }
    }
    None
}

/// Irreducible over the rationals (ignoring content), degree at most four.
pub fn is_irreducible(p: &IntPolynomial) -> Result<bool> {
    if p.degree() == 0 {
        return Ok(false);
    }
    Ok(factor_small(p)?.is_irreducible())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn quartic_splits() {
        let f = factor_small(&p(&[-4, 0, 0, 0, 1])).unwrap();
        assert_eq!(f.content, BigInt::one());
        assert_eq!(f.factors, vec![(p(&[-2, 0, 1]), 1), (p(&[2, 0, 1]), 1)]);
        assert_eq!(f.expand(), p(&[-4, 0, 0, 0, 1]));
    }

    #[test]
    fn content_and_linear() {
        let f = factor_small(&p(&[-6, 0, 6])).unwrap();
        assert_eq!(f.content, BigInt::from(6));
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn cubic_irreducible() {
        let f = factor_small(&p(&[-2, 0, 0, 1])).unwrap();
        assert!(f.is_irreducible());
    }

    #[test]
    fn squares_and_negative_leads() {
        let q = p(&[1, 1, 1]);
        let f = factor_small(&(&q * &q).scale(&BigInt::from(-3))).unwrap();
        assert_eq!(f.content, BigInt::from(-3));
        assert_eq!(f.factors, vec![(q.clone(), 2)]);
        let g = factor_small(&p(&[0, 0, 4, -4])).unwrap();
        assert_eq!(g.expand(), p(&[0, 0, 4, -4]));
        assert_eq!(g.factors, vec![(p(&[-1, 1]), 1), (p(&[0, 1]), 2)]);
    }

    #[test]
    fn degenerate_discriminant_branch() {
        // (x^2 + x + 2)(x^2 - x + 2): d c - a f = 0 so the linear system is singular
        let f = &p(&[2, 1, 1]) * &p(&[2, -1, 1]);
        let got = factor_small(&f).unwrap();
        assert_eq!(got.factors.len(), 2);
        assert_eq!(got.expand(), f);
    }

    #[test]
    fn too_large() {
        assert!(matches!(factor_small(&p(&[1, 0, 0, 0, 0, 1])), Err(Error::DegreeTooLarge(5))));
    }
}

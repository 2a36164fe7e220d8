use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::IntPolynomial;

/// Primitive greatest common divisor with positive leading coefficient, computed with
/// the subresultant remainder sequence. Constants are reported as `1`.
pub fn gcd(p: &IntPolynomial, q: &IntPolynomial) -> IntPolynomial {
    assert!(!p.is_zero() && !q.is_zero(), "gcd of the zero polynomial");
    let (mut a, mut b) = if p.degree() >= q.degree() { (p.clone(), q.clone()) } else { (q.clone(), p.clone()) };
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        if b.is_constant() {
            return IntPolynomial::one();
        }
        let delta = (a.degree() - b.degree()) as u32;
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return b.primitive_part().canonical();
        }
        let divisor = &g * num_traits::pow(h.clone(), delta as usize);
        let next = IntPolynomial::new(r.coeffs().iter().map(|c| c / &divisor).collect());
        a = std::mem::replace(&mut b, next);
        g = a.lead();
        h = if delta == 0 {
            h
        } else {
            // h <- g^delta / h^(delta-1), exact by the subresultant theorem
            num_traits::pow(g.clone(), delta as usize) / num_traits::pow(h, delta as usize - 1)
        };
        debug_assert!(!h.is_zero());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn examples() {
        assert_eq!(gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(gcd(&p(&[-2, 0, 1]), &p(&[-1, 1])), p(&[1]));
        assert_eq!(gcd(&p(&[2, 2]), &p(&[4, 4])), p(&[1, 1]));
    }

    #[test]
    fn larger_common_factor() {
        let f = p(&[3, -1, 2]);
        let a = &f * &p(&[1, 5, 0, 1]);
        let b = &f * &p(&[-7, 0, 3]);
        assert_eq!(gcd(&a, &b), f);
        let sq = &f * &f;
        assert_eq!(gcd(&sq, &sq.derivative()), f);
    }
}

//! Lattice reduction for small values of integer linear forms in `1, xi, ..., xi^n`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{height_u64, Policy};
use crate::error::{Error, Result};
use crate::intpoly::{IntPolynomial, ZeroStatus};
use crate::realnum::{Dyadic, Enclosure, RealTarget};

fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let m = b.len();
    let dim = b[0].len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut mu = vec![vec![BigRational::zero(); m]; m];
    let mut norms = Vec::with_capacity(m);
    for i in 0..m {
        let mut v: Vec<BigRational> = b[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
        for j in 0..i {
            let num: BigRational = b[i]
                .iter()
                .zip(&star[j])
                .map(|(x, y)| BigRational::from_integer(x.clone()) * y)
                .sum();
            let coef = if norms[j] == BigRational::zero() { BigRational::zero() } else { num / &norms[j] };
            for t in 0..dim {
                let d = &coef * &star[j][t];
                v[t] -= d;
            }
            mu[i][j] = coef;
        }
        let nrm: BigRational = v.iter().map(|x| x * x).sum();
        norms.push(nrm);
        star.push(v);
    }
    (mu, norms)
}

/// LLL reduction with `delta = 99/100`, exact rational Gram-Schmidt data.
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) {
    let m = basis.len();
    if m < 2 {
        return;
    }
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    let (mut mu, mut norms) = gram_schmidt(basis);
    let mut k = 1;
    while k < m {
        for j in (0..k).rev() {
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qr = BigRational::from_integer(q);
                for i in 0..j {
                    let d = &qr * &mu[j][i];
                    mu[k][i] -= d;
                }
                mu[k][j] -= &qr;
            }
        }
        let lhs = norms[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let gs = gram_schmidt(basis);
            mu = gs.0;
            norms = gs.1;
            k = (k - 1).max(1);
        }
    }
}

/// `round(C * xi^i)` for `i = 0..=n`, stable under the enclosure width.
fn scaled_powers(target: &RealTarget, n: usize, c: &BigInt, precision: u32, cap: u32) -> Result<Vec<BigInt>> {
    let cd = Dyadic::from_int(c.clone());
    let half = Dyadic::new(BigInt::one(), -1);
    let mut prec = precision.max(2);
    loop {
        let xi = target.eval(prec)?;
        let mut pow = Enclosure::from_int(1);
        let mut out = Vec::with_capacity(n + 1);
        let mut stable = true;
        for i in 0..=n {
            if i > 0 {
                pow = &pow * &xi;
            }
            let lo = (&(pow.lo() * &cd) + &half).floor();
            let hi = (&(pow.hi() * &cd) + &half).floor();
            if lo != hi {
                stable = false;
                break;
            }
            out.push(lo);
        }
        if stable {
            return Ok(out);
        }
        if prec >= cap {
            return Err(Error::PrecisionExhausted { bits: prec, what: "rounding C * xi^i".into() });
        }
        prec = (prec * 2).min(cap);
    }
}

/// Candidate polynomials from a reduced basis of the lattice spanned by
/// `(e_i, round(C xi^i))`, verified nonvanishing and sorted by height.
pub fn lattice_candidates(
    target: &RealTarget,
    n: usize,
    c: &BigInt,
    precision: u32,
    policy: &Policy,
) -> Result<Vec<IntPolynomial>> {
    assert!(*c >= BigInt::from(2), "lattice scale must be at least 2");
    let last = scaled_powers(target, n, c, precision, policy.precision_cap)?;
    let mut basis: Vec<Vec<BigInt>> = (0..=n)
        .map(|i| {
            let mut v = vec![BigInt::zero(); n + 2];
            v[i] = BigInt::one();
            v[n + 1] = last[i].clone();
            v
        })
        .collect();
    lll_reduce(&mut basis);
    let mut vecs: Vec<Vec<BigInt>> = basis.clone();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            vecs.push(basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect());
            vecs.push(basis[i].iter().zip(&basis[j]).map(|(a, b)| a - b).collect());
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for v in vecs {
        let p = IntPolynomial::new(v[..=n].to_vec()).canonical();
        if p.is_zero() || !seen.insert(p.to_string()) {
            continue;
        }
        if p.vanishes_exactly(target, policy.precision_start, policy.precision_cap) == ZeroStatus::Nonzero {
            out.push(p);
        }
    }
    out.sort_by(|a, b| height_u64(a).cmp(&height_u64(b)).then_with(|| a.lex_cmp(b)));
    Ok(out)
}

//! Sylvester resultants and an explicit-constant form of the two-polynomial lemma:
//! for coprime `P`, `Q` of degrees `s`, `t`,
//! `1 <= |Res(P,Q)| <= K * max(|P(xi)| H(P)^(t-1) H(Q)^s, |Q(xi)| H(P)^t H(Q)^(s-1))`
//! with `K = (s+t)! * max(1,|xi|)^(max(s,t)-1)`.
//!
//! The constant comes from adding `xi^i` times column `s+t-i` to the last column of the
//! Sylvester matrix: the last column becomes `xi^j P(xi)` / `xi^j Q(xi)`, every other
//! entry is bounded by a height, and each of the `(s+t)!` permutation terms uses exactly
//! one last-column entry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::intpoly::{gcd, IntPolynomial};
use crate::realnum::{Dyadic, Enclosure, RealTarget};

/// The `(s+t) x (s+t)` Sylvester matrix for the actual degrees, top coefficients first.
pub fn sylvester(p: &IntPolynomial, q: &IntPolynomial) -> Result<Vec<Vec<BigInt>>> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (s, t) = (p.degree(), q.degree());
    if s == 0 || t == 0 {
        return Err(Error::DegreeZero);
    }
    let size = s + t;
    let mut m = vec![vec![BigInt::zero(); size]; size];
    for i in 0..t {
        for k in 0..=s {
            m[i][i + k] = p.coeff(s - k);
        }
    }
    for j in 0..s {
        for k in 0..=t {
            m[t + j][j + k] = q.coeff(t - k);
        }
    }
    Ok(m)
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn resultant(p: &IntPolynomial, q: &IntPolynomial) -> Result<BigInt> {
    Ok(bareiss_det(sylvester(p, q)?))
}

/// Which of the two estimates held, judged on the enclosure upper bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    P,
    Q,
    Both,
    Neither,
}

#[derive(Clone, Debug)]
pub struct LemmaCertificate {
    pub p: IntPolynomial,
    pub q: IntPolynomial,
    pub s: usize,
    pub t: usize,
    pub resultant: BigInt,
    pub value_p: Enclosure,
    pub value_q: Enclosure,
    /// `K(s, t, xi)`.
    pub constant: Enclosure,
    /// `K |P(xi)| H(P)^(t-1) H(Q)^s`.
    pub bound_p: Enclosure,
    /// `K |Q(xi)| H(P)^t H(Q)^(s-1)`.
    pub bound_q: Enclosure,
    pub verdict: Branch,
    /// Both sides of the main inequality hold even on the enclosure lower bounds.
    pub certified: bool,
    /// The combined bound `1 <= K max(|P|,|Q|) H(P)^(t-1) H(Q)^(s-1) max(H(P),H(Q))`.
    pub corollary_holds: bool,
}

impl LemmaCertificate {
    pub fn is_valid(&self) -> bool {
        !self.resultant.is_zero() && self.verdict != Branch::Neither && self.corollary_holds
    }

    /// `log2` of `max(bound_p, bound_q) / |Res|` on upper bounds; at least 0 for a valid certificate.
    pub fn slack_log2(&self) -> f64 {
        let top = self.bound_p.hi().max(self.bound_q.hi()).clone();
        top.log2_abs() - Dyadic::from_int(self.resultant.abs()).log2_abs()
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

fn pow_enc(x: &Enclosure, k: usize) -> Enclosure {
    let mut acc = Enclosure::from_int(1);
    for _ in 0..k {
        acc = &acc * x;
    }
    acc
}

/// `|P(xi)|` with precision escalation until the enclosure excludes zero.
fn nonzero_abs(p: &IntPolynomial, target: &RealTarget, precision: u32, cap: u32) -> Result<Enclosure> {
    let mut prec = precision.max(1);
    loop {
        let e = p.evaluate(target, prec)?;
        if !e.contains_zero() {
            return Ok(e.abs());
        }
        if prec >= cap {
            return Err(Error::ZeroValue { bits: prec });
        }
        prec = (prec * 2).min(cap);
    }
}

const LEMMA_PRECISION_CAP: u32 = 4096;

pub fn lemma_check(p: &IntPolynomial, q: &IntPolynomial, target: &RealTarget, precision: u32) -> Result<LemmaCertificate> {
    if target.as_rational().is_some_and(|r| r.is_zero()) {
        return Err(Error::ZeroXi);
    }
    let res = resultant(p, q)?;
    if res.is_zero() {
        return Err(Error::NotCoprime);
    }
    let (s, t) = (p.degree(), q.degree());
    let value_p = nonzero_abs(p, target, precision, LEMMA_PRECISION_CAP)?;
    let value_q = nonzero_abs(q, target, precision, LEMMA_PRECISION_CAP)?;
    let xi = target.eval(precision.max(16))?;
    let one = Dyadic::from_int(1);
    let a = xi.abs();
    let m = Enclosure::new(a.lo().max(&one).clone(), a.hi().max(&one).clone());
    let constant = pow_enc(&m, s.max(t) - 1).scale(&factorial(s + t));
    let hp = p.height()?;
    let hq = q.height()?;
    let bound_p = (&constant * &value_p).scale(&(num_traits::pow(hp.clone(), t - 1) * num_traits::pow(hq.clone(), s)));
    let bound_q = (&constant * &value_q).scale(&(num_traits::pow(hp.clone(), t) * num_traits::pow(hq.clone(), s - 1)));
    let r = Dyadic::from_int(res.abs());
    let p_ok = *bound_p.hi() >= r;
    let q_ok = *bound_q.hi() >= r;
    let verdict = match (p_ok, q_ok) {
        (true, true) => Branch::Both,
        (true, false) => Branch::P,
        (false, true) => Branch::Q,
        (false, false) => Branch::Neither,
    };
    let certified = bound_p.lo().max(bound_q.lo()) >= &r;
    let vmax = value_p.hi().max(value_q.hi()).clone();
    let hmax = (&hp).max(&hq).clone();
    let comb = Enclosure::point(vmax)
        .scale(&(num_traits::pow(hp.clone(), t - 1) * num_traits::pow(hq.clone(), s - 1) * hmax));
    let comb = &constant * &comb;
    let corollary_holds = *comb.hi() >= one;
    Ok(LemmaCertificate {
        p: p.clone(),
        q: q.clone(),
        s,
        t,
        resultant: res,
        value_p,
        value_q,
        constant,
        bound_p,
        bound_q,
        verdict,
        certified,
        corollary_holds,
    })
}

/// Closed rational interval for the evaluation points of [`lemma_fuzz`]; zero is always skipped.
#[derive(Clone, Debug)]
pub struct XiRange {
    pub lo: BigRational,
    pub hi: BigRational,
    /// Largest denominator sampled.
    pub max_den: i64,
}

impl XiRange {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        XiRange { lo, hi, max_den: 64 }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> BigRational {
        if self.lo == self.hi {
            return self.lo.clone();
        }
        loop {
            let q = rng.gen_range(1..=self.max_den);
            let qb = BigRational::from_integer(q.into());
            let a = (&self.lo * &qb).ceil().to_integer();
            let b = (&self.hi * &qb).floor().to_integer();
            if a > b {
                continue;
            }
            let span = i64::try_from(&b - &a).unwrap_or(i64::MAX - 1);
            let num = &a + BigInt::from(rng.gen_range(0..=span));
            if num.is_zero() {
                continue;
            }
            return BigRational::new(num, q.into());
        }
    }
}

#[derive(Clone, Debug)]
pub struct FuzzReport {
    pub trials: usize,
    pub valid: usize,
    pub certified: usize,
    /// Smallest `log2(bound / |Res|)` seen; `+inf` for an empty run.
    pub worst_slack_log2: f64,
    pub certificates: Vec<(BigRational, LemmaCertificate)>,
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize, height: i64) -> IntPolynomial {
    let d = rng.gen_range(1..=degree);
    let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-height..=height)).collect();
    while c[d] == 0 {
        c[d] = rng.gen_range(-height..=height);
    }
    IntPolynomial::from_i64(&c)
}

/// Random coprime pairs at random rational points; each trial has its own stream of the
/// seeded generator so the outcome does not depend on the number of workers.
pub fn lemma_fuzz(trials: usize, degree: usize, height: u64, range: &XiRange, seed: u64) -> FuzzReport {
    assert!(degree >= 1 && height >= 1, "degree and height bounds must be positive");
    let h = height.min(i64::MAX as u64) as i64;
    let certificates: Vec<(BigRational, LemmaCertificate)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            loop {
                let xi = range.sample(&mut rng);
                let p = random_poly(&mut rng, degree, h);
                let q = random_poly(&mut rng, degree, h);
                if !gcd(&p, &q).is_constant() || p.eval_rational(&xi).is_zero() || q.eval_rational(&xi).is_zero() {
                    continue;
                }
                let target = RealTarget::from_rational(xi.clone()).expect("nonzero rational");
                match lemma_check(&p, &q, &target, 64) {
                    Ok(c) => return (xi, c),
                    Err(Error::NotCoprime) => continue,
                    Err(e) => panic!("lemma check failed on {p}, {q} at {xi}: {e}"),
                }
            }
        })
        .collect();
    let valid = certificates.iter().filter(|c| c.1.is_valid()).count();
    let certified = certificates.iter().filter(|c| c.1.certified).count();
    let worst = certificates.iter().map(|c| c.1.slack_log2()).fold(f64::INFINITY, f64::min);
    FuzzReport { trials, valid, certified, worst_slack_log2: worst, certificates }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn det_naive(m: &[Vec<BigInt>]) -> BigInt {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<BigInt>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect()).collect();
            let term = &m[0][j] * det_naive(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn small_sylvester_matrices() {
        let m = sylvester(&p(&[-1, 1]), &p(&[1, 1])).unwrap();
        assert_eq!(m, vec![vec![BigInt::from(1), BigInt::from(-1)], vec![BigInt::from(1), BigInt::from(1)]]);
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-1, 1])).unwrap(), BigInt::from(-1));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[-1, 0, 1])).unwrap(), BigInt::from(4));
        assert_eq!(resultant(&p(&[-1, 1]), &p(&[-1, 0, 1])).unwrap(), BigInt::zero());
        // lc(P)^t * Q(-1/2) = 2 * (-5/2)
        assert_eq!(resultant(&p(&[1, 2]), &p(&[-1, 3])).unwrap(), BigInt::from(-5));
        assert!(matches!(sylvester(&p(&[3]), &p(&[1, 1])), Err(Error::DegreeZero)));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = sylvester(&p(&[3, -1, 4, 1]), &p(&[-5, 9, 2])).unwrap();
        assert_eq!(bareiss_det(m.clone()), det_naive(&m));
        // zero pivot in the first column
        let m = vec![
            vec![BigInt::from(0), BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(3), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)],
        ];
        assert_eq!(bareiss_det(m.clone()), det_naive(&m));
    }

    #[test]
    fn lemma_examples() {
        let c = lemma_check(&p(&[-1, 1]), &p(&[1, 1]), &RealTarget::sqrt2(), 64).unwrap();
        assert_eq!(c.resultant, BigInt::from(2));
        assert_eq!(c.verdict, Branch::Q);
        assert!(c.is_valid() && c.certified);

        let third = RealTarget::rational(1, 3).unwrap();
        let c = lemma_check(&p(&[-2, 0, 1]), &p(&[-1, 1]), &third, 64).unwrap();
        assert!(c.is_valid());

        assert!(matches!(lemma_check(&p(&[-1, 1]), &p(&[-1, 1]), &third, 64), Err(Error::NotCoprime)));
        let zero = RealTarget::rational(0, 1).unwrap();
        assert!(matches!(lemma_check(&p(&[-1, 1]), &p(&[1, 1]), &zero, 64), Err(Error::ZeroXi)));
    }

    #[test]
    fn fuzz_small_runs() {
        let half = BigRational::new(1.into(), 2.into());
        let one = lemma_fuzz(1, 1, 1, &XiRange::new(half.clone(), half), 0);
        assert_eq!((one.trials, one.valid), (1, 1));
        let empty = lemma_fuzz(0, 3, 10, &XiRange::new(BigRational::from_integer((-2).into()), BigRational::from_integer(2.into())), 1);
        assert_eq!(empty.valid, 0);
        assert!(empty.certificates.is_empty());
    }
}

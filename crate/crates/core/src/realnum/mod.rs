//! Constructively defined real numbers with rigorous enclosure evaluation.

mod dyadic;
mod parse;

pub use dyadic::{Dyadic, Enclosure};
pub use parse::parse_target;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::intpoly::IntPolynomial;

/// Source of partial quotients `a_0; a_1, a_2, ...` for a continued fraction.
#[derive(Clone)]
pub enum PartialQuotients {
    /// A terminating expansion, hence a rational number.
    Finite(Vec<BigInt>),
    /// `prefix` (starting with `a_0`) followed by `period` repeated forever.
    Periodic { prefix: Vec<BigInt>, period: Vec<BigInt> },
    /// Term `k` on demand; `None` means the generator has run dry.
    Generated(Arc<dyn Fn(usize) -> Option<BigInt> + Send + Sync>),
}

impl fmt::Debug for PartialQuotients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartialQuotients::Finite(v) => f.debug_tuple("Finite").field(v).finish(),
            PartialQuotients::Periodic { prefix, period } => {
                f.debug_struct("Periodic").field("prefix", prefix).field("period", period).finish()
            }
            PartialQuotients::Generated(_) => f.write_str("Generated(..)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiouvilleExponents {
    /// `a_k = k!` for `k >= 1`.
    Factorial,
    /// Explicit strictly increasing list `a_1, a_2, ...`.
    List(Vec<u64>),
}

impl LiouvilleExponents {
    /// `a_k` for `k >= 1`; `None` past the end of an explicit list.
    pub fn get(&self, k: usize) -> Option<u64> {
        match self {
            LiouvilleExponents::Factorial => {
                let mut f: u64 = 1;
                for i in 2..=k as u64 {
                    f = f.checked_mul(i)?;
                }
                Some(f)
            }
            LiouvilleExponents::List(v) => v.get(k.checked_sub(1)?).copied(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum TargetKind {
    Rational(BigRational),
    /// Root number `index` (0-based, ascending) among the real roots of `minpoly`.
    AlgebraicRoot { minpoly: IntPolynomial, index: usize },
    ContinuedFraction(PartialQuotients),
    /// `[0; s_1, s_2, ...]` with `s` the Fibonacci word over `{a, b}`.
    FibonacciWordCF { a: u64, b: u64 },
    /// `sum_{k>=1} base^(-a_k)`.
    LiouvilleSeries { base: u64, exponents: LiouvilleExponents },
    /// `0.d_1 d_2 d_3 ...` with digits drawn from a seeded ChaCha8 stream.
    DigitStream { seed: u64 },
}

/// What is known about the arithmetic nature of a target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nature {
    Algebraic { degree: usize },
    Transcendental,
    Unknown,
}

#[derive(Default)]
struct Cache {
    enclosures: HashMap<u32, Enclosure>,
    terms: Vec<BigInt>,
    digits: Vec<u8>,
    rng: Option<ChaCha8Rng>,
    /// Deepest known dyadic cell `[m, m+1] * 2^-k` around an algebraic root.
    cell: Option<(BigInt, i64)>,
}

struct Inner {
    kind: TargetKind,
    label: String,
    /// Exact minimal polynomial when the target is known to be algebraic.
    minpoly: Option<IntPolynomial>,
    /// Isolating interval of the selected root, for algebraic roots of degree >= 2.
    isolating: Option<(BigRational, BigRational)>,
    /// Root index of the target among the real roots of `minpoly`.
    root_index: usize,
    cache: Mutex<Cache>,
}

/// An immutable real number. Cloning is cheap; clones share the evaluation cache.
#[derive(Clone)]
pub struct RealTarget {
    inner: Arc<Inner>,
}

impl fmt::Debug for RealTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealTarget").field("label", &self.inner.label).field("kind", &self.inner.kind).finish()
    }
}

impl fmt::Display for RealTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.inner.label)
    }
}

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl RealTarget {
    pub fn new(kind: TargetKind, label: impl Into<String>) -> Result<Self> {
        let mut minpoly = None;
        let mut isolating = None;
        let mut root_index = 0;
        let kind = match kind {
            TargetKind::Rational(r) => {
                minpoly = Some(IntPolynomial::from_rational_root(&r));
                TargetKind::Rational(r)
            }
            TargetKind::AlgebraicRoot { minpoly: m, index } => {
                if m.is_zero() || m.degree() == 0 {
                    return Err(Error::InvalidTarget("minimal polynomial must have degree >= 1".into()));
                }
                let m = m.primitive_part().canonical();
                if m.degree() <= 4 {
                    let f = crate::algapprox::factor_small(&m)?;
                    if f.factors.len() != 1 || f.factors[0].1 != 1 {
                        return Err(Error::InvalidTarget(format!("{m} is not irreducible")));
                    }
                } else if !crate::intpoly::gcd(&m, &m.derivative()).is_constant() {
                    return Err(Error::InvalidTarget(format!("{m} is not squarefree")));
                }
                let roots = crate::algapprox::isolate_real_roots(&m);
                let Some(iv) = roots.get(index) else {
                    return Err(Error::InvalidTarget(format!(
                        "root index {index} out of range: {m} has {} real roots",
                        roots.len()
                    )));
                };
                if m.degree() >= 2 {
                    isolating = Some(iv.clone());
                }
                root_index = index;
                minpoly = Some(m.clone());
                TargetKind::AlgebraicRoot { minpoly: m, index }
            }
            TargetKind::ContinuedFraction(pq) => {
                let check = |v: &[BigInt], skip_first: bool| -> Result<()> {
                    let start = usize::from(skip_first);
                    if v.iter().skip(start).any(|a| !a.is_positive()) {
                        return Err(Error::InvalidTarget("partial quotients after a_0 must be positive".into()));
                    }
                    Ok(())
                };
                match &pq {
                    PartialQuotients::Finite(v) => {
                        if v.is_empty() {
                            return Err(Error::InvalidTarget("empty continued fraction".into()));
                        }
                        check(v, true)?;
                        let r = finite_cf_value(v);
                        minpoly = Some(IntPolynomial::from_rational_root(&r));
                    }
                    PartialQuotients::Periodic { prefix, period } => {
                        if prefix.is_empty() || period.is_empty() {
                            return Err(Error::InvalidTarget("periodic continued fraction needs a_0 and a period".into()));
                        }
                        check(prefix, true)?;
                        check(period, false)?;
                        minpoly = Some(periodic_cf_minpoly(prefix, period));
                    }
                    PartialQuotients::Generated(_) => {}
                }
                TargetKind::ContinuedFraction(pq)
            }
            TargetKind::FibonacciWordCF { a, b } => {
                if a == 0 || b == 0 || a == b {
                    return Err(Error::InvalidTarget("Fibonacci word letters must be distinct positive integers".into()));
                }
                TargetKind::FibonacciWordCF { a, b }
            }
            TargetKind::LiouvilleSeries { base, exponents } => {
                if base < 2 {
                    return Err(Error::InvalidTarget("Liouville base must be at least 2".into()));
                }
                if let LiouvilleExponents::List(v) = &exponents {
                    if v.is_empty() || v[0] == 0 || v.windows(2).any(|w| w[1] <= w[0]) {
                        return Err(Error::InvalidTarget("exponents must be positive and strictly increasing".into()));
                    }
                }
                TargetKind::LiouvilleSeries { base, exponents }
            }
            k @ TargetKind::DigitStream { .. } => k,
        };
        if let Some(m) = &minpoly {
            if m.degree() == 1 && !matches!(kind, TargetKind::AlgebraicRoot { .. }) {
                root_index = 0;
            }
        }
        let quadratic_cf = matches!(&kind, TargetKind::ContinuedFraction(PartialQuotients::Periodic { .. }));
        let mut t = RealTarget {
            inner: Arc::new(Inner {
                kind,
                label: label.into(),
                minpoly,
                isolating,
                root_index,
                cache: Mutex::new(Cache::default()),
            }),
        };
        if quadratic_cf {
            // locate the value among the conjugates so equality tests can use the root index
            let m = t.inner.minpoly.clone().expect("periodic expansions carry a minimal polynomial");
            let roots = crate::algapprox::isolate_real_roots(&m);
            let mut prec = 64;
            let index = loop {
                let e = t.eval(prec)?;
                let hits: Vec<usize> = (0..roots.len())
                    .filter(|&i| e.lo().to_rational() <= roots[i].1 && roots[i].0 <= e.hi().to_rational())
                    .collect();
                if hits.len() == 1 {
                    break hits[0];
                }
                prec *= 2;
            };
            Arc::get_mut(&mut t.inner).expect("fresh target").root_index = index;
        }
        Ok(t)
    }

    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidTarget("zero denominator".into()));
        }
        let r = rat(p, q);
        Self::new(TargetKind::Rational(r.clone()), format!("rational:{r}"))
    }

    pub fn from_rational(r: BigRational) -> Result<Self> {
        let label = format!("rational:{r}");
        Self::new(TargetKind::Rational(r), label)
    }

    pub fn algebraic(coeffs: &[i64], index: usize) -> Result<Self> {
        let m = IntPolynomial::from_i64(coeffs);
        let label = format!("algroot:{m}:{index}");
        Self::new(TargetKind::AlgebraicRoot { minpoly: m, index }, label)
    }

    pub fn sqrt2() -> Self {
        Self::algebraic(&[-2, 0, 1], 1).expect("x^2-2 is irreducible")
    }

    pub fn extremal(a: u64, b: u64) -> Result<Self> {
        Self::new(TargetKind::FibonacciWordCF { a, b }, format!("extremal:{a},{b}"))
    }

    pub fn liouville_factorial(base: u64) -> Result<Self> {
        Self::new(
            TargetKind::LiouvilleSeries { base, exponents: LiouvilleExponents::Factorial },
            format!("liouville:{base}:factorial"),
        )
    }

    pub fn digits(seed: u64) -> Self {
        Self::new(TargetKind::DigitStream { seed }, format!("digits:seed={seed}")).expect("always valid")
    }

    pub fn kind(&self) -> &TargetKind {
        &self.inner.kind
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    /// Exact minimal polynomial (primitive, positive leading coefficient) when known.
    pub fn minimal_polynomial(&self) -> Option<&IntPolynomial> {
        self.inner.minpoly.as_ref()
    }

    /// Index of the target among the ascending real roots of its minimal polynomial.
    pub fn root_index(&self) -> Option<usize> {
        self.inner.minpoly.as_ref().map(|_| self.inner.root_index)
    }

    /// Exact value when the target is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.inner.kind {
            TargetKind::Rational(r) => Some(r.clone()),
            TargetKind::ContinuedFraction(PartialQuotients::Finite(v)) => Some(finite_cf_value(v)),
            _ => {
                let m = self.inner.minpoly.as_ref()?;
                if m.degree() == 1 {
                    Some(rat(-m.coeff(0), m.coeff(1).clone()))
                } else {
                    None
                }
            }
        }
    }

    pub fn nature(&self) -> Nature {
        if let Some(m) = &self.inner.minpoly {
            return Nature::Algebraic { degree: m.degree() };
        }
        match &self.inner.kind {
            TargetKind::FibonacciWordCF { .. } => Nature::Transcendental,
            TargetKind::LiouvilleSeries { base: _, exponents: LiouvilleExponents::Factorial } => Nature::Transcendental,
            _ => Nature::Unknown,
        }
    }

    /// Enclosure of the target of width at most `2^-precision`.
    ///
    /// The result depends only on `(target, precision)`: for irrational values it is the
    /// dyadic cell of width `2^-(precision+1)` containing the value.
    pub fn eval(&self, precision: u32) -> Result<Enclosure> {
        assert!(precision >= 1, "precision must be at least one bit");
        let mut cache = self.inner.cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(e) = cache.enclosures.get(&precision) {
            return Ok(e.clone());
        }
        let q = i64::from(precision) + 1;
        let e = if let Some(r) = self.as_rational() {
            Enclosure::from_rational(&r, q)
        } else if let Some((a, b)) = &self.inner.isolating {
            let m = self.inner.minpoly.as_ref().expect("isolating interval implies minpoly");
            let (cell, k) = algebraic_cell(m, a, b, q, &mut cache);
            Enclosure::new(Dyadic::new(cell.clone(), -k), Dyadic::new(cell + 1, -k))
        } else {
            self.canonical_cell(q, &mut cache)?
        };
        cache.enclosures.insert(precision, e.clone());
        Ok(e)
    }

    /// Upper bound on `max(1, |xi|)` as a float, rounded up.
    pub fn magnitude_bound(&self) -> Result<f64> {
        let e = self.eval(16)?;
        Ok(e.mag().to_f64().max(1.0) * (1.0 + 1e-9) + 1e-9)
    }

    fn canonical_cell(&self, q: i64, cache: &mut Cache) -> Result<Enclosure> {
        let scale = BigRational::from_integer(BigInt::one() << q as u64);
        let mut r = q + 4;
        loop {
            let (lo, hi) = self.raw(r, cache)?;
            let fl = (&lo * &scale).floor().to_integer();
            let fh = (&hi * &scale).floor().to_integer();
            if fl == fh {
                return Ok(Enclosure::new(Dyadic::new(fl.clone(), -q), Dyadic::new(fl + 1, -q)));
            }
            if r > q + 256 {
                // the value sits on (or absurdly close to) a grid point
                let ch = (&hi * &scale).ceil().to_integer();
                return Ok(Enclosure::new(Dyadic::new(fl, -q), Dyadic::new(ch, -q)));
            }
            r += 32;
        }
    }

    /// Rational enclosure of width at most `2^-r`.
    fn raw(&self, r: i64, cache: &mut Cache) -> Result<(BigRational, BigRational)> {
        match &self.inner.kind {
            TargetKind::ContinuedFraction(_) | TargetKind::FibonacciWordCF { .. } => {
                let bound = BigInt::one() << (r + 1) as u64;
                let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
                let a0 = self.cf_term(0, cache)?.expect("a_0 always exists");
                let (mut p1, mut q1) = (a0, BigInt::one());
                let mut k = 1;
                loop {
                    let Some(a) = self.cf_term(k, cache)? else {
                        return Err(Error::GeneratorExhausted { available: k, needed: k + 1 });
                    };
                    let p2 = &a * &p1 + &p0;
                    let q2 = &a * &q1 + &q0;
                    if &q1 * &q2 >= bound {
                        let x = BigRational::new(p1, q1);
                        let y = BigRational::new(p2, q2);
                        return Ok(if x < y { (x, y) } else { (y, x) });
                    }
                    p0 = std::mem::replace(&mut p1, p2);
                    q0 = std::mem::replace(&mut q1, q2);
                    k += 1;
                }
            }
            TargetKind::LiouvilleSeries { base, exponents } => {
                let lg = (*base as f64).log2();
                let g = BigInt::from(*base);
                let mut sum = BigRational::zero();
                let mut k = 1;
                loop {
                    let Some(a) = exponents.get(k) else {
                        return Err(Error::GeneratorExhausted { available: k - 1, needed: k });
                    };
                    let next = exponents.get(k + 1);
                    sum += BigRational::new(BigInt::one(), num_traits::pow(g.clone(), a as usize));
                    match next {
                        // tail < 2 * base^(-a_{k+1})
                        Some(an) if (an as f64) * lg - 1.0 >= r as f64 + 1.0 => {
                            let tail = BigRational::new(BigInt::from(2), num_traits::pow(g.clone(), an as usize));
                            return Ok((sum.clone(), sum + tail));
                        }
                        Some(_) => k += 1,
                        None if matches!(exponents, LiouvilleExponents::Factorial) => {
                            // k! overflowed u64: the tail is far below any usable precision
                            let tail = BigRational::new(BigInt::one(), BigInt::one() << (r + 1) as u64);
                            return Ok((sum.clone(), sum + tail));
                        }
                        None => return Err(Error::GeneratorExhausted { available: k, needed: k + 1 }),
                    }
                }
            }
            TargetKind::DigitStream { seed } => {
                // 10^-N <= 2^-r  <=>  N >= r * log10(2)
                let n = ((r as f64) * std::f64::consts::LOG10_2).ceil() as usize + 1;
                let rng = cache.rng.get_or_insert_with(|| ChaCha8Rng::seed_from_u64(*seed));
                while cache.digits.len() < n {
                    cache.digits.push(rng.gen_range(0..10u8));
                }
                let mut m = BigInt::zero();
                for d in &cache.digits[..n] {
                    m = m * 10 + *d;
                }
                let den = num_traits::pow(BigInt::from(10), n);
                Ok((BigRational::new(m.clone(), den.clone()), BigRational::new(m + 1, den)))
            }
            TargetKind::Rational(_) | TargetKind::AlgebraicRoot { .. } => unreachable!("handled exactly"),
        }
    }

    fn cf_term(&self, k: usize, cache: &mut Cache) -> Result<Option<BigInt>> {
        match &self.inner.kind {
            TargetKind::ContinuedFraction(pq) => Ok(match pq {
                PartialQuotients::Finite(v) => v.get(k).cloned(),
                PartialQuotients::Periodic { prefix, period } => Some(if k < prefix.len() {
                    prefix[k].clone()
                } else {
                    period[(k - prefix.len()) % period.len()].clone()
                }),
                PartialQuotients::Generated(f) => {
                    while cache.terms.len() <= k {
                        let i = cache.terms.len();
                        match f(i) {
                            Some(a) => {
                                if i > 0 && !a.is_positive() {
                                    return Err(Error::InvalidTarget(format!("partial quotient a_{i} = {a} is not positive")));
                                }
                                cache.terms.push(a)
                            }
                            None => return Ok(None),
                        }
                    }
                    Some(cache.terms[k].clone())
                }
            }),
            TargetKind::FibonacciWordCF { a, b } => {
                if k == 0 {
                    return Ok(Some(BigInt::zero()));
                }
                if cache.terms.len() < k {
                    let want = (k * 2).max(64);
                    cache.terms = fibonacci_word_prefix(BigInt::from(*a), BigInt::from(*b), want);
                }
                Ok(Some(cache.terms[k - 1].clone()))
            }
            _ => Err(Error::UnsupportedKind("continued fraction terms")),
        }
    }

    /// The `k`-th convergent: `p_k/q_k` for continued fractions (0-based, `p_0/q_0 = a_0`),
    /// the `k`-term partial sum for Liouville series, the value itself for rationals.
    pub fn convergent(&self, k: usize) -> Result<BigRational> {
        match &self.inner.kind {
            TargetKind::Rational(r) => Ok(r.clone()),
            TargetKind::ContinuedFraction(_) | TargetKind::FibonacciWordCF { .. } => {
                let mut cache = self.inner.cache.lock().unwrap_or_else(|e| e.into_inner());
                let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
                let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
                for i in 0..=k {
                    let Some(a) = self.cf_term(i, &mut cache)? else {
                        if matches!(self.inner.kind, TargetKind::ContinuedFraction(PartialQuotients::Finite(_))) {
                            // past the end of a terminating expansion the value is exact
                            break;
                        }
                        return Err(Error::GeneratorExhausted { available: i, needed: k + 1 });
                    };
                    let p2 = &a * &p1 + &p0;
                    let q2 = &a * &q1 + &q0;
                    p0 = std::mem::replace(&mut p1, p2);
                    q0 = std::mem::replace(&mut q1, q2);
                }
                Ok(BigRational::new(p1, q1))
            }
            TargetKind::LiouvilleSeries { base, exponents } => {
                let g = BigInt::from(*base);
                let mut sum = BigRational::zero();
                for j in 1..=k {
                    let a = exponents
                        .get(j)
                        .ok_or(Error::GeneratorExhausted { available: j - 1, needed: k })?;
                    sum += BigRational::new(BigInt::one(), num_traits::pow(g.clone(), a as usize));
                }
                Ok(sum)
            }
            TargetKind::AlgebraicRoot { .. } => Err(Error::UnsupportedKind("AlgebraicRoot")),
            TargetKind::DigitStream { .. } => Err(Error::UnsupportedKind("DigitStream")),
        }
    }
}

/// Locate the dyadic cell `[m, m+1] * 2^-k` holding the algebraic root isolated in `(a, b)`.
fn algebraic_cell(m: &IntPolynomial, a: &BigRational, b: &BigRational, k: i64, cache: &mut Cache) -> (BigInt, i64) {
    if let Some((cm, ck)) = &cache.cell {
        if *ck >= k {
            let shift = (*ck - k) as u64;
            return (cm >> shift, k);
        }
    }
    let sa = m.sign_at(a);
    // `left(x)` iff x lies strictly left of the root
    let left = |x: &BigRational| -> bool {
        if x <= a {
            true
        } else if x >= b {
            false
        } else {
            m.sign_at(x) == sa
        }
    };
    let scale = BigRational::from_integer(BigInt::one() << k as u64);
    let (mut lo, mut hi) = match &cache.cell {
        Some((cm, ck)) => {
            let shift = (k - *ck) as u64;
            (cm << shift, (cm + 1) << shift)
        }
        None => ((a * &scale).floor().to_integer(), (b * &scale).ceil().to_integer()),
    };
    // invariant: lo/2^k left of the root, hi/2^k right of it
    let den = BigInt::one() << k as u64;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        if left(&BigRational::new(mid.clone(), den.clone())) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    cache.cell = Some((lo.clone(), k));
    (lo, k)
}

fn finite_cf_value(v: &[BigInt]) -> BigRational {
    let mut x = BigRational::from_integer(v[v.len() - 1].clone());
    for a in v[..v.len() - 1].iter().rev() {
        x = BigRational::from_integer(a.clone()) + x.recip();
    }
    x
}

/// Minimal polynomial of `[prefix; period, period, ...]`.
fn periodic_cf_minpoly(prefix: &[BigInt], period: &[BigInt]) -> IntPolynomial {
    // Mobius matrix of a run of partial quotients: x -> (p x + p') / (q x + q')
    let mobius = |terms: &[BigInt]| -> [BigInt; 4] {
        let (mut p, mut pp, mut q, mut qp) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
        for a in terms {
            let np = a * &p + &pp;
            let nq = a * &q + &qp;
            pp = std::mem::replace(&mut p, np);
            qp = std::mem::replace(&mut q, nq);
        }
        [p, pp, q, qp]
    };
    // y = [period; y] solves q y^2 + (q' - p) y - p' = 0
    let [p, pp, q, qp] = mobius(period);
    let (ca, cb, cc) = (q, &qp - &p, -pp);
    // xi = (P y + P') / (Q y + Q'), so y = (P' - Q' xi) / (Q xi - P)
    let [bp, bpp, bq, bqp] = mobius(prefix);
    let u = IntPolynomial::new(vec![bpp.clone(), -bqp.clone()]);
    let v = IntPolynomial::new(vec![-bp.clone(), bq.clone()]);
    let poly = &(&(&u * &u).scale(&ca) + &(&u * &v).scale(&cb)) + &(&v * &v).scale(&cc);
    poly.primitive_part().canonical()
}

/// First `length` letters of the fixed point of `f_1 = a`, `f_2 = ab`, `f_{k+1} = f_k f_{k-1}`.
pub fn fibonacci_word_prefix<T: Clone>(a: T, b: T, length: usize) -> Vec<T> {
    assert!(length >= 1, "length must be at least 1");
    let mut prev = vec![false];
    let mut cur = vec![false, true];
    while cur.len() < length {
        let mut next = cur.clone();
        next.extend_from_slice(&prev);
        prev = std::mem::replace(&mut cur, next);
    }
    cur.truncate(length);
    cur.into_iter().map(|t| if t { b.clone() } else { a.clone() }).collect()
}

/// Floating approximation of an enclosure midpoint, for logging and estimators.
pub fn approx(target: &RealTarget) -> f64 {
    target.eval(64).map(|e| e.mid_f64()).unwrap_or(f64::NAN)
}

/// `log2` of the exact binomial-free factor used for derived precisions.
pub(crate) fn bits_for(x: f64) -> u32 {
    if x <= 1.0 {
        0
    } else {
        x.log2().ceil().to_u32().unwrap_or(u32::MAX)
    }
}

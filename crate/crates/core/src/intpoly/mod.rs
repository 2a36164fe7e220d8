//! Integer polynomials: heights, rigorous evaluation at targets, enumeration, gcd.

mod enumerate;
mod gcd;

pub use enumerate::{enumerate, enumeration_count, Enumeration};
pub use gcd::gcd;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::realnum::{bits_for, Enclosure, RealTarget};

/// Polynomial with integer coefficients, stored constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

/// Outcome of an exact zero test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroStatus {
    Zero,
    Nonzero,
    /// Every enclosure up to the precision cap still contained zero.
    Unknown,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `q x - p` for `r = p/q` in lowest terms with `q > 0`.
    pub fn from_rational_root(r: &BigRational) -> Self {
        Self::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the leading coefficient; 0 for constants and the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn height(&self) -> Result<BigInt> {
        self.coeffs.iter().map(|c| c.abs()).max().ok_or(Error::ZeroPolynomial)
    }

    /// Height of a nonzero polynomial, 0 for the zero polynomial.
    pub fn height_or_zero(&self) -> BigInt {
        self.height().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide by the (positive) content.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    /// Sign-normalized copy: leading coefficient positive.
    pub fn canonical(&self) -> Self {
        if self.lead().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.lead().is_positive()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// Lexicographic order on coefficient vectors read from the highest degree down.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Exact sign of `P(x)` at a rational point.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        // clear denominators: d^deg P(n/d) is an integer with the same sign
        let (n, d) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        // homogeneous Horner: sum c_i n^i d^(deg-i)
        for (j, c) in self.coeffs.iter().rev().enumerate() {
            if j == 0 {
                acc = c.clone();
            } else {
                dpow *= d;
                acc = acc * n + c * &dpow;
            }
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Interval Horner evaluation over an enclosure of the argument.
    pub fn evaluate_enclosure(&self, x: &Enclosure) -> Enclosure {
        let mut acc = Enclosure::from_int(0);
        for c in self.coeffs.iter().rev() {
            acc = (&acc * x).add_int(c);
        }
        acc
    }

    /// Rigorous enclosure of `P(xi)`.
    ///
    /// The width is at most `height * (deg+1) * max(1,|xi|)^deg * 2^(1-precision)`.
    pub fn evaluate(&self, target: &RealTarget, precision: u32) -> Result<Enclosure> {
        if self.is_zero() {
            return Ok(Enclosure::from_int(0));
        }
        if let Some(r) = target.as_rational() {
            return Ok(Enclosure::from_rational(&self.eval_rational(&r), i64::from(precision) + 1));
        }
        let d = self.degree() as f64;
        let extra = 2 * bits_for(d + 1.0) + 2;
        let xi = target.eval(precision + extra)?;
        let grid = i64::from(precision + extra) + 8;
        let mut acc = Enclosure::from_int(0);
        for c in self.coeffs.iter().rev() {
            acc = (&acc * &xi).add_int(c).round_outward(grid);
        }
        Ok(acc)
    }

    /// Pseudo-remainder of `self` by `m`: `lc(m)^(deg self - deg m + 1) * self mod m` in `Z[x]`.
    pub fn pseudo_rem(&self, m: &Self) -> Self {
        assert!(!m.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let dm = m.degree();
        let lm = m.lead();
        if r.is_zero() || r.degree() < dm {
            return r;
        }
        let mut missing = r.degree() - dm + 1;
        while !r.is_zero() && r.degree() >= dm {
            missing -= 1;
            let shift = r.degree() - dm;
            let lr = r.lead();
            // r <- lm * r - lr * x^shift * m
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lm).collect();
            for (i, c) in m.coeffs.iter().enumerate() {
                next[i + shift] -= c * &lr;
            }
            r = Self::new(next);
        }
        r.scale(&num_traits::pow(lm, missing))
    }

    /// `true` if `m` divides `self` over the rationals.
    pub fn divisible_by(&self, m: &Self) -> bool {
        self.pseudo_rem(m).is_zero()
    }

    /// Exact quotient over the integers, when `m` divides `self` there.
    pub fn exact_div(&self, m: &Self) -> Option<Self> {
        if m.is_zero() {
            return None;
        }
        let mut r = self.clone();
        let dm = m.degree();
        let lm = m.lead();
        if r.is_zero() {
            return Some(Self::zero());
        }
        if r.degree() < dm {
            return None;
        }
        let mut q = vec![BigInt::zero(); r.degree() - dm + 1];
        while !r.is_zero() && r.degree() >= dm {
            let shift = r.degree() - dm;
            let (qc, rem) = r.lead().div_rem(&lm);
            if !rem.is_zero() {
                return None;
            }
            let mut next = r.coeffs.clone();
            for (i, c) in m.coeffs.iter().enumerate() {
                next[i + shift] -= c * &qc;
            }
            q[shift] = qc;
            r = Self::new(next);
        }
        if r.is_zero() {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Decide whether `P(xi) = 0`.
    ///
    /// Exact for targets with a known minimal polynomial; otherwise escalates the
    /// working precision from `start` bits, doubling up to `cap`.
    pub fn vanishes_exactly(&self, target: &RealTarget, start: u32, cap: u32) -> ZeroStatus {
        if self.is_zero() {
            return ZeroStatus::Zero;
        }
        if let Some(m) = target.minimal_polynomial() {
            // the minimal polynomial is irreducible, so any root of P shared with it forces m | P
            return if self.divisible_by(m) { ZeroStatus::Zero } else { ZeroStatus::Nonzero };
        }
        if self.is_constant() {
            return ZeroStatus::Nonzero;
        }
        let mut p = start.max(1);
        loop {
            match self.evaluate(target, p) {
                Ok(e) if !e.contains_zero() => return ZeroStatus::Nonzero,
                Ok(_) => {}
                Err(_) => return ZeroStatus::Unknown,
            }
            if p >= cap {
                return ZeroStatus::Unknown;
            }
            p = (p * 2).min(cap);
        }
    }

    /// Ascending list of coefficients as machine integers, when they fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| i64::try_from(c).ok()).collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        if self.coeffs.is_empty() {
            f.write_str("0")?;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Parses `[c0,c1,...,cn]`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("polynomial must look like [c0,c1,...]: {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Self::zero());
        }
        let coeffs = inner
            .split(',')
            .map(|c| c.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coefficient {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

impl serde::Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for IntPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

//! Dyadic rationals and closed dyadic intervals with outward rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The number `mant * 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), pow2((-self.exp) as u64))
        }
    }

    /// Largest multiple of `2^-prec` that is `<= r`.
    pub fn floor_rational(r: &BigRational, prec: i64) -> Self {
        let scaled = scale_rational(r, prec);
        Dyadic::new(scaled.floor().to_integer(), -prec)
    }

    /// Smallest multiple of `2^-prec` that is `>= r`.
    pub fn ceil_rational(r: &BigRational, prec: i64) -> Self {
        let scaled = scale_rational(r, prec);
        Dyadic::new(scaled.ceil().to_integer(), -prec)
    }

    /// Round down onto the grid `2^-prec` (no-op when already representable).
    pub fn round_down(&self, prec: i64) -> Self {
        if self.exp >= -prec {
            return self.clone();
        }
        let shift = (-prec - self.exp) as u64;
        Dyadic::new(self.mant.div_floor(&pow2(shift)), -prec)
    }

    pub fn round_up(&self, prec: i64) -> Self {
        if self.exp >= -prec {
            return self.clone();
        }
        let shift = (-prec - self.exp) as u64;
        Dyadic::new(-((-&self.mant).div_floor(&pow2(shift))), -prec)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            self.mant.div_floor(&pow2((-self.exp) as u64))
        }
    }

    pub fn ceil(&self) -> BigInt {
        -((-self).floor())
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    /// Approximate base-2 logarithm of `|self|`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.mant.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (self.mant.abs() >> shift as u64)
            .to_string()
            .parse::<f64>()
            .unwrap_or(f64::NAN);
        top.log2() + (shift + self.exp) as f64
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let l = self.log2_abs();
        let v = l.exp2();
        if self.signum() < 0 {
            -v
        } else {
            v
        }
    }

    /// Decimal rendering in scientific notation with `digits` significant
    /// digits, rounded toward -inf (`up == false`) or +inf (`up == true`).
    pub fn to_decimal_directed(&self, digits: u32, up: bool) -> String {
        if self.mant.is_zero() {
            return "0".to_string();
        }
        let r = self.to_rational();
        let neg = r.is_negative();
        let a = r.abs();
        // decimal exponent estimate, then correct
        let mut e10 = (self.log2_abs() * std::f64::consts::LN_2 / std::f64::consts::LN_10).floor() as i64;
        let ten = BigInt::from(10);
        let p10 = |k: i64| -> BigRational {
            if k >= 0 {
                BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
            } else {
                BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
            }
        };
        loop {
            let lo = p10(e10);
            if a < lo {
                e10 -= 1;
                continue;
            }
            if a >= p10(e10 + 1) {
                e10 += 1;
                continue;
            }
            break;
        }
        let scaled = &a * p10(digits as i64 - 1 - e10);
        // magnitude rounding direction flips for negatives
        let round_away = up != neg;
        let m = if round_away { scaled.ceil().to_integer() } else { scaled.floor().to_integer() };
        let mut s = m.to_string();
        let mut e = e10;
        if s.len() > digits as usize {
            // rounding carried into a new digit (e.g. 9.99 -> 10.0)
            s.truncate(digits as usize);
            e += 1;
        }
        let (head, tail) = s.split_at(1);
        let body = if tail.is_empty() { head.to_string() } else { format!("{head}.{tail}") };
        format!("{}{}e{}", if neg { "-" } else { "" }, body, e)
    }
}

fn scale_rational(r: &BigRational, prec: i64) -> BigRational {
    if prec >= 0 {
        r * BigRational::from_integer(pow2(prec as u64))
    } else {
        r / BigRational::from_integer(pow2((-prec) as u64))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_directed(17, false))
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
}

impl Enclosure {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "enclosure endpoints out of order");
        Enclosure { lo, hi }
    }

    pub fn point(v: Dyadic) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Enclosure::point(Dyadic::from_int(v))
    }

    /// Tightest enclosure of `r` on the grid `2^-prec`.
    pub fn from_rational(r: &BigRational, prec: i64) -> Self {
        Enclosure { lo: Dyadic::floor_rational(r, prec), hi: Dyadic::ceil_rational(r, prec) }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// `true` if the width is at most `2^-prec`.
    pub fn width_at_most(&self, prec: i64) -> bool {
        self.width() <= Dyadic::pow2(-prec)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_dyadic(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Common part of two enclosures of the same number.
    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        if lo <= hi {
            Some(Enclosure { lo, hi })
        } else {
            None
        }
    }

    /// Round endpoints outward onto the grid `2^-prec`.
    pub fn round_outward(&self, prec: i64) -> Self {
        Enclosure { lo: self.lo.round_down(prec), hi: self.hi.round_up(prec) }
    }

    pub fn abs(&self) -> Self {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            Enclosure { lo: -&self.hi, hi: -&self.lo }
        } else {
            let m = std::cmp::max(-&self.lo, self.hi.clone());
            Enclosure { lo: Dyadic::zero(), hi: m }
        }
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> Dyadic {
        std::cmp::max(self.lo.abs(), self.hi.abs())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let a = &self.lo * &Dyadic::from_int(k.clone());
        let b = &self.hi * &Dyadic::from_int(k.clone());
        if a <= b {
            Enclosure { lo: a, hi: b }
        } else {
            Enclosure { lo: b, hi: a }
        }
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        let d = Dyadic::from_int(k.clone());
        Enclosure { lo: &self.lo + &d, hi: &self.hi + &d }
    }

    pub fn mid_f64(&self) -> f64 {
        (&self.lo + &self.hi).to_f64() / 2.0
    }

    /// Exact sign if the interval excludes zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else {
            None
        }
    }

    /// `Less` if every point of `self` is below every point of `other`.
    pub fn certain_cmp(&self, other: &Enclosure) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if other.hi < self.lo {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl Add for &Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Sub for &Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Mul for &Enclosure {
    type Output = Enclosure;
    fn mul(self, rhs: &Enclosure) -> Enclosure {
        let c = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Enclosure { lo, hi }
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure { lo: -&self.hi, hi: -&self.lo }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_decimal_directed(17, false),
            self.hi.to_decimal_directed(17, true)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn floor_and_ceil_bracket_a_third() {
        let e = Enclosure::from_rational(&q(1, 3), 10);
        assert!(e.contains(&q(1, 3)));
        assert!(e.width_at_most(10));
        assert_eq!(e.lo().to_rational(), q(341, 1024));
    }

    #[test]
    fn rounding_is_outward_for_negatives() {
        let d = Dyadic::new(BigInt::from(-5), -3); // -0.625
        assert_eq!(d.round_down(1).to_rational(), q(-1, 1));
        assert_eq!(d.round_up(1).to_rational(), q(-1, 2));
    }

    #[test]
    fn directed_decimal() {
        let d = Dyadic::from_rational_for_test(q(1, 3), 80);
        let lo = d.to_decimal_directed(5, false);
        let hi = d.to_decimal_directed(5, true);
        assert_eq!(lo, "3.3333e-1");
        assert_eq!(hi, "3.3334e-1");
        assert_eq!(Dyadic::from_int(-1000).to_decimal_directed(3, false), "-1.00e3");
    }

    impl Dyadic {
        fn from_rational_for_test(r: BigRational, prec: i64) -> Dyadic {
            Dyadic::floor_rational(&r, prec)
        }
    }

    #[test]
    fn abs_of_straddling_interval() {
        let e = Enclosure::new(Dyadic::from_int(-2), Dyadic::from_int(1));
        let a = e.abs();
        assert_eq!(a.lo(), &Dyadic::zero());
        assert_eq!(a.hi(), &Dyadic::from_int(2));
    }

    #[test]
    fn log2_of_tiny_value() {
        let d = Dyadic::pow2(-2000);
        assert!((d.log2_abs() + 2000.0).abs() < 1e-9);
    }
}

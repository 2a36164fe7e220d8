//! Closed forms of the bounds, exactly as quadratic surds `a + b sqrt(c)` where possible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// `a + b * sqrt(c)` with rational `a`, `b` and rational `c >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Surd {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn qi(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

impl Surd {
    pub fn rational(a: BigRational) -> Self {
        Surd { a, b: BigRational::zero(), c: BigRational::zero() }
    }

    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Self {
        assert!(!c.is_negative(), "square root of a negative number");
        Surd { a, b, c }
    }

    /// Exact value when the square root is rational.
    fn as_rational(&self) -> Option<BigRational> {
        if self.b.is_zero() {
            return Some(self.a.clone());
        }
        let (n, d) = (self.c.numer(), self.c.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        (&rn * &rn == *n && &rd * &rd == *d).then(|| &self.a + &self.b * BigRational::new(rn, rd))
    }

    /// `[lo, hi]` containing the value, of width about `10^-k`.
    fn bracket(&self, k: u32) -> (BigRational, BigRational) {
        let scale = pow10(k);
        let scaled = &self.c * BigRational::from_integer(&scale * &scale);
        let s = scaled.floor().to_integer().sqrt();
        let lo_root = BigRational::new(s.clone(), scale.clone());
        let hi_root = BigRational::new(s + 1, scale);
        let (x, y) = (&self.a + &self.b * &lo_root, &self.a + &self.b * &hi_root);
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bracket(20);
        let mid = (lo + hi) / qi(2);
        rat_to_f64(&mid)
    }

    /// Decimal string with `digits` fractional digits, rounded to nearest (ties away from zero).
    pub fn to_decimal(&self, digits: u32) -> String {
        if let Some(r) = self.as_rational() {
            return round_decimal(&r, digits);
        }
        let mut guard = 8;
        loop {
            let (lo, hi) = self.bracket(digits + guard);
            let (a, b) = (round_decimal(&lo, digits), round_decimal(&hi, digits));
            if a == b {
                return a;
            }
            guard += 8;
        }
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    let s = round_decimal(r, 20);
    s.parse().unwrap_or(f64::NAN)
}

fn round_decimal(r: &BigRational, digits: u32) -> String {
    let scale = pow10(digits);
    let x = r.abs() * BigRational::from_integer(scale.clone());
    let n = (x + q(1, 2)).floor().to_integer();
    let neg = r.is_negative() && !n.is_zero();
    let int = &n / &scale;
    let frac = &n % &scale;
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac.to_string(), width = digits as usize));
    }
    s
}

/// `n - 1/2 + sqrt(n^2 - 2n + 5/4)`.
pub fn tomcat1(n: u32) -> Surd {
    let n = i64::from(n);
    Surd::new(qi(n) - q(1, 2), qi(1), qi(n * n - 2 * n) + q(5, 4))
}

/// `3 + sqrt 2`.
pub fn tomcat2() -> Surd {
    Surd::new(qi(3), qi(1), qi(2))
}

/// `(3 + sqrt 5) / 2`.
pub fn what2_ceiling() -> Surd {
    Surd::new(q(3, 2), q(1, 2), qi(5))
}

/// `2 + sqrt 5`, the ordinary exponent `w_2` of an extremal number.
pub fn extremal_w2() -> Surd {
    Surd::new(qi(2), qi(1), qi(5))
}

/// `3 (2 + sqrt 5) / (1 + sqrt 5) = (9 + 3 sqrt 5) / 4`.
pub fn extremal_star3() -> Surd {
    Surd::new(q(9, 4), q(3, 4), qi(5))
}

/// `(n + sqrt(n^2 + 16n - 8)) / 4`.
pub fn classic_star_floor(n: u32) -> Surd {
    let n = i64::from(n);
    Surd::new(q(n, 4), q(1, 4), qi(n * n + 16 * n - 8))
}

/// The value of `w_n` where the two ceilings for the uniform exponent meet:
/// `((1 + 2n sqrt(n^2 - 2n + 5/4)) / (n - 1) + 2n - 1) / 2`.
pub fn crossing_point(n: u32) -> Result<Surd> {
    if n < 2 {
        return Err(Error::Parse(format!("crossing point needs n >= 2, got {n}")));
    }
    let n = i64::from(n);
    Ok(Surd::new(q(2 * n - 1, 2) + q(1, 2 * (n - 1)), q(n, n - 1), qi(n * n - 2 * n) + q(5, 4)))
}

/// Lower bound for the uniform star exponent at `w*_n = n`: `(2n - 1) / n`.
pub fn fussball_floor(n: u32) -> Surd {
    let n = i64::from(n);
    Surd::rational(q(2 * n - 1, n))
}

/// Ceiling for `w_hat_n` in terms of `w_n` from the two-polynomial argument: `n w / (w - n + 1)`.
pub fn borne1(n: u32, w: f64) -> f64 {
    let n = f64::from(n);
    if w.is_infinite() {
        return n;
    }
    n * w / (w - n + 1.0)
}

/// The lower bound for `w_n` in terms of `w_hat_n`, solved for `w_hat_n`.
pub fn borne2(n: u32, w: f64) -> f64 {
    let n = f64::from(n);
    let r = (n - 2.0) / (n - 1.0) * w;
    0.5 * (1.0 + r) + (0.25 * (r + 1.0).powi(2) + w / (n - 1.0)).sqrt()
}

/// `(n-1)(x^2 - x) / (1 + (n-2)x)`.
pub fn ssmj_floor(n: u32, what: f64) -> f64 {
    let n = f64::from(n);
    (n - 1.0) * (what * what - what) / (1.0 + (n - 2.0) * what)
}

/// Floor for `w*_n` from combining the three lower bounds available for it, minimized over
/// the admissible range `n <= w_hat_n <= 2n - 1`. Numerical only.
pub fn improved_star_floor(n: u32) -> f64 {
    let nf = f64::from(n);
    let g = |x: f64| {
        let wirr = x / (x - nf + 1.0);
        let third = 0.5 * ssmj_floor(n, x) + x - nf + 0.5;
        wirr.max(x.min(third))
    };
    // g is piecewise monotone; a fine scan followed by golden-section refinement
    let (a, b) = (nf, 2.0 * nf - 1.0);
    let steps = 20_000;
    let mut best = (f64::INFINITY, a);
    for i in 0..=steps {
        let x = a + (b - a) * i as f64 / steps as f64;
        let v = g(x);
        if v < best.0 {
            best = (v, x);
        }
    }
    let h = (b - a) / steps as f64;
    let (mut lo, mut hi) = ((best.1 - h).max(a), (best.1 + h).min(b));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if g(x1) <= g(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    g((lo + hi) / 2.0).min(best.0)
}

/// Named constants for reports and the CLI.
pub fn closed_form(name: &str, n: Option<u32>) -> Result<Surd> {
    let need = |n: Option<u32>, min: u32| -> Result<u32> {
        match n {
            Some(v) if v >= min => Ok(v),
            _ => Err(Error::Parse(format!("{name} needs n >= {min}"))),
        }
    };
    Ok(match name {
        "R2-ceiling" => Surd::rational(qi(2 * i64::from(need(n, 1)?) - 1)),
        "R3" => what2_ceiling(),
        "R4-tomcat1" => tomcat1(need(n, 2)?),
        "R4-tomcat2" => tomcat2(),
        "R9-crossing" => crossing_point(need(n, 2)?)?,
        "R12-floor" => fussball_floor(need(n, 1)?),
        "R13" => classic_star_floor(need(n, 3)?),
        "R16-star3" => extremal_star3(),
        "R16-w2" => extremal_w2(),
        "R16-what2" => what2_ceiling(),
        _ => return Err(Error::Parse(format!("unknown closed form {name}"))),
    })
}

pub const CLOSED_FORM_NAMES: &[&str] =
    &["R2-ceiling", "R3", "R4-tomcat1", "R4-tomcat2", "R9-crossing", "R12-floor", "R13", "R16-star3", "R16-w2", "R16-what2"];

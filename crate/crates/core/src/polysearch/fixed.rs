//! Fixed-point powers of the target for the inner enumeration loops.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::realnum::{Dyadic, Enclosure, RealTarget};

/// `xi^i * 2^frac` for `i = 0..=n`, each as `mid +- rad` in `i128`.
#[derive(Clone, Debug)]
pub struct FixedPowers {
    pub frac: u32,
    pub mid: Vec<i128>,
    pub rad: Vec<i128>,
    /// Upper bound for `max(1, |xi|)`.
    pub mag: f64,
}

const HEADROOM_BITS: f64 = 125.0;
const MIN_FRAC_BITS: u32 = 40;

impl FixedPowers {
    /// Choose the largest fraction size such that `(n+1) * h_max * max(1,|xi|)^n * 2^frac`
    /// stays below `2^125`, so that no sum formed in the search loops can overflow.
    pub fn new(target: &RealTarget, n: usize, h_max: u64) -> Result<Self> {
        let mag = target.magnitude_bound()?;
        let need = ((n + 1) as f64).log2() + (h_max as f64).log2() + n as f64 * mag.log2();
        let frac = (HEADROOM_BITS - need).floor() as i64 - 2;
        let frac = frac.min(120);
        if frac < i64::from(MIN_FRAC_BITS) {
            return Err(Error::PrecisionExhausted {
                bits: frac.max(0) as u32,
                what: format!("fixed-point range too small for degree {n}, height {h_max}"),
            });
        }
        let frac = frac as u32;
        let extra = (n as f64 * mag.log2()).ceil() as u32 + 16 + 2 * n as u32;
        let xi = target.eval(frac + extra)?;
        let mut mid = Vec::with_capacity(n + 1);
        let mut rad = Vec::with_capacity(n + 1);
        let mut pow = Enclosure::from_int(1);
        for i in 0..=n {
            if i > 0 {
                pow = &pow * &xi;
            }
            let lo = scaled_floor(pow.lo(), frac);
            let hi = -scaled_floor(&-pow.hi(), frac);
            let (lo, hi) = (to_i128(&lo)?, to_i128(&hi)?);
            let m = lo + (hi - lo) / 2;
            mid.push(m);
            rad.push((hi - m).max(m - lo) + 1);
        }
        Ok(FixedPowers { frac, mid, rad, mag })
    }

    pub fn one(&self) -> i128 {
        1i128 << self.frac
    }

    /// Rigorous error bound for `sum c_i mid_i` when every `|c_i| <= h`.
    pub fn error_bound(&self, h: u64) -> i128 {
        let s: i128 = self.rad.iter().sum();
        s * h as i128 + 1
    }

    /// Enclosure of the real number `(v +- r) * 2^-frac`.
    pub fn enclosure(&self, v: i128, r: i128) -> Enclosure {
        let f = -i64::from(self.frac);
        Enclosure::new(Dyadic::new(BigInt::from(v - r), f), Dyadic::new(BigInt::from(v + r), f))
    }

    pub fn to_f64(&self, v: i128) -> f64 {
        v as f64 / (self.frac as f64).exp2()
    }
}

fn scaled_floor(d: &Dyadic, frac: u32) -> BigInt {
    (d * &Dyadic::pow2(i64::from(frac))).floor()
}

fn to_i128(b: &BigInt) -> Result<i128> {
    b.to_i128().ok_or_else(|| Error::PrecisionExhausted { bits: 128, what: "fixed-point overflow".into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_sqrt2() {
        let f = FixedPowers::new(&RealTarget::sqrt2(), 2, 1000).unwrap();
        assert!(f.frac >= 100);
        assert_eq!(f.mid[0], f.one());
        let two = 2 * f.one();
        assert!((f.mid[2] - two).abs() <= f.rad[2]);
        let approx = f.to_f64(f.mid[1]);
        assert!((approx - 2f64.sqrt()).abs() < 1e-15);
    }
}

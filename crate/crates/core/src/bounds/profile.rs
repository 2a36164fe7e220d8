//! Exponent profiles: exact, hypothesized or measured values of the four exponents per degree.
//!
//! JSON layout:
//!
//! ```json
//! { "transcendental": true, "extremal": false,
//!   "degrees": { "2": { "w": "inf", "w_hat": {"lo": 2.1, "hi": 2.9, "provenance": "measured"} } } }
//! ```
//!
//! A value is a number, the token `"inf"`, or an object with either `value` or `lo`/`hi`
//! and an optional `provenance` (`exact`, `hypothesized`, `measured`; default `exact`).

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// An `f64` that serializes `+inf` as the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else if self.0.is_nan() {
            s.serialize_str("nan")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            F(f64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::F(v) => Ok(Num(v)),
            Raw::S(s) => match s.trim() {
                "inf" | "+inf" | "infinity" => Ok(Num(f64::INFINITY)),
                "-inf" => Ok(Num(f64::NEG_INFINITY)),
                t => t.parse().map(Num).map_err(|_| de::Error::custom(format!("not a number: {t}"))),
            },
        }
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str(if self.0 > 0.0 { "inf" } else { "-inf" })
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// `#[serde(with = "inf_float")]` for plain `f64` fields that may be infinite.
pub mod inf_float {
    use super::Num;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        Num(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Num::deserialize(d).map(|n| n.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    #[default]
    Exact,
    Hypothesized,
    Measured,
}

/// A closed bracket `[lo, hi]`; exact values have `lo == hi`. `+inf` is allowed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileValue {
    pub lo: f64,
    pub hi: f64,
    pub provenance: Provenance,
}

impl ProfileValue {
    pub fn exact(v: f64) -> Self {
        ProfileValue { lo: v, hi: v, provenance: Provenance::Exact }
    }

    pub fn hypothesized(v: f64) -> Self {
        ProfileValue { lo: v, hi: v, provenance: Provenance::Hypothesized }
    }

    pub fn measured(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "bracket [{lo}, {hi}] is reversed");
        ProfileValue { lo, hi, provenance: Provenance::Measured }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Bare(Num),
    Point {
        value: Num,
        #[serde(default)]
        provenance: Provenance,
    },
    Bracket {
        lo: Num,
        hi: Num,
        #[serde(default)]
        provenance: Provenance,
    },
}

impl Serialize for ProfileValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = if self.is_point() {
            RawValue::Point { value: Num(self.lo), provenance: self.provenance }
        } else {
            RawValue::Bracket { lo: Num(self.lo), hi: Num(self.hi), provenance: self.provenance }
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProfileValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = match RawValue::deserialize(d)? {
            RawValue::Bare(n) => ProfileValue::exact(n.0),
            RawValue::Point { value, provenance } => ProfileValue { lo: value.0, hi: value.0, provenance },
            RawValue::Bracket { lo, hi, provenance } => ProfileValue { lo: lo.0, hi: hi.0, provenance },
        };
        if v.lo.is_nan() || v.hi.is_nan() || v.lo > v.hi {
            return Err(de::Error::custom(format!("invalid bracket [{}, {}]", v.lo, v.hi)));
        }
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exponent {
    W,
    WHat,
    WStar,
    WHatStar,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exponent::W => "w",
            Exponent::WHat => "w_hat",
            Exponent::WStar => "w_star",
            Exponent::WHatStar => "w_hat_star",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DegreeEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<ProfileValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_hat: Option<ProfileValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_star: Option<ProfileValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_hat_star: Option<ProfileValue>,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentProfile {
    /// The inequalities between exponents are stated for transcendental numbers.
    #[serde(default = "yes")]
    pub transcendental: bool,
    /// Marks an extremal number, which enables the rules specific to those.
    #[serde(default)]
    pub extremal: bool,
    #[serde(default)]
    pub degrees: BTreeMap<usize, DegreeEntry>,
}

impl Default for ExponentProfile {
    fn default() -> Self {
        ExponentProfile { transcendental: true, extremal: false, degrees: BTreeMap::new() }
    }
}

impl ExponentProfile {
    pub fn get(&self, e: Exponent, n: usize) -> Option<ProfileValue> {
        let d = self.degrees.get(&n)?;
        match e {
            Exponent::W => d.w,
            Exponent::WHat => d.w_hat,
            Exponent::WStar => d.w_star,
            Exponent::WHatStar => d.w_hat_star,
        }
    }

    pub fn set(&mut self, e: Exponent, n: usize, v: ProfileValue) -> &mut Self {
        let d = self.degrees.entry(n).or_default();
        let slot = match e {
            Exponent::W => &mut d.w,
            Exponent::WHat => &mut d.w_hat,
            Exponent::WStar => &mut d.w_star,
            Exponent::WHatStar => &mut d.w_hat_star,
        };
        *slot = Some(v);
        self
    }

    pub fn with(mut self, e: Exponent, n: usize, v: f64) -> Self {
        self.set(e, n, ProfileValue::exact(v));
        self
    }

    /// Exact values known for extremal numbers: `w_1 = w_hat_1 = 1`, `w_2 = 2 + sqrt 5`,
    /// `w_hat_2 = (3 + sqrt 5) / 2`.
    pub fn extremal_exact() -> Self {
        let s5 = 5f64.sqrt();
        let mut p = ExponentProfile { extremal: true, ..Default::default() }
            .with(Exponent::W, 1, 1.0)
            .with(Exponent::WHat, 1, 1.0)
            .with(Exponent::W, 2, 2.0 + s5)
            .with(Exponent::WHat, 2, (3.0 + s5) / 2.0);
        p.extremal = true;
        p
    }

    /// Liouville numbers: `w_1 = +inf`, `w_hat_n = n`, `w_hat*_n = 1` for `n` in `1..=max_n`.
    pub fn liouville(max_n: usize) -> Self {
        let mut p = ExponentProfile::default().with(Exponent::W, 1, f64::INFINITY);
        for n in 1..=max_n {
            p.set(Exponent::WHat, n, ProfileValue::exact(n as f64));
            p.set(Exponent::WHatStar, n, ProfileValue::exact(1.0));
        }
        p
    }

    pub fn from_json(s: &str) -> crate::error::Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_with_infinity() {
        let mut p = ExponentProfile::liouville(3);
        p.set(Exponent::WStar, 2, ProfileValue::measured(1.5, 2.5));
        let s = p.to_json();
        assert!(s.contains("\"inf\""));
        assert_eq!(ExponentProfile::from_json(&s).unwrap(), p);
    }

    #[test]
    fn shorthand_values() {
        let p = ExponentProfile::from_json(r#"{"degrees": {"3": {"w_hat": 4.5, "w": "inf"}}}"#).unwrap();
        assert!(p.transcendental);
        assert_eq!(p.get(Exponent::WHat, 3), Some(ProfileValue::exact(4.5)));
        assert_eq!(p.get(Exponent::W, 3).unwrap().lo, f64::INFINITY);
        assert!(ExponentProfile::from_json(r#"{"degrees": {"1": {"w": {"lo": 3, "hi": 2}}}}"#).is_err());
    }
}

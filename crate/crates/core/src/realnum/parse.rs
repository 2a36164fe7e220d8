use num_bigint::BigInt;
use num_rational::BigRational;

use super::{LiouvilleExponents, PartialQuotients, RealTarget, TargetKind};
use crate::error::{Error, Result};
use crate::intpoly::IntPolynomial;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn int(s: &str) -> Result<BigInt> {
    s.trim().parse::<BigInt>().map_err(|_| perr(format!("not an integer: {s:?}")))
}

fn int_list(s: &str) -> Result<Vec<BigInt>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(int).collect()
}

/// Parse a target from the mini-language, e.g. `rational:7/5`, `algroot:[-2,0,1]:1`,
/// `extremal:1,2`, `liouville:10:factorial`, `digits:seed=42`, `cf:[1;(2)]`.
pub fn parse_target(spec: &str) -> Result<RealTarget> {
    let spec = spec.trim();
    let (kind, rest) = spec.split_once(':').ok_or_else(|| perr(format!("missing ':' in {spec:?}")))?;
    let kind = match kind {
        "rational" => {
            let r = match rest.split_once('/') {
                Some((p, q)) => {
                    let q = int(q)?;
                    if q == BigInt::from(0) {
                        return Err(perr("zero denominator"));
                    }
                    BigRational::new(int(p)?, q)
                }
                None => BigRational::from_integer(int(rest)?),
            };
            TargetKind::Rational(r)
        }
        "algroot" => {
            let (poly, idx) = rest.rsplit_once(':').ok_or_else(|| perr("algroot needs [coeffs]:index"))?;
            let minpoly: IntPolynomial = poly.parse()?;
            let index = idx.trim().parse::<usize>().map_err(|_| perr(format!("bad root index {idx:?}")))?;
            TargetKind::AlgebraicRoot { minpoly, index }
        }
        "extremal" => {
            let (a, b) = rest.split_once(',').ok_or_else(|| perr("extremal needs a,b"))?;
            let a = a.trim().parse::<u64>().map_err(|_| perr(format!("bad letter {a:?}")))?;
            let b = b.trim().parse::<u64>().map_err(|_| perr(format!("bad letter {b:?}")))?;
            TargetKind::FibonacciWordCF { a, b }
        }
        "liouville" => {
            let (g, ex) = rest.split_once(':').ok_or_else(|| perr("liouville needs base:exponents"))?;
            let base = g.trim().parse::<u64>().map_err(|_| perr(format!("bad base {g:?}")))?;
            let ex = ex.trim();
            let exponents = if ex == "factorial" {
                LiouvilleExponents::Factorial
            } else {
                let inner = ex
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| perr("exponents must be 'factorial' or [a1,a2,...]"))?;
                let v = inner
                    .split(',')
                    .map(|s| s.trim().parse::<u64>().map_err(|_| perr(format!("bad exponent {s:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                LiouvilleExponents::List(v)
            };
            TargetKind::LiouvilleSeries { base, exponents }
        }
        "digits" => {
            let seed = rest
                .trim()
                .strip_prefix("seed=")
                .ok_or_else(|| perr("digits needs seed=N"))?
                .parse::<u64>()
                .map_err(|_| perr("bad seed"))?;
            TargetKind::DigitStream { seed }
        }
        "cf" => {
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| perr("cf needs [a0;a1,...]"))?;
            let (a0, tail) = inner.split_once(';').unwrap_or((inner, ""));
            let a0 = int(a0)?;
            match tail.find('(') {
                Some(open) => {
                    let body = tail[open + 1..].strip_suffix(')').ok_or_else(|| perr("unclosed period"))?;
                    let mut prefix = vec![a0];
                    prefix.extend(int_list(tail[..open].trim().trim_end_matches(','))?);
                    let period = int_list(body)?;
                    TargetKind::ContinuedFraction(PartialQuotients::Periodic { prefix, period })
                }
                None => {
                    let mut v = vec![a0];
                    v.extend(int_list(tail)?);
                    TargetKind::ContinuedFraction(PartialQuotients::Finite(v))
                }
            }
        }
        other => return Err(perr(format!("unknown target kind {other:?}"))),
    };
    RealTarget::new(kind, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realnum::Nature;

    #[test]
    fn parses_every_kind() {
        assert_eq!(
            parse_target("rational:7/5").unwrap().as_rational().unwrap(),
            BigRational::new(7.into(), 5.into())
        );
        let s = parse_target("algroot:[-2,0,1]:1").unwrap();
        assert!(s.eval(20).unwrap().contains(&BigRational::new(141421.into(), 100000.into())) == false);
        assert!((s.eval(40).unwrap().mid_f64() - 2f64.sqrt()).abs() < 1e-10);
        // constant-first coefficients: 1 - 2x^2, positive root 1/sqrt(2); stored sign-normalized
        let h = parse_target("algroot:[1,0,-2]:1").unwrap();
        assert!((h.eval(40).unwrap().mid_f64() - 0.5f64.sqrt()).abs() < 1e-10);
        assert_eq!(parse_target("extremal:1,2").unwrap().nature(), Nature::Transcendental);
        assert!(parse_target("liouville:10:factorial").is_ok());
        assert!(parse_target("liouville:2:[1,3,9,27]").is_ok());
        assert!(parse_target("digits:seed=42").is_ok());
        let p = parse_target("cf:[1;(2)]").unwrap();
        assert_eq!(p.nature(), Nature::Algebraic { degree: 2 });
        let g = parse_target("cf:[0;1,1,(1,2)]").unwrap();
        let m = g.minimal_polynomial().unwrap().clone();
        let e = g.eval(80).unwrap();
        assert!(m.evaluate_enclosure(&e).contains_zero());
    }

    #[test]
    fn rejects_bad_specs() {
        for s in [
            "rational:1/0",
            "algroot:[-4,0,1]:0",
            "algroot:[-2,0,1]:2",
            "extremal:1,1",
            "liouville:1:factorial",
            "liouville:10:[3,2]",
            "digits:42",
            "pi:1",
            "norational",
        ] {
            assert!(parse_target(s).is_err(), "{s}");
        }
    }
}

use super::IntPolynomial;
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Number of nonzero sign-normalized polynomials of degree `<= n` and height `<= h`.
pub fn enumeration_count(n: usize, h: u64) -> u128 {
    let base = 2 * u128::from(h) + 1;
    let mut total: u128 = 1;
    for _ in 0..=n {
        total = total.saturating_mul(base);
    }
    (total - 1) / 2
}

/// Canonical enumeration of integer polynomials in lexicographic order of
/// `(c_n, ..., c_0)`: first by degree, then by coefficients from the top down.
#[derive(Clone, Debug)]
pub struct Enumeration {
    h: i64,
    n: usize,
    /// Current coefficients, constant first; `None` once exhausted.
    cur: Option<Vec<i64>>,
    /// Stop before this (degree, top coefficient) block, if set.
    end: Option<(usize, i64)>,
}

/// All nonzero `P` with `deg P <= n`, `H(P) <= h` and positive leading coefficient.
pub fn enumerate(n: usize, h: u64) -> Result<Enumeration> {
    Enumeration::with_budget(n, h, DEFAULT_BUDGET)
}

impl Enumeration {
    pub fn with_budget(n: usize, h: u64, budget: u128) -> Result<Self> {
        assert!(n >= 1 && h >= 1, "degree and height bounds must be positive");
        let count = enumeration_count(n, h);
        if count > budget {
            return Err(Error::OverflowGuard { count, budget });
        }
        Ok(Enumeration { h: h as i64, n, cur: Some(vec![1]), end: None })
    }

    /// Contiguous blocks, one per `(degree, leading coefficient)`; enumerating them in
    /// order reproduces the sequential order.
    pub fn blocks(&self) -> Vec<(usize, i64)> {
        let mut v = Vec::new();
        for d in 0..=self.n {
            for top in 1..=self.h {
                v.push((d, top));
            }
        }
        v
    }

    /// The sub-enumeration covering a single block from [`Enumeration::blocks`].
    pub fn block(&self, degree: usize, top: i64) -> Enumeration {
        let mut c = vec![-self.h; degree + 1];
        c[degree] = top;
        if degree == 0 {
            c[0] = top;
        }
        let end = if top < self.h { (degree, top + 1) } else { (degree + 1, 1) };
        Enumeration { h: self.h, n: self.n, cur: Some(c), end: Some(end) }
    }

    fn advance(&mut self) {
        let h = self.h;
        let Some(c) = self.cur.as_mut() else { return };
        let d = c.len() - 1;
        if d == 0 {
            if c[0] < h {
                c[0] += 1;
            } else if self.n >= 1 {
                *c = vec![-h, 1];
            } else {
                self.cur = None;
            }
        } else {
            // increment the lower coefficients like an odometer, then the top one
            let mut i = 0;
            loop {
                if i == d {
                    if c[d] < h {
                        c[d] += 1;
                        for x in c[..d].iter_mut() {
                            *x = -h;
                        }
                    } else if d < self.n {
                        let mut next = vec![-h; d + 2];
                        next[d + 1] = 1;
                        *c = next;
                    } else {
                        self.cur = None;
                    }
                    break;
                }
                if c[i] < h {
                    c[i] += 1;
                    for x in c[..i].iter_mut() {
                        *x = -h;
                    }
                    break;
                }
                i += 1;
            }
        }
        if let (Some(c), Some((ed, et))) = (&self.cur, self.end) {
            if c.len() - 1 == ed && c[ed] == et {
                self.cur = None;
            }
        }
    }
}

impl Iterator for Enumeration {
    type Item = IntPolynomial;

    fn next(&mut self) -> Option<IntPolynomial> {
        let c = self.cur.clone()?;
        self.advance();
        Some(IntPolynomial::from_i64(&c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn small_counts() {
        let all: Vec<_> = enumerate(1, 1).unwrap().collect();
        assert_eq!(all.len(), 4);
        let set: HashSet<String> = all.iter().map(|p| p.to_string()).collect();
        for s in ["[1]", "[0,1]", "[-1,1]", "[1,1]"] {
            assert!(set.contains(s), "{s}");
        }
        assert_eq!(enumerate(1, 2).unwrap().count(), 12);
        assert_eq!(enumerate(2, 1).unwrap().count(), 13);
        assert_eq!(enumeration_count(3, 3), ((7u128.pow(4)) - 1) / 2);
    }

    #[test]
    fn order_is_lexicographic_and_canonical() {
        let all: Vec<_> = enumerate(2, 2).unwrap().collect();
        assert_eq!(all.len() as u128, enumeration_count(2, 2));
        for w in all.windows(2) {
            assert_eq!(w[0].lex_cmp(&w[1]), std::cmp::Ordering::Less);
        }
        assert!(all.iter().all(|p| p.is_canonical()));
    }

    #[test]
    fn blocks_concatenate_to_the_whole() {
        let e = enumerate(2, 3).unwrap();
        let whole: Vec<_> = e.clone().collect();
        let parts: Vec<_> = e.blocks().into_iter().flat_map(|(d, t)| e.block(d, t)).collect();
        assert_eq!(whole, parts);
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(Enumeration::with_budget(3, 10, 100), Err(Error::OverflowGuard { .. })));
    }
}

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde_json::{json, Map, Value};

use crate::arith::Rational;

/// Polynomial in the multiplicity variables `p_0, p_1, ...`.
///
/// Keys are exponent vectors indexed by `d`, with trailing zeros trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultPoly {
    terms: BTreeMap<Vec<u32>, Rational>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

/// `deg p_d = 2d + 1`.
pub fn variable_degree(d: usize) -> u32 {
    2 * d as u32 + 1
}

impl MultPoly {
    pub fn zero() -> MultPoly {
        MultPoly::default()
    }

    pub fn constant(c: Rational) -> MultPoly {
        let mut p = MultPoly::zero();
        p.add_term(&[], c);
        p
    }

    /// Build from `(&[(d, exponent)], coefficient)` pairs.
    pub fn from_terms(terms: &[(&[(usize, u32)], Rational)]) -> MultPoly {
        let mut p = MultPoly::zero();
        for (mono, c) in terms {
            p.add_term(mono, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, mono: &[(usize, u32)], c: Rational) {
        let mut e = Vec::new();
        for &(d, k) in mono {
            if e.len() <= d {
                e.resize(d + 1, 0);
            }
            e[d] += k;
        }
        self.add_exponents(trim(e), c);
    }

    pub(crate) fn add_exponents(&mut self, e: Vec<u32>, c: Rational) {
        let e = trim(e);
        let entry = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, mono: &[(usize, u32)]) -> Rational {
        let mut p = MultPoly::zero();
        p.add_term(mono, Rational::one());
        let key = p.terms.into_keys().next().unwrap_or_default();
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero)
    }

    /// Graded degree with `deg p_d = 2d+1`; `None` for the zero polynomial.
    pub fn graded_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| monomial_degree(e)).max()
    }

    /// Value at the multiplicities `p[d]`; missing entries count as 0.
    pub fn eval(&self, p: &[u32]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (d, &k) in e.iter().enumerate() {
                if k > 0 {
                    let base = BigInt::from(p.get(d).copied().unwrap_or(0));
                    t *= Rational::from_integer(base.pow(k));
                }
            }
            acc += t;
        }
        acc
    }

    /// `{"k": k, "monomials": [{"exponents": {"p2": 1}, "coefficient": "p/q"}]}`.
    pub fn to_json(&self, k: usize) -> Value {
        let monomials: Vec<Value> = self
            .ordered()
            .into_iter()
            .map(|(e, c)| {
                let mut ex = Map::new();
                for (d, &k) in e.iter().enumerate() {
                    if k > 0 {
                        ex.insert(format!("p{d}"), json!(k));
                    }
                }
                json!({"exponents": ex, "coefficient": c.to_string()})
            })
            .collect();
        json!({"k": k, "monomials": monomials})
    }

    /// Terms by decreasing graded degree, ties broken by exponent vector.
    fn ordered(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| monomial_degree(b.0).cmp(&monomial_degree(a.0)).then_with(|| b.0.cmp(a.0)));
        v
    }
}

pub(crate) fn monomial_degree(e: &[u32]) -> u32 {
    e.iter().enumerate().map(|(d, &k)| k * variable_degree(d)).sum()
}

impl fmt::Display for MultPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.ordered().into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(d, &k)| if k == 1 { format!("p{d}") } else { format!("p{d}^{k}") })
                .collect();
            let neg = c < &Rational::zero();
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let a = if neg { -c.clone() } else { c.clone() };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn degrees_and_values() {
        let p = MultPoly::from_terms(&[(&[(2, 2)], rat(1, 2)), (&[(3, 1)], rat(-1, 3)), (&[], rat(5, 1))]);
        assert_eq!(p.graded_degree(), Some(10));
        assert_eq!(p.eval(&[0, 0, 2, 3]), rat(2, 1) - rat(1, 1) + rat(5, 1));
        assert_eq!(p.constant_term(), rat(5, 1));
        assert_eq!(p.coefficient(&[(2, 2)]), rat(1, 2));
        assert_eq!(p.to_string(), "1/2*p2^2 - 1/3*p3 + 5");
        assert_eq!(MultPoly::zero().graded_degree(), None);
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut p = MultPoly::from_terms(&[(&[(2, 1)], rat(1, 2))]);
        p.add_term(&[(2, 1)], rat(-1, 2));
        assert!(p.is_zero());
    }

    #[test]
    fn json_shape() {
        let p = MultPoly::from_terms(&[(&[(2, 1)], rat(-5, 72))]);
        let v = p.to_json(2);
        assert_eq!(v["k"], 2);
        assert_eq!(v["monomials"][0]["exponents"]["p2"], 1);
        assert_eq!(v["monomials"][0]["coefficient"], "-5/72");
    }
}

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{big, Rational};

/// The expansion variable of a [`SeriesInvX`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Var {
    #[serde(rename = "1/X")]
    InvX,
    #[serde(rename = "1/g")]
    InvG,
}

/// Truncated power series `a_0 + a_1 u + ... + a_K u^K` in `u = 1/X` or `u = 1/g`.
///
/// Binary operations truncate to the smaller order of the two operands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesInvX {
    coeffs: Vec<Rational>,
    var: Var,
}

impl SeriesInvX {
    pub fn new(mut coeffs: Vec<Rational>, var: Var) -> SeriesInvX {
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        SeriesInvX { coeffs, var }
    }

    pub fn constant(c: Rational, order: usize, var: Var) -> SeriesInvX {
        let mut coeffs = vec![Rational::zero(); order + 1];
        coeffs[0] = c;
        SeriesInvX { coeffs, var }
    }

    pub fn one(order: usize, var: Var) -> SeriesInvX {
        SeriesInvX::constant(Rational::one(), order, var)
    }

    /// `u` itself.
    pub fn variable(order: usize, var: Var) -> SeriesInvX {
        let mut s = SeriesInvX::constant(Rational::zero(), order, var);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `u^i`, zero beyond the stored range.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, order: usize) -> SeriesInvX {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Rational::zero());
        SeriesInvX { coeffs, var: self.var }
    }

    pub fn with_var(mut self, var: Var) -> SeriesInvX {
        self.var = var;
        self
    }

    pub fn scale(&self, c: &Rational) -> SeriesInvX {
        SeriesInvX { coeffs: self.coeffs.iter().map(|a| a * c).collect(), var: self.var }
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check_var(&self, other: &SeriesInvX) {
        assert_eq!(self.var, other.var, "mixing series in 1/X and 1/g");
    }

    /// `1/S`, requires a nonzero constant term.
    pub fn recip(&self) -> SeriesInvX {
        let a0 = &self.coeffs[0];
        assert!(!a0.is_zero(), "reciprocal of a series without constant term");
        let k = self.order();
        let inv0 = a0.recip();
        let mut out = vec![Rational::zero(); k + 1];
        out[0] = inv0.clone();
        for n in 1..=k {
            let mut s = Rational::zero();
            for i in 1..=n {
                s += &self.coeffs[i] * &out[n - i];
            }
            out[n] = -s * &inv0;
        }
        SeriesInvX { coeffs: out, var: self.var }
    }

    /// `exp(S)` for a series with zero constant term.
    pub fn exp(&self) -> SeriesInvX {
        assert!(self.coeffs[0].is_zero(), "exp needs a vanishing constant term");
        // E' = S' E, so n e_n = sum_{i=1}^n i s_i e_{n-i}
        let k = self.order();
        let mut out = vec![Rational::zero(); k + 1];
        out[0] = Rational::one();
        for n in 1..=k {
            let mut s = Rational::zero();
            for i in 1..=n {
                s += big(BigInt::from(i)) * &self.coeffs[i] * &out[n - i];
            }
            out[n] = s / big(BigInt::from(n));
        }
        SeriesInvX { coeffs: out, var: self.var }
    }

    /// `log(S)` for a series with constant term 1.
    pub fn log(&self) -> SeriesInvX {
        assert!(self.coeffs[0].is_one(), "log needs constant term 1");
        let k = self.order();
        let mut out = vec![Rational::zero(); k + 1];
        // L' = S'/S, so n l_n = n s_n - sum_{i=1}^{n-1} i l_i s_{n-i}
        for n in 1..=k {
            let mut s = big(BigInt::from(n)) * &self.coeffs[n];
            for i in 1..n {
                s -= big(BigInt::from(i)) * &out[i] * &self.coeffs[n - i];
            }
            out[n] = s / big(BigInt::from(n));
        }
        SeriesInvX { coeffs: out, var: self.var }
    }

    pub fn powi(&self, e: i32) -> SeriesInvX {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = SeriesInvX::one(self.order(), self.var);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// `S(T(v))` for a series `T` without constant term; the result is in `T`'s variable.
    pub fn compose(&self, t: &SeriesInvX) -> SeriesInvX {
        assert!(t.coeffs[0].is_zero(), "inner series must vanish at 0");
        let k = t.order();
        let mut out = SeriesInvX::constant(self.coeffs[0].clone(), k, t.var);
        let mut power = SeriesInvX::one(k, t.var);
        for j in 1..=self.order().min(k) {
            power = &power * t;
            out = &out + &power.scale(&self.coeffs[j]);
        }
        out
    }

    /// Substitute `u = alpha v / (1 + beta v)`, giving a series in `v` of the same order.
    pub fn substitute_mobius(&self, alpha: &Rational, beta: &Rational, var: Var) -> SeriesInvX {
        let k = self.order();
        // alpha v (1 + beta v)^{-1} = alpha v sum (-beta v)^m
        let mut inner = vec![Rational::zero(); k + 1];
        let mut p = alpha.clone();
        for c in inner.iter_mut().skip(1) {
            *c = p.clone();
            p *= -beta;
        }
        self.compose(&SeriesInvX { coeffs: inner, var })
    }

    /// Truncated value at `u = x`.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl Add for &SeriesInvX {
    type Output = SeriesInvX;
    fn add(self, o: &SeriesInvX) -> SeriesInvX {
        self.check_var(o);
        let k = self.order().min(o.order());
        SeriesInvX { coeffs: (0..=k).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect(), var: self.var }
    }
}

impl Sub for &SeriesInvX {
    type Output = SeriesInvX;
    fn sub(self, o: &SeriesInvX) -> SeriesInvX {
        self.check_var(o);
        let k = self.order().min(o.order());
        SeriesInvX { coeffs: (0..=k).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect(), var: self.var }
    }
}

impl Neg for &SeriesInvX {
    type Output = SeriesInvX;
    fn neg(self) -> SeriesInvX {
        SeriesInvX { coeffs: self.coeffs.iter().map(|c| -c).collect(), var: self.var }
    }
}

impl Mul for &SeriesInvX {
    type Output = SeriesInvX;
    fn mul(self, o: &SeriesInvX) -> SeriesInvX {
        self.check_var(o);
        let k = self.order().min(o.order());
        let mut out = vec![Rational::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(k + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(k + 1 - i) {
                out[i + j] += a * b;
            }
        }
        SeriesInvX { coeffs: out, var: self.var }
    }
}

impl fmt::Display for SeriesInvX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = match self.var {
            Var::InvX => "X",
            Var::InvG => "g",
        };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})/{u}")?,
                _ => write!(f, "({c})/{u}^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(1/{u}^{})", self.order() + 1)
    }
}

impl Serialize for SeriesInvX {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SeriesInvX", 3)?;
        st.serialize_field("variable", &self.var)?;
        st.serialize_field("order", &self.order())?;
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        st.serialize_field("coefficients", &cs)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn s(v: &[(i64, i64)]) -> SeriesInvX {
        SeriesInvX::new(v.iter().map(|&(n, d)| rat(n, d)).collect(), Var::InvG)
    }

    #[test]
    fn geometric_reciprocal() {
        let one_minus_u = s(&[(1, 1), (-1, 1), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(one_minus_u.recip(), s(&[(1, 1); 5]));
        let p = s(&[(2, 1), (3, 1), (-1, 2), (5, 7)]);
        assert_eq!(&p * &p.recip(), SeriesInvX::one(3, Var::InvG));
    }

    #[test]
    fn exp_log_round_trip() {
        let a = s(&[(0, 1), (1, 3), (-2, 5), (7, 11), (1, 13), (0, 1)]);
        assert_eq!(a.exp().log(), a);
        // exp(u) = sum u^n / n!
        let e = SeriesInvX::variable(5, Var::InvG).exp();
        assert_eq!(e.coeffs()[4], rat(1, 24));
        assert_eq!(e.coeffs()[5], rat(1, 120));
    }

    #[test]
    fn mobius_substitution_round_trip() {
        // u = v/(1+2v) inverts to v = u/(1-2u)
        let a = s(&[(1, 1), (3, 2), (-1, 3), (2, 1), (5, 1)]);
        let b = a.substitute_mobius(&int(1), &int(2), Var::InvX);
        let back = b.substitute_mobius(&int(1), &int(-2), Var::InvG);
        assert_eq!(back, a);
    }

    #[test]
    fn truncation_is_consistent() {
        let a = s(&[(1, 1), (1, 1), (1, 1), (1, 1)]);
        let b = s(&[(1, 1), (2, 1)]);
        assert_eq!((&a * &b).order(), 1);
        assert_eq!((&a * &b).coeffs(), &[int(1), int(3)]);
    }

    #[test]
    #[should_panic]
    fn mixing_variables_panics() {
        let a = SeriesInvX::one(2, Var::InvG);
        let b = SeriesInvX::one(2, Var::InvX);
        let _ = &a + &b;
    }
}

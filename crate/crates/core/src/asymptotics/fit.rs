use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::linalg::null_vector;
use super::series::{SeriesInvX, Var};
use crate::arith::{int, Rational};
use crate::error::{Error, Result};

/// Degree beyond which `fit_rational` gives up.
pub const HARD_DEGREE_CAP: usize = 40;

/// Polynomial in `g` with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, g: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * g + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead = d.leading().recip();
        let mut r = self.0.clone();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() * &lead;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            q[shift] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*g")?,
                _ => write!(f, "({c})*g^{i}")?,
            }
        }
        Ok(())
    }
}

/// `N(g)/D(g)` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionOfG {
    num: Poly,
    den: Poly,
}

impl RationalFunctionOfG {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunctionOfG> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator polynomial".into()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 { (num.div_rem(&g).0, den.div_rem(&g).0) } else { (num, den) };
        let lead = den.leading().recip();
        Ok(RationalFunctionOfG { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// Value at `g`, `None` at a pole.
    pub fn eval(&self, g: &Rational) -> Option<Rational> {
        let d = self.den.eval(g);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(g) / d)
    }

    /// Expansion at `g = infinity` in powers of `1/g`.
    pub fn expand_inv_g(&self, order: usize) -> Result<SeriesInvX> {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        if self.num.is_zero() {
            return Ok(SeriesInvX::constant(Rational::zero(), order, Var::InvG));
        }
        if dn > dd {
            return Err(Error::InvalidArgument(format!("rational function grows like g^{}", dn - dd)));
        }
        // N/D = u^(dd-dn) * (sum n_i u^(dn-i)) / (sum d_i u^(dd-i)), u = 1/g
        let reversed = |p: &Poly, deg: usize, shift: usize| {
            let mut c = vec![Rational::zero(); order + 1];
            for (i, a) in p.coeffs().iter().enumerate() {
                let j = deg - i + shift;
                if j <= order {
                    c[j] = a.clone();
                }
            }
            SeriesInvX::new(c, Var::InvG)
        };
        let top = reversed(&self.num, dn, dd - dn);
        let bottom = reversed(&self.den, dd, 0);
        Ok(&top * &bottom.recip())
    }
}

impl fmt::Display for RationalFunctionOfG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl Serialize for RationalFunctionOfG {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let strs = |p: &Poly| p.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>();
        let mut st = s.serialize_struct("RationalFunctionOfG", 2)?;
        st.serialize_field("numerator", &strs(&self.num))?;
        st.serialize_field("denominator", &strs(&self.den))?;
        st.end()
    }
}

/// The rational function of lowest degree through all `(g, value)` samples.
///
/// Degrees `D = cap, cap+1, ...` are tried in turn: a kernel vector of the
/// `2D+1` linear conditions `N(g_i) = v_i D(g_i)` from the first samples is
/// accepted once it also reproduces every remaining sample (at least two are
/// held out).
pub fn fit_rational(samples: &[(i64, Rational)], cap: usize) -> Result<RationalFunctionOfG> {
    if samples.len() < 2 * (cap + 1) {
        return Err(Error::InvalidArgument(format!(
            "fit_rational with cap {cap} needs {} samples, got {}",
            2 * (cap + 1),
            samples.len()
        )));
    }
    let mut gs: Vec<i64> = samples.iter().map(|s| s.0).collect();
    gs.sort_unstable();
    gs.dedup();
    if gs.len() != samples.len() {
        return Err(Error::InvalidArgument("fit_rational needs distinct sample points".into()));
    }
    let mut deg = cap;
    while deg <= HARD_DEGREE_CAP && 2 * deg + 3 <= samples.len() {
        if let Some(f) = try_degree(samples, deg) {
            return Ok(f);
        }
        deg += 1;
    }
    Err(Error::NotRational(deg.min(HARD_DEGREE_CAP)))
}

fn try_degree(samples: &[(i64, Rational)], deg: usize) -> Option<RationalFunctionOfG> {
    let cols = 2 * (deg + 1);
    let rows: Vec<Vec<Rational>> = samples[..2 * deg + 1]
        .iter()
        .map(|(g, v)| {
            let g = int(*g);
            let mut row = Vec::with_capacity(cols);
            let mut p = Rational::one();
            for _ in 0..=deg {
                row.push(p.clone());
                p *= &g;
            }
            let mut p = Rational::one();
            for _ in 0..=deg {
                row.push(-(v * &p));
                p *= &g;
            }
            row
        })
        .collect();
    let v = null_vector(rows, cols)?;
    let num = Poly::new(v[..=deg].to_vec());
    let den = Poly::new(v[deg + 1..].to_vec());
    let f = RationalFunctionOfG::new(num, den).ok()?;
    samples.iter().all(|(g, val)| f.eval(&int(*g)).as_ref() == Some(val)).then_some(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::closed_form::two_point_zograf;
    use crate::dvv::one_point_closed_form;

    fn p(v: &[i64]) -> Poly {
        Poly::new(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn gcd_and_reduction() {
        // (g-1)(g+2) and (g-1)(g+5)
        let a = p(&[-2, 1, 1]);
        let b = p(&[-5, 4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let f = RationalFunctionOfG::new(a, b.scale(&int(3))).unwrap();
        assert_eq!(f.numerator(), &Poly::new(vec![rat(2, 3), rat(1, 3)]));
        assert_eq!(f.denominator(), &p(&[5, 1]));
    }

    #[test]
    fn simple_fit() {
        let samples: Vec<_> = (1..=6).map(|g| (g, rat(g + 1, g))).collect();
        let f = fit_rational(&samples, 1).unwrap();
        assert_eq!(f, RationalFunctionOfG::new(p(&[1, 1]), p(&[0, 1])).unwrap());
    }

    #[test]
    fn string_equation_ratio() {
        let samples: Vec<_> =
            (1..=12).map(|g| (g as i64, two_point_zograf(0, 3 * g - 1) / one_point_closed_form(g))).collect();
        let f = fit_rational(&samples, 0).unwrap();
        let expect = RationalFunctionOfG::new(p(&[-1, 6]), p(&[-3, 6])).unwrap();
        assert_eq!(f, expect);
    }

    #[test]
    fn inconsistent_samples_fail() {
        let samples: Vec<_> = (1..=12i64).map(|g| (g, int((g * g * 7919) % 101))).collect();
        assert!(matches!(fit_rational(&samples, 0), Err(Error::NotRational(_))));
        assert!(fit_rational(&samples[..3], 1).is_err());
    }

    #[test]
    fn expansion_at_infinity() {
        // (g+1)/g = 1 + 1/g; g/(g-1) = sum g^-k
        let f = RationalFunctionOfG::new(p(&[1, 1]), p(&[0, 1])).unwrap();
        assert_eq!(f.expand_inv_g(3).unwrap().coeffs(), &[int(1), int(1), int(0), int(0)]);
        let h = RationalFunctionOfG::new(p(&[0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(h.expand_inv_g(3).unwrap().coeffs(), &vec![int(1); 4][..]);
        let k = RationalFunctionOfG::new(p(&[1]), p(&[0, 0, 1])).unwrap();
        assert_eq!(k.expand_inv_g(3).unwrap().coeffs(), &[int(0), int(0), int(1), int(0)]);
    }
}

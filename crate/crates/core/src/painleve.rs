//! Coefficients of the formal Painleve I solution `U(X) = sum c_g X^((1-5g)/2)`
//! and their bridge to `C(2^(3g-3))`.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::arith::{big, binomial, factorial, int, pow, rat, Rational};
use crate::asymptotics::{SeriesInvX, Var};
use crate::decimal::{self, Decimal};
use crate::dvv::{c_value, DVec};
use crate::error::{Error, Result};

static COEFFS: Lazy<RwLock<Vec<Rational>>> = Lazy::new(|| RwLock::new(vec![int(-1), int(2), int(98)]));

/// `c_g`: `c_0 = -1`, `c_1 = 2`, `c_2 = 98` and for `g >= 3`
/// `c_g = 50 (g-1)^2 c_{g-1} + (1/2) sum_{h=2}^{g-2} c_h c_{g-h}`.
pub fn painleve_coeff(g: u32) -> Rational {
    painleve_coeffs(g).pop().unwrap()
}

/// `c_0, ..., c_g`.
pub fn painleve_coeffs(g: u32) -> Vec<Rational> {
    let g = g as usize;
    {
        let table = COEFFS.read().unwrap();
        if table.len() > g {
            return table[..=g].to_vec();
        }
    }
    let mut c = COEFFS.write().unwrap();
    while c.len() <= g {
        let n = c.len();
        let mut conv = Rational::zero();
        for h in 2..=n - 2 {
            conv += &c[h] * &c[n - h];
        }
        let next = int(50 * ((n - 1) * (n - 1)) as i64) * &c[n - 1] + conv / int(2);
        c.push(next);
    }
    c[..=g].to_vec()
}

/// `c_g` recovered from `C(2^(3g-3))`:
/// `(2^g 3^(3g-2) / 5^(3g-3)) ((5g-5)! (5g-3) / (3g-3)!) C(2^(3g-3))`.
pub fn painleve_from_intersections(g: u32) -> Result<Rational> {
    if g < 2 {
        return Err(Error::InvalidArgument(format!("painleve_from_intersections needs g >= 2, got {g}")));
    }
    Ok(bridge_factor(g) * c_value(&DVec::new(vec![2; (3 * g - 3) as usize])))
}

pub(crate) fn bridge_factor(g: u32) -> Rational {
    let num = num_traits::pow(BigInt::from(2), g as usize)
        * num_traits::pow(BigInt::from(3), (3 * g - 2) as usize)
        * factorial(5 * g - 5)
        * BigInt::from(5 * g - 3);
    let den = num_traits::pow(BigInt::from(5), (3 * g - 3) as usize) * factorial(3 * g - 3);
    Rational::new(num, den)
}

/// `u^(2h) prod_{i=1}^h (1 - i u)^(-2)`, i.e. `prod (g-i)^(-2)` in `u = 1/g`.
fn falling_square_inverse(h: usize, order: usize) -> SeriesInvX {
    let v = Var::InvG;
    let mut acc = SeriesInvX::one(order, v);
    for i in 1..=h {
        let mut lin = SeriesInvX::one(order, v);
        if order >= 1 {
            lin = &lin - &SeriesInvX::variable(order, v).scale(&int(i as i64));
        }
        let r = lin.recip();
        acc = &(&acc * &r) * &r;
    }
    let mut shifted = vec![Rational::zero(); order + 1];
    for (j, c) in acc.coeffs().iter().enumerate() {
        if j + 2 * h <= order {
            shifted[j + 2 * h] = c.clone();
        }
    }
    SeriesInvX::new(shifted, v)
}

/// `F(g - h)` re-expanded in `u = 1/g`, with `F = 1 + sum b_j g^(-j)`.
fn shifted_ansatz(b: &[Rational], h: usize, order: usize) -> SeriesInvX {
    let f = SeriesInvX::new(b.to_vec(), Var::InvG).truncate(order);
    // 1/(g-h) = u/(1 - h u)
    f.substitute_mobius(&Rational::one(), &int(-(h as i64)), Var::InvG)
}

/// Series `1 + b_1/g + ... + b_K/g^K` with `c_g ~ A 50^g ((g-1)!)^2 (1 + sum b_j g^(-j))`.
///
/// The ansatz turns the recursion into
/// `F(g) - F(g-1) = sum_{h>=2} c_h 50^(-h) prod_{i=1}^h (g-i)^(-2) F(g-h)`,
/// where each side is expanded in `1/g`; the term for `h` starts at `g^(-2h)`,
/// so only `h <= (K+1)/2` matters at order `K`. Matching `g^(-(N))` fixes
/// `b_(N-1)`.
pub fn cg_asymptotic_series(order: usize) -> SeriesInvX {
    let n_top = order + 1;
    let h_max = n_top / 2 + 1;
    let c = painleve_coeffs(h_max as u32 + 1);
    let mut b = vec![Rational::zero(); order + 1];
    b[0] = Rational::one();
    // weights c_h 50^(-h) u^(2h) prod (1 - i u)^(-2), fixed once
    let weights: Vec<SeriesInvX> =
        (2..=h_max).map(|h| falling_square_inverse(h, n_top).scale(&(&c[h] * pow(&int(50), -(h as i32))))).collect();
    for n in 2..=n_top {
        let mut rhs = Rational::zero();
        for (idx, w) in weights.iter().enumerate() {
            let h = idx + 2;
            if 2 * h > n {
                break;
            }
            rhs += (w * &shifted_ansatz(&b, h, n_top)).coeff(n);
        }
        // [u^n] (F(g) - F(g-1)) = -sum_{j=1}^{n-1} b_j C(n-1, j-1)
        let mut known = Rational::zero();
        for j in 1..n - 1 {
            known += &b[j] * big(binomial(n as u32 - 1, j as u32 - 1));
        }
        b[n - 1] = -(rhs + known) / int(n as i64 - 1);
    }
    SeriesInvX::new(b, Var::InvG)
}

/// `[u^n]` of `F(g) - F(g-1) - sum_h c_h 50^(-h) prod (g-i)^(-2) F(g-h)` for the
/// ansatz truncated at `b_order`, computed through `u^check_order`.
pub fn ansatz_residual(order: usize, check_order: usize) -> SeriesInvX {
    let b = cg_asymptotic_series(order);
    let h_max = check_order / 2 + 1;
    let c = painleve_coeffs(h_max as u32 + 1);
    let bv: Vec<Rational> = b.coeffs().to_vec();
    let f = SeriesInvX::new(bv.clone(), Var::InvG).truncate(check_order);
    let f_prev = shifted_ansatz(&bv, 1, check_order);
    let mut res = &f - &f_prev;
    for h in 2..=h_max {
        let w = falling_square_inverse(h, check_order).scale(&(&c[h] * pow(&int(50), -(h as i32))));
        res = &res - &(&w * &shifted_ansatz(&bv, h, check_order));
    }
    res
}

/// `sqrt(3/5) / (2 pi^2)` to `precision` significant digits.
pub fn theorem_a_constant(precision: u32) -> Result<Decimal> {
    if precision + 5 > decimal::MAX_PRECISION {
        return Err(Error::PrecisionTooHigh(precision));
    }
    let work = precision + 5;
    let root = decimal::sqrt(&rat(3, 5), work).to_rational();
    let pi = decimal::pi_rational();
    Ok(Decimal::from_rational(&(root / (int(2) * &pi * &pi)), precision))
}

/// `c_g / (50^g ((g-1)!)^2)`.
pub fn theorem_a_ratio(g: u32) -> Rational {
    assert!(g >= 1);
    let f = factorial(g - 1);
    painleve_coeff(g) / Rational::from_integer(num_traits::pow(BigInt::from(50), g as usize) * &f * &f)
}

pub fn theorem_a_estimate(g: u32, precision: u32) -> Result<Decimal> {
    if g < 2 {
        return Err(Error::InvalidArgument(format!("theorem_a_estimate needs g >= 2, got {g}")));
    }
    Ok(Decimal::from_rational(&theorem_a_ratio(g), precision))
}

/// Coefficients of `X t^g`, `t = X^(-5/2)`, in `U'' + U^2/16 - X/16` for `U`
/// truncated after `c_order`. All entries for `g <= order` vanish exactly.
pub fn p1_residual(order: u32) -> Vec<Rational> {
    let c = painleve_coeffs(order);
    (0..=order as usize)
        .map(|g| {
            let mut r = Rational::zero();
            for h in 0..=g {
                r += &c[h] * &c[g - h];
            }
            r /= int(16);
            if g == 0 {
                r -= rat(1, 16);
            } else {
                let gm1 = (g - 1) as i64;
                r += rat(25 * gm1 * gm1 - 1, 4) * &c[g - 1];
            }
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn initial_values() {
        assert_eq!(painleve_coeff(0), int(-1));
        assert_eq!(painleve_coeff(1), int(2));
        assert_eq!(painleve_coeff(2), int(98));
        assert_eq!(painleve_coeff(3), int(19600));
    }

    #[test]
    fn bridge_small_genus() {
        assert_eq!(painleve_from_intersections(2).unwrap(), int(98));
        assert_eq!(painleve_from_intersections(3).unwrap(), painleve_coeff(3));
        assert_eq!(painleve_from_intersections(5).unwrap(), painleve_coeff(5));
        assert!(painleve_from_intersections(1).is_err());
    }

    #[test]
    fn correction_coefficients() {
        let b = cg_asymptotic_series(6);
        assert_eq!(b.coeff(1), Rational::zero());
        assert_eq!(b.coeff(2), Rational::zero());
        assert_eq!(b.coeff(3), rat(-49, 3750));
        assert_eq!(b.coeff(4), rat(-49, 1250));
    }

    #[test]
    fn ansatz_residual_is_high_order() {
        let res = ansatz_residual(6, 10);
        let v = res.valuation().unwrap_or(usize::MAX);
        assert!(v >= 8, "residual starts at u^{v}");
    }

    #[test]
    fn p1_formal_solution() {
        let r = p1_residual(12);
        assert!(r.iter().all(Zero::is_zero));
    }

    #[test]
    fn theorem_a_values() {
        assert_eq!(theorem_a_constant(12).unwrap().to_string(), "0.0392415256865");
        assert_eq!(theorem_a_estimate(2, 3).unwrap().to_string(), "0.0392");
        let target = theorem_a_constant(30).unwrap();
        let est = theorem_a_estimate(40, 30).unwrap();
        assert!(est.agreeing_digits(&target) >= 6);
    }

    #[test]
    fn theorem_a_rate() {
        let target = theorem_a_constant(40).unwrap().to_rational();
        for g in (10..=60u32).step_by(10) {
            let rel = ((theorem_a_ratio(g) - &target) / &target).abs();
            assert!(rel <= rat(10, (g * g * g) as i64), "g={g}");
        }
    }
}

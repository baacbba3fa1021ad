use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{factorial, odd_double_factorial_int, reciprocal_factorial, Rational};

fn df(m: i64) -> BigInt {
    odd_double_factorial_int(m)
}

fn pow24(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(24), e as usize)
}

/// `(6g+1)/(6g-1) * (6g-1)!! / (24^g g!)`, equal to `-1` at `g = 0`.
fn lower_coeff(g: u32) -> Rational {
    let g6 = 6 * g as i64;
    Rational::new(BigInt::from(g6 + 1) * df(g6 - 1), BigInt::from(g6 - 1) * pow24(g) * factorial(g))
}

fn upper_coeff(g: u32) -> Rational {
    Rational::new(df(6 * g as i64 - 1), pow24(g) * factorial(g))
}

/// `xi_{k1,k2}` in the form that reproduces the intersection numbers.
///
/// This is `tr(A_{k1} A_{k2})`. A variant of the third case carries an extra
/// factor `-1/2`; see [`xi_half_variant`].
pub fn xi(k1: i64, k2: i64) -> Rational {
    if k1 < -1 || k2 < -1 {
        return Rational::zero();
    }
    match (k1.rem_euclid(3), k2.rem_euclid(3)) {
        (1, 1) => {
            let (g1, g2) = (((k1 + 2) / 3) as u32, ((k2 + 2) / 3) as u32);
            let num = df(6 * g1 as i64 - 5) * df(6 * g2 as i64 - 5);
            let den = pow24(g1 + g2 - 2) * factorial(g1 - 1) * factorial(g2 - 1) * 2;
            Rational::new(num, den)
        }
        (0, 2) => {
            let (g1, g2) = ((k1 / 3) as u32, ((k2 + 1) / 3) as u32);
            -upper_coeff(g1) * lower_coeff(g2)
        }
        (2, 0) => {
            let (g1, g2) = (((k1 + 1) / 3) as u32, (k2 / 3) as u32);
            -lower_coeff(g1) * upper_coeff(g2)
        }
        _ => Rational::zero(),
    }
}

/// The case table with the third case scaled by `-1/2`; it does not reproduce the numbers.
pub fn xi_half_variant(k1: i64, k2: i64) -> Rational {
    if k1.rem_euclid(3) == 2 && k2.rem_euclid(3) == 0 && k1 >= -1 && k2 >= 0 {
        let (g1, g2) = (((k1 + 1) / 3) as u32, (k2 / 3) as u32);
        return lower_coeff(g1) * upper_coeff(g2) / Rational::from_integer(BigInt::from(2));
    }
    xi(k1, k2)
}

/// `int psi_1^{d1} psi_2^{d2}` over `M_{g,2}` for `d1 + d2 = 3g - 1`.
pub fn two_point_bdy(d1: u32, d2: u32) -> Rational {
    two_point_with(d1, d2, xi)
}

pub(crate) fn two_point_with(d1: u32, d2: u32, xi: impl Fn(i64, i64) -> Rational) -> Rational {
    let s = d1 as i64 + d2 as i64;
    if (s + 1) % 3 != 0 {
        return Rational::zero();
    }
    let g3 = s + 1;
    let mut total = Rational::zero();
    for l in 0..=d1 as i64 {
        let x = xi(l - 1, g3 - l);
        if !x.is_zero() {
            total += x * Rational::from_integer(BigInt::from(d1 as i64 + 1 - l));
        }
    }
    total / Rational::from_integer(df(2 * d1 as i64 + 1) * df(2 * d2 as i64 + 1))
}

/// `eta_{g,d}` for `d >= -1`.
pub fn eta(g: u32, d: i64) -> Rational {
    let g = g as i64;
    let top = 6 * g - 3 - 2 * d;
    if top < -1 {
        return Rational::zero();
    }
    let base = Rational::from_integer(df(top) * df(2 * d + 1));
    let j = (d + 1).div_euclid(3);
    let case = match (d + 1).rem_euclid(3) {
        0 => {
            // d = 3j - 1
            reciprocal_factorial(j) * reciprocal_factorial(g - j) * Rational::from_integer(BigInt::from(g - 2 * j))
        }
        1 => -reciprocal_factorial(j) * reciprocal_factorial(g - 1 - j) * Rational::from_integer(BigInt::from(2)),
        _ => reciprocal_factorial(j) * reciprocal_factorial(g - 1 - j) * Rational::from_integer(BigInt::from(2)),
    };
    base * case
}

/// `C(d1, d2)` for `d1 + d2 = 3g - 1`, `g >= 1`.
pub fn two_point_zograf(d1: u32, d2: u32) -> Rational {
    let s = d1 as i64 + d2 as i64;
    if (s + 1) % 3 != 0 {
        return Rational::zero();
    }
    let g = ((s + 1) / 3) as u32;
    if g == 0 {
        return Rational::zero();
    }
    let mut total = Rational::zero();
    for d in -1..d1 as i64 {
        total += eta(g, d);
    }
    let den = num_traits::pow(BigInt::from(54), g as usize) * factorial(2 * g - 1) * g;
    total / Rational::from_integer(den)
}

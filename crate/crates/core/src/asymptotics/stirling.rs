use num_bigint::BigInt;
use num_traits::Zero;

use super::series::{SeriesInvX, Var};
use crate::arith::{bernoulli_numbers, bernoulli_poly, big, pow, rat, Rational};
use crate::painleve::cg_asymptotic_series;

/// `sum_k B_{2k}/(2k(2k-1)) z^{1-2k}`, the correction part of the Stirling
/// series for `log Gamma(z)`, as a series in `1/z` up to `1/z^order`.
pub fn stirling_log_gamma(order: usize) -> SeriesInvX {
    let b = bernoulli_numbers(order as u32 + 1);
    let mut coeffs = vec![Rational::zero(); order + 1];
    let mut k = 1;
    while 2 * k - 1 <= order {
        let d = (2 * k * (2 * k - 1)) as i64;
        coeffs[2 * k - 1] = &b[2 * k] / big(BigInt::from(d));
        k += 1;
    }
    SeriesInvX::new(coeffs, Var::InvX)
}

/// `Gamma(c x) / (sqrt(2 pi) (c x)^(c x - 1/2) e^(-c x))` as a series in `1/x`.
pub fn gamma_tail(c: &Rational, order: usize, var: Var) -> SeriesInvX {
    let base = stirling_log_gamma(order);
    let coeffs = (0..=order).map(|i| base.coeff(i) * pow(c, -(i as i32))).collect();
    SeriesInvX::new(coeffs, var).exp()
}

/// `Gamma(c x + s) / (Gamma(c x) (c x)^s)` as a series in `1/x`.
pub fn gamma_shift(c: &Rational, s: &Rational, order: usize, var: Var) -> SeriesInvX {
    let b = bernoulli_numbers(order as u32 + 1);
    let mut coeffs = vec![Rational::zero(); order + 1];
    for n in 2..=order + 1 {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let num = (bernoulli_poly(n as u32, s) - &b[n]) * big(BigInt::from(sign));
        coeffs[n - 1] = num / big(BigInt::from((n * (n - 1)) as i64)) * pow(c, 1 - n as i32);
    }
    SeriesInvX::new(coeffs, var).exp()
}

/// `S(1/g)` with `C(3g-2) ~ S / pi`.
pub fn one_point_series(order: usize) -> SeriesInvX {
    let v = Var::InvG;
    let t = |c: i64| gamma_tail(&rat(c, 1), order, v);
    let num = &(&t(3) * &gamma_shift(&rat(3, 1), &rat(-1, 2), order, v)) * &(&t(1) * &t(2)).recip();
    &num * &gamma_shift(&rat(2, 1), &rat(-1, 1), order, v).recip()
}

/// `pi * gamma(X)` as a series in `1/X`.
pub fn pi_gamma_series(order: usize) -> SeriesInvX {
    let v = Var::InvX;
    let t = |c: Rational| gamma_tail(&c, order, v);
    let num = t(rat(3, 2));
    let den = &(&t(rat(1, 2)) * &t(rat(1, 1))) * &gamma_shift(&rat(1, 2), &rat(3, 2), order, v);
    &num * &den.recip()
}

/// `S(1/g)` with `C(2^(3g-3)) ~ S / pi`, from the Painleve coefficients
/// and the Stirling expansion of the factorials that relate them.
pub fn largest_series(order: usize) -> SeriesInvX {
    let v = Var::InvG;
    let t = |c: i64| gamma_tail(&rat(c, 1), order, v);
    let tails = &(&(&t(1) * &t(1)) * &t(3)) * &t(5).recip();
    let shifts =
        &gamma_shift(&rat(3, 1), &rat(-2, 1), order, v) * &gamma_shift(&rat(5, 1), &rat(-4, 1), order, v).recip();
    let mut one_minus = SeriesInvX::one(order, v);
    if order >= 1 {
        one_minus = &one_minus - &SeriesInvX::variable(order, v).scale(&rat(3, 5));
    }
    let b = cg_asymptotic_series(order);
    &(&(&tails * &shifts) * &one_minus.recip()) * &b
}

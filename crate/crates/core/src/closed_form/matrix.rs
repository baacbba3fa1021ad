use std::ops::Mul;
use std::sync::RwLock;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::arith::{big, factorial, odd_double_factorial_int, Rational};

/// 2x2 matrix of exact rationals, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2(pub [Rational; 4]);

impl Mat2 {
    pub fn zero() -> Mat2 {
        Mat2([Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn identity() -> Mat2 {
        Mat2([Rational::one(), Rational::zero(), Rational::zero(), Rational::one()])
    }

    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Mat2 {
        Mat2([a, b, c, d])
    }

    pub fn trace(&self) -> Rational {
        &self.0[0] + &self.0[3]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

/// Sparsity pattern of `A_k`: every coefficient is a scalar times one of
/// `diag(1,-1)`, `e_12` or `e_21`, decided by `k mod 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Diag,
    Upper,
    Lower,
}

pub fn shape_of(k: i64) -> Shape {
    match k.rem_euclid(3) {
        1 => Shape::Diag,
        0 => Shape::Upper,
        _ => Shape::Lower,
    }
}

/// The scalar `s_k` with `A_k = s_k * E(shape_of(k))`, for `k >= -1`.
fn scalar_uncached(k: i64) -> Rational {
    let twenty_four = BigInt::from(24);
    match shape_of(k) {
        Shape::Diag => {
            // (1,1) entry -(1/2)(6g-5)!!/(24^(g-1)(g-1)!) at k = 3g-2
            let g = ((k + 2) / 3) as u32;
            let den = num_traits::pow(twenty_four, (g - 1) as usize) * factorial(g - 1) * 2;
            -Rational::new(odd_double_factorial_int(6 * g as i64 - 5), den)
        }
        Shape::Upper => {
            // (1,2) entry -(6g-1)!!/(24^g g!) at k = 3g
            let g = (k / 3) as u32;
            let den = num_traits::pow(twenty_four, g as usize) * factorial(g);
            -Rational::new(odd_double_factorial_int(6 * g as i64 - 1), den)
        }
        Shape::Lower => {
            // (2,1) entry (6g+1)/(6g-1) (6g-1)!!/(24^g g!) at k = 3g-1
            let g = ((k + 1) / 3) as u32;
            let den = num_traits::pow(twenty_four, g as usize) * factorial(g);
            let ratio = Rational::new(BigInt::from(6 * g as i64 + 1), BigInt::from(6 * g as i64 - 1));
            ratio * Rational::new(odd_double_factorial_int(6 * g as i64 - 1), den)
        }
    }
}

static SCALARS: Lazy<RwLock<Vec<Rational>>> = Lazy::new(|| RwLock::new(Vec::new()));

/// `s_k`, served from a shared table indexed by `k + 1`.
pub fn matrix_scalar(k: i64) -> Rational {
    assert!(k >= -1);
    let idx = (k + 1) as usize;
    if let Some(v) = SCALARS.read().unwrap().get(idx) {
        return v.clone();
    }
    let mut table = SCALARS.write().unwrap();
    while table.len() <= idx {
        let next = scalar_uncached(table.len() as i64 - 1);
        table.push(next);
    }
    table[idx].clone()
}

/// Coefficient of `lambda^(-k)` in `M(lambda)`; the zero matrix for `k <= -2`.
pub fn matrix_coeff(k: i64) -> Mat2 {
    if k < -1 {
        return Mat2::zero();
    }
    let s = matrix_scalar(k);
    let z = Rational::zero;
    match shape_of(k) {
        Shape::Diag => Mat2::new(s.clone(), z(), z(), -s),
        Shape::Upper => Mat2::new(z(), s, z(), z()),
        Shape::Lower => Mat2::new(z(), z(), s, z()),
    }
}

/// `A_{-1}, ..., A_K`.
#[derive(Clone, Debug)]
pub struct MatrixSeries {
    coeffs: Vec<Mat2>,
}

impl MatrixSeries {
    pub fn new(order: i64) -> MatrixSeries {
        MatrixSeries { coeffs: (-1..=order).map(matrix_coeff).collect() }
    }

    pub fn order(&self) -> i64 {
        self.coeffs.len() as i64 - 2
    }

    pub fn get(&self, k: i64) -> Option<&Mat2> {
        (k >= -1).then(|| self.coeffs.get((k + 1) as usize)).flatten()
    }

    pub fn trace_of_product(&self, ks: &[i64]) -> Rational {
        let mut acc = Mat2::identity();
        for &k in ks {
            match self.get(k) {
                Some(m) => acc = &acc * m,
                None => return Rational::zero(),
            }
        }
        acc.trace()
    }
}

/// `tr(E_{k_1} ... E_{k_n})` for the unit shapes, an integer in `{-2..2}`.
///
/// Sums over index paths `i_0 -> i_1 -> ... -> i_n = i_0`: `e_12` steps
/// from row 1 to column 2, `e_21` back, and `diag(1,-1)` stays put with a
/// sign on the second index.
pub fn shape_trace(ks: &[i64]) -> i64 {
    let mut total = 0;
    for start in 0..2u8 {
        let mut state = start;
        let mut sign = 1i64;
        let mut alive = true;
        for &k in ks {
            match shape_of(k) {
                Shape::Diag => {
                    if state == 1 {
                        sign = -sign;
                    }
                }
                Shape::Upper => {
                    if state == 0 {
                        state = 1;
                    } else {
                        alive = false;
                        break;
                    }
                }
                Shape::Lower => {
                    if state == 1 {
                        state = 0;
                    } else {
                        alive = false;
                        break;
                    }
                }
            }
        }
        if alive && state == start {
            total += sign;
        }
    }
    total
}

fn a_genus(ks: &[i64]) -> Option<(u32, u32)> {
    let n = ks.len() as i64;
    let s: i64 = ks.iter().sum::<i64>() - n + 3;
    if s.rem_euclid(3) != 0 || s < 0 {
        return None;
    }
    let g = (s / 3) as u32;
    let fact = 2 * g as i64 + n - 3;
    (fact >= 0).then_some((g, fact as u32))
}

/// `2^(2g) / (3^(2g+n-2) (2g+n-3)!)` for a vector of length `n` and genus `g`.
pub(crate) fn a_prefactor(g: u32, n: u32) -> Rational {
    let num = num_traits::pow(BigInt::from(2), 2 * g as usize);
    let den = num_traits::pow(BigInt::from(3), (2 * g + n - 2) as usize) * factorial(2 * g + n - 3);
    Rational::new(num, den)
}

/// `a_{k_1..k_n}` computed directly from the matrix product.
pub fn a_value_direct(ks: &[i64]) -> Rational {
    if ks.iter().any(|&k| k <= -2) {
        return Rational::zero();
    }
    let Some((g, _)) = a_genus(ks) else {
        return Rational::zero();
    };
    let mut acc = Mat2::identity();
    for &k in ks {
        acc = &acc * &matrix_coeff(k);
    }
    acc.trace() * a_prefactor(g, ks.len() as u32)
}

/// Lexicographically least rotation of `ks` or of its reversal, with the
/// sign `(-1)^n` picked up when the reversal wins.
pub fn canonical_rotation(ks: &[i64]) -> (Vec<i64>, bool) {
    let n = ks.len();
    let mut best: Vec<i64> = ks.to_vec();
    let mut reversed = false;
    let rev: Vec<i64> = ks.iter().rev().copied().collect();
    for (src, is_rev) in [(ks, false), (&rev[..], true)] {
        for r in 0..n {
            let cand: Vec<i64> = src[r..].iter().chain(&src[..r]).copied().collect();
            if cand < best {
                best = cand;
                reversed = is_rev;
            }
        }
    }
    (best, reversed && n % 2 == 1)
}

static A_CACHE: Lazy<DashMap<Vec<i64>, Rational>> = Lazy::new(DashMap::new);

/// `a_{k_1..k_n} = 2^(2g) tr(A_{k_1}...A_{k_n}) / (3^(2g+n-2) (2g+n-3)!)`,
/// zero when `g(k)` is not a non-negative integer, when `2g+n-3 < 0`, or
/// when some `k_j <= -2`.
pub fn a_value(ks: &[i64]) -> Rational {
    if ks.iter().any(|&k| k <= -2) {
        return Rational::zero();
    }
    let Some((g, _)) = a_genus(ks) else {
        return Rational::zero();
    };
    let t = shape_trace(ks);
    if t == 0 {
        return Rational::zero();
    }
    let (key, negate) = canonical_rotation(ks);
    let v = match A_CACHE.get(&key) {
        Some(v) => v.value().clone(),
        None => {
            let tk = shape_trace(&key);
            let prod: Rational = key.iter().map(|&k| matrix_scalar(k)).product();
            let v = prod * big(BigInt::from(tk)) * a_prefactor(g, ks.len() as u32);
            A_CACHE.insert(key, v.clone());
            v
        }
    };
    if negate {
        -v
    } else {
        v
    }
}

//! Exact rational kernel and the combinatorial special functions used
//! throughout the crate.
//!
//! Out-of-range conventions live here and nowhere else: `(-1)!! = 1` and
//! `1/n! = 0` for `n < 0`.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Arbitrary-precision signed rational, always kept in lowest terms.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

static FACTORIALS: Lazy<RwLock<Vec<BigInt>>> = Lazy::new(|| RwLock::new(vec![BigInt::one()]));

/// `n!` as a big integer, served from a growing shared table.
pub fn factorial(n: u32) -> BigInt {
    let n = n as usize;
    {
        let table = FACTORIALS.read().unwrap();
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = FACTORIALS.write().unwrap();
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigInt::from(k);
        table.push(next);
    }
    table[n].clone()
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `m!! = m (m-2) ... 1` for odd `m >= -1`.
pub fn odd_double_factorial(m: i64) -> Result<Rational> {
    if m < -1 || m % 2 == 0 {
        return Err(Error::UndefinedDoubleFactorial(m));
    }
    Ok(big(odd_double_factorial_int(m)))
}

pub(crate) fn odd_double_factorial_int(m: i64) -> BigInt {
    debug_assert!(m >= -1 && m.rem_euclid(2) == 1);
    let mut acc = BigInt::one();
    let mut k = m;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    acc
}

/// `1/n!`, with `1/n! = 0` for negative `n`.
pub fn reciprocal_factorial(n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::one(), factorial(n as u32))
    }
}

/// Rising factorial `a (a+1) ... (a+b-1)`.
pub fn pochhammer(a: &Rational, b: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..b {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

static BERNOULLI: Lazy<RwLock<Vec<Rational>>> = Lazy::new(|| RwLock::new(vec![Rational::one()]));

/// `B_0, ..., B_n` with the `B_1 = -1/2` convention.
pub(crate) fn bernoulli_numbers(n: u32) -> Vec<Rational> {
    let n = n as usize;
    {
        let table = BERNOULLI.read().unwrap();
        if table.len() > n {
            return table[..=n].to_vec();
        }
    }
    let mut table = BERNOULLI.write().unwrap();
    while table.len() <= n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let m = table.len() as u32;
        let mut s = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            s += big(binomial(m + 1, j as u32)) * b;
        }
        table.push(-s / big(BigInt::from(m + 1)));
    }
    table[..=n].to_vec()
}

/// Bernoulli number `B_k` for even `k >= 2`.
pub fn bernoulli(k: u32) -> Result<Rational> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::OddBernoulli(k));
    }
    Ok(bernoulli_numbers(k).pop().unwrap())
}

/// Bernoulli polynomial `B_n(x) = sum_j C(n,j) B_j x^(n-j)`.
pub fn bernoulli_poly(n: u32, x: &Rational) -> Rational {
    let b = bernoulli_numbers(n);
    let mut acc = Rational::zero();
    let mut xp = Rational::one();
    // accumulate from j = n down to 0 so that xp tracks x^(n-j)
    for j in (0..=n).rev() {
        acc += big(binomial(n, j)) * &b[j as usize] * &xp;
        xp *= x;
    }
    acc
}

/// Non-negative integer power of a rational, allowing negative exponents.
pub fn pow(base: &Rational, e: i32) -> Rational {
    let r = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

/// Exact test for `r` being an integer, returning it.
pub fn as_integer(r: &Rational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// `true` when the rational is written in lowest terms with a positive denominator.
pub fn is_reduced(num: &BigInt, den: &BigInt) -> bool {
    den.is_positive() && num.gcd(den).is_one()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn double_factorial_values() {
        assert_eq!(odd_double_factorial(9).unwrap(), int(945));
        assert_eq!(odd_double_factorial(-1).unwrap(), int(1));
        assert_eq!(odd_double_factorial(5).unwrap(), int(15));
        assert!(odd_double_factorial(4).is_err());
        assert!(odd_double_factorial(-3).is_err());
    }

    #[test]
    fn reciprocal_factorial_values() {
        assert_eq!(reciprocal_factorial(3), rat(1, 6));
        assert_eq!(reciprocal_factorial(-1), Rational::zero());
        assert_eq!(reciprocal_factorial(0), int(1));
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&int(3), 2), int(12));
        assert_eq!(pochhammer(&rat(1, 2), 3), rat(15, 8));
        assert_eq!(pochhammer(&rat(-7, 3), 0), int(1));
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(8).unwrap(), rat(-1, 30));
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(0).is_err());
    }

    #[test]
    fn bernoulli_recurrence_up_to_40() {
        let b = bernoulli_numbers(40);
        for m in 1..=40u32 {
            let s: Rational = (0..=m).map(|j| big(binomial(m + 1, j)) * &b[j as usize]).sum();
            assert!(s.is_zero(), "recurrence fails at m={m}");
        }
        for k in (3..=39).step_by(2) {
            assert!(b[k].is_zero());
        }
    }

    #[test]
    fn bernoulli_polynomial_at_zero_and_one() {
        let b = bernoulli_numbers(12);
        for n in 2..=12u32 {
            assert_eq!(bernoulli_poly(n, &Rational::zero()), b[n as usize]);
            assert_eq!(bernoulli_poly(n, &Rational::one()), b[n as usize]);
        }
        // B_2(x) = x^2 - x + 1/6
        assert_eq!(bernoulli_poly(2, &rat(-1, 2)), rat(11, 12));
    }

    proptest! {
        #[test]
        fn double_factorial_matches_factorial_quotient(h in 0u32..40) {
            let m = 2 * h as i64 + 1;
            let lhs = odd_double_factorial(m).unwrap();
            let rhs = Rational::new(factorial(m as u32), BigInt::from(2).pow(h) * factorial(h));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reciprocal_factorial_inverts(n in 0i64..60) {
            prop_assert_eq!(reciprocal_factorial(n) * big(factorial(n as u32)), int(1));
        }

        #[test]
        fn pochhammer_splits(num in -30i64..30, den in 1i64..7, b in 0u32..8, c in 0u32..8) {
            let a = rat(num, den);
            let lhs = pochhammer(&a, b) * pochhammer(&(&a + int(b as i64)), c);
            prop_assert_eq!(lhs, pochhammer(&a, b + c));
        }
    }
}

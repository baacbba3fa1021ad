//! Fixed-significance decimals for comparisons against transcendental
//! constants. Every operation goes through exact rationals and rounds once.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{big, Rational};
use crate::error::{Error, Result};

/// Pi to 100 decimal places.
const PI_DIGITS: &str = "3.\
1415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679";

pub const MAX_PRECISION: u32 = 100;

/// `mantissa * 10^exponent`, with `|mantissa| < 10^precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

fn ten_pow(e: u64) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

fn digit_count(n: &BigInt) -> u64 {
    if n.is_zero() {
        1
    } else {
        n.abs().to_string().len() as u64
    }
}

/// Round `num/den` (den > 0) to the nearest integer, halves away from zero.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.abs().div_rem(den);
    let q = if r * 2 >= *den { q + 1 } else { q };
    if num.is_negative() {
        -q
    } else {
        q
    }
}

impl Decimal {
    /// Rounds `r` to `precision` significant digits.
    pub fn from_rational(r: &Rational, precision: u32) -> Decimal {
        let precision = precision.max(1);
        if r.is_zero() {
            return Decimal { mantissa: BigInt::zero(), exponent: 0, precision };
        }
        let num = r.numer();
        let den = r.denom();
        // estimate the decimal order of |r|, then correct by one step
        let mut exponent = digit_count(num) as i64 - digit_count(den) as i64 - precision as i64;
        loop {
            let m = Self::scaled(num, den, exponent);
            let digits = digit_count(&m) as i64;
            if digits > precision as i64 {
                exponent += 1;
            } else if digits < precision as i64
                && !m.is_zero()
                && Self::scaled(num, den, exponent - 1).abs() < ten_pow(precision as u64)
            {
                exponent -= 1;
            } else {
                return Decimal { mantissa: m, exponent, precision };
            }
        }
    }

    fn scaled(num: &BigInt, den: &BigInt, exponent: i64) -> BigInt {
        if exponent >= 0 {
            round_div(num, &(den * ten_pow(exponent as u64)))
        } else {
            round_div(&(num * ten_pow((-exponent) as u64)), den)
        }
    }

    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            big(&self.mantissa * ten_pow(self.exponent as u64))
        } else {
            Rational::new(self.mantissa.clone(), ten_pow((-self.exponent) as u64))
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Decimal {
        Decimal::from_rational(&self.to_rational(), precision)
    }

    fn combine(&self, other: &Decimal, r: Rational) -> Decimal {
        Decimal::from_rational(&r, self.precision.min(other.precision))
    }

    pub fn add(&self, other: &Decimal) -> Decimal {
        self.combine(other, self.to_rational() + other.to_rational())
    }

    pub fn sub(&self, other: &Decimal) -> Decimal {
        self.combine(other, self.to_rational() - other.to_rational())
    }

    pub fn mul(&self, other: &Decimal) -> Decimal {
        self.combine(other, self.to_rational() * other.to_rational())
    }

    pub fn div(&self, other: &Decimal) -> Result<Decimal> {
        if other.mantissa.is_zero() {
            return Err(Error::InvalidArgument("division by zero".into()));
        }
        Ok(self.combine(other, self.to_rational() / other.to_rational()))
    }

    pub fn abs(&self) -> Decimal {
        Decimal { mantissa: self.mantissa.abs(), ..self.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().unwrap_or(f64::NAN)
    }

    /// Number of leading significant digits on which `self` and `other` agree,
    /// measured as `floor(-log10(|self - other| / |other|))`.
    pub fn agreeing_digits(&self, other: &Decimal) -> u32 {
        let a = self.to_rational();
        let b = other.to_rational();
        let diff = (&a - &b).abs();
        if diff.is_zero() {
            return self.precision.min(other.precision);
        }
        let rel = diff / b.abs();
        let tenth = Rational::new(BigInt::one(), BigInt::from(10));
        let mut k = 0u32;
        let mut bound = tenth.clone();
        while rel <= bound && k < 200 {
            bound *= &tenth;
            k += 1;
        }
        k
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.to_rational().cmp(&other.to_rational()))
    }
}

impl fmt::Display for Decimal {
    /// Plain positional notation, e.g. `3.1416` or `0.0392`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = self.mantissa.is_negative();
        let digits = self.mantissa.abs().to_string();
        let sign = if neg { "-" } else { "" };
        if self.exponent >= 0 {
            return write!(f, "{sign}{digits}{}", "0".repeat(self.exponent as usize));
        }
        let point = digits.len() as i64 + self.exponent;
        let body = if point > 0 {
            let (a, b) = digits.split_at(point as usize);
            format!("{a}.{b}")
        } else {
            format!("0.{}{digits}", "0".repeat((-point) as usize))
        };
        write!(f, "{sign}{body}")
    }
}

impl Serialize for Decimal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Decimal", 2)?;
        st.serialize_field("value", &self.to_string())?;
        st.serialize_field("precision", &self.precision)?;
        st.end()
    }
}

/// The stored pi constant as an exact rational with 101 significant digits.
pub fn pi_rational() -> Rational {
    let digits: String = PI_DIGITS.chars().filter(|c| c.is_ascii_digit()).collect();
    Rational::new(digits.parse().unwrap(), ten_pow(digits.len() as u64 - 1))
}

/// Pi rounded to `precision` significant digits.
pub fn pi_value(precision: u32) -> Result<Decimal> {
    if precision > MAX_PRECISION {
        return Err(Error::PrecisionTooHigh(precision));
    }
    Ok(Decimal::from_rational(&pi_rational(), precision))
}

/// `1/pi` to `precision` significant digits.
pub fn inv_pi(precision: u32) -> Result<Decimal> {
    if precision > MAX_PRECISION {
        return Err(Error::PrecisionTooHigh(precision));
    }
    Ok(Decimal::from_rational(&pi_rational().recip(), precision))
}

/// Integer square root of a rational to `precision` significant digits.
pub fn sqrt(r: &Rational, precision: u32) -> Decimal {
    assert!(!r.is_negative(), "sqrt of a negative number");
    if r.is_zero() {
        return Decimal::from_rational(r, precision);
    }
    // sqrt(n/d) = sqrt(n d 10^(2s)) / (d 10^s)
    let s = precision as u64 + 10 + digit_count(r.denom());
    let radicand = r.numer() * r.denom() * ten_pow(2 * s);
    let root = radicand.sqrt();
    Decimal::from_rational(&Rational::new(root, r.denom() * ten_pow(s)), precision)
}

/// `e^x` for a rational `x` with `|x| <= 1`, to `precision` significant digits.
pub fn exp(x: &Rational, precision: u32) -> Decimal {
    assert!(x.abs() <= Rational::one(), "exp argument out of range");
    let tol = Rational::new(BigInt::one(), ten_pow(precision as u64 + 10));
    let mut sum = Rational::one();
    let mut term = Rational::one();
    let mut k = 1u32;
    loop {
        term = term * x / big(BigInt::from(k));
        sum += &term;
        if term.abs() < tol {
            break;
        }
        k += 1;
    }
    Decimal::from_rational(&sum, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    /// Machin's formula, pi = 16 atan(1/5) - 4 atan(1/239), in fixed point.
    fn machin_pi(digits: u64) -> BigInt {
        let scale = ten_pow(digits + 10);
        let atan_inv = |x: i64| {
            let x = BigInt::from(x);
            let x2 = &x * &x;
            let mut term = &scale / &x;
            let mut sum = term.clone();
            let mut k = 1i64;
            while !term.is_zero() {
                term /= &x2;
                let t = &term / BigInt::from(2 * k + 1);
                if k % 2 == 1 {
                    sum -= t;
                } else {
                    sum += t;
                }
                k += 1;
            }
            sum
        };
        (atan_inv(5) * 16 - atan_inv(239) * 4) / ten_pow(10)
    }

    #[test]
    fn stored_pi_matches_machin() {
        let reference = machin_pi(100);
        let stored: BigInt = PI_DIGITS.chars().filter(|c| c.is_ascii_digit()).collect::<String>().parse().unwrap();
        assert!((reference - stored).abs() <= BigInt::from(1));
    }

    #[test]
    fn pi_rounding() {
        assert_eq!(pi_value(5).unwrap().to_string(), "3.1416");
        assert_eq!(pi_value(10).unwrap().to_string(), "3.141592654");
        assert!(matches!(pi_value(101), Err(Error::PrecisionTooHigh(101))));
        assert_eq!(pi_value(100).unwrap().precision(), 100);
    }

    #[test]
    fn rational_round_trip_error() {
        for (n, d) in [(1i64, 3i64), (-22, 7), (98, 2500), (123456789, 1000), (1, 999999)] {
            let r = rat(n, d);
            for p in [1u32, 5, 20, 50] {
                let dec = Decimal::from_rational(&r, p);
                let rel = ((dec.to_rational() - &r) / &r).abs();
                assert!(rel < Rational::new(BigInt::one(), ten_pow(p as u64 - 1)), "{r} at {p}");
            }
        }
        assert_eq!(Decimal::from_rational(&rat(98, 2500), 3).to_string(), "0.0392");
        assert_eq!(Decimal::from_rational(&rat(-5, 2), 4).to_string(), "-2.500");
        assert_eq!(Decimal::from_rational(&rat(120000, 1), 2).to_string(), "120000");
    }

    #[test]
    fn sqrt_and_exp() {
        assert_eq!(sqrt(&rat(2, 1), 12).to_string(), "1.41421356237");
        assert_eq!(exp(&int1(), 15).to_string(), "2.71828182845905");
        let a = sqrt(&rat(3, 5), 40)
            .div(&Decimal::from_rational(&(pi_rational() * pi_rational() * rat(2, 1)), 40))
            .unwrap();
        assert_eq!(a.with_precision(12).to_string(), "0.0392415256865");
    }

    fn int1() -> Rational {
        rat(1, 1)
    }

    #[test]
    fn agreeing_digits_counts() {
        let a = Decimal::from_rational(&rat(10001, 10000), 20);
        let b = Decimal::from_rational(&rat(1, 1), 20);
        assert_eq!(a.agreeing_digits(&b), 4);
    }
}

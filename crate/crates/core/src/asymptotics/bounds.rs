use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::Serialize;

use crate::arith::{int, pochhammer, pow, rat, Rational};
use crate::decimal::{self, Decimal};
use crate::dvv::{c_value, DVec};
use crate::error::{Error, Result};

/// `r / pi + s` with rational `r`, `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiLinear {
    #[serde(serialize_with = "as_string")]
    pub r: Rational,
    #[serde(serialize_with = "as_string")]
    pub s: Rational,
}

fn as_string<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl PiLinear {
    pub fn new(r: Rational, s: Rational) -> PiLinear {
        PiLinear { r, s }
    }

    /// `1/pi`.
    pub fn inv_pi() -> PiLinear {
        PiLinear::new(Rational::one(), Rational::zero())
    }

    pub fn constant(s: Rational) -> PiLinear {
        PiLinear::new(Rational::zero(), s)
    }

    pub fn scale(&self, c: &Rational) -> PiLinear {
        PiLinear::new(&self.r * c, &self.s * c)
    }

    pub fn to_decimal(&self, precision: u32) -> Result<Decimal> {
        if precision + 5 > decimal::MAX_PRECISION {
            return Err(Error::PrecisionTooHigh(precision));
        }
        let ip = decimal::inv_pi(precision + 5)?.to_rational();
        Ok(Decimal::from_rational(&(&self.r * ip + &self.s), precision))
    }

    /// Exact when the `1/pi` parts agree, otherwise through `precision` digits of pi.
    pub fn compare(&self, other: &PiLinear, precision: u32) -> Result<Ordering> {
        let d = self - other;
        if d.r.is_zero() {
            return Ok(d.s.cmp(&Rational::zero()));
        }
        let v = d.to_decimal(precision)?.to_rational();
        Ok(v.cmp(&Rational::zero()))
    }
}

impl Add for &PiLinear {
    type Output = PiLinear;
    fn add(self, o: &PiLinear) -> PiLinear {
        PiLinear::new(&self.r + &o.r, &self.s + &o.s)
    }
}

impl Sub for &PiLinear {
    type Output = PiLinear;
    fn sub(self, o: &PiLinear) -> PiLinear {
        PiLinear::new(&self.r - &o.r, &self.s - &o.s)
    }
}

impl Neg for &PiLinear {
    type Output = PiLinear;
    fn neg(self) -> PiLinear {
        PiLinear::new(-&self.r, -&self.s)
    }
}

impl fmt::Display for PiLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/pi + {}", self.r, self.s)
    }
}

/// Rows `x = 1..=xm` of `f`, row `x` covering `n = 1..=nm + xm - x`.
struct FTable {
    xm: u32,
    nm: u32,
    rows: Vec<Vec<PiLinear>>,
}

impl FTable {
    fn build(xm: u32, nm: u32) -> FTable {
        let mut rows: Vec<Vec<PiLinear>> = vec![Vec::new()];
        for x in 1..=xm {
            let width = (nm + xm - x) as usize;
            let mut row = Vec::with_capacity(width);
            for n in 1..=width as u32 {
                if x <= 7 || n <= 2 {
                    row.push(PiLinear::inv_pi());
                    continue;
                }
                let prev = &rows[x as usize - 1];
                let a = prev[n as usize - 2].scale(&rat(2, 3));
                let b = prev[n as usize].scale(&rat(1, 3));
                let tail = PiLinear::constant(rat(4, ((x - 1) * (x - 2)) as i64));
                row.push(&(&a + &b) + &tail);
            }
            rows.push(row);
        }
        FTable { xm, nm, rows }
    }

    fn get(&self, x: u32, n: u32) -> Option<&PiLinear> {
        self.rows.get(x as usize)?.get(n as usize - 1)
    }
}

static F_TABLE: Lazy<RwLock<FTable>> = Lazy::new(|| RwLock::new(FTable::build(8, 8)));

/// `f(X, n)`: `1/pi` for `X <= 7` or `n <= 2`, otherwise
/// `(2/3) f(X-1, n-1) + (1/3) f(X-1, n+1) + 4/((X-1)(X-2))`.
pub fn f_bound(x: u32, n: u32) -> PiLinear {
    assert!(x >= 1 && n >= 1, "f_bound needs X, n >= 1");
    if let Some(v) = F_TABLE.read().unwrap().get(x, n) {
        return v.clone();
    }
    let mut t = F_TABLE.write().unwrap();
    if t.get(x, n).is_none() {
        let xm = t.xm.max(x);
        let nm = t.nm.max(n);
        *t = FTable::build(xm, nm);
    }
    t.get(x, n).unwrap().clone()
}

/// `1/pi <= f(X,n) <= 1` on the whole grid, compared at `precision` digits.
pub fn lemma6_bounds(x_max: u32, n_max: u32, precision: u32) -> Result<bool> {
    f_bound(x_max, n_max);
    let one = PiLinear::constant(Rational::one());
    let low = PiLinear::inv_pi();
    for x in 1..=x_max {
        for n in 1..=n_max {
            let f = f_bound(x, n);
            if f.compare(&low, precision)? == Ordering::Less || f.compare(&one, precision)? == Ordering::Greater {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `f(X, n+1) >= f(X, n)` on the whole grid.
pub fn lemma6_monotone(x_max: u32, n_max: u32, precision: u32) -> Result<bool> {
    f_bound(x_max, n_max + 1);
    for x in 1..=x_max {
        for n in 1..=n_max {
            if f_bound(x, n + 1).compare(&f_bound(x, n), precision)? == Ordering::Less {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Recorded bound for `X (f(X,n) - 1/pi)` with `n <= X/5`, `50 <= X <= 200`.
pub const LEMMA6_GAP_CONSTANT: i64 = 10;

/// `max_{x_lo <= X <= x_hi, n <= X/5} X (f(X,n) - 1/pi)` and where it is attained.
pub fn lemma6_scaled_gap(x_lo: u32, x_hi: u32, precision: u32) -> Result<(Decimal, u32, u32)> {
    f_bound(x_hi, x_hi / 5 + 1);
    let mut best: Option<(Rational, u32, u32)> = None;
    for x in x_lo..=x_hi {
        for n in 1..=(x / 5).max(1) {
            let gap = (&f_bound(x, n) - &PiLinear::inv_pi()).scale(&int(x as i64));
            let v = gap.to_decimal(precision)?.to_rational();
            if best.as_ref().map_or(true, |b| v > b.0) {
                best = Some((v, x, n));
            }
        }
    }
    let (v, x, n) = best.ok_or_else(|| Error::InvalidArgument("empty range".into()))?;
    Ok((Decimal::from_rational(&v, precision), x, n))
}

fn p0_p1_x(d: &DVec) -> Result<(u32, u32, u32)> {
    if d.genus().is_none() {
        return Err(Error::InvalidArgument(format!("{d} does not have a non-negative integer genus")));
    }
    Ok((d.multiplicity(0), d.multiplicity(1), d.x_int().unwrap()))
}

/// `prod_{j=1}^{p0} (1 + (2 + j - p0) / (3X - 3p1 - 3j))`.
pub fn theorem2_product(d: &DVec) -> Result<Rational> {
    let (p0, p1, x) = p0_p1_x(d)?;
    let mut acc = Rational::one();
    for j in 1..=p0 as i64 {
        let den = 3 * (x as i64 - p1 as i64 - j);
        if den == 0 {
            return Err(Error::DegenerateProduct(j as u32));
        }
        acc *= Rational::one() + rat(2 + j - p0 as i64, den);
    }
    Ok(acc)
}

/// `(2/3)^p0 ((3X - 3p0 - 3p1 + 2)/2)_p0 / (X - p1 - p0)_p0`.
pub fn theorem2_pochhammer(d: &DVec) -> Result<Rational> {
    let (p0, p1, x) = p0_p1_x(d)?;
    let (p0i, p1i, xi) = (p0 as i64, p1 as i64, x as i64);
    let top = pochhammer(&rat(3 * xi - 3 * p0i - 3 * p1i + 2, 2), p0);
    let bottom = pochhammer(&int(xi - p1i - p0i), p0);
    if bottom.is_zero() {
        return Err(Error::DegenerateProduct(0));
    }
    Ok(pow(&rat(2, 3), p0 as i32) * top / bottom)
}

/// `e^x` for any rational `x`, halving the argument until it is at most 1.
fn exp_decimal(x: &Rational, precision: u32) -> Decimal {
    let mut m = 0u32;
    let mut y = x.clone();
    while y.abs() > Rational::one() {
        y /= int(2);
        m += 1;
    }
    let work = precision + 2 * m + 5;
    let mut e = decimal::exp(&y, work);
    for _ in 0..m {
        e = e.mul(&e);
    }
    e.with_precision(precision)
}

/// `|pi C(0^k, 2^(3g-3+k)) e^(k^2/(30g)) - 1|`.
pub fn corollary1_deviation(g: u32, k: u32, precision: u32) -> Result<Decimal> {
    if g == 0 || 3 * g + k < 4 {
        return Err(Error::InvalidArgument(format!("corollary1_deviation needs g >= 1, 3g-3+k >= 1 (g={g}, k={k})")));
    }
    let work = precision + 10;
    if work > decimal::MAX_PRECISION {
        return Err(Error::PrecisionTooHigh(precision));
    }
    let mut e = vec![0u32; k as usize];
    e.extend(std::iter::repeat(2).take((3 * g - 3 + k) as usize));
    let c = c_value(&DVec::new(e));
    let pi = decimal::pi_value(work)?;
    let ex = exp_decimal(&rat((k * k) as i64, 30 * g as i64), work);
    let prod = pi.mul(&Decimal::from_rational(&c, work)).mul(&ex);
    let dev = prod.sub(&Decimal::from_rational(&Rational::one(), work)).abs();
    Ok(dev.with_precision(precision))
}

/// `g |C(d) pi / theorem2_product(d) - 1|` at `precision` digits; `None` when the product vanishes.
pub fn theorem2_scaled_error(d: &DVec, precision: u32) -> Result<Option<Decimal>> {
    let g = d.genus().ok_or_else(|| Error::InvalidArgument(format!("{d} has no integer genus")))?;
    let prod = theorem2_product(d)?;
    if prod.is_zero() {
        return Ok(None);
    }
    let pi = decimal::pi_value(precision + 10)?.to_rational();
    let v = (c_value(d) * pi / prod - Rational::one()).abs() * Rational::from_integer(BigInt::from(g));
    Ok(Some(Decimal::from_rational(&v, precision)))
}

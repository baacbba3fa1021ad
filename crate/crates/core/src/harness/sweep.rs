use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::partitions::{partition_count, partitions, partitions_into};
use crate::arith::{int, Rational};
use crate::asymptotics::{f_bound, theorem2_product, PiLinear};
use crate::decimal::{self, Decimal};
use crate::dvv::{c_value, DVec};
use crate::error::{Error, Result};
use crate::par;

/// Digits used for `g |C - 1/pi|`.
pub const DEVIATION_PRECISION: u32 = 50;

#[derive(Clone, Debug, Serialize)]
pub struct Extreme {
    pub d: String,
    pub c: String,
}

/// One genus of the nesting sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub genus: u32,
    pub count: u64,
    pub expected_count: u64,
    pub min: Extreme,
    pub max: Extreme,
    pub min_is_one_point: bool,
    pub max_is_all_twos: bool,
    /// `max g |C(d) - 1/pi|` over the genus.
    pub max_scaled_deviation: Decimal,
    pub max_deviation_at: String,
    /// Left out of serialized reports so reruns are byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.count == self.expected_count && self.min_is_one_point && self.max_is_all_twos
    }
}

fn one_point(g: u32) -> DVec {
    DVec::new(vec![3 * g - 2])
}

fn all_twos(g: u32) -> DVec {
    DVec::new(vec![2; 3 * g as usize - 3])
}

/// Every primitive vector of genus `g`, ordered as the partitions of `3g-3`.
pub fn primitive_vectors(g: u32) -> Vec<DVec> {
    if g < 2 {
        return Vec::new();
    }
    partitions(3 * g - 3).iter().map(|p| p.primitive_vector()).collect()
}

pub fn sweep_genus(g: u32) -> Result<SweepReport> {
    if g < 2 {
        return Err(Error::InvalidArgument(format!("nesting sweep needs g >= 2, got {g}")));
    }
    let start = Instant::now();
    let vecs = primitive_vectors(g);
    let values = par::map(&vecs, c_value);
    let inv_pi = decimal::inv_pi(DEVIATION_PRECISION + 10)?.to_rational();

    let (mut lo, mut hi, mut dev) = (0usize, 0usize, 0usize);
    let devs: Vec<Rational> = values.iter().map(|c| (c - &inv_pi).abs()).collect();
    for i in 1..values.len() {
        if values[i] < values[lo] {
            lo = i;
        }
        if values[i] > values[hi] {
            hi = i;
        }
        if devs[i] > devs[dev] {
            dev = i;
        }
    }
    let ext = |i: usize| Extreme { d: vecs[i].to_csv(), c: values[i].to_string() };
    let scaled = &devs[dev] * int(g as i64);
    Ok(SweepReport {
        genus: g,
        count: vecs.len() as u64,
        expected_count: partition_count(3 * g - 3),
        min: ext(lo),
        max: ext(hi),
        // ties count: compare values, not positions
        min_is_one_point: values[lo] == c_value(&one_point(g)),
        max_is_all_twos: values[hi] == c_value(&all_twos(g)),
        max_scaled_deviation: Decimal::from_rational(&scaled, DEVIATION_PRECISION),
        max_deviation_at: vecs[dev].to_csv(),
        wall_time: start.elapsed(),
    })
}

/// Nesting sweep for `2 <= g <= g_max`.
pub fn sweep_nesting(g_max: u32) -> Result<Vec<SweepReport>> {
    if g_max < 2 {
        return Err(Error::InvalidArgument(format!("sweep_nesting needs g_max >= 2, got {g_max}")));
    }
    (2..=g_max).map(sweep_genus).collect()
}

/// Vectors in `(Z>=1)^n` (sorted) with `X(d) = x`.
pub fn theta_domain(x: u32, n: u32) -> Vec<DVec> {
    let three_x = 3 * x as i64;
    let n_i = n as i64;
    if n == 0 || (three_x - n_i) % 2 != 0 || three_x - n_i < 2 * n_i {
        return Vec::new();
    }
    let total = ((three_x - n_i) / 2) as u32;
    partitions_into(total, n).into_iter().map(DVec::new).collect()
}

/// `theta_{X,n} = max C(d)` over `d in (Z>=1)^n` with `X(d) = X`.
pub fn theta_sweep(x: u32, n: u32) -> Result<Rational> {
    let dom = theta_domain(x, n);
    if dom.is_empty() {
        return Err(Error::EmptyFeasibleSet { x, n });
    }
    let vals = par::map(&dom, c_value);
    Ok(vals.into_iter().fold(Rational::zero(), |a, b| if b > a { b } else { a }))
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaCheck {
    pub x: u32,
    pub n: u32,
    pub theta: String,
    pub f: PiLinear,
    pub holds: bool,
}

/// `theta_{X,n} <= f(X,n)` for every feasible `(X, n)` with `n <= X <= x_max`.
pub fn theta_vs_f(x_max: u32, precision: u32) -> Result<Vec<ThetaCheck>> {
    let mut out = Vec::new();
    for x in 1..=x_max {
        for n in 1..=x {
            let theta = match theta_sweep(x, n) {
                Ok(t) => t,
                Err(Error::EmptyFeasibleSet { .. }) => continue,
                Err(e) => return Err(e),
            };
            let f = f_bound(x, n);
            let holds = PiLinear::constant(theta.clone()).compare(&f, precision)? != std::cmp::Ordering::Greater;
            out.push(ThetaCheck { x, n, theta: theta.to_string(), f, holds });
        }
    }
    Ok(out)
}

/// Vectors `0^p0 1^p1 d` with `d` primitive of genus `g`.
fn theorem2_domain(g_max: u32, p0_max: u32, p1_max: u32) -> Vec<DVec> {
    let mut out = Vec::new();
    for g in 1..=g_max {
        for p0 in 0..=p0_max {
            let Some(m) = (3 * g + p0).checked_sub(3) else {
                continue;
            };
            for p in partitions(m) {
                let prim = p.primitive_vector();
                for p1 in 0..=p1_max {
                    let mut e = vec![0u32; p0 as usize];
                    e.extend(std::iter::repeat(1).take(p1 as usize));
                    e.extend_from_slice(prim.entries());
                    let d = DVec::new(e);
                    // at least one point and a stable surface
                    if !d.is_empty() && d.genus() == Some(g) && d.x_int().is_some_and(|x| x >= 1) {
                        out.push(d);
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem2Report {
    pub g_max: u32,
    pub p0_max: u32,
    pub p1_max: u32,
    pub checked: usize,
    /// Vectors where the product has a vanishing factor.
    pub degenerate: usize,
    pub max_scaled_error: Decimal,
    pub worst: String,
    pub bound: String,
    pub holds: bool,
}

/// Constant recorded for `g |C(d) pi / prod - 1|` on the default domain.
pub const THEOREM2_CONSTANT: (i64, i64) = (1, 2);

pub fn theorem2_sweep(g_max: u32, p0_max: u32, p1_max: u32, precision: u32) -> Result<Theorem2Report> {
    let dom = theorem2_domain(g_max, p0_max, p1_max);
    let pi = decimal::pi_value(precision + 10)?.to_rational();
    let errs = par::map(&dom, |d| -> Result<Option<Rational>> {
        let prod = match theorem2_product(d) {
            Ok(p) => p,
            Err(Error::DegenerateProduct(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if prod.is_zero() {
            return Ok(None);
        }
        let g = int(d.genus().unwrap() as i64);
        Ok(Some((c_value(d) * &pi / prod - int(1)).abs() * g))
    });
    let mut worst: Option<(Rational, usize)> = None;
    let mut degenerate = 0;
    for (i, e) in errs.into_iter().enumerate() {
        match e? {
            None => degenerate += 1,
            Some(v) => {
                if worst.as_ref().map_or(true, |w| v > w.0) {
                    worst = Some((v, i));
                }
            }
        }
    }
    let (v, i) = worst.ok_or_else(|| Error::InvalidArgument("empty theorem 2 domain".into()))?;
    let bound = crate::arith::rat(THEOREM2_CONSTANT.0, THEOREM2_CONSTANT.1);
    Ok(Theorem2Report {
        g_max,
        p0_max,
        p1_max,
        checked: dom.len(),
        degenerate,
        max_scaled_error: Decimal::from_rational(&v, precision),
        worst: dom[i].to_csv(),
        holds: v <= bound,
        bound: bound.to_string(),
    })
}

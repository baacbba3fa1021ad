use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use once_cell::sync::Lazy;

use super::fit::{fit_rational, RationalFunctionOfG};
use super::linalg::{solve, Solution};
use super::multpoly::{monomial_degree, MultPoly};
use super::series::{SeriesInvX, Var};
use super::stirling::{one_point_series, pi_gamma_series};
use crate::arith::{int, Rational};
use crate::closed_form::{four_point, n_point, three_point, two_point_zograf};
use crate::dvv::{c_value, one_point_closed_form, DVec};
use crate::error::{Error, Result};
use crate::par;

/// Largest `k` for which the pattern set below determines the polynomials.
pub const MAX_K: usize = 4;

/// Multiplicity patterns `d'` used as interpolation nodes.
pub const PATTERNS: &[&[u32]] = &[&[], &[2], &[3], &[4], &[5], &[2, 2], &[2, 3], &[2, 4], &[3, 3]];

static RATIOS: Lazy<RwLock<HashMap<Vec<u32>, Arc<RationalFunctionOfG>>>> = Lazy::new(Default::default);

/// Last sampled genus for a pattern with `n` points in total.
fn ladder_top(n: usize) -> u32 {
    if n <= 3 {
        40
    } else {
        25
    }
}

/// `C(d', d_n)` from the closed formula matching `n`.
fn closed_value(d: &DVec) -> Result<Rational> {
    let e = d.entries();
    Ok(match e.len() {
        1 => c_value(d),
        2 => two_point_zograf(e[0], e[1]),
        3 => three_point(e[0], e[1], e[2]),
        4 => four_point(e[0], e[1], e[2], e[3]),
        _ => n_point(d)?,
    })
}

fn full_vector(pattern: &[u32], g: u32) -> Option<DVec> {
    let n = pattern.len() as i64 + 1;
    let rest: i64 = pattern.iter().map(|&v| v as i64).sum();
    let last = 3 * g as i64 - 3 + n - rest;
    (last >= 0).then(|| {
        let mut e = pattern.to_vec();
        e.push(last as u32);
        DVec::new(e)
    })
}

/// Exact samples `(g, C(d', 3g-3+n-|d'|) / C(3g-2))` along the genus ladder.
pub fn pattern_samples(pattern: &[u32]) -> Result<Vec<(i64, Rational)>> {
    let n = pattern.len() + 1;
    let gs: Vec<u32> = (1..=ladder_top(n)).filter(|&g| full_vector(pattern, g).is_some()).collect();
    let first = *gs.first().ok_or_else(|| Error::InvalidArgument("empty genus ladder".into()))?;
    let d0 = full_vector(pattern, first).unwrap();
    if closed_value(&d0)? != c_value(&d0) {
        return Err(Error::InvalidArgument(format!("closed formula disagrees with the recursion at {d0}")));
    }
    let vals = par::map(&gs, |&g| closed_value(&full_vector(pattern, g).unwrap()));
    gs.iter().zip(vals).map(|(&g, v)| Ok((g as i64, v? / one_point_closed_form(g)))).collect()
}

/// The fitted rational function `C(d', d_n) / C(3g-2)` for a pattern, cached.
pub fn pattern_ratio(pattern: &[u32]) -> Result<Arc<RationalFunctionOfG>> {
    let mut key = pattern.to_vec();
    key.sort_unstable();
    if let Some(r) = RATIOS.read().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let f = Arc::new(fit_rational(&pattern_samples(&key)?, 0)?);
    RATIOS.write().unwrap().entry(key).or_insert(f.clone());
    Ok(f)
}

/// `pi C(d', d_n)` expanded in `1/X` to `order`.
pub fn ctilde_series(pattern: &[u32], order: usize) -> Result<SeriesInvX> {
    let n = pattern.len() as i64 + 1;
    let in_g = &pattern_ratio(pattern)?.expand_inv_g(order)? * &one_point_series(order);
    // 1/g = 2/(X + 2 - n)
    Ok(in_g.substitute_mobius(&int(2), &int(2 - n), Var::InvX))
}

/// `C(d', d_n) / gamma(X)` expanded in `1/X` to `order`.
pub fn chat_series(pattern: &[u32], order: usize) -> Result<SeriesInvX> {
    Ok(&ctilde_series(pattern, order)? * &pi_gamma_series(order).recip())
}

/// Exponent vectors over `p_2, p_3, ...` of graded degree at most `3k-1`, plus `1`.
fn monomials(k: usize) -> Vec<Vec<u32>> {
    let cap = (3 * k as i64 - 1).max(0) as u32;
    let mut out = vec![vec![]];
    let mut d = 2usize;
    while 2 * d as u32 + 1 <= cap {
        let mut next = Vec::new();
        for e in &out {
            let mut e = e.clone();
            e.resize(d + 1, 0);
            loop {
                if monomial_degree(&e) > cap {
                    break;
                }
                next.push(e.clone());
                e[d] += 1;
            }
        }
        out = next;
        d += 1;
    }
    out
}

fn multiplicities(pattern: &[u32]) -> Vec<u32> {
    let mut p = vec![0u32; pattern.iter().copied().max().unwrap_or(0) as usize + 1];
    for &v in pattern {
        p[v as usize] += 1;
    }
    p
}

fn solve_for(k: usize, coeff: impl Fn(&[u32]) -> Result<Rational>) -> Result<MultPoly> {
    if k > MAX_K {
        return Err(Error::InvalidArgument(format!("polynomials are reproduced for k <= {MAX_K}, got {k}")));
    }
    let monos = monomials(k);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for pattern in PATTERNS {
        let p = multiplicities(pattern);
        let lone = MultPoly::zero();
        rows.push(
            monos
                .iter()
                .map(|e| {
                    let mut m = lone.clone();
                    m.add_exponents(e.clone(), int(1));
                    m.eval(&p)
                })
                .collect(),
        );
        rhs.push(coeff(pattern)?);
    }
    match solve(&rows, &rhs) {
        Solution::Unique(x) => {
            let mut poly = MultPoly::zero();
            for (e, c) in monos.into_iter().zip(x) {
                if !c.is_zero() {
                    poly.add_exponents(e, c);
                }
            }
            Ok(poly)
        }
        Solution::Inconsistent => Err(Error::Inconsistent),
        Solution::Underdetermined => {
            Err(Error::InvalidArgument(format!("interpolation patterns do not determine k = {k}")))
        }
    }
}

/// `c-hat_k(p_2, p_3, ...)`.
pub fn chat_poly(k: usize) -> Result<MultPoly> {
    solve_for(k, |pattern| Ok(chat_series(pattern, k)?.coeff(k)))
}

/// `c-tilde_k(p_2, p_3, ...)`.
pub fn ctilde_poly(k: usize) -> Result<MultPoly> {
    solve_for(k, |pattern| Ok(ctilde_series(pattern, k)?.coeff(k)))
}

use num_bigint::BigInt;
use num_traits::Zero;

use super::matrix::{a_value, shape_trace};
use crate::arith::Rational;
use crate::dvv::DVec;
use crate::error::{Error, Result};
use crate::par;

/// `M(e) = max(0, min e_i)`.
pub fn m_floor(e: &[i64]) -> i64 {
    e.iter().copied().min().unwrap_or(0).max(0)
}

/// All `k in Z^n` with `k_i >= -1` and `sum k = total`, in lexicographic order.
pub fn compositions(n: usize, total: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if n == 0 || total < -(n as i64) {
        return out;
    }
    let mut cur = vec![-1i64; n];
    fn go(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let n = cur.len();
        if i == n - 1 {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        // the remaining n-1-i slots need at least -(n-1-i)
        let max_here = left + (n - 1 - i) as i64;
        for k in -1..=max_here {
            cur[i] = k;
            go(i + 1, left - k, cur, out);
        }
    }
    go(0, total, &mut cur, &mut out);
    out
}

fn as_rational(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// `C(d1,d2,d3) = 2 sum_k a_k M(d1-k1, d1+d2-k1-k2)`.
pub fn three_point(d1: u32, d2: u32, d3: u32) -> Rational {
    let d = DVec::from([d1, d2, d3]);
    if d.genus().is_none() {
        return Rational::zero();
    }
    let (d1, d2) = (d1 as i64, d2 as i64);
    let ks = compositions(3, d.total() as i64);
    let total = par::sum(&ks, |k| {
        let m = m_floor(&[d1 - k[0], d1 + d2 - k[0] - k[1]]);
        if m == 0 {
            return Rational::zero();
        }
        a_value(k) * as_rational(m)
    });
    total * as_rational(2)
}

/// The three-floor combination for four points.
pub fn four_point(d1: u32, d2: u32, d3: u32, d4: u32) -> Rational {
    let d = DVec::from([d1, d2, d3, d4]);
    if d.genus().is_none() {
        return Rational::zero();
    }
    let [d1, d2, d3, d4] = [d1, d2, d3, d4].map(|v| v as i64);
    let ks = compositions(4, d.total() as i64);
    let total = par::sum(&ks, |k| {
        let (k1, k2, k3, k4) = (k[0], k[1], k[2], k[3]);
        let w = m_floor(&[d1 - k1, d1 + d2 - k1 - k2, k4 - d4])
            - m_floor(&[d1 - k2, d1 + d2 - k2 - k3, d1 + d3 - k1 - k2, k4 - d4])
            - m_floor(&[d1 - k1, d2 - k3, k2 - d3, k4 - d4]);
        if w == 0 {
            return Rational::zero();
        }
        a_value(k) * as_rational(w)
    });
    total * as_rational(2)
}

/// Precomputed permutation data for the n-point sum: every `sigma` with
/// `sigma(n) = n`, its descent set and its sign `(-1)^(|S^-|+1)`.
pub struct NPointPlan {
    n: usize,
    perms: Vec<(Vec<usize>, Vec<bool>, i64)>,
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

impl NPointPlan {
    pub fn new(n: usize) -> NPointPlan {
        assert!(n >= 2);
        let mut heads = Vec::new();
        permutations(&mut (0..n - 1).collect(), 0, &mut heads);
        heads.sort();
        let perms = heads
            .into_iter()
            .map(|mut sigma| {
                sigma.push(n - 1);
                // r is in S^+ when sigma(r+1) > sigma(r), cyclically
                let plus: Vec<bool> = (0..n).map(|r| sigma[(r + 1) % n] > sigma[r]).collect();
                let minus = plus.iter().filter(|&&p| !p).count();
                let sign = if minus % 2 == 1 { 1 } else { -1 };
                (sigma, plus, sign)
            })
            .collect();
        NPointPlan { n, perms }
    }

    /// `sum_sigma sign * omega_{d,sigma,k}`.
    pub fn weight(&self, d: &[i64], k: &[i64]) -> i64 {
        let mut w = 0;
        for (sigma, plus, sign) in &self.perms {
            let mut partial = 0i64;
            let mut min_plus = i64::MAX;
            let mut min_minus = i64::MAX;
            for r in 0..self.n {
                partial += d[sigma[r]] - k[r];
                if plus[r] {
                    min_plus = min_plus.min(partial);
                } else {
                    min_minus = min_minus.min(-partial);
                }
            }
            let omega = (min_plus + min_minus).max(0);
            w += sign * omega;
        }
        w
    }
}

fn n_point_with(d: &DVec, parallel: bool) -> Result<Rational> {
    let n = d.len();
    if n < 2 {
        return Err(Error::InvalidArgument("n_point needs at least two entries".into()));
    }
    if d.genus().is_none() {
        return Ok(Rational::zero());
    }
    let plan = NPointPlan::new(n);
    let dv: Vec<i64> = d.entries().iter().map(|&v| v as i64).collect();
    let ks = compositions(n, d.total() as i64);
    let term = |k: &Vec<i64>| {
        if shape_trace(k) == 0 {
            return Rational::zero();
        }
        let w = plan.weight(&dv, k);
        if w == 0 {
            return Rational::zero();
        }
        a_value(k) * as_rational(w)
    };
    Ok(if parallel { par::sum(&ks, term) } else { ks.iter().map(term).sum() })
}

/// `C(d)` from the permutation/composition sum, `n >= 2`.
pub fn n_point(d: &DVec) -> Result<Rational> {
    n_point_with(d, true)
}

/// Same sum on the calling thread only.
pub fn n_point_sequential(d: &DVec) -> Result<Rational> {
    n_point_with(d, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::dvv::c_value;

    #[test]
    fn floors() {
        assert_eq!(m_floor(&[1, 2]), 1);
        assert_eq!(m_floor(&[-1, 3]), 0);
        assert_eq!(m_floor(&[2, 2, 5]), 2);
    }

    #[test]
    fn floor_generating_function() {
        // expand 1/((1 - x_1...x_n) prod (1 - x_i)) = sum_t (x_1...x_n)^t prod sum_m x_i^m
        let top = 8i64;
        for n in 1..=3usize {
            let mut coeff = std::collections::HashMap::<Vec<i64>, i64>::new();
            for t in 0..=top {
                for m in grid(n, top) {
                    let exps: Vec<i64> = m.iter().map(|&mi| mi + t).collect();
                    if exps.iter().all(|&x| x < top) {
                        *coeff.entry(exps).or_default() += 1;
                    }
                }
            }
            for e in grid(n, top) {
                let exps: Vec<i64> = e.iter().map(|&x| x - 1).collect();
                let c = if exps.iter().any(|&x| x < 0) { 0 } else { coeff.get(&exps).copied().unwrap_or(0) };
                assert_eq!(m_floor(&e), c, "{e:?}");
            }
        }
    }

    fn grid(n: usize, top: i64) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out =
                out.into_iter().flat_map(|v: Vec<i64>| (0..=top).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(2, 2).len(), 5);
        assert_eq!(compositions(3, 0).len(), 10);
        assert!(compositions(3, 0).iter().all(|k| k.iter().sum::<i64>() == 0 && k.iter().all(|&x| x >= -1)));
    }

    #[test]
    fn three_point_examples() {
        assert_eq!(three_point(2, 2, 2), rat(175, 648));
        assert_eq!(three_point(0, 0, 0), rat(1, 3));
        assert_eq!(three_point(3, 3, 3), rat(714175, 2519424));
    }

    #[test]
    fn four_point_examples() {
        assert_eq!(four_point(2, 2, 3, 3), rat(179375, 629856));
        assert_eq!(four_point(2, 2, 2, 4), rat(6625, 23328));
        assert_eq!(four_point(0, 0, 0, 1), c_value(&DVec::from([0, 0, 0, 1])));
    }

    #[test]
    fn n_point_examples() {
        assert_eq!(n_point(&DVec::from([2, 3])).unwrap(), rat(1015, 3888));
        assert_eq!(n_point(&DVec::from([2, 2, 2, 2, 3])).unwrap(), rat(120625, 419904));
        assert_eq!(n_point(&DVec::from([2, 2, 2, 2])).unwrap(), Rational::zero());
        assert!(n_point(&DVec::from([4])).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let d = DVec::from([0, 2, 3, 4]);
        assert_eq!(n_point(&d).unwrap(), n_point_sequential(&d).unwrap());
    }

    #[test]
    fn widening_the_range_changes_nothing() {
        // add zero-weight terms with some k_i <= -2; a vanishes there
        let d = DVec::from([2, 3, 4]);
        let plan = NPointPlan::new(3);
        let dv = [2i64, 3, 4];
        let mut wide = Rational::zero();
        for k1 in -4..=12i64 {
            for k2 in -4..=12i64 {
                let k = [k1, k2, 9 - k1 - k2];
                wide += a_value(&k) * as_rational(plan.weight(&dv, &k));
            }
        }
        assert_eq!(wide, n_point(&d).unwrap());
    }
}

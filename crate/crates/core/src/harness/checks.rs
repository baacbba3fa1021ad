use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::Serialize;

use super::partitions::partitions;
use super::sweep::theta_domain;
use crate::arith::{factorial, int, rat, Rational};
use crate::closed_form::{compositions, four_point, n_point, three_point, two_point_bdy, two_point_zograf};
use crate::dvv::{c_value, intersection_from_c, DVec};
use crate::error::Result;
use crate::par;

/// Genus caps for the closed-formula comparison.
#[derive(Clone, Debug, Serialize)]
pub struct CrossBudget {
    pub two_point_g: u32,
    pub three_point_g: u32,
    pub four_point_g: u32,
    pub n_point_n: usize,
    pub n_point_g: u32,
}

impl Default for CrossBudget {
    fn default() -> Self {
        CrossBudget { two_point_g: 8, three_point_g: 5, four_point_g: 4, n_point_n: 5, n_point_g: 3 }
    }
}

impl CrossBudget {
    /// A budget with no vectors at all.
    pub fn empty() -> CrossBudget {
        CrossBudget { two_point_g: 0, three_point_g: 0, four_point_g: 0, n_point_n: 0, n_point_g: 0 }
    }

    /// Parses `two=8,three=5,four=4,n=5,ng=3`; missing keys keep their defaults.
    pub fn parse(s: &str) -> Result<CrossBudget> {
        let mut b = CrossBudget::default();
        if s.trim() == "empty" {
            return Ok(CrossBudget::empty());
        }
        for item in s.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                crate::error::Error::InvalidArgument(format!("budget item `{item}` is not key=value"))
            })?;
            let v: u32 = v
                .trim()
                .parse()
                .map_err(|_| crate::error::Error::InvalidArgument(format!("budget value `{v}` is not a number")))?;
            match k.trim() {
                "two" => b.two_point_g = v,
                "three" => b.three_point_g = v,
                "four" => b.four_point_g = v,
                "n" => b.n_point_n = v as usize,
                "ng" => b.n_point_g = v,
                other => {
                    return Err(crate::error::Error::InvalidArgument(format!("unknown budget key `{other}`")));
                }
            }
        }
        Ok(b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub first_mismatch: Option<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossReport {
    pub budget: CrossBudget,
    pub suites: Vec<SuiteReport>,
}

impl CrossReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.first_mismatch.is_none())
    }
}

type Oracle<'a> = &'a (dyn Fn(&DVec) -> Rational + Sync);

fn run_suite(name: &str, vecs: Vec<DVec>, check: impl Fn(&DVec) -> Option<String> + Sync + Send) -> SuiteReport {
    let start = Instant::now();
    let results = par::map(&vecs, &check);
    SuiteReport {
        name: name.into(),
        checked: vecs.len(),
        first_mismatch: results.into_iter().flatten().next(),
        wall_time: start.elapsed(),
    }
}

/// Ordered `n`-tuples of genus `g_min..=g_max`; a cap of 0 means none.
fn ordered_tuples(n: usize, g_max: u32, g_min: u32) -> Vec<DVec> {
    let mut out = Vec::new();
    if g_max == 0 {
        return out;
    }
    for g in g_min..=g_max {
        let total = 3 * g as i64 - 3 + n as i64;
        if total < 0 {
            continue;
        }
        for c in compositions(n, total).into_iter().filter(|c| c.iter().all(|&v| v >= 0)) {
            out.push(DVec::new(c.into_iter().map(|v| v as u32).collect::<Vec<_>>()));
        }
    }
    out
}

/// Compare the closed formulas against `oracle` (normally the recursion).
pub fn check_cross_formulas(budget: &CrossBudget, oracle: Oracle<'_>) -> CrossReport {
    let mut suites = Vec::new();

    let two = ordered_tuples(2, budget.two_point_g, 1);
    suites.push(run_suite("two_point", two, |d| {
        let (a, b) = (d.entries()[0], d.entries()[1]);
        let c = oracle(d);
        if two_point_zograf(a, b) != c {
            return Some(format!("two_point_zograf{d}"));
        }
        if two_point_bdy(a, b) != intersection_from_c(d, &c) {
            return Some(format!("two_point_bdy{d}"));
        }
        None
    }));

    let three = ordered_tuples(3, budget.three_point_g, 0);
    suites.push(run_suite("three_point", three, |d| {
        let e = d.entries();
        (three_point(e[0], e[1], e[2]) != oracle(d)).then(|| format!("three_point{d}"))
    }));

    let four = ordered_tuples(4, budget.four_point_g, 0);
    suites.push(run_suite("four_point", four, |d| {
        let e = d.entries();
        (four_point(e[0], e[1], e[2], e[3]) != oracle(d)).then(|| format!("four_point{d}"))
    }));

    if budget.n_point_n >= 2 {
        let many = ordered_tuples(budget.n_point_n, budget.n_point_g, 0);
        suites.push(run_suite("n_point", many, |d| match n_point(d) {
            Ok(v) if v == oracle(d) => None,
            Ok(_) => Some(format!("n_point{d}")),
            Err(e) => Some(format!("n_point{d}: {e}")),
        }));
    }
    CrossReport { budget: budget.clone(), suites }
}

fn with_zeros(k: usize, d: &[u32]) -> DVec {
    let mut e = vec![0u32; k];
    e.extend_from_slice(d);
    DVec::new(e)
}

/// `(X(w) - 1)! C(w)` for `w = 0^k d_I`, for every subset mask `I`.
fn weighted_subsets(k: usize, d: &[u32]) -> Vec<Rational> {
    let n = d.len();
    let masks: Vec<u32> = (0..1u32 << n).collect();
    par::map(&masks, |&mask| {
        let sub: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| d[i]).collect();
        let w = with_zeros(k, &sub);
        match (w.genus(), w.x_int()) {
            (Some(_), Some(x)) if x >= 1 => c_value(&w) * Rational::from_integer(factorial(x - 1)),
            _ => Rational::zero(),
        }
    })
}

/// Weights of the quadratic and cubic sums in the `t_1 t_1` recursion.
pub const OMEGA11_COEFFS: [(i64, i64); 3] = [(3, 2), (6, 1), (3, 1)];

/// Weights smaller by a factor 9; they do not give an identity.
pub const OMEGA11_NAIVE: [(i64, i64); 3] = [(1, 6), (2, 3), (1, 3)];

/// Right-hand side of the `t_1 t_1` recursion for `C(d)` with the given weights.
pub fn omega11_rhs(d: &DVec, coeffs: [(i64, i64); 3]) -> Rational {
    let e = d.entries();
    let n = e.len();
    let full = (1u32 << n) - 1;
    let x = match d.x_int() {
        Some(x) => x,
        None => return Rational::zero(),
    };
    let f2 = weighted_subsets(2, e);
    let f3 = weighted_subsets(3, e);
    let f4 = weighted_subsets(4, e);

    let mut quad3 = Rational::zero();
    let mut quad24 = Rational::zero();
    for i in 0..=full {
        let j = full ^ i;
        if !f3[i as usize].is_zero() && !f3[j as usize].is_zero() {
            quad3 += &f3[i as usize] * &f3[j as usize];
        }
        if !f2[i as usize].is_zero() && !f4[j as usize].is_zero() {
            quad24 += &f2[i as usize] * &f4[j as usize];
        }
    }
    let mut cubic = Rational::zero();
    // ordered triples (I, J, K): walk I, then J over subsets of the rest
    for i in 0..=full {
        if f2[i as usize].is_zero() {
            continue;
        }
        let rest = full ^ i;
        let mut j = rest;
        loop {
            let k = rest ^ j;
            if !f2[j as usize].is_zero() && !f2[k as usize].is_zero() {
                cubic += &f2[i as usize] * &f2[j as usize] * &f2[k as usize];
            }
            if j == 0 {
                break;
            }
            j = (j - 1) & rest;
        }
    }
    let [a, b, c] = coeffs.map(|(p, q)| rat(p, q));
    let sums = a * quad3 + b * quad24 + c * cubic;
    c_value(&with_zeros(6, e)) + sums / Rational::from_integer(factorial(x + 1))
}

/// `C(d) = C(0^6, d) + (quadratic and cubic splitting sums)`, exactly.
pub fn check_omega11_identity(d: &DVec) -> bool {
    if d.genus().is_none() {
        return false;
    }
    omega11_rhs(d, OMEGA11_COEFFS) == c_value(d)
}

/// `C(4, d) >= C(0^12, d)`.
pub fn check_c4_inequalities(d: &DVec) -> bool {
    let mut four = vec![4u32];
    four.extend_from_slice(d.entries());
    c_value(&DVec::new(four)) >= c_value(&with_zeros(12, d.entries()))
}

/// Left side of the splitting bound for primitive `d`, pivoting on `d_1`.
pub fn lemma3_sum(d: &DVec) -> Result<Rational> {
    let e = d.entries();
    let x = match (d.genus(), d.x_int()) {
        (Some(g), Some(x)) if g >= 2 && e.iter().all(|&v| v >= 2) => x,
        _ => {
            return Err(crate::error::Error::InvalidArgument(format!(
                "splitting bound needs g >= 2 and entries >= 2, got {d}"
            )))
        }
    };
    let rest = &e[1..];
    let m = rest.len();
    let full = (1u32 << m) - 1;
    let sums: Vec<u32> =
        (0..=full).map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).map(|i| 2 * rest[i] + 1).sum()).collect();
    let fact_of = |three_x: u32| -> Option<Rational> {
        (three_x % 3 == 0).then(|| Rational::from_integer(factorial(three_x / 3 - 1)))
    };
    let mut total = Rational::zero();
    for a in 0..=e[0] - 2 {
        let b = e[0] - 2 - a;
        for i in 0..=full {
            let j = full ^ i;
            let lhs = fact_of(2 * a + 1 + sums[i as usize]);
            let rhs = fact_of(2 * b + 1 + sums[j as usize]);
            if let (Some(l), Some(r)) = (lhs, rhs) {
                total += l * r;
            }
        }
    }
    Ok(total / (int(6) * Rational::from_integer(factorial(x - 1))))
}

/// The splitting sum is at most `2 / ((X-1)(X-2))`.
pub fn check_lemma3(d: &DVec) -> Result<bool> {
    let lhs = lemma3_sum(d)?;
    let x = d.x_int().unwrap() as i64;
    Ok(lhs <= rat(2, (x - 1) * (x - 2)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ValueCheck {
    pub d: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityCheck {
    pub statement: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub values: Vec<ValueCheck>,
    pub inequalities: Vec<InequalityCheck>,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.values.iter().all(|v| v.ok) && self.inequalities.iter().all(|i| i.holds)
    }
}

fn c_of(e: &[u32]) -> Rational {
    c_value(&DVec::from(e))
}

/// Values and orderings showing where the nesting pattern breaks down.
pub fn counterexample_suite() -> CounterexampleReport {
    let expected: [(&[u32], Rational); 4] = [
        (&[0, 0, 0, 0, 0, 0, 10], Rational::new(1616615.into(), 6718464.into())),
        (&[0, 0, 6], Rational::new(5005.into(), 15552.into())),
        (&[2, 2, 2, 2, 2, 8], Rational::new(727759375.into(), 2448880128i64.into())),
        (&[3, 3, 3, 3, 5], Rational::new(419588015525i64.into(), 1410554953728i64.into())),
    ];
    let values = expected
        .iter()
        .map(|(e, want)| {
            let got = c_of(e);
            ValueCheck {
                d: DVec::from(*e).to_csv(),
                expected: want.to_string(),
                ok: &got == want,
                computed: got.to_string(),
            }
        })
        .collect();

    let less = |s: &str, a: &[u32], b: &[u32]| {
        let (l, r) = (c_of(a), c_of(b));
        InequalityCheck { statement: s.into(), holds: l < r, lhs: l.to_string(), rhs: r.to_string() }
    };
    let more = |s: &str, a: &[u32], b: &[u32]| {
        let (l, r) = (c_of(a), c_of(b));
        InequalityCheck { statement: s.into(), holds: l > r, lhs: l.to_string(), rhs: r.to_string() }
    };
    let inequalities = vec![
        less("C(0^6,10) < C(4)", &[0, 0, 0, 0, 0, 0, 10], &[4]),
        more("C(0^2,6) > C(2^3)", &[0, 0, 6], &[2, 2, 2]),
        less("C(2^5,8) < C(3^4,5)", &[2, 2, 2, 2, 2, 8], &[3, 3, 3, 3, 5]),
        less("C(4,4) < C(3,5)", &[4, 4], &[3, 5]),
    ];
    CounterexampleReport { values, inequalities }
}

/// `count` items spread evenly over `items`, keeping their order.
pub fn sample_evenly<T: Clone>(items: &[T], count: usize) -> Vec<T> {
    if count >= items.len() {
        return items.to_vec();
    }
    (0..count).map(|i| items[i * items.len() / count].clone()).collect()
}

/// Sorted vectors in `(Z>=1)^n` with integer genus and `X(d) <= x_max`.
pub fn positive_vectors(x_max: u32) -> Vec<DVec> {
    let mut out = Vec::new();
    for x in 1..=x_max {
        for n in 1..=x {
            out.extend(theta_domain(x, n).into_iter().filter(|d| d.genus().is_some()));
        }
    }
    out
}

/// Primitive vectors with `g_lo <= g <= g_hi`.
pub fn primitive_range(g_lo: u32, g_hi: u32) -> Vec<DVec> {
    (g_lo.max(2)..=g_hi).flat_map(|g| partitions(3 * g - 3).into_iter().map(|p| p.primitive_vector())).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub omega11_checked: usize,
    pub omega11_failures: Vec<String>,
    pub c4_checked: usize,
    pub c4_failures: Vec<String>,
    pub lemma3_checked: usize,
    pub lemma3_failures: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.omega11_failures.is_empty() && self.c4_failures.is_empty() && self.lemma3_failures.is_empty()
    }
}

/// Identity and inequality spot checks on `sample` evenly spread vectors per family.
pub fn check_identities(sample: usize) -> Result<IdentityReport> {
    let pool = positive_vectors(9);
    let om = sample_evenly(&pool, sample);
    let c4 = sample_evenly(&pool, sample);
    let l3 = sample_evenly(&primitive_range(2, 5), sample);

    let fails = |vs: &[DVec], f: &(dyn Fn(&DVec) -> bool + Sync)| -> Vec<String> {
        vs.iter().zip(par::map(vs, f)).filter(|(_, ok)| !ok).map(|(d, _)| d.to_csv()).collect()
    };
    let omega11_failures = fails(&om, &check_omega11_identity);
    let c4_failures = fails(&c4, &check_c4_inequalities);
    let mut lemma3_failures = Vec::new();
    for d in &l3 {
        if !check_lemma3(d)? {
            lemma3_failures.push(d.to_csv());
        }
    }
    Ok(IdentityReport {
        omega11_checked: om.len(),
        omega11_failures,
        c4_checked: c4.len(),
        c4_failures,
        lemma3_checked: l3.len(),
        lemma3_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn d(e: &[u32]) -> DVec {
        DVec::from(e)
    }

    #[test]
    fn omega11_examples() {
        for e in [&[4u32][..], &[2, 3], &[1], &[1, 1, 1], &[2, 2, 2]] {
            assert!(check_omega11_identity(&d(e)), "{e:?}");
        }
    }

    #[test]
    fn omega11_naive_weights_fail() {
        assert_eq!(omega11_rhs(&d(&[1]), OMEGA11_NAIVE), rat(1, 54));
        assert_eq!(c_value(&d(&[1])), rat(1, 6));
    }

    #[test]
    fn c4_examples() {
        for e in [&[2u32, 2, 2][..], &[4], &[1]] {
            assert!(check_c4_inequalities(&d(e)), "{e:?}");
        }
    }

    #[test]
    fn lemma3_examples() {
        for e in [&[2u32, 2, 2][..], &[7], &[2, 2, 3, 3]] {
            assert!(check_lemma3(&d(e)).unwrap(), "{e:?}");
        }
        assert!(check_lemma3(&d(&[1, 3])).is_err());
    }

    #[test]
    fn counterexamples_hold() {
        let r = counterexample_suite();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn injected_fault_is_reported() {
        let small = CrossBudget { two_point_g: 3, three_point_g: 2, four_point_g: 1, n_point_n: 0, n_point_g: 0 };
        let bad = DVec::new(vec![1, 3, 2]);
        let oracle = |v: &DVec| {
            if *v == bad {
                c_value(v) + Rational::one()
            } else {
                c_value(v)
            }
        };
        let r = check_cross_formulas(&small, &oracle);
        assert!(!r.passed());
        let s = r.suites.iter().find(|s| s.name == "three_point").unwrap();
        assert_eq!(s.first_mismatch.as_deref(), Some("three_point(1,3,2)"));
    }

    #[test]
    fn empty_budget_passes() {
        let r = check_cross_formulas(&CrossBudget::empty(), &c_value);
        assert!(r.passed());
    }

    #[test]
    fn budget_parsing() {
        let b = CrossBudget::parse("two=3,ng=2").unwrap();
        assert_eq!((b.two_point_g, b.three_point_g, b.n_point_g), (3, 5, 2));
        assert!(CrossBudget::parse("five=1").is_err());
        assert_eq!(CrossBudget::parse("empty").unwrap().two_point_g, 0);
    }

    #[test]
    fn samplers_are_deterministic() {
        let pool = positive_vectors(9);
        assert!(pool.len() >= 50);
        assert_eq!(sample_evenly(&pool, 50), sample_evenly(&pool, 50));
        assert_eq!(sample_evenly(&pool, 50).len(), 50);
        assert!(primitive_range(2, 5).len() >= 50);
    }
}

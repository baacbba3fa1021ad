use num_traits::Zero;

use crate::arith::Rational;

/// Row-reduce in place; returns the pivot column of each nonzero row.
fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let (src, dst) = if r < row {
                    let (a, b) = m.split_at_mut(row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[row], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// One nonzero vector of the null space of `m`, if the null space is nontrivial.
pub(crate) fn null_vector(mut m: Vec<Vec<Rational>>, cols: usize) -> Option<Vec<Rational>> {
    let pivots = rref(&mut m, cols);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); cols];
    v[free] = Rational::from_integer(1.into());
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[row][free].clone();
    }
    Some(v)
}

pub(crate) enum Solution {
    Unique(Vec<Rational>),
    Underdetermined,
    Inconsistent,
}

/// Solve `a x = b` exactly. Overdetermined systems are accepted when consistent.
pub(crate) fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Solution {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, cols + 1);
    if pivots.contains(&cols) {
        return Solution::Inconsistent;
    }
    if pivots.len() < cols {
        return Solution::Underdetermined;
    }
    Solution::Unique((0..cols).map(|r| m[r][cols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn null_vector_is_in_the_kernel() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 7]]);
        let v = null_vector(m.clone(), 3).unwrap();
        for row in &m {
            let s: Rational = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
        assert!(null_vector(mat(&[&[1, 0], &[0, 1]]), 2).is_none());
    }

    #[test]
    fn overdetermined_solve() {
        let a = mat(&[&[1, 1], &[1, -1], &[2, 0]]);
        match solve(&a, &[int(3), int(1), int(4)]) {
            Solution::Unique(x) => assert_eq!(x, vec![int(2), int(1)]),
            _ => panic!(),
        }
        assert!(matches!(solve(&a, &[int(3), int(1), int(5)]), Solution::Inconsistent));
        assert!(matches!(solve(&mat(&[&[1, 1]]), &[int(1)]), Solution::Underdetermined));
    }
}

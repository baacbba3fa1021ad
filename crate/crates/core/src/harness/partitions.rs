use crate::dvv::DVec;

/// An integer partition stored as a multiplicity vector: `mult[k]` parts equal to `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    mult: Vec<u32>,
}

impl Partition {
    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    /// Parts in non-increasing order.
    pub fn parts(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (k, &m) in self.mult.iter().enumerate().rev() {
            out.extend(std::iter::repeat(k as u32).take(m as usize));
        }
        out
    }

    /// The primitive vector with entries `part + 1`, sorted ascending.
    pub fn primitive_vector(&self) -> DVec {
        let mut e: Vec<u32> = self.parts().into_iter().map(|p| p + 1).collect();
        e.reverse();
        DVec::new(e)
    }

    fn colex_key(&self) -> impl Iterator<Item = &u32> {
        self.mult.iter().skip(1).rev()
    }
}

fn collect(rest: u32, max_part: u32, mult: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { mult: mult.clone() });
        return;
    }
    for p in (1..=max_part.min(rest)).rev() {
        mult[p as usize] += 1;
        collect(rest - p, p, mult, out);
        mult[p as usize] -= 1;
    }
}

/// All partitions of `m`, colexicographic on multiplicity vectors (`1^m` first, `(m)` last).
pub fn partitions(m: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut mult = vec![0u32; m as usize + 1];
    collect(m, m, &mut mult, &mut out);
    out.sort_by(|a, b| a.colex_key().cmp(b.colex_key()));
    out
}

/// Partitions of `total` into exactly `parts` positive parts, each as a sorted vector.
pub fn partitions_into(total: u32, parts: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, slots: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if rest == 0 {
                let mut v = cur.clone();
                v.reverse();
                out.push(v);
            }
            return;
        }
        // each remaining slot needs at least 1
        let hi = max.min(rest.saturating_sub(slots - 1));
        for p in (1..=hi).rev() {
            if p * slots < rest {
                break;
            }
            cur.push(p);
            go(rest - p, slots - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, total, &mut Vec::new(), &mut out);
    out
}

/// `p(m)` by Euler's pentagonal recurrence.
pub fn partition_count(m: u32) -> u64 {
    let m = m as usize;
    let mut p = vec![0u64; m + 1];
    p[0] = 1;
    for n in 1..=m {
        let mut k = 1i64;
        let mut acc = 0i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[n - g1] as i64;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= n {
                acc += sign * p[n - g2] as i64;
            }
            k += 1;
        }
        p[n] = acc as u64;
    }
    p[m]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for m in 0..=20 {
            assert_eq!(partitions(m).len() as u64, partition_count(m), "m={m}");
        }
        assert_eq!(partition_count(36), 17977);
    }

    #[test]
    fn colex_order() {
        let ps: Vec<Vec<u32>> = partitions(4).iter().map(Partition::parts).collect();
        assert_eq!(ps, vec![vec![1, 1, 1, 1], vec![2, 1, 1], vec![2, 2], vec![3, 1], vec![4]]);
    }

    #[test]
    fn primitive_vectors() {
        let vs: Vec<String> = partitions(3).iter().map(|p| p.primitive_vector().to_string()).collect();
        assert_eq!(vs, vec!["(2,2,2)", "(2,3)", "(4)"]);
    }

    #[test]
    fn exact_part_counts() {
        assert_eq!(partitions_into(6, 3), vec![vec![1, 1, 4], vec![1, 2, 3], vec![2, 2, 2]]);
        assert!(partitions_into(2, 3).is_empty());
        assert_eq!(partitions_into(0, 0), vec![Vec::<u32>::new()]);
    }
}

use std::fmt;

use crate::error::{Error, Result};

/// Exponent vector `d = (d_1, ..., d_n)` of a psi-class monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DVec(Vec<u32>);

impl DVec {
    pub fn new(entries: impl Into<Vec<u32>>) -> DVec {
        DVec(entries.into())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|d| = d_1 + ... + d_n`.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }

    /// `3 X(d) = sum (2 d_j + 1)`; `X(d)` itself is this over three.
    pub fn three_x(&self) -> u64 {
        self.0.iter().map(|&d| 2 * d as u64 + 1).sum()
    }

    /// `X(d)` when it is an integer.
    pub fn x_int(&self) -> Option<u32> {
        let t = self.three_x();
        (t % 3 == 0).then(|| (t / 3) as u32)
    }

    /// `X(d) = (1/3) sum (2 d_j + 1)` as an exact rational.
    pub fn x_of(&self) -> crate::arith::Rational {
        crate::arith::rat(self.three_x() as i64, 3)
    }

    /// `g(d) = 1 + (1/3) sum (d_j - 1)` if it is a non-negative integer.
    pub fn genus(&self) -> Option<u32> {
        genus_from_shifted_sum(self.0.iter().map(|&d| d as i64 - 1).sum())
    }

    /// Multiplicity `p_i(d)` of the value `i`.
    pub fn multiplicity(&self, i: u32) -> u32 {
        self.0.iter().filter(|&&d| d == i).count() as u32
    }

    pub fn sorted(&self) -> DVec {
        let mut v = self.0.clone();
        v.sort_unstable();
        DVec(v)
    }

    pub fn parse_csv(s: &str) -> Result<DVec> {
        let entries = s
            .split(',')
            .map(|t| {
                t.trim().parse::<u32>().map_err(|_| Error::InvalidArgument(format!("bad exponent `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.is_empty() {
            return Err(Error::InvalidArgument("empty exponent vector".into()));
        }
        Ok(DVec(entries))
    }

    pub fn to_csv(&self) -> String {
        self.0.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for DVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_csv())
    }
}

impl From<&[u32]> for DVec {
    fn from(v: &[u32]) -> Self {
        DVec(v.to_vec())
    }
}

impl<const N: usize> From<[u32; N]> for DVec {
    fn from(v: [u32; N]) -> Self {
        DVec(v.to_vec())
    }
}

pub(crate) fn genus_from_shifted_sum(s: i64) -> Option<u32> {
    (s.rem_euclid(3) == 0 && s >= -3).then(|| (1 + s / 3) as u32)
}

/// Sorted `(value, multiplicity)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Multiset(pub(crate) Vec<(u32, u32)>);

impl Multiset {
    pub fn from_entries(entries: &[u32]) -> Multiset {
        let mut v = entries.to_vec();
        v.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::new();
        for d in v {
            match out.last_mut() {
                Some((val, m)) if *val == d => *m += 1,
                _ => out.push((d, 1)),
            }
        }
        Multiset(out)
    }

    pub fn items(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn len(&self) -> u32 {
        self.0.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, v: u32, count: u32) {
        if count == 0 {
            return;
        }
        match self.0.binary_search_by_key(&v, |&(val, _)| val) {
            Ok(i) => self.0[i].1 += count,
            Err(i) => self.0.insert(i, (v, count)),
        }
    }

    pub fn remove_one(&mut self, v: u32) {
        let i = self.0.binary_search_by_key(&v, |&(val, _)| val).expect("value not present");
        if self.0[i].1 == 1 {
            self.0.remove(i);
        } else {
            self.0[i].1 -= 1;
        }
    }

    pub fn count(&self, v: u32) -> u32 {
        self.0.binary_search_by_key(&v, |&(val, _)| val).map(|i| self.0[i].1).unwrap_or(0)
    }

    /// `sum (d_j - 1)`.
    pub fn shifted_sum(&self) -> i64 {
        self.0.iter().map(|&(v, m)| (v as i64 - 1) * m as i64).sum()
    }

    pub fn three_x(&self) -> u64 {
        self.0.iter().map(|&(v, m)| (2 * v as u64 + 1) * m as u64).sum()
    }

    pub fn genus(&self) -> Option<u32> {
        genus_from_shifted_sum(self.shifted_sum())
    }

    pub fn to_entries(&self) -> Vec<u32> {
        self.0.iter().flat_map(|&(v, m)| std::iter::repeat(v).take(m as usize)).collect()
    }

    /// Drop dilaton entries (value 1) as long as something else remains.
    pub fn strip_dilaton(&mut self) {
        if self.len() < 2 {
            return;
        }
        if let Ok(i) = self.0.binary_search_by_key(&1, |&(val, _)| val) {
            if self.0.len() == 1 {
                self.0[0].1 = 1;
            } else {
                self.0.remove(i);
            }
        }
    }
}

/// Memo-table key: the dilaton-stripped sorted multiset, varint encoded as
/// `(value, multiplicity)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Box<[u8]>);

fn push_varint(out: &mut Vec<u8>, mut x: u32) {
    while x >= 0x80 {
        out.push((x as u8) | 0x80);
        x >>= 7;
    }
    out.push(x as u8);
}

fn read_varint(bytes: &[u8], pos: &mut usize) -> u32 {
    let mut x = 0u32;
    let mut shift = 0;
    loop {
        let b = bytes[*pos];
        *pos += 1;
        x |= ((b & 0x7f) as u32) << shift;
        if b & 0x80 == 0 {
            return x;
        }
        shift += 7;
    }
}

impl CanonicalKey {
    /// Key of an already canonical multiset.
    pub(crate) fn from_canonical(ms: &Multiset) -> CanonicalKey {
        let mut out = Vec::with_capacity(2 * ms.0.len());
        for &(v, m) in &ms.0 {
            push_varint(&mut out, v);
            push_varint(&mut out, m);
        }
        CanonicalKey(out.into_boxed_slice())
    }

    pub fn from_multiset(ms: &Multiset) -> CanonicalKey {
        let mut ms = ms.clone();
        ms.strip_dilaton();
        Self::from_canonical(&ms)
    }

    pub fn from_dvec(d: &DVec) -> CanonicalKey {
        Self::from_multiset(&Multiset::from_entries(d.entries()))
    }

    pub fn to_multiset(&self) -> Multiset {
        let mut pos = 0;
        let mut out = Vec::new();
        while pos < self.0.len() {
            let v = read_varint(&self.0, &mut pos);
            let m = read_varint(&self.0, &mut pos);
            out.push((v, m));
        }
        Multiset(out)
    }

    pub fn to_dvec(&self) -> DVec {
        DVec(self.to_multiset().to_entries())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dvec().to_csv())
    }
}

/// The canonical key of `d`: sorted, with 1-entries removed while `n >= 2`.
pub fn canonical_key(d: &DVec) -> CanonicalKey {
    CanonicalKey::from_dvec(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    #[test]
    fn x_and_genus() {
        assert_eq!(DVec::from([4]).x_of(), rat(3, 1));
        assert_eq!(DVec::from([0, 0, 0]).x_of(), rat(1, 1));
        assert_eq!(DVec::from([2, 3]).x_of(), rat(4, 1));
        assert_eq!(DVec::from([4]).genus(), Some(2));
        assert_eq!(DVec::from([2]).genus(), None);
        assert_eq!(DVec::from([1]).genus(), Some(1));
        assert_eq!(DVec::from([0, 0]).genus(), None);
        assert_eq!(DVec::from([0, 0, 0, 0, 0, 0, 1]).genus(), None);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_key(&DVec::from([3, 1, 2])).to_dvec(), DVec::from([2, 3]));
        assert_eq!(canonical_key(&DVec::from([1])).to_dvec(), DVec::from([1]));
        assert_eq!(canonical_key(&DVec::from([5, 0, 2])).to_dvec(), DVec::from([0, 2, 5]));
        assert_eq!(canonical_key(&DVec::from([1, 1, 1])).to_dvec(), DVec::from([1]));
        assert_eq!(canonical_key(&DVec::from([1, 300, 1])).to_dvec(), DVec::from([300]));
    }

    #[test]
    fn multiplicities() {
        let d = DVec::from([0, 2, 0, 5, 2, 2]);
        assert_eq!(d.multiplicity(0), 2);
        assert_eq!(d.multiplicity(2), 3);
        assert_eq!(d.multiplicity(1), 0);
    }

    #[test]
    fn parse_csv_rejects_garbage() {
        assert_eq!(DVec::parse_csv("2, 3,4").unwrap(), DVec::from([2, 3, 4]));
        assert!(DVec::parse_csv("2,x").is_err());
        assert!(DVec::parse_csv("-1").is_err());
    }

    proptest! {
        #[test]
        fn key_round_trips_to_sorted(v in proptest::collection::vec(0u32..1000, 1..12)) {
            let d = DVec::new(v);
            let k = canonical_key(&d);
            let back = k.to_dvec();
            let mut expect: Vec<u32> = d.sorted().entries().iter().copied().filter(|&x| x != 1).collect();
            if expect.is_empty() { expect.push(1); }
            prop_assert_eq!(back.entries(), &expect[..]);
            prop_assert_eq!(canonical_key(&back), k);
        }

        #[test]
        fn key_ignores_order(mut v in proptest::collection::vec(0u32..20, 1..10), seed in any::<u64>()) {
            let k1 = canonical_key(&DVec::new(v.clone()));
            let n = v.len();
            v.rotate_left((seed % n as u64) as usize);
            v.reverse();
            prop_assert_eq!(canonical_key(&DVec::new(v)), k1);
        }
    }
}

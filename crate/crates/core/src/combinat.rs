//! Small index sets and subset iteration shared by the enumeration modules.

use std::cmp::Ordering;
use std::fmt;

use num::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest ground set an index set can address.
pub const MAX_ELEMENTS: usize = 128;

/// Subset of `0..128` stored as a bitmask.
///
/// Ordering is lexicographic on the sorted member list, which is the order
/// every report in this crate uses.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SmallSet(u128);

impl SmallSet {
    pub const EMPTY: SmallSet = SmallSet(0);

    pub fn from_bits(bits: u128) -> Self {
        SmallSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_ELEMENTS);
        SmallSet(1u128 << i)
    }

    /// Panics on indices `>= 128`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = SmallSet::EMPTY;
        for i in it {
            assert!(i < MAX_ELEMENTS, "index {i} out of range for SmallSet");
            s.0 |= 1u128 << i;
        }
        s
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ELEMENTS);
        if n == MAX_ELEMENTS {
            SmallSet(u128::MAX)
        } else {
            SmallSet((1u128 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_ELEMENTS && self.0 & (1u128 << i) != 0
    }

    pub fn with(self, i: usize) -> Self {
        SmallSet(self.0 | (1u128 << i))
    }

    pub fn without(self, i: usize) -> Self {
        SmallSet(self.0 & !(1u128 << i))
    }

    pub fn union(self, other: Self) -> Self {
        SmallSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SmallSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> SmallSetIter {
        SmallSetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct SmallSetIter(u128);

impl Iterator for SmallSetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for SmallSetIter {}

impl Ord for SmallSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for SmallSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SmallSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for SmallSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for SmallSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for SmallSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&i| i >= MAX_ELEMENTS) {
            return Err(serde::de::Error::custom(format!(
                "index {bad} exceeds the supported maximum {}",
                MAX_ELEMENTS - 1
            )));
        }
        Ok(SmallSet::from_indices(v))
    }
}

/// k-subsets of `0..n` in lexicographic order of member lists.
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// k-subsets of `0..n` as bitmasks, lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = SmallSet> {
    assert!(n <= MAX_ELEMENTS);
    Combinations::new(n, k).map(SmallSet::from_indices)
}

/// k-subsets of the members of `set`, lexicographic order.
pub fn k_subsets_of(set: SmallSet, k: usize) -> impl Iterator<Item = SmallSet> {
    let members = set.to_vec();
    Combinations::new(members.len(), k).map(move |c| SmallSet::from_indices(c.into_iter().map(|i| members[i])))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

pub fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let all: Vec<Vec<usize>> = Combinations::new(5, 3).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn set_order_matches_member_lists() {
        let mut sets: Vec<SmallSet> = k_subsets(6, 3).collect();
        let lists: Vec<Vec<usize>> = sets.iter().map(|s| s.to_vec()).collect();
        sets.reverse();
        sets.sort();
        assert_eq!(sets.iter().map(|s| s.to_vec()).collect::<Vec<_>>(), lists);
        assert!(SmallSet::from_indices([0, 5]) < SmallSet::from_indices([1, 2]));
    }

    #[test]
    fn set_ops() {
        let s = SmallSet::from_indices([1, 3, 127]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.last(), Some(127));
        assert_eq!(s.first(), Some(1));
        assert!(s.without(127).is_subset(s));
        assert_eq!(SmallSet::full(128).len(), 128);
        assert_eq!(k_subsets_of(s, 2).count(), 3);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(14, 5), 2002);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial_big(60, 30).to_string(), "118264581564861424");
    }
}

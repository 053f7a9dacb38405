use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported node count. Node sets are packed into a single `u64`.
pub const MAX_NODES: usize = 64;

/// A set of node indices in `0..MAX_NODES`, stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_NODES);
        NodeSet(1 << i)
    }

    /// All nodes `0..d`.
    pub fn full(d: usize) -> Self {
        if d >= 64 {
            NodeSet(u64::MAX)
        } else {
            NodeSet((1u64 << d) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_NODES && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    pub fn with(self, i: usize) -> Self {
        NodeSet(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        NodeSet(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        NodeSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self` with exactly `k` members, in lexicographic order
    /// of their sorted member lists.
    pub fn subsets_of_size(self, k: usize) -> Subsets {
        Subsets::new(self, k)
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl IntoIterator for NodeSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
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

impl ExactSizeIterator for Iter {}

/// k-combinations of a node set.
pub struct Subsets {
    members: Vec<usize>,
    idx: Vec<usize>,
    done: bool,
}

impl Subsets {
    fn new(set: NodeSet, k: usize) -> Self {
        let members: Vec<usize> = set.iter().collect();
        let done = k > members.len();
        Subsets {
            members,
            idx: (0..k).collect(),
            done,
        }
    }
}

impl Iterator for Subsets {
    type Item = NodeSet;

    fn next(&mut self) -> Option<NodeSet> {
        if self.done {
            return None;
        }
        let out: NodeSet = self.idx.iter().map(|&p| self.members[p]).collect();
        // advance
        let n = self.members.len();
        let k = self.idx.len();
        let mut pos = k;
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            if self.idx[pos] < n - k + pos {
                self.idx[pos] += 1;
                for q in pos + 1..k {
                    self.idx[q] = self.idx[q - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for NodeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = v.iter().find(|&&i| i >= MAX_NODES) {
            return Err(serde::de::Error::custom(format!("node index {bad} too large")));
        }
        Ok(v.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_count_matches_binomial() {
        let s: NodeSet = [1, 3, 4, 7, 9].into_iter().collect();
        let counts: Vec<usize> = (0..=6).map(|k| s.subsets_of_size(k).count()).collect();
        assert_eq!(counts, vec![1, 5, 10, 10, 5, 1, 0]);
        for sub in s.subsets_of_size(3) {
            assert!(sub.is_subset(s));
            assert_eq!(sub.len(), 3);
        }
    }

    #[test]
    fn empty_set_has_one_empty_subset() {
        let subs: Vec<_> = NodeSet::EMPTY.subsets_of_size(0).collect();
        assert_eq!(subs, vec![NodeSet::EMPTY]);
    }

    #[test]
    fn serde_as_sorted_list() {
        let s: NodeSet = [5, 0, 2].into_iter().collect();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0,2,5]");
        let back: NodeSet = serde_json::from_str("[2,0,5]").unwrap();
        assert_eq!(back, s);
    }
}

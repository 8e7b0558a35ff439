use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A subset of the node set, stored as a strictly increasing list of ids.
///
/// Sets order by cardinality first and then lexicographically, which is the
/// canonical enumeration order used for every tie-break in the crate.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeSet(Vec<usize>);

impl NodeSet {
    pub fn empty() -> Self {
        NodeSet(Vec::new())
    }

    pub fn singleton(node: usize) -> Self {
        NodeSet(vec![node])
    }

    /// Everything in `0..n`.
    pub fn full(n: usize) -> Self {
        NodeSet((0..n).collect())
    }

    /// Builds from a sorted, duplicate-free slice without re-sorting.
    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        NodeSet(members)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.0.binary_search(&node).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// `self ∪ {node}`.
    pub fn with(&self, node: usize) -> NodeSet {
        match self.0.binary_search(&node) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = Vec::with_capacity(self.0.len() + 1);
                v.extend_from_slice(&self.0[..pos]);
                v.push(node);
                v.extend_from_slice(&self.0[pos..]);
                NodeSet(v)
            }
        }
    }

    /// `self \ {node}`.
    pub fn without(&self, node: usize) -> NodeSet {
        match self.0.binary_search(&node) {
            Ok(pos) => {
                let mut v = self.0.clone();
                v.remove(pos);
                NodeSet(v)
            }
            Err(_) => self.clone(),
        }
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        NodeSet(v)
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.iter().filter(|&x| other.contains(x)).collect())
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.iter().filter(|&x| !other.contains(x)).collect())
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.len() <= other.len() && self.iter().all(|x| other.contains(x))
    }

    /// Size of the intersection, without allocating.
    pub fn intersection_len(&self, other: &NodeSet) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// All subsets of `self` with exactly `k` members, in canonical order.
    pub fn subsets_of_size(&self, k: usize) -> impl Iterator<Item = NodeSet> + '_ {
        use itertools::Itertools;
        self.0.iter().copied().combinations(k).map(NodeSet)
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        NodeSet(v)
    }
}

impl<const N: usize> From<[usize; N]> for NodeSet {
    fn from(members: [usize; N]) -> Self {
        members.into_iter().collect()
    }
}

impl From<Vec<usize>> for NodeSet {
    fn from(members: Vec<usize>) -> Self {
        members.into_iter().collect()
    }
}

impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_order_is_size_then_lex() {
        let mut sets = vec![
            NodeSet::from([0, 2]),
            NodeSet::from([3]),
            NodeSet::from([0, 1]),
            NodeSet::empty(),
            NodeSet::from([1]),
        ];
        sets.sort();
        let shown: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, ["{}", "{1}", "{3}", "{0,1}", "{0,2}"]);
    }

    #[test]
    fn with_and_without() {
        let s = NodeSet::from([1, 4]);
        assert_eq!(s.with(2), NodeSet::from([1, 2, 4]));
        assert_eq!(s.with(4), s);
        assert_eq!(s.without(1), NodeSet::from([4]));
        assert_eq!(s.without(7), s);
    }

    #[test]
    fn subsets_of_size_enumerates_in_order() {
        let s = NodeSet::from([0, 2, 5]);
        let pairs: Vec<NodeSet> = s.subsets_of_size(2).collect();
        assert_eq!(
            pairs,
            vec![NodeSet::from([0, 2]), NodeSet::from([0, 5]), NodeSet::from([2, 5])]
        );
    }

    proptest! {
        #[test]
        fn set_algebra_matches_bitmasks(a in 0u32..256, b in 0u32..256) {
            let to_set = |mask: u32| (0..8).filter(|i| mask >> i & 1 == 1).collect::<NodeSet>();
            let (sa, sb) = (to_set(a), to_set(b));
            prop_assert_eq!(sa.union(&sb), to_set(a | b));
            prop_assert_eq!(sa.intersection(&sb), to_set(a & b));
            prop_assert_eq!(sa.difference(&sb), to_set(a & !b));
            prop_assert_eq!(sa.intersection_len(&sb), (a & b).count_ones() as usize);
            prop_assert_eq!(sa.is_subset(&sb), a & !b == 0);
        }
    }
}

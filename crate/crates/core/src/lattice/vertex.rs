use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::ser::{Serialize, SerializeSeq, Serializer};

/// A vertex of a Boolean lattice: a finite set of ground-element indices.
///
/// Sets whose members are all below 64 are normally stored as a single
/// machine word; anything larger falls back to a sorted, duplicate-free
/// vector. Equality, hashing and ordering only look at the member set, so
/// the two forms of the same set are interchangeable.
///
/// The total order is the enumeration order used throughout the crate:
/// first by cardinality, then lexicographically on the sorted members.
#[derive(Clone)]
pub enum Vertex {
    Dense(u64),
    Sparse(Vec<u32>),
}

impl Vertex {
    pub fn empty() -> Self {
        Vertex::Dense(0)
    }

    pub fn from_mask(mask: u64) -> Self {
        Vertex::Dense(mask)
    }

    /// The interval `{lo, lo+1, ..., hi-1}`.
    pub fn range(lo: u32, hi: u32) -> Self {
        Self::from_sorted((lo..hi).collect())
    }

    pub fn from_members<I: IntoIterator<Item = u32>>(members: I) -> Self {
        let mut v: Vec<u32> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self::from_sorted(v)
    }

    /// Forces the sorted-vector form regardless of the member values.
    pub fn sparse<I: IntoIterator<Item = u32>>(members: I) -> Self {
        let mut v: Vec<u32> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Vertex::Sparse(v)
    }

    /// Builds the canonical form from a sorted, deduplicated vector.
    pub(crate) fn from_sorted(v: Vec<u32>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        match v.last() {
            None => Vertex::Dense(0),
            Some(&max) if max < 64 => Vertex::Dense(v.iter().fold(0u64, |m, &x| m | (1 << x))),
            Some(_) => Vertex::Sparse(v),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Vertex::Dense(m) => m.count_ones() as usize,
            Vertex::Sparse(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: u32) -> bool {
        match self {
            Vertex::Dense(m) => x < 64 && m & (1 << x) != 0,
            Vertex::Sparse(v) => v.binary_search(&x).is_ok(),
        }
    }

    pub fn iter(&self) -> Members<'_> {
        match self {
            Vertex::Dense(m) => Members::Dense(*m),
            Vertex::Sparse(v) => Members::Sparse(v.iter()),
        }
    }

    pub fn members(&self) -> Vec<u32> {
        match self {
            Vertex::Sparse(v) => v.clone(),
            Vertex::Dense(_) => self.iter().collect(),
        }
    }

    /// Largest member, if any.
    pub fn max_member(&self) -> Option<u32> {
        match self {
            Vertex::Dense(0) => None,
            Vertex::Dense(m) => Some(63 - m.leading_zeros()),
            Vertex::Sparse(v) => v.last().copied(),
        }
    }

    /// The word representation when every member is below 64.
    pub fn as_mask(&self) -> Option<u64> {
        match self {
            Vertex::Dense(m) => Some(*m),
            Vertex::Sparse(v) => {
                if v.last().is_none_or(|&x| x < 64) {
                    Some(v.iter().fold(0u64, |m, &x| m | (1 << x)))
                } else {
                    None
                }
            }
        }
    }

    pub fn is_subset(&self, other: &Vertex) -> bool {
        if let (Some(a), Some(b)) = (self.as_mask(), other.as_mask()) {
            return a & !b == 0;
        }
        if self.len() > other.len() {
            return false;
        }
        let mut theirs = other.iter().peekable();
        'outer: for x in self.iter() {
            while let Some(&y) = theirs.peek() {
                match y.cmp(&x) {
                    Ordering::Less => {
                        theirs.next();
                    }
                    Ordering::Equal => {
                        theirs.next();
                        continue 'outer;
                    }
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn is_strict_subset(&self, other: &Vertex) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    pub fn is_comparable(&self, other: &Vertex) -> bool {
        self.is_subset(other) || other.is_subset(self)
    }

    pub fn is_disjoint(&self, other: &Vertex) -> bool {
        if let (Some(a), Some(b)) = (self.as_mask(), other.as_mask()) {
            return a & b == 0;
        }
        let (a, b) = (self.sorted(), other.sorted());
        let (small, large) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
        if small.len() * 8 < large.len() {
            return small.iter().all(|x| large.binary_search(x).is_err());
        }
        merge(&a, &b, |a, b| a && b).is_empty()
    }

    pub fn union(&self, other: &Vertex) -> Vertex {
        if let (Some(a), Some(b)) = (self.as_mask(), other.as_mask()) {
            return Vertex::Dense(a | b);
        }
        Vertex::from_sorted(merge(&self.sorted(), &other.sorted(), |a, b| a || b))
    }

    pub fn intersection(&self, other: &Vertex) -> Vertex {
        if let (Some(a), Some(b)) = (self.as_mask(), other.as_mask()) {
            return Vertex::Dense(a & b);
        }
        Vertex::from_sorted(merge(&self.sorted(), &other.sorted(), |a, b| a && b))
    }

    pub fn difference(&self, other: &Vertex) -> Vertex {
        if let (Some(a), Some(b)) = (self.as_mask(), other.as_mask()) {
            return Vertex::Dense(a & !b);
        }
        let (a, b) = (self.sorted(), other.sorted());
        if a.len() * 8 < b.len() {
            return Vertex::from_sorted(a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect());
        }
        if b.len() * 8 < a.len() {
            // Copy the runs of `a` between the few members of `b`.
            let mut out = Vec::with_capacity(a.len());
            let mut start = 0;
            for x in b.iter() {
                let at = start + a[start..].partition_point(|y| y < x);
                out.extend_from_slice(&a[start..at]);
                start = if a.get(at) == Some(x) { at + 1 } else { at };
            }
            out.extend_from_slice(&a[start..]);
            return Vertex::from_sorted(out);
        }
        Vertex::from_sorted(merge(&a, &b, |a, b| a && !b))
    }

    /// Members as a sorted slice, borrowed when already stored that way.
    fn sorted(&self) -> std::borrow::Cow<'_, [u32]> {
        match self {
            Vertex::Sparse(v) => std::borrow::Cow::Borrowed(v),
            Vertex::Dense(_) => std::borrow::Cow::Owned(self.iter().collect()),
        }
    }

    /// The first `k` members in increasing order (fewer if `len() < k`).
    pub fn take_smallest(&self, k: usize) -> Vertex {
        match self {
            Vertex::Sparse(v) => Vertex::from_sorted(v[..k.min(v.len())].to_vec()),
            Vertex::Dense(_) => Vertex::from_sorted(self.iter().take(k).collect()),
        }
    }

    /// Element-wise complement within `{0, ..., size-1}`.
    pub fn complement_in(&self, size: u32) -> Vertex {
        Vertex::range(0, size).difference(self)
    }
}

fn merge(a: &[u32], b: &[u32], keep: impl Fn(bool, bool) -> bool) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (val, in_a, in_b) = if j == b.len() || (i < a.len() && a[i] < b[j]) {
            i += 1;
            (a[i - 1], true, false)
        } else if i == a.len() || b[j] < a[i] {
            j += 1;
            (b[j - 1], false, true)
        } else {
            i += 1;
            j += 1;
            (a[i - 1], true, true)
        };
        if keep(in_a, in_b) {
            out.push(val);
        }
    }
    out
}

/// Iterator over the members of a [`Vertex`] in increasing order.
pub enum Members<'a> {
    Dense(u64),
    Sparse(std::slice::Iter<'a, u32>),
}

impl Iterator for Members<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        match self {
            Members::Dense(m) => {
                if *m == 0 {
                    None
                } else {
                    let x = m.trailing_zeros();
                    *m &= *m - 1;
                    Some(x)
                }
            }
            Members::Sparse(it) => it.next().copied(),
        }
    }
}

impl PartialEq for Vertex {
    fn eq(&self, other: &Self) -> bool {
        match (self.as_mask(), other.as_mask()) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.iter().eq(other.iter()),
            _ => false,
        }
    }
}

impl Eq for Vertex {}

impl Hash for Vertex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self.as_mask() {
            Some(m) => {
                state.write_u8(0);
                state.write_u64(m);
            }
            None => {
                state.write_u8(1);
                for x in self.iter() {
                    state.write_u32(x);
                }
            }
        }
    }
}

impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for x in self.iter() {
            seq.serialize_element(&x)?;
        }
        seq.end()
    }
}

impl FromIterator<u32> for Vertex {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Vertex::from_members(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dense_and_sparse_forms_agree() {
        let a = Vertex::from_members([3, 1, 7]);
        let b = Vertex::sparse([1, 3, 7]);
        assert!(matches!(a, Vertex::Dense(_)));
        assert!(matches!(b, Vertex::Sparse(_)));
        assert_eq!(a, b);
        assert_eq!(a.cmp(&b), Ordering::Equal);
        let hash = |v: &Vertex| {
            use std::collections::hash_map::DefaultHasher;
            let mut h = DefaultHasher::new();
            v.hash(&mut h);
            h.finish()
        };
        assert_eq!(hash(&a), hash(&b));
    }

    #[test]
    fn large_members_use_sparse_form() {
        let v = Vertex::from_members([5, 70, 1_000_000]);
        assert!(matches!(v, Vertex::Sparse(_)));
        assert_eq!(v.len(), 3);
        assert!(v.contains(70));
        assert!(!v.contains(71));
        assert_eq!(v.max_member(), Some(1_000_000));
    }

    #[test]
    fn order_is_size_then_lex() {
        let mut vs = [
            Vertex::from_members([0, 1]),
            Vertex::from_members([2]),
            Vertex::empty(),
            Vertex::from_members([1, 2]),
            Vertex::from_members([0]),
            Vertex::from_members([0, 2]),
        ];
        vs.sort();
        let shown: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        assert_eq!(shown, ["{}", "{0}", "{2}", "{0,1}", "{0,2}", "{1,2}"]);
    }

    #[test]
    fn union_of_sparse_normalises_back_to_dense() {
        let a = Vertex::sparse([1, 2]);
        let b = Vertex::sparse([3]);
        assert!(matches!(a.union(&b), Vertex::Dense(0b1110)));
        let big = Vertex::from_members([100]);
        let d = big.union(&a).difference(&big);
        assert!(matches!(d, Vertex::Dense(0b110)));
    }

    // Sizes differ by more than 8x often enough to reach the lopsided paths.
    fn arb_members() -> impl Strategy<Value = Vec<u32>> {
        prop_oneof![
            prop::collection::vec(prop_oneof![0u32..80, 60u32..200], 0..4),
            prop::collection::vec(prop_oneof![0u32..80, 60u32..200], 0..120),
        ]
    }

    proptest! {
        #[test]
        fn set_ops_match_btreeset(a in arb_members(), b in arb_members()) {
            use std::collections::BTreeSet;
            let (sa, sb): (BTreeSet<u32>, BTreeSet<u32>) =
                (a.iter().copied().collect(), b.iter().copied().collect());
            let (va, vb) = (Vertex::from_members(a.clone()), Vertex::sparse(b.clone()));
            prop_assert_eq!(va.union(&vb).members(), sa.union(&sb).copied().collect::<Vec<_>>());
            prop_assert_eq!(va.intersection(&vb).members(), sa.intersection(&sb).copied().collect::<Vec<_>>());
            prop_assert_eq!(va.difference(&vb).members(), sa.difference(&sb).copied().collect::<Vec<_>>());
            prop_assert_eq!(va.is_subset(&vb), sa.is_subset(&sb));
            prop_assert_eq!(va.is_disjoint(&vb), sa.is_disjoint(&sb));
            prop_assert_eq!(va == vb, sa == sb);
        }
    }
}

use num_bigint::BigUint;
use serde::Serialize;

use super::vertex::Vertex;
use super::LatticeError;
use crate::extremal::binomial;

/// Ground set `{0, ..., size-1}` of a Boolean lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroundSet {
    pub size: usize,
}

impl GroundSet {
    pub fn new(size: usize) -> Self {
        GroundSet { size }
    }

    /// The top vertex `[N]`.
    pub fn top(&self) -> Vertex {
        Vertex::range(0, self.size as u32)
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        v.max_member().is_none_or(|x| (x as usize) < self.size)
    }

    /// Vertices of layer `level`, lexicographic.
    pub fn layer(&self, level: usize) -> Result<Layer, LatticeError> {
        layer(*self, level)
    }

    /// All vertices, by layer then lexicographic.
    pub fn vertices(&self) -> BlobIter {
        Blob::full(self.top()).enumerate()
    }
}

/// Iterator over the `k`-subsets of a sorted element list in lexicographic order.
#[derive(Clone, Debug)]
pub struct Combinations {
    elems: Vec<u32>,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(elems: Vec<u32>, k: usize) -> Self {
        let done = k > elems.len();
        Combinations { idx: (0..k).collect(), elems, done }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.idx.iter().map(|&i| self.elems[i]).collect();
        let (n, k) = (self.elems.len(), self.idx.len());
        // advance to the next index tuple
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < n - k + i {
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

/// A layer of a Boolean lattice.
pub type Layer = std::iter::Map<Combinations, fn(Vec<u32>) -> Vertex>;

pub fn layer(ground: GroundSet, level: usize) -> Result<Layer, LatticeError> {
    if level > ground.size {
        return Err(LatticeError::LayerOutOfRange { level, dimension: ground.size });
    }
    let elems = (0..ground.size as u32).collect();
    Ok(Combinations::new(elems, level).map(Vertex::from_sorted as fn(Vec<u32>) -> Vertex))
}

/// `B(S;T)` or its truncation `B(S;T;t)`: the vertices `Z` with
/// `S ⊆ Z ⊆ S ∪ T`, keeping only `|Z| <= t` when a truncation is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Blob {
    pub base: Vertex,
    pub variable: Vertex,
    pub truncation: Option<usize>,
}

impl Blob {
    pub fn new(base: Vertex, variable: Vertex, truncation: Option<usize>) -> Result<Self, LatticeError> {
        if !base.is_disjoint(&variable) {
            return Err(LatticeError::OverlappingBlob { base, variable });
        }
        Ok(Blob { base, variable, truncation })
    }

    /// The untruncated blob `B(∅;T)`, i.e. the whole lattice on `T`.
    pub fn full(variable: Vertex) -> Self {
        Blob { base: Vertex::empty(), variable, truncation: None }
    }

    /// `B(S;T)` truncated to at most `extra` elements on top of the base.
    pub fn above(base: Vertex, variable: Vertex, extra: usize) -> Result<Self, LatticeError> {
        let t = base.len() + extra;
        Blob::new(base, variable, Some(t))
    }

    pub fn dimension(&self) -> usize {
        self.variable.len()
    }

    /// `|S ∪ T|`.
    pub fn volume(&self) -> usize {
        self.base.len() + self.variable.len()
    }

    /// Largest number of variable elements a member may use.
    pub fn max_extra(&self) -> Option<usize> {
        match self.truncation {
            None => Some(self.variable.len()),
            Some(t) if t < self.base.len() => None,
            Some(t) => Some((t - self.base.len()).min(self.variable.len())),
        }
    }

    pub fn is_truncated(&self) -> bool {
        self.max_extra() != Some(self.variable.len())
    }

    pub fn contains(&self, z: &Vertex) -> bool {
        self.base.is_subset(z)
            && z.is_subset(&self.base.union(&self.variable))
            && self.truncation.is_none_or(|t| z.len() <= t)
    }

    /// Number of vertices, `Σ_{k ≤ t-|S|} C(|T|, k)`.
    pub fn cardinality(&self) -> BigUint {
        let d = self.variable.len() as u64;
        match self.max_extra() {
            None => BigUint::from(0u32),
            Some(k) if k as u64 == d => BigUint::from(1u32) << d,
            Some(k) => (0..=k as u64).map(|j| binomial(d, j)).sum(),
        }
    }

    /// The vertices `S ∪ T'` ordered by size, then lexicographically.
    pub fn enumerate(&self) -> BlobIter {
        BlobIter {
            base: self.base.clone(),
            elems: self.variable.members(),
            max_extra: self.max_extra(),
            size: 0,
            current: None,
        }
    }

    /// The first vertex in enumeration order (the base), if the blob is non-empty.
    pub fn first(&self) -> Option<Vertex> {
        self.max_extra().map(|_| self.base.clone())
    }
}

/// Streaming enumeration of a blob.
#[derive(Clone, Debug)]
pub struct BlobIter {
    base: Vertex,
    elems: Vec<u32>,
    max_extra: Option<usize>,
    size: usize,
    current: Option<Combinations>,
}

impl Iterator for BlobIter {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        let max = self.max_extra?;
        loop {
            if self.size > max {
                return None;
            }
            let combos = self
                .current
                .get_or_insert_with(|| Combinations::new(self.elems.clone(), self.size));
            match combos.next() {
                Some(extra) => return Some(self.base.union(&Vertex::from_sorted(extra))),
                None => {
                    self.size += 1;
                    self.current = None;
                }
            }
        }
    }
}

/// `Q(X)_s^t`: the layers `s..=t` of the Boolean lattice on `ground`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedLattice {
    pub ground: GroundSet,
    pub lower: usize,
    pub upper: usize,
}

impl TruncatedLattice {
    pub fn new(ground: GroundSet, lower: usize, upper: usize) -> Result<Self, LatticeError> {
        if lower > upper || upper > ground.size {
            return Err(LatticeError::BadTruncation { lower, upper, dimension: ground.size });
        }
        Ok(TruncatedLattice { ground, lower, upper })
    }

    pub fn contains(&self, z: &Vertex) -> bool {
        self.ground.contains(z) && (self.lower..=self.upper).contains(&z.len())
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (self.lower..=self.upper).flat_map(move |l| layer(self.ground, l).expect("layer in range"))
    }
}

/// `Vol`: the number of ground elements used by a family of vertices.
pub fn volume<'a, I>(vertices: I) -> usize
where
    I: IntoIterator<Item = &'a Vertex>,
{
    vertices.into_iter().fold(Vertex::empty(), |acc, v| acc.union(v)).len()
}

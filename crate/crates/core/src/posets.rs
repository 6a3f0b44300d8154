//! Finite posets, the named families, and induced/weak embedding search into
//! colored Boolean lattices.

use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{Color, ColorTable, Vertex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PosetError {
    #[error("malformed poset spec `{0}`")]
    BadSpec(String),
    #[error("poset file: {0}")]
    Parse(String),
    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("coloring: {0}")]
    Coloring(String),
}

/// A partial order on `0..k`, stored as a full `k × k` relation matrix.
/// Down-set size, up-set size, then the sorted `(down, up)` sizes of the
/// elements below and above.
pub type ElementSignature = (usize, usize, Vec<(usize, usize)>, Vec<(usize, usize)>);

#[derive(Clone, PartialEq, Eq)]
pub struct FinitePoset {
    k: usize,
    leq: Vec<bool>,
    name: String,
    /// A realization as a set family, when the poset was built from one.
    family: Option<Vec<Vertex>>,
}

impl FinitePoset {
    /// Builds from a relation matrix, checking the partial-order axioms.
    pub fn from_matrix(name: impl Into<String>, leq: Vec<Vec<bool>>) -> Result<Self, PosetError> {
        let k = leq.len();
        if leq.iter().any(|row| row.len() != k) {
            return Err(PosetError::NotPartialOrder("relation matrix is not square".into()));
        }
        let flat = leq.into_iter().flatten().collect();
        let p = FinitePoset { k, leq: flat, name: name.into(), family: None };
        p.check_axioms()?;
        Ok(p)
    }

    /// Builds from cover pairs `i < j`, closing transitively.
    pub fn from_covers(name: impl Into<String>, k: usize, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        let mut leq = vec![false; k * k];
        for i in 0..k {
            leq[i * k + i] = true;
        }
        for &(i, j) in covers {
            if i >= k || j >= k {
                return Err(PosetError::Parse(format!("cover {i}<{j} out of range for k={k}")));
            }
            leq[i * k + j] = true;
        }
        // Warshall
        for m in 0..k {
            for i in 0..k {
                if leq[i * k + m] {
                    for j in 0..k {
                        if leq[m * k + j] {
                            leq[i * k + j] = true;
                        }
                    }
                }
            }
        }
        let p = FinitePoset { k, leq, name: name.into(), family: None };
        p.check_axioms()?;
        Ok(p)
    }

    /// The subset order on a family of distinct vertices.
    pub fn from_family(name: impl Into<String>, family: Vec<Vertex>) -> Result<Self, PosetError> {
        let k = family.len();
        let mut leq = vec![false; k * k];
        for i in 0..k {
            for j in 0..k {
                if i != j && family[i] == family[j] {
                    return Err(PosetError::NotPartialOrder(format!("vertex {} repeated", family[i])));
                }
                leq[i * k + j] = family[i].is_subset(&family[j]);
            }
        }
        Ok(FinitePoset { k, leq, name: name.into(), family: Some(family) })
    }

    fn check_axioms(&self) -> Result<(), PosetError> {
        let k = self.k;
        for i in 0..k {
            if !self.leq(i, i) {
                return Err(PosetError::NotPartialOrder(format!("{i} ≰ {i}")));
            }
            for j in 0..k {
                if i != j && self.leq(i, j) && self.leq(j, i) {
                    return Err(PosetError::NotPartialOrder(format!("{i} ≤ {j} ≤ {i}")));
                }
                for l in 0..k {
                    if self.leq(i, j) && self.leq(j, l) && !self.leq(i, l) {
                        return Err(PosetError::NotPartialOrder(format!("{i} ≤ {j} ≤ {l} but {i} ≰ {l}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn chain(k: usize) -> Self {
        let covers: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Self::from_covers(format!("chain:{k}"), k, &covers).expect("chain is a poset")
    }

    pub fn antichain(k: usize) -> Self {
        Self::from_covers(format!("antichain:{k}"), k, &[]).expect("antichain is a poset")
    }

    /// `V_n`: element `0` below the antichain `1..=n`.
    pub fn fork(n: usize) -> Self {
        let covers: Vec<_> = (1..=n).map(|i| (0, i)).collect();
        Self::from_covers(format!("fork:{n}"), n + 1, &covers).expect("fork is a poset")
    }

    /// `D_n`: the fork with a top `n + 1` added.
    pub fn diamond(n: usize) -> Self {
        let covers: Vec<_> = (1..=n).flat_map(|i| [(0, i), (i, n + 1)]).collect();
        Self::from_covers(format!("diamond:{n}"), n + 2, &covers).expect("diamond is a poset")
    }

    /// `Q_n`; element `i` is the subset with bit pattern `i`.
    pub fn boolean(n: usize) -> Result<Self, PosetError> {
        if n > 12 {
            return Err(PosetError::TooLarge(format!("boolean:{n} has more than 4096 elements")));
        }
        let family = (0..1u64 << n).map(Vertex::from_mask).collect();
        Self::from_family(format!("boolean:{n}"), family)
    }

    /// Layers `s..=t` of `Q_n`, in increasing bit-pattern order.
    pub fn truncated(n: usize, s: usize, t: usize) -> Result<Self, PosetError> {
        if s > t || t > n {
            return Err(PosetError::BadSpec(format!("truncated:{n}:{s}:{t} needs s ≤ t ≤ n")));
        }
        if n > 12 {
            return Err(PosetError::TooLarge(format!("truncated:{n}:{s}:{t}")));
        }
        let family = (0..1u64 << n)
            .filter(|m| (s..=t).contains(&(m.count_ones() as usize)))
            .map(Vertex::from_mask)
            .collect();
        Self::from_family(format!("truncated:{n}:{s}:{t}"), family)
    }

    /// Parses the relation file format: `k=<int>` then one `i<j` cover per line.
    pub fn parse_relation_file(name: impl Into<String>, text: &str) -> Result<Self, PosetError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| PosetError::Parse("empty file".into()))?;
        let k = header
            .strip_prefix("k=")
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| PosetError::Parse(format!("bad header `{header}`")))?;
        let mut covers = Vec::new();
        for line in lines {
            let (a, b) = line.split_once('<').ok_or_else(|| PosetError::Parse(format!("bad cover `{line}`")))?;
            let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| PosetError::Parse(format!("bad cover `{line}`")));
            covers.push((parse(a)?, parse(b)?));
        }
        Self::from_covers(name, k, &covers)
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Option<&[Vertex]> {
        self.family.as_deref()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.k + j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub fn down_set_size(&self, i: usize) -> usize {
        (0..self.k).filter(|&j| self.leq(j, i)).count()
    }

    pub fn up_set_size(&self, i: usize) -> usize {
        (0..self.k).filter(|&j| self.leq(i, j)).count()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.k).filter(|&i| self.up_set_size(i) == 1).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.k).filter(|&i| self.down_set_size(i) == 1).collect()
    }

    /// Linear extension that always takes, among the available elements, one with
    /// the most comparable partners.
    pub fn linear_extension(&self) -> Vec<usize> {
        let related: Vec<usize> = (0..self.k).map(|i| (0..self.k).filter(|&j| self.lt(i, j) || self.lt(j, i)).count()).collect();
        let mut placed = vec![false; self.k];
        let mut order = Vec::with_capacity(self.k);
        while order.len() < self.k {
            let next = (0..self.k)
                .filter(|&i| !placed[i] && (0..self.k).all(|j| !self.lt(j, i) || placed[j]))
                .max_by_key(|&i| (related[i], std::cmp::Reverse(i)))
                .expect("a partial order always has a minimal unplaced element");
            placed[next] = true;
            order.push(next);
        }
        order
    }

    /// Isomorphism-invariant signature: per element, its down/up-set sizes and
    /// the sorted sizes of its strict neighbours, sorted.
    pub fn signature(&self) -> Vec<ElementSignature> {
        let mut sig: Vec<_> = (0..self.k).map(|i| self.element_signature(i)).collect();
        sig.sort();
        sig
    }

    fn element_signature(&self, i: usize) -> ElementSignature {
        let size = |j: usize| (self.down_set_size(j), self.up_set_size(j));
        let mut below: Vec<_> = (0..self.k).filter(|&j| self.lt(j, i)).map(size).collect();
        let mut above: Vec<_> = (0..self.k).filter(|&j| self.lt(i, j)).map(size).collect();
        below.sort();
        above.sort();
        (self.down_set_size(i), self.up_set_size(i), below, above)
    }

    /// Exact order-isomorphism test for posets with at most 12 elements.
    pub fn is_isomorphic(&self, other: &FinitePoset) -> Result<bool, PosetError> {
        if self.k > 12 || other.k > 12 {
            return Err(PosetError::TooLarge("isomorphism is only decided for at most 12 elements".into()));
        }
        if self.k != other.k || self.signature() != other.signature() {
            return Ok(false);
        }
        let mine: Vec<_> = (0..self.k).map(|i| self.element_signature(i)).collect();
        let theirs: Vec<_> = (0..other.k).map(|i| other.element_signature(i)).collect();
        let mut image = vec![usize::MAX; self.k];
        let mut used = vec![false; self.k];
        Ok(self.extend_isomorphism(other, &mine, &theirs, 0, &mut image, &mut used))
    }

    #[allow(clippy::type_complexity)]
    fn extend_isomorphism(
        &self,
        other: &FinitePoset,
        mine: &[(usize, usize, Vec<(usize, usize)>, Vec<(usize, usize)>)],
        theirs: &[(usize, usize, Vec<(usize, usize)>, Vec<(usize, usize)>)],
        i: usize,
        image: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == self.k {
            return true;
        }
        for j in 0..other.k {
            if used[j] || mine[i] != theirs[j] {
                continue;
            }
            let consistent = (0..i).all(|a| self.leq(a, i) == other.leq(image[a], j) && self.leq(i, a) == other.leq(j, image[a]));
            if consistent {
                image[i] = j;
                used[j] = true;
                if self.extend_isomorphism(other, mine, theirs, i + 1, image, used) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinitePoset({}, {} elements)", self.name, self.k)
    }
}

/// Parses `boolean:n`, `chain:k`, `antichain:k`, `fork:n`, `diamond:n`,
/// `truncated:n:s:t` or `file:<path>`.
pub fn make_poset(spec: &str) -> Result<FinitePoset, PosetError> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(Path::new(path)).map_err(|e| PosetError::Parse(format!("{path}: {e}")))?;
        return FinitePoset::parse_relation_file(spec, &text);
    }
    let bad = || PosetError::BadSpec(spec.to_string());
    let mut parts = spec.split(':');
    let kind = parts.next().ok_or_else(bad)?;
    let args: Vec<usize> = parts.map(|a| a.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    match (kind, args.as_slice()) {
        ("boolean", &[n]) => FinitePoset::boolean(n),
        ("chain", &[k]) => Ok(FinitePoset::chain(k)),
        ("antichain", &[k]) => Ok(FinitePoset::antichain(k)),
        ("fork", &[n]) => Ok(FinitePoset::fork(n)),
        ("diamond", &[n]) => Ok(FinitePoset::diamond(n)),
        ("truncated", &[n, s, t]) => FinitePoset::truncated(n, s, t),
        _ => Err(bad()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingKind {
    Induced,
    Weak,
}

impl fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingKind::Induced => "induced",
            EmbeddingKind::Weak => "weak",
        })
    }
}

/// A map from poset elements (by index) to lattice vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub kind: EmbeddingKind,
    pub map: Vec<Vertex>,
}

impl Embedding {
    pub fn new(kind: EmbeddingKind, map: Vec<Vertex>) -> Self {
        Embedding { kind, map }
    }

    pub fn as_kind(&self, kind: EmbeddingKind) -> Embedding {
        Embedding { kind, map: self.map.clone() }
    }
}

/// Injectivity plus the induced (`⇔`) or weak (`⇒`) order condition on all pairs.
pub fn verify_embedding(e: &Embedding, p: &FinitePoset) -> bool {
    if e.map.len() != p.len() {
        return false;
    }
    for i in 0..p.len() {
        for j in 0..p.len() {
            if i == j {
                continue;
            }
            let (a, b) = (&e.map[i], &e.map[j]);
            if a == b {
                return false;
            }
            let sub = a.is_subset(b);
            let ok = match e.kind {
                EmbeddingKind::Induced => p.leq(i, j) == sub,
                EmbeddingKind::Weak => !p.leq(i, j) || sub,
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// `verify_embedding` plus every image having color `color` under `table`.
pub fn verify_colored(e: &Embedding, p: &FinitePoset, table: &ColorTable, color: Color) -> bool {
    verify_embedding(e, p) && e.map.iter().all(|v| table.color_of(v) == Ok(color))
}

/// Precomputed backtracking order for embedding `p` into a lattice of bit masks.
#[derive(Clone, Debug)]
pub struct SearchPlan {
    order: Vec<usize>,
    /// For each position, earlier positions that must map below / above / incomparably.
    below: Vec<Vec<usize>>,
    above: Vec<Vec<usize>>,
    incomparable: Vec<Vec<usize>>,
    kind: EmbeddingKind,
}

impl SearchPlan {
    /// Plan over the most-constrained-first linear extension; `first`, when set,
    /// is moved to the front so it can be pinned.
    pub fn new(p: &FinitePoset, kind: EmbeddingKind, first: Option<usize>) -> Self {
        let mut order = p.linear_extension();
        if let Some(f) = first {
            order.retain(|&x| x != f);
            order.insert(0, f);
        }
        let mut below = Vec::with_capacity(order.len());
        let mut above = Vec::with_capacity(order.len());
        let mut incomparable = Vec::with_capacity(order.len());
        for (pos, &e) in order.iter().enumerate() {
            let earlier = &order[..pos];
            below.push((0..pos).filter(|&q| p.lt(earlier[q], e)).collect());
            above.push((0..pos).filter(|&q| p.lt(e, earlier[q])).collect());
            incomparable.push((0..pos).filter(|&q| !p.comparable(earlier[q], e)).collect());
        }
        SearchPlan { order, below, above, incomparable, kind }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Finds images (indexed by poset element) among the masks of `Q_dim` accepted
    /// by `allowed`, optionally forcing the first planned element onto `pin`.
    pub fn search(&self, dim: u32, allowed: &dyn Fn(u32) -> bool, pin: Option<u32>) -> Option<Vec<u32>> {
        let mut found = None;
        self.for_each(dim, allowed, pin, &mut |images| {
            found = Some(images.to_vec());
            false
        });
        found
    }

    /// Calls `visit` with every embedding (images indexed by poset element) until
    /// it returns `false`.
    pub fn for_each(&self, dim: u32, allowed: &dyn Fn(u32) -> bool, pin: Option<u32>, visit: &mut dyn FnMut(&[u32]) -> bool) {
        let mut images = vec![0u32; self.order.len()];
        let mut by_element = vec![0u32; self.order.len()];
        let mut report = |images: &[u32]| {
            for (pos, &e) in self.order.iter().enumerate() {
                by_element[e] = images[pos];
            }
            visit(&by_element)
        };
        if self.order.is_empty() {
            report(&images);
            return;
        }
        let full = if dim >= 32 { u32::MAX } else { (1u32 << dim) - 1 };
        match pin {
            Some(mask) => {
                if allowed(mask) {
                    images[0] = mask;
                    self.extend(1, full, allowed, &mut images, &mut report);
                }
            }
            None => {
                self.extend(0, full, allowed, &mut images, &mut report);
            }
        }
    }

    /// Returns `false` once the visitor asks to stop.
    fn extend(&self, pos: usize, full: u32, allowed: &dyn Fn(u32) -> bool, images: &mut [u32], visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if pos == self.order.len() {
            return visit(images);
        }
        let lower = self.below[pos].iter().fold(0u32, |acc, &q| acc | images[q]);
        let upper = self.above[pos].iter().fold(full, |acc, &q| acc & images[q]);
        if lower & !upper != 0 {
            return true;
        }
        let free = upper & !lower;
        let mut sub = 0u32;
        loop {
            let cand = lower | sub;
            if self.accepts(pos, cand, allowed, images) {
                images[pos] = cand;
                if !self.extend(pos + 1, full, allowed, images, visit) {
                    return false;
                }
            }
            if sub == free {
                return true;
            }
            // next submask of `free` in increasing order
            sub = (sub | !free).wrapping_add(1) & free;
        }
    }

    fn accepts(&self, pos: usize, cand: u32, allowed: &dyn Fn(u32) -> bool, images: &[u32]) -> bool {
        if images[..pos].contains(&cand) {
            return false;
        }
        if self.kind == EmbeddingKind::Induced {
            for &q in &self.incomparable[pos] {
                let other = images[q];
                if cand & other == cand || cand & other == other {
                    return false;
                }
            }
        }
        allowed(cand)
    }
}

/// Searches the lattice colored by `table` for a copy of `p` in `color`.
///
/// Returns a verified embedding, or `None` exactly when no such copy exists.
pub fn find_mono_copy(table: &ColorTable, p: &FinitePoset, color: Color, kind: EmbeddingKind) -> Option<Embedding> {
    let plan = SearchPlan::new(p, kind, None);
    let allowed = |mask: u32| table.at(mask) == color;
    let images = plan.search(table.dimension() as u32, &allowed, None)?;
    let e = Embedding::new(kind, images.into_iter().map(|m| Vertex::from_mask(m as u64)).collect());
    debug_assert!(verify_colored(&e, p, table, color));
    Some(e)
}

/// Exhaustive cross-check for `find_mono_copy`: tries every injection of `p`
/// into the vertices of `color`. Limited to `|P| ≤ 6` and `N ≤ 4`.
pub fn brute_force_copy_exists(table: &ColorTable, p: &FinitePoset, color: Color, kind: EmbeddingKind) -> Result<bool, PosetError> {
    if p.len() > 6 || table.dimension() > 4 {
        return Err(PosetError::TooLarge(format!(
            "brute force needs |P| ≤ 6 and N ≤ 4, got |P| = {} and N = {}",
            p.len(),
            table.dimension()
        )));
    }
    let pool: Vec<Vertex> = (0..table.cells() as u64)
        .filter(|&m| table.at(m as u32) == color)
        .map(Vertex::from_mask)
        .collect();
    let mut map = Vec::with_capacity(p.len());
    let mut used = vec![false; pool.len()];
    Ok(try_injections(p, kind, &pool, &mut used, &mut map))
}

fn try_injections(p: &FinitePoset, kind: EmbeddingKind, pool: &[Vertex], used: &mut [bool], map: &mut Vec<Vertex>) -> bool {
    if map.len() == p.len() {
        return verify_embedding(&Embedding::new(kind, map.clone()), p);
    }
    for i in 0..pool.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        map.push(pool[i].clone());
        let found = try_injections(p, kind, pool, used, map);
        map.pop();
        used[i] = false;
        if found {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(dim: usize, red: &[u32]) -> ColorTable {
        ColorTable::from_fn(dim, |m| if red.contains(&m) { Color::Red } else { Color::Blue }).unwrap()
    }

    #[test]
    fn named_posets() {
        let d2 = make_poset("diamond:2").unwrap();
        let q2 = make_poset("boolean:2").unwrap();
        assert!(d2.is_isomorphic(&q2).unwrap());
        assert!(make_poset("fork:1").unwrap().is_isomorphic(&FinitePoset::chain(2)).unwrap());
        assert_eq!(make_poset("truncated:3:1:2").unwrap().len(), 6);
        assert_eq!(make_poset("boolean:3").unwrap().len(), 8);
        assert_eq!(make_poset("fork:4").unwrap().len(), 5);
        assert_eq!(make_poset("diamond:4").unwrap().len(), 6);
        assert!(!make_poset("fork:2").unwrap().is_isomorphic(&FinitePoset::chain(3)).unwrap());
        for bad in ["boolean", "chain:x", "cube:3", "truncated:3:2:1", "fork:1:2"] {
            assert!(make_poset(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn relation_file() {
        let p = FinitePoset::parse_relation_file("f", "k=4\n0<1\n1<2\n0<3\n").unwrap();
        assert!(p.leq(0, 2) && !p.comparable(2, 3));
        assert!(matches!(
            FinitePoset::parse_relation_file("f", "k=2\n0<1\n1<0\n"),
            Err(PosetError::NotPartialOrder(_))
        ));
        assert!(FinitePoset::parse_relation_file("f", "k=2\n0<5\n").is_err());
        assert!(FinitePoset::parse_relation_file("f", "n=2\n").is_err());
    }

    #[test]
    fn matrix_axioms_are_checked() {
        let not_transitive = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        assert!(FinitePoset::from_matrix("x", not_transitive).is_err());
        assert!(FinitePoset::from_matrix("x", vec![vec![false]]).is_err());
    }

    #[test]
    fn verify_examples() {
        let q2 = FinitePoset::boolean(2).unwrap();
        let id = Embedding::new(EmbeddingKind::Induced, q2.family().unwrap().to_vec());
        assert!(verify_embedding(&id, &q2));
        assert!(verify_embedding(&id.as_kind(EmbeddingKind::Weak), &q2));
        let bad = Embedding::new(EmbeddingKind::Weak, vec![Vertex::from_members([0]), Vertex::from_members([1])]);
        assert!(!verify_embedding(&bad, &FinitePoset::chain(2)));
        // a weak copy of the 2-antichain may use comparable vertices, an induced one may not
        let chainlike = vec![Vertex::from_members([0]), Vertex::from_members([0, 1])];
        assert!(verify_embedding(&Embedding::new(EmbeddingKind::Weak, chainlike.clone()), &FinitePoset::antichain(2)));
        assert!(!verify_embedding(&Embedding::new(EmbeddingKind::Induced, chainlike), &FinitePoset::antichain(2)));
    }

    #[test]
    fn find_examples() {
        let red3 = ColorTable::uniform(3, Color::Red).unwrap();
        let q3 = FinitePoset::boolean(3).unwrap();
        let e = find_mono_copy(&red3, &q3, Color::Red, EmbeddingKind::Induced).unwrap();
        assert!(verify_colored(&e, &q3, &red3, Color::Red));

        let only_empty_red = table(2, &[0]);
        let fork = FinitePoset::fork(2);
        assert!(find_mono_copy(&only_empty_red, &fork, Color::Red, EmbeddingKind::Induced).is_none());
        assert!(find_mono_copy(&only_empty_red, &fork, Color::Blue, EmbeddingKind::Induced).is_none());
    }

    #[test]
    fn brute_force_examples() {
        let blue = ColorTable::uniform(2, Color::Blue).unwrap();
        assert!(brute_force_copy_exists(&blue, &FinitePoset::antichain(2), Color::Blue, EmbeddingKind::Induced).unwrap());
        assert!(!brute_force_copy_exists(&blue, &FinitePoset::antichain(3), Color::Blue, EmbeddingKind::Induced).unwrap());
        let big = ColorTable::uniform(5, Color::Blue).unwrap();
        assert!(brute_force_copy_exists(&big, &FinitePoset::chain(2), Color::Blue, EmbeddingKind::Weak).is_err());
    }

    #[test]
    fn chain_search_agrees_with_brute_force_on_q3() {
        let chain = FinitePoset::chain(2);
        for bits in 0u32..256 {
            let t = ColorTable::from_fn(3, |m| if bits >> m & 1 == 1 { Color::Red } else { Color::Blue }).unwrap();
            for color in [Color::Blue, Color::Red] {
                for kind in [EmbeddingKind::Induced, EmbeddingKind::Weak] {
                    let fast = find_mono_copy(&t, &chain, color, kind).is_some();
                    assert_eq!(fast, brute_force_copy_exists(&t, &chain, color, kind).unwrap());
                }
            }
        }
    }

    #[test]
    fn pinned_search_uses_the_pin() {
        let q2 = FinitePoset::boolean(2).unwrap();
        let top = 3; // element index of {0,1}
        let plan = SearchPlan::new(&q2, EmbeddingKind::Induced, Some(top));
        let all = |_: u32| true;
        let images = plan.search(3, &all, Some(0b110)).unwrap();
        assert_eq!(images[top], 0b110);
        assert!(plan.search(3, &all, Some(0b100)).is_none());
    }

    proptest! {
        #[test]
        fn induced_success_implies_weak_success(bits in any::<u16>(), which in 0usize..6, red in any::<bool>()) {
            let posets = ["chain:2", "chain:3", "antichain:2", "antichain:3", "fork:2", "diamond:2"];
            let p = make_poset(posets[which]).unwrap();
            let t = ColorTable::from_fn(4, |m| if bits >> m & 1 == 1 { Color::Red } else { Color::Blue }).unwrap();
            let color = if red { Color::Red } else { Color::Blue };
            if let Some(e) = find_mono_copy(&t, &p, color, EmbeddingKind::Induced) {
                prop_assert!(verify_colored(&e, &p, &t, color));
                prop_assert!(find_mono_copy(&t, &p, color, EmbeddingKind::Weak).is_some());
            }
            if let Some(e) = find_mono_copy(&t, &p, color, EmbeddingKind::Weak) {
                prop_assert!(verify_colored(&e, &p, &t, color));
            }
        }
    }
}

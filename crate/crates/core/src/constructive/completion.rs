//! Layer-by-layer completion of a Boolean-lattice copy through disjoint
//! reservoirs, shared by the blob lemma and its truncated variants.

use super::{hypothesis, BooleanCopy, ConstructError};
use crate::lattice::{Blob, Color, Coloring, Combinations, Vertex};

/// Domains larger than this are never listed subset by subset; runs over
/// them only end through a monochromatic-blob certificate or the budget.
pub const MAX_MATERIALIZED_DOMAIN: usize = 16;

/// Images already fixed on the lower layers of the domain lattice.
#[derive(Clone, Debug, PartialEq)]
pub enum Prefix {
    /// Explicit `(W, φ(W))` pairs.
    Listed(Vec<(Vertex, Vertex)>),
    /// `φ(W) = S ∪ W`.
    Shifted(Vertex),
    /// Not recorded; only valid for runs that cannot finish by listing.
    Opaque,
}

enum Fill {
    Image(Vertex),
    Exit(BooleanCopy),
}

/// Finds, for each `W ⊆ domain` with `lo ≤ |W| ≤ hi`, a `target`-colored
/// vertex of
/// `B(W ∪ carried ∪ R_lo ∪ … ∪ R_{|W|−1}; R_{|W|})`, or stops at the first
/// blob with none, which is then a copy of `Q_{|R|}` in the other color.
pub(crate) struct Completion<'c> {
    pub coloring: &'c Coloring,
    pub domain: Vec<u32>,
    pub carried: Vertex,
    pub lo: usize,
    pub hi: usize,
    pub reservoirs: Vec<Vertex>,
    pub target: Color,
}

impl Completion<'_> {
    fn large(&self) -> bool {
        self.domain.len() > MAX_MATERIALIZED_DOMAIN
    }

    fn blob_for(&self, w: &Vertex) -> Blob {
        let k = w.len() - self.lo;
        let base = self.reservoirs[..k].iter().fold(w.union(&self.carried), |acc, r| acc.union(r));
        Blob { base, variable: self.reservoirs[k].clone(), truncation: None }
    }

    /// What a uniform-color certificate alone says about the blob of `w`.
    fn certified(&self, blob: &Blob) -> Result<Option<Fill>, ConstructError> {
        Ok(match self.coloring.uniform_on(blob)? {
            None => None,
            Some(c) if c != self.target => Some(Fill::Exit(BooleanCopy::from_blob(c, blob, blob.dimension()))),
            // A target-colored blob at least as wide as the domain already
            // holds the copy being built.
            Some(c) if self.large() && blob.dimension() >= self.domain.len() => {
                Some(Fill::Exit(BooleanCopy::from_blob(c, blob, self.domain.len())))
            }
            Some(_) => blob.first().map(Fill::Image),
        })
    }

    fn fill(&self, w: &Vertex) -> Result<Fill, ConstructError> {
        let blob = self.blob_for(w);
        if let Some(f) = self.certified(&blob)? {
            return Ok(f);
        }
        Ok(match self.coloring.find_in_blob(&blob, self.target)? {
            Some(z) => Fill::Image(z),
            None => Fill::Exit(BooleanCopy::from_blob(self.target.opposite(), &blob, blob.dimension())),
        })
    }

    fn chain(&self, k: usize) -> Vertex {
        Vertex::from_members(self.domain[..k].iter().copied())
    }

    /// Walks the chain of domain prefixes using certificates only and
    /// returns the first exit; stops at the first blob without a certificate.
    pub fn probe(&self) -> Result<Option<BooleanCopy>, ConstructError> {
        for k in self.lo..=self.hi {
            let blob = self.blob_for(&self.chain(k));
            match self.certified(&blob)? {
                Some(Fill::Exit(copy)) => return Ok(Some(copy)),
                Some(Fill::Image(_)) => {}
                None => break,
            }
        }
        Ok(None)
    }

    pub fn run(&self, prefix: Prefix, lower: usize) -> Result<BooleanCopy, ConstructError> {
        if self.large() {
            if self.coloring.budget().is_none() {
                return Err(ConstructError::Unbounded { elements: self.domain.len() });
            }
            if let Some(copy) = self.probe()? {
                return Ok(copy);
            }
            for k in self.lo..=self.hi {
                for w in Combinations::new(self.domain.clone(), k) {
                    if let Fill::Exit(copy) = self.fill(&Vertex::from_members(w))? {
                        return Ok(copy);
                    }
                }
            }
            return Err(ConstructError::BadParameters(format!(
                "completion over {} elements finished without a certificate and cannot be listed",
                self.domain.len()
            )));
        }
        let mut images = match prefix {
            Prefix::Listed(v) => v,
            Prefix::Shifted(s) => (0..self.lo.min(self.domain.len() + 1))
                .flat_map(|k| Combinations::new(self.domain.clone(), k))
                .map(|w| {
                    let w = Vertex::from_members(w);
                    let img = s.union(&w);
                    (w, img)
                })
                .collect(),
            Prefix::Opaque => {
                return Err(ConstructError::BadParameters("listing a completion needs the prefix images".into()))
            }
        };
        for k in self.lo..=self.hi {
            for w in Combinations::new(self.domain.clone(), k) {
                let w = Vertex::from_members(w);
                match self.fill(&w)? {
                    Fill::Image(z) => images.push((w, z)),
                    Fill::Exit(copy) => return Ok(copy),
                }
            }
        }
        Ok(BooleanCopy::from_map(self.target, self.domain.clone(), lower, self.hi, images))
    }
}

fn chunks(pool: &Vertex, size: usize, count: usize) -> Vec<Vertex> {
    let members = pool.members();
    (0..count)
        .map(|i| Vertex::from_members(members[i * size..(i + 1) * size].iter().copied()))
        .collect()
}

/// Red `Q_n` or blue `Q_m` in any coloring of `Q([N])` with
/// `N ≥ nm + n + m`, using the domain `{0..n}` and `n + 1` reservoirs of
/// size `m` after it.
pub fn blob_lemma_embed(coloring: &Coloring, m: usize, n: usize) -> Result<BooleanCopy, ConstructError> {
    if m == 0 || n == 0 {
        return Err(ConstructError::BadParameters("the blob lemma needs m, n ≥ 1".into()));
    }
    let required = n * m + n + m;
    let dimension = coloring.ground().size;
    if dimension < required {
        return Err(ConstructError::DimensionTooSmall { dimension, required });
    }
    let pool = Vertex::range(n as u32, required as u32);
    Completion {
        coloring,
        domain: (0..n as u32).collect(),
        carried: Vertex::empty(),
        lo: 0,
        hi: n,
        reservoirs: chunks(&pool, m, n + 1),
        target: Color::Red,
    }
    .run(Prefix::Listed(Vec::new()), 0)
}

/// A `target`-colored copy of `Q(domain)_s^t` lying above `base`, or a copy
/// of `Q_{|domain|}` in the other color, using reservoirs of size
/// `|domain|` drawn in order from `pool`.
pub fn layer_band_embed(
    coloring: &Coloring,
    base: &Vertex,
    domain: &[u32],
    pool: &Vertex,
    s: usize,
    t: usize,
    target: Color,
) -> Result<BooleanCopy, ConstructError> {
    let n = domain.len();
    if n == 0 || s > t || t > n {
        return Err(ConstructError::BadParameters(format!("need 0 ≤ s ≤ t ≤ n with n ≥ 1, got n={n} s={s} t={t}")));
    }
    let dom = Vertex::from_members(domain.iter().copied());
    if !pool.is_disjoint(&dom) || !base.is_disjoint(&dom) || !base.is_disjoint(pool) {
        return Err(ConstructError::BadParameters("base, domain and pool must be disjoint".into()));
    }
    let needed = (t - s + 1) * n;
    if pool.len() < needed {
        return Err(ConstructError::DimensionTooSmall { dimension: n + pool.len(), required: needed + n });
    }
    Completion {
        coloring,
        domain: domain.to_vec(),
        carried: base.clone(),
        lo: s,
        hi: t,
        reservoirs: chunks(pool, n, t - s + 1),
        target,
    }
    .run(Prefix::Listed(Vec::new()), s)
}

/// Red `Q([n])_s^t` or blue `Q_n` in a coloring of `Q([N])` with
/// `N ≥ (t − s + 2)n`.
pub fn truncated_completion_iv(coloring: &Coloring, n: usize, s: usize, t: usize) -> Result<BooleanCopy, ConstructError> {
    let dimension = coloring.ground().size;
    if s <= t && dimension < (t - s + 2) * n {
        return Err(ConstructError::DimensionTooSmall { dimension, required: (t - s + 2) * n });
    }
    let domain: Vec<u32> = (0..n as u32).collect();
    let pool = Vertex::range(n as u32, dimension as u32);
    layer_band_embed(coloring, &Vertex::empty(), &domain, &pool, s, t, Color::Red)
}

pub(crate) fn truncated_completion<'c>(
    coloring: &'c Coloring,
    domain: &[u32],
    t: usize,
    support: &Vertex,
    other: usize,
    target: Color,
) -> Result<Completion<'c>, ConstructError> {
    let n = domain.len();
    let dom = Vertex::from_members(domain.iter().copied());
    if !dom.is_subset(support) {
        return Err(ConstructError::BadParameters("the support must contain the domain".into()));
    }
    if t >= n {
        return Err(ConstructError::BadParameters(format!("nothing to complete above layer {t} of Q_{n}")));
    }
    let dimension = coloring.ground().size;
    let need = (n - t) * other;
    if support.len() + need > dimension {
        return Err(hypothesis("support volume ≤ N − (n − t)m", support.len(), dimension as i64 - need as i64));
    }
    let free = Vertex::range(0, dimension as u32).difference(support);
    Ok(Completion {
        coloring,
        domain: domain.to_vec(),
        carried: support.difference(&dom),
        lo: t + 1,
        hi: n,
        reservoirs: chunks(&free, other, n - t),
        target,
    })
}

/// Extends a `target`-colored copy of `Q(domain)_0^t`, whose images all lie
/// in `support`, to all of `Q(domain)`, or returns a copy of `Q_other` in
/// the other color.
pub fn complete_truncated(
    coloring: &Coloring,
    domain: &[u32],
    t: usize,
    prefix: Prefix,
    support: &Vertex,
    other: usize,
    target: Color,
) -> Result<BooleanCopy, ConstructError> {
    truncated_completion(coloring, domain, t, support, other, target)?.run(prefix, 0)
}

/// Starting from the monochromatic truncated blob `B(S; T)` with at most `t`
/// elements of `T`, a `target`-colored `Q(T)` or a copy of `Q_other` in the
/// other color.
pub fn complete_from_mono_blob(
    coloring: &Coloring,
    base: &Vertex,
    variable: &Vertex,
    t: usize,
    other: usize,
    target: Color,
) -> Result<BooleanCopy, ConstructError> {
    let blob = Blob::above(base.clone(), variable.clone(), t)?;
    if let Some(z) = coloring.find_in_blob(&blob, target.opposite())? {
        return Err(hypothesis("truncated blob is monochromatic", z, format!("a {target} blob")));
    }
    if t >= variable.len() {
        // Not truncated at all: the blob is the copy.
        return Ok(BooleanCopy::from_blob(target, &blob, variable.len()));
    }
    let support = base.union(variable);
    let domain = variable.members();
    complete_truncated(coloring, &domain, t, Prefix::Shifted(base.clone()), &support, other, target)
}

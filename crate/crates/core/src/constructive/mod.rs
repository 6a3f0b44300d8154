//! Constructive embeddings: the blob lemma and its truncated variants, the
//! `Q_m` versus `Q_n` construction, the diamond and fork finders, and the
//! layered-chain weak copy of `Q_n`.
//!
//! Every routine returns a copy together with enough structure to check it
//! again against the coloring, and [`BooleanCopy::verify`] does that check.

mod completion;
mod sausage;
mod sperner;
mod thm11;

use serde::Serialize;
use thiserror::Error;

use crate::extremal::ExtremalError;
use crate::lattice::{Blob, Color, Coloring, LatticeError, Vertex};
use crate::posets::{verify_embedding, Embedding, EmbeddingKind, FinitePoset, PosetError};

pub use completion::{
    blob_lemma_embed, complete_from_mono_blob, complete_truncated, layer_band_embed, truncated_completion_iv,
    Prefix, MAX_MATERIALIZED_DOMAIN,
};
pub use sausage::{sausage_chain_build, SausageLayout, WeakCopyOutcome, WeakCopyReport};
pub use sperner::{find_mono_diamond, find_mono_fork, witness_coloring, MonoCopy, WitnessKind};
pub use thm11::{phase1_scan, thm11_construct, Branch, LayerAudit, Thm11Options, Thm11Report, TruncationPlan};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructError {
    #[error("oracle query budget of {budget} exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("lattice: {0}")]
    Lattice(LatticeError),
    #[error("parameters: {0}")]
    Extremal(#[from] ExtremalError),
    #[error("poset: {0}")]
    Poset(#[from] PosetError),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("hypothesis `{name}` fails: {lhs} > {rhs}")]
    HypothesisViolated { name: String, lhs: String, rhs: String },
    #[error("budget identity `{identity}` fails: {lhs} > {rhs}")]
    InfeasibleArithmetic { identity: String, lhs: String, rhs: String },
    #[error("all-red blob B({base}; {variable}) of small volume found after the exhaustive scan found none")]
    PropertyStarViolated { base: Vertex, variable: Vertex },
    #[error("host dimension {dimension} below the required {required}")]
    DimensionTooSmall { dimension: usize, required: usize },
    #[error("a run over {elements} ground elements needs an oracle query budget")]
    Unbounded { elements: usize },
    #[error("construction produced an invalid object: {0}")]
    BugCertificate(String),
}

impl From<LatticeError> for ConstructError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::BudgetExceeded { budget } => ConstructError::BudgetExceeded { budget },
            other => ConstructError::Lattice(other),
        }
    }
}

pub(crate) fn infeasible(identity: &str, lhs: impl ToString, rhs: impl ToString) -> ConstructError {
    ConstructError::InfeasibleArithmetic { identity: identity.into(), lhs: lhs.to_string(), rhs: rhs.to_string() }
}

pub(crate) fn hypothesis(name: &str, lhs: impl ToString, rhs: impl ToString) -> ConstructError {
    ConstructError::HypothesisViolated { name: name.into(), lhs: lhs.to_string(), rhs: rhs.to_string() }
}

/// Largest copy dimension that is expanded into an explicit poset embedding.
pub const MAX_MATERIALIZED_DIMENSION: usize = 12;

/// How a copy of `Q(domain)_lower^upper` sits in the host lattice.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CopyShape {
    /// All of `B(S; T)`: the subset `W ⊆ T` maps to `S ∪ W`.
    Blob(Blob),
    /// Explicit images keyed by subsets of `domain`, sorted by key.
    Map { domain: Vec<u32>, images: Vec<(Vertex, Vertex)> },
}

/// A monochromatic copy of a (possibly truncated) Boolean lattice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BooleanCopy {
    pub color: Color,
    pub dimension: usize,
    pub lower: usize,
    pub upper: usize,
    pub shape: CopyShape,
}

impl BooleanCopy {
    /// The full `Q_d` spanned by the first `d` variable elements of `blob`.
    pub fn from_blob(color: Color, blob: &Blob, d: usize) -> Self {
        let variable = blob.variable.take_smallest(d);
        BooleanCopy {
            color,
            dimension: d,
            lower: 0,
            upper: d,
            shape: CopyShape::Blob(Blob { base: blob.base.clone(), variable, truncation: None }),
        }
    }

    pub fn from_map(color: Color, domain: Vec<u32>, lower: usize, upper: usize, mut images: Vec<(Vertex, Vertex)>) -> Self {
        images.sort();
        BooleanCopy { color, dimension: domain.len(), lower, upper, shape: CopyShape::Map { domain, images } }
    }

    pub fn is_full(&self) -> bool {
        self.lower == 0 && self.upper == self.dimension
    }

    /// Number of vertices in the copy, when it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        if self.dimension >= 64 {
            return None;
        }
        Some((self.lower..=self.upper).map(|k| binom_u64(self.dimension, k)).sum())
    }

    /// The image of the subset with bit pattern `pattern` over the copy's
    /// own coordinates.
    fn image_of(&self, pattern: u64) -> Option<Vertex> {
        match &self.shape {
            CopyShape::Blob(b) => {
                let vars = b.variable.members();
                let extra = Vertex::from_members((0..self.dimension).filter(|j| pattern >> j & 1 == 1).map(|j| vars[j]));
                Some(b.base.union(&extra))
            }
            CopyShape::Map { domain, images } => {
                let key = Vertex::from_members((0..self.dimension).filter(|j| pattern >> j & 1 == 1).map(|j| domain[j]));
                images.binary_search_by(|(k, _)| k.cmp(&key)).ok().map(|i| images[i].1.clone())
            }
        }
    }

    /// The copy as an induced embedding of `Q_d` (or its truncation),
    /// for `d ≤ MAX_MATERIALIZED_DIMENSION`.
    pub fn materialize(&self) -> Result<(FinitePoset, Embedding), ConstructError> {
        if self.dimension > MAX_MATERIALIZED_DIMENSION {
            return Err(ConstructError::BadParameters(format!(
                "copy of dimension {} is too large to list",
                self.dimension
            )));
        }
        let poset = if self.is_full() {
            FinitePoset::boolean(self.dimension)?
        } else {
            FinitePoset::truncated(self.dimension, self.lower, self.upper)?
        };
        let mut map = Vec::with_capacity(poset.len());
        for pattern in 0..1u64 << self.dimension {
            if !(self.lower..=self.upper).contains(&(pattern.count_ones() as usize)) {
                continue;
            }
            let image = self
                .image_of(pattern)
                .ok_or_else(|| ConstructError::BugCertificate(format!("no image for pattern {pattern:b}")))?;
            map.push(image);
        }
        Ok((poset, Embedding::new(EmbeddingKind::Induced, map)))
    }

    /// Re-checks the copy against `coloring`. Small copies are checked vertex
    /// by vertex; a large blob copy needs a uniform-color certificate.
    pub fn verify(&self, coloring: &Coloring) -> Result<bool, ConstructError> {
        if let CopyShape::Blob(b) = &self.shape {
            let inside = coloring.ground().contains(&b.base.union(&b.variable));
            if !inside || b.truncation.is_some() || b.dimension() != self.dimension || !self.is_full() {
                return Ok(false);
            }
            if self.dimension > MAX_MATERIALIZED_DIMENSION {
                return Ok(coloring.uniform_on(b)? == Some(self.color));
            }
        }
        let (poset, embedding) = self.materialize()?;
        if !verify_embedding(&embedding, &poset) {
            return Ok(false);
        }
        for v in &embedding.map {
            if coloring.color_of(v)? != self.color {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub(crate) fn binom_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// The first `count` vertices of the middle layer of the interval `[lo, hi]`,
/// an antichain strictly between the endpoints when `|hi ∖ lo| ≥ 2`.
pub(crate) fn middle_antichain(lo: &Vertex, hi: &Vertex, count: usize) -> Vec<Vertex> {
    let free = hi.difference(lo).members();
    let k = free.len() / 2;
    crate::lattice::Combinations::new(free, k)
        .take(count)
        .map(|extra| lo.union(&Vertex::from_members(extra)))
        .collect()
}

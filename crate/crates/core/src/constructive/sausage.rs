//! Weak copies of `Q_n` in `Q([N])` with `N ≈ 0.96n²`: the low and high
//! layers of `Q_n` are drawn from a nested chain of small intervals
//! ("sausages") at both ends of the host, and the middle layers come from a
//! truncated completion inside the interval left between them.

use serde::Serialize;

use super::completion::layer_band_embed;
use super::{binom_u64, BooleanCopy, ConstructError, CopyShape};
use crate::extremal::{binomial, ceil_log2};
use crate::lattice::{Blob, Color, Coloring, Vertex};
use crate::numerics::solve_q;
use crate::posets::{verify_embedding, Embedding, EmbeddingKind, FinitePoset};

/// Sizes that fix where everything goes for one `(n, N)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SausageLayout {
    pub n: usize,
    pub dimension: usize,
    /// `⌊qn⌋` and `⌈qn⌉` with `H(q) = ½`.
    pub floor_qn: usize,
    pub ceil_qn: usize,
    /// `|Z_i| = Σ_{j ≤ i} (⌈log C(n, j)⌉ + 1)` for `0 ≤ i ≤ ⌊qn⌋`.
    pub chain_sizes: Vec<usize>,
    /// Dimension of the middle interval `[Z_{⌊qn⌋}, Z'_{⌊qn⌋}]`.
    pub middle_dimension: usize,
    /// `(n − ⌈qn⌉ + 2)n`, what the middle interval must provide.
    pub middle_required: usize,
}

impl SausageLayout {
    pub fn new(n: usize, dimension: usize) -> Result<Self, ConstructError> {
        if !(1..=64).contains(&n) {
            return Err(ConstructError::BadParameters(format!("weak copy needs 1 ≤ n ≤ 64, got {n}")));
        }
        let q = solve_q();
        let qn = q * n as f64;
        let (floor_qn, ceil_qn) = (qn.floor() as usize, qn.ceil() as usize);
        let mut chain_sizes = Vec::with_capacity(floor_qn + 1);
        let mut total = 0;
        for j in 0..=floor_qn {
            total += ceil_log2(&binomial(n as u64, j as u64)) as usize + 1;
            chain_sizes.push(total);
        }
        let middle_dimension = dimension.saturating_sub(2 * total);
        let middle_required = (n - ceil_qn + 2) * n;
        Ok(SausageLayout { n, dimension, floor_qn, ceil_qn, chain_sizes, middle_dimension, middle_required })
    }

    /// Smallest host dimension the layout fits in.
    pub fn required_dimension(&self) -> usize {
        2 * self.chain_sizes.last().copied().unwrap_or(0) + self.middle_required
    }

    /// Vertex counts of lower and upper sausage `i`, for `0 ≤ i ≤ ⌊qn⌋`,
    /// found by listing them.
    pub fn sausage_counts(&self) -> Vec<(usize, usize)> {
        (0..=self.floor_qn)
            .map(|i| {
                let (lo, top) = self.lower(i);
                let (hi, bottom) = self.upper(i);
                let low = lo.enumerate().filter(|z| *z != top).count();
                let high = hi.enumerate().filter(|z| *z != bottom).count();
                (low, high)
            })
            .collect()
    }

    /// Lower sausage `i`: `Z_{i−1} ⊆ Z ⊊ Z_i`.
    fn lower(&self, i: usize) -> (Blob, Vertex) {
        let lo = if i == 0 { 0 } else { self.chain_sizes[i - 1] };
        let hi = self.chain_sizes[i];
        let blob = Blob { base: Vertex::range(0, lo as u32), variable: Vertex::range(lo as u32, hi as u32), truncation: None };
        (blob, Vertex::range(0, hi as u32))
    }

    /// Upper sausage `i`: `Z'_i ⊊ Z ⊆ Z'_{i−1}` with `Z'_i = [N] ∖ (last |Z_i| elements)`.
    fn upper(&self, i: usize) -> (Blob, Vertex) {
        let n = self.dimension as u32;
        let lo = if i == 0 { 0 } else { self.chain_sizes[i - 1] as u32 };
        let hi = self.chain_sizes[i] as u32;
        let blob = Blob { base: Vertex::range(0, n - hi), variable: Vertex::range(n - hi, n - lo), truncation: None };
        (blob, Vertex::range(0, n - hi))
    }
}

/// How the copy was put together.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakCopyReport {
    pub layout: SausageLayout,
    pub color: Color,
    /// Majority color of the lower sausages `0..=⌊qn⌋`, then of the upper ones.
    pub lower_majorities: Vec<Color>,
    pub upper_majorities: Vec<Color>,
    /// Number of vertices in each lower and each upper sausage.
    pub lower_sizes: Vec<usize>,
    pub upper_sizes: Vec<usize>,
    /// Layers `0..s` come from lower sausages, `t+1..=n` from upper ones.
    pub s: usize,
    pub t: usize,
    /// `Σ_{j<s} C(n,j) + |Q_s^t| + Σ_{j>t} C(n,j)`, which must equal `2^n`.
    pub layer_total: u64,
    pub embedding: Embedding,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeakCopyOutcome {
    Weak(WeakCopyReport),
    /// The middle completion met a blob of the other color: an induced `Q_n`.
    Induced { report_color: Color, copy: BooleanCopy },
}

fn sausage_majority(coloring: &Coloring, blob: &Blob, skip: &Vertex) -> Result<(Color, Vec<Vertex>, Vec<Vertex>), ConstructError> {
    let (mut blue, mut red) = (Vec::new(), Vec::new());
    for z in blob.enumerate().filter(|z| z != skip) {
        match coloring.color_of(&z)? {
            Color::Blue => blue.push(z),
            Color::Red => red.push(z),
        }
    }
    let c = if red.len() >= blue.len() { Color::Red } else { Color::Blue };
    Ok((c, blue, red))
}

/// A monochromatic weak copy of `Q_n` (or an induced `Q_n` of the other
/// color) in the host lattice of `coloring`.
///
/// Ties between sausage colors go to red, both inside a sausage and when
/// counting sausages.
pub fn sausage_chain_build(coloring: &Coloring, n: usize) -> Result<WeakCopyOutcome, ConstructError> {
    let dimension = coloring.ground().size;
    let layout = SausageLayout::new(n, dimension)?;
    let z_top = *layout.chain_sizes.last().expect("chain has at least one link");
    if 2 * z_top > dimension || layout.middle_dimension < layout.middle_required {
        return Err(ConstructError::DimensionTooSmall {
            dimension: layout.middle_dimension,
            required: layout.middle_required,
        });
    }

    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for i in 0..=layout.floor_qn {
        let (blob, top) = layout.lower(i);
        lower.push(sausage_majority(coloring, &blob, &top)?);
        let (blob, bottom) = layout.upper(i);
        upper.push(sausage_majority(coloring, &blob, &bottom)?);
    }
    let reds = lower.iter().chain(&upper).filter(|(c, _, _)| *c == Color::Red).count();
    let color = if 2 * reds >= lower.len() + upper.len() { Color::Red } else { Color::Blue };
    let pick = |entry: &(Color, Vec<Vertex>, Vec<Vertex>)| match color {
        Color::Blue => entry.1.clone(),
        Color::Red => entry.2.clone(),
    };
    let low_idx: Vec<usize> = (0..lower.len()).filter(|&i| lower[i].0 == color).collect();
    let up_idx: Vec<usize> = (0..upper.len()).filter(|&i| upper[i].0 == color).collect();
    let s = low_idx.len().min(layout.ceil_qn);
    let from_top = layout.ceil_qn - s;
    if up_idx.len() < from_top {
        return Err(ConstructError::BugCertificate(format!(
            "{} majority sausages: {} low and {} high, fewer than ⌈qn⌉ = {}",
            color,
            low_idx.len(),
            up_idx.len(),
            layout.ceil_qn
        )));
    }
    let t = n - from_top;

    // Layer j < s of Q_n goes to lower sausage low_idx[j]; layer n − j for
    // j < from_top to upper sausage up_idx[j].
    let mut layer_vertices: Vec<Option<Vec<Vertex>>> = vec![None; n + 1];
    for j in 0..s {
        let mut vs = pick(&lower[low_idx[j]]);
        vs.truncate(binom_u64(n, j) as usize);
        layer_vertices[j] = Some(vs);
    }
    for j in 0..from_top {
        let mut vs = pick(&upper[up_idx[j]]);
        vs.truncate(binom_u64(n, j) as usize);
        layer_vertices[n - j] = Some(vs);
    }
    for (j, vs) in layer_vertices.iter().enumerate() {
        if let Some(vs) = vs {
            if vs.len() as u64 != binom_u64(n, j) {
                return Err(ConstructError::BugCertificate(format!("sausage for layer {j} is too small")));
            }
        }
    }

    let base = Vertex::range(0, z_top as u32);
    let middle = Vertex::range(z_top as u32, (dimension - z_top) as u32);
    let domain = middle.take_smallest(n).members();
    let pool = middle.difference(&Vertex::from_members(domain.iter().copied()));
    let band = layer_band_embed(coloring, &base, &domain, &pool, s, t, color)?;
    if band.color != color {
        return Ok(WeakCopyOutcome::Induced { report_color: color, copy: band });
    }
    let CopyShape::Map { images, .. } = &band.shape else {
        return Err(ConstructError::BugCertificate("middle layers did not come back as a map".into()));
    };

    let poset = FinitePoset::boolean(n)?;
    let mut rank = vec![0usize; n + 1];
    let mut map = Vec::with_capacity(1 << n);
    for pattern in 0..1u64 << n {
        let layer = pattern.count_ones() as usize;
        let image = match &layer_vertices[layer] {
            Some(vs) => vs[rank[layer]].clone(),
            None => {
                let key = Vertex::from_members((0..n).filter(|j| pattern >> j & 1 == 1).map(|j| domain[j]));
                let i = images
                    .binary_search_by(|(k, _)| k.cmp(&key))
                    .map_err(|_| ConstructError::BugCertificate(format!("middle layer misses {key}")))?;
                images[i].1.clone()
            }
        };
        rank[layer] += 1;
        map.push(image);
    }
    let embedding = Embedding::new(EmbeddingKind::Weak, map);
    if !verify_embedding(&embedding, &poset) {
        return Err(ConstructError::BugCertificate("assembled map is not a weak embedding".into()));
    }
    for v in &embedding.map {
        if coloring.color_of(v)? != color {
            return Err(ConstructError::BugCertificate(format!("vertex {v} has the wrong color")));
        }
    }
    let layer_total = (0..s).map(|j| binom_u64(n, j)).sum::<u64>()
        + (s..=t).map(|j| binom_u64(n, j)).sum::<u64>()
        + (t + 1..=n).map(|j| binom_u64(n, j)).sum::<u64>();
    Ok(WeakCopyOutcome::Weak(WeakCopyReport {
        layout,
        color,
        lower_majorities: lower.iter().map(|e| e.0).collect(),
        upper_majorities: upper.iter().map(|e| e.0).collect(),
        lower_sizes: lower.iter().map(|e| e.1.len() + e.2.len()).collect(),
        upper_sizes: upper.iter().map(|e| e.1.len() + e.2.len()).collect(),
        s,
        t,
        layer_total,
        embedding,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ConstantOracle, GroundSet, HashOracle};

    fn host(dim: usize, o: impl crate::lattice::ColorOracle + 'static) -> Coloring {
        Coloring::oracle(GroundSet::new(dim), Box::new(o), None)
    }

    #[test]
    fn layout_for_small_n() {
        let l = SausageLayout::new(8, 74).unwrap();
        assert_eq!((l.floor_qn, l.ceil_qn), (0, 1));
        assert_eq!(l.chain_sizes, vec![1]);
        assert_eq!(l.required_dimension(), 74);
        let l = SausageLayout::new(20, 400).unwrap();
        assert_eq!((l.floor_qn, l.ceil_qn), (2, 3));
        // ⌈log 1⌉+1, ⌈log 20⌉+1, ⌈log 190⌉+1
        assert_eq!(l.chain_sizes, vec![1, 7, 16]);
    }

    #[test]
    fn all_red_gives_red_weak_copy() {
        let c = host(74, ConstantOracle(Color::Red));
        match sausage_chain_build(&c, 8).unwrap() {
            WeakCopyOutcome::Weak(r) => {
                assert_eq!(r.color, Color::Red);
                assert_eq!((r.s, r.t), (1, 8));
                assert_eq!(r.layer_total, 256);
                assert_eq!(r.embedding.map[0], Vertex::empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn all_blue_gives_blue_weak_copy() {
        let c = host(74, ConstantOracle(Color::Blue));
        match sausage_chain_build(&c, 8).unwrap() {
            WeakCopyOutcome::Weak(r) => assert_eq!(r.color, Color::Blue),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn small_host_is_rejected() {
        let c = host(16, ConstantOracle(Color::Red));
        assert_eq!(
            sausage_chain_build(&c, 4),
            Err(ConstructError::DimensionTooSmall { dimension: 14, required: 20 })
        );
    }

    #[test]
    fn random_hosts() {
        for seed in 0..10 {
            let c = host(74, HashOracle { seed, p_blue: 0.3 });
            match sausage_chain_build(&c, 8).unwrap() {
                WeakCopyOutcome::Weak(r) => assert_eq!(r.layer_total, 256),
                WeakCopyOutcome::Induced { copy, .. } => assert!(copy.verify(&c).unwrap()),
            }
        }
        let c = host(112, HashOracle::uniform(3));
        assert!(sausage_chain_build(&c, 10).is_ok());
    }
}

//! Blue `Q_m` or red `Q_n` in `Q([N])` for `N ≈ n(m − (1−ε)² log m)`,
//! built from truncated blobs over a growing family of reservoirs.

use std::collections::HashMap;

use serde::Serialize;

use super::completion::{complete_from_mono_blob, truncated_completion, Prefix, MAX_MATERIALIZED_DOMAIN};
use super::{infeasible, BooleanCopy, ConstructError};
use crate::extremal::{epsilon_condition, epsilon_condition_lhs, ExtremalError};
use crate::lattice::{Blob, Color, Coloring, Combinations, Vertex};

/// Integer parameters of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncationPlan {
    pub m: usize,
    pub n: usize,
    pub epsilon: f64,
    /// `⌊(1−ε) log m⌋`: layers of `Q(X)` built from blobs.
    pub t_mu: usize,
    /// `⌊(n/m) t_μ⌋`: truncation height of each blob.
    pub t_eta: usize,
    /// `n(m − (1−ε)² log m)`.
    pub real_dimension: f64,
    /// Host dimension actually used.
    pub dimension: usize,
    /// Blobs of volume at most `εm t_η` are the ones the all-blue property covers.
    pub small_volume: f64,
    /// Whether the host dimension was given explicitly instead of derived.
    pub overridden: bool,
}

impl TruncationPlan {
    pub fn new(m: usize, n: usize, epsilon: f64, host: Option<usize>) -> Result<Self, ConstructError> {
        if !(m >= 2 && n >= m) || !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ConstructError::BadParameters(format!("need n ≥ m ≥ 2 and 0 < ε < 1, got m={m} n={n} ε={epsilon}")));
        }
        let log_m = (m as f64).log2();
        // The guard keeps exact powers of two from flooring one short.
        let t_mu = (((1.0 - epsilon) * log_m + 1e-12).floor() as usize).min(m);
        let t_eta = (n * t_mu / m).min(n);
        let real_dimension = n as f64 * (m as f64 - (1.0 - epsilon).powi(2) * log_m);
        let dimension = host.unwrap_or(real_dimension.max(0.0).floor() as usize);
        Ok(TruncationPlan {
            m,
            n,
            epsilon,
            t_mu,
            t_eta,
            real_dimension,
            dimension,
            small_volume: epsilon * m as f64 * t_eta as f64,
            overridden: host.is_some(),
        })
    }

    /// `|Y⁽⁰⁾| = n` and `|Y⁽ⁱ⁾| = 2^{i−1} t_η` for `1 ≤ i ≤ t_μ`.
    pub fn reservoir_sizes(&self) -> Vec<usize> {
        std::iter::once(self.n).chain((1..=self.t_mu).map(|i| (1usize << (i - 1)) * self.t_eta)).collect()
    }

    /// `n + (2^{t_μ} − 1) t_η`.
    pub fn reservoir_total(&self) -> usize {
        self.reservoir_sizes().iter().sum()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Thm11Options {
    /// Use this host dimension instead of `⌊n(m − (1−ε)² log m)⌋`, skipping
    /// the ε-condition; the run then only goes ahead while every concrete
    /// set selection fits.
    pub host_dimension: Option<usize>,
    /// Search all small blobs for an all-red one before building anything
    /// (only for tiny hosts).
    pub exhaustive_phase1: bool,
}

/// Counters for one layer `i ≤ t_μ` of the blob phase.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LayerAudit {
    pub layer: usize,
    pub visited: usize,
    /// `|Y⁽⁰⁾ ∪ … ∪ Y⁽ⁱ⁾|` and the value `n + (2^i − 1)t_η` it must equal.
    pub reservoir_union: usize,
    pub reservoir_expected: usize,
    /// Largest `|S_X|` seen and its bound `(2^i − 1)t_η`.
    pub max_s_x: usize,
    pub s_x_bound: usize,
    pub max_blob_volume: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Branch {
    /// Every blob had a blue vertex; the copy comes from completing `Q(X)`.
    BlueCompletion,
    /// The blob `B(base; variable)` truncated at `t_η` was all red.
    RedBlob { base: Vertex, variable: Vertex, layer: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm11Report {
    pub plan: TruncationPlan,
    pub condition_lhs: f64,
    pub branch: Branch,
    pub copy: BooleanCopy,
    pub audits: Vec<LayerAudit>,
    /// `|Y⁽⁰⁾ ∪ … ∪ Y⁽ᵗᵘ⁾|` against `N − n(m − t_μ) − m`.
    pub reservoir_total: usize,
    pub reservoir_room: i64,
    pub queries: u64,
}

/// First `(S, T)` with `|T| = n`, `|S| ≤ max_base` and `B(S; T)` truncated
/// `t` above `S` all red, scanning `T` then `S` in enumeration order.
pub fn phase1_scan(
    coloring: &Coloring,
    dimension: usize,
    n: usize,
    t: usize,
    max_base: usize,
) -> Result<Option<(Vertex, Vertex)>, ConstructError> {
    if dimension > 16 || dimension > coloring.ground().size {
        return Err(ConstructError::BadParameters(format!("exhaustive blob scan over dimension {dimension}")));
    }
    let ground: Vec<u32> = (0..dimension as u32).collect();
    for t_set in Combinations::new(ground.clone(), n) {
        let variable = Vertex::from_members(t_set);
        let rest: Vec<u32> = ground.iter().copied().filter(|&x| !variable.contains(x)).collect();
        for size in 0..=max_base.min(rest.len()) {
            for s_set in Combinations::new(rest.clone(), size) {
                let base = Vertex::from_members(s_set);
                let blob = Blob::above(base.clone(), variable.clone(), t)?;
                if coloring.find_in_blob(&blob, Color::Blue)?.is_none() {
                    return Ok(Some((base, variable)));
                }
            }
        }
    }
    Ok(None)
}

struct BlobPhase<'c> {
    coloring: &'c Coloring,
    plan: &'c TruncationPlan,
    x: Vertex,
    /// `Y⁽⁰⁾ ∪ … ∪ Y⁽ⁱ⁾` for each `i`.
    unions: Vec<Vertex>,
    images: HashMap<Vertex, Vertex>,
    audits: Vec<LayerAudit>,
    scanned: bool,
}

impl BlobPhase<'_> {
    /// Picks `φ(W)` for one `W ⊆ X`, or reports the all-red blob met instead.
    fn visit(&mut self, w: &Vertex) -> Result<Option<Branch>, ConstructError> {
        if self.images.contains_key(w) {
            return Ok(None);
        }
        let (i, n, t_eta) = (w.len(), self.plan.n, self.plan.t_eta);
        let mut s_x = Vertex::empty();
        for e in w.iter() {
            let below = w.difference(&Vertex::from_members([e]));
            let img = self.images.get(&below).ok_or_else(|| {
                ConstructError::BugCertificate(format!("image of {below} needed before it was built"))
            })?;
            s_x = s_x.union(&img.difference(&self.x));
        }
        let s_bound = ((1usize << i) - 1) * t_eta;
        if s_x.len() > s_bound {
            return Err(infeasible("|S_X| ≤ (2^i − 1)t_η", s_x.len(), s_bound));
        }
        let avail = self.unions[i].difference(&s_x);
        if avail.len() < n {
            return Err(infeasible("|T_X| = n fits in the reservoirs", n, avail.len()));
        }
        let t_x = avail.take_smallest(n);
        let base = w.union(&s_x);
        let volume = base.len() + n;
        let small = volume as f64 <= self.plan.small_volume + 1e-9;
        if !self.plan.overridden && !small {
            return Err(infeasible("blob volume ≤ εm t_η", volume, self.plan.small_volume));
        }
        let audit = &mut self.audits[i];
        audit.visited += 1;
        audit.max_s_x = audit.max_s_x.max(s_x.len());
        audit.max_blob_volume = audit.max_blob_volume.max(volume);
        let blob = Blob::above(base.clone(), t_x.clone(), t_eta)?;
        match self.coloring.find_in_blob(&blob, Color::Blue)? {
            Some(z) => {
                self.images.insert(w.clone(), z);
                Ok(None)
            }
            None if self.scanned && small => Err(ConstructError::PropertyStarViolated { base, variable: t_x }),
            None => Ok(Some(Branch::RedBlob { base, variable: t_x, layer: i })),
        }
    }

    fn visit_layers(&mut self, ground: &Vertex) -> Result<Option<Branch>, ConstructError> {
        for i in 0..=self.plan.t_mu.min(ground.len()) {
            for w in Combinations::new(ground.members(), i) {
                if let Some(b) = self.visit(&Vertex::from_members(w))? {
                    return Ok(Some(b));
                }
            }
        }
        Ok(None)
    }
}

/// Runs the construction on `coloring` and returns a verified blue `Q_m` or
/// red `Q_n`, with the bookkeeping of every layer visited.
///
/// Without a host override the ε-condition must hold. Runs with `m` or `n`
/// above [`MAX_MATERIALIZED_DOMAIN`] walk the chains of prefixes first and
/// then enumerate; they need a query budget and, unless a uniform-color
/// certificate ends them early, stop with `BudgetExceeded`.
pub fn thm11_construct(
    coloring: &Coloring,
    m: usize,
    n: usize,
    epsilon: f64,
    options: &Thm11Options,
) -> Result<Thm11Report, ConstructError> {
    let plan = TruncationPlan::new(m, n, epsilon, options.host_dimension)?;
    let condition_lhs = epsilon_condition_lhs(m as u64, n as u64, epsilon);
    if options.host_dimension.is_none() && !epsilon_condition(m as u64, n as u64, epsilon)? {
        return Err(ExtremalError::EpsilonCondition { lhs: condition_lhs, epsilon }.into());
    }
    let dimension = plan.dimension;
    if coloring.ground().size < dimension {
        return Err(ConstructError::DimensionTooSmall { dimension: coloring.ground().size, required: dimension });
    }
    let large = m > MAX_MATERIALIZED_DOMAIN || n > MAX_MATERIALIZED_DOMAIN;
    if large && coloring.budget().is_none() {
        return Err(ConstructError::Unbounded { elements: dimension });
    }

    let (t_mu, t_eta) = (plan.t_mu, plan.t_eta);
    let reservoir_total = plan.reservoir_total();
    let reservoir_room = dimension as i64 - (n * (m - t_mu)) as i64 - m as i64;
    if reservoir_total as i64 > reservoir_room {
        return Err(infeasible("|Y⁽⁰⁾ ∪ … ∪ Y⁽ᵗᵘ⁾| ≤ N − n(m − t_μ) − m", reservoir_total, reservoir_room));
    }
    let x = Vertex::range(0, m as u32);
    let mut unions = Vec::with_capacity(t_mu + 1);
    let mut next = m as u32;
    for size in plan.reservoir_sizes() {
        let grown = Vertex::range(m as u32, next + size as u32);
        next += size as u32;
        unions.push(grown);
    }
    let audits = (0..=t_mu)
        .map(|i| {
            let expected = n + ((1usize << i) - 1) * t_eta;
            LayerAudit {
                layer: i,
                reservoir_union: unions[i].len(),
                reservoir_expected: expected,
                s_x_bound: ((1usize << i) - 1) * t_eta,
                ..LayerAudit::default()
            }
        })
        .collect::<Vec<_>>();
    if let Some(a) = audits.iter().find(|a| a.reservoir_union != a.reservoir_expected) {
        return Err(infeasible("|Y⁽⁰⁾ ∪ … ∪ Y⁽ⁱ⁾| = n + (2^i − 1)t_η", a.reservoir_union, a.reservoir_expected));
    }

    let mut phase = BlobPhase {
        coloring,
        plan: &plan,
        x: x.clone(),
        unions,
        images: HashMap::new(),
        audits,
        scanned: false,
    };

    let mut branch = None;
    if options.exhaustive_phase1 {
        let max_base = plan.small_volume.floor() as i64 - n as i64;
        if max_base >= 0 {
            if let Some((base, variable)) = phase1_scan(coloring, dimension, n, t_eta, max_base as usize)? {
                branch = Some(Branch::RedBlob { base, variable, layer: 0 });
            }
        }
        phase.scanned = true;
    }

    let support = x.union(&phase.unions[t_mu]);
    let domain = x.members();
    if branch.is_none() {
        if large {
            branch = phase.visit_layers(&x.take_smallest(t_mu))?;
            if branch.is_none() {
                let completion = truncated_completion(coloring, &domain, t_mu, &support, n, Color::Blue)?;
                if let Some(copy) = completion.probe()? {
                    return finish(coloring, plan.clone(), condition_lhs, Branch::BlueCompletion, copy, phase.audits, reservoir_total, reservoir_room);
                }
            }
        }
        if branch.is_none() {
            branch = phase.visit_layers(&x)?;
        }
    }

    let (branch, copy) = match branch {
        Some(Branch::RedBlob { base, variable, layer }) => {
            if !plan.overridden && base.len() as f64 > plan.small_volume - n as f64 + 1e-9 {
                return Err(infeasible("|S| ≤ εm t_η − n", base.len(), plan.small_volume - n as f64));
            }
            let copy = complete_from_mono_blob(coloring, &base, &variable, t_eta, m, Color::Red)?;
            (Branch::RedBlob { base, variable, layer }, copy)
        }
        _ => {
            let prefix = if large {
                Prefix::Opaque
            } else {
                Prefix::Listed(phase.images.iter().map(|(k, v)| (k.clone(), v.clone())).collect())
            };
            let copy = truncated_completion(coloring, &domain, t_mu, &support, n, Color::Blue)?.run(prefix, 0)?;
            (Branch::BlueCompletion, copy)
        }
    };
    finish(coloring, plan.clone(), condition_lhs, branch, copy, phase.audits, reservoir_total, reservoir_room)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    coloring: &Coloring,
    plan: TruncationPlan,
    condition_lhs: f64,
    branch: Branch,
    copy: BooleanCopy,
    audits: Vec<LayerAudit>,
    reservoir_total: usize,
    reservoir_room: i64,
) -> Result<Thm11Report, ConstructError> {
    let needed = match copy.color {
        Color::Blue => plan.m,
        Color::Red => plan.n,
    };
    if copy.dimension < needed || !copy.is_full() {
        return Err(ConstructError::BugCertificate(format!(
            "{} copy of dimension {} where {needed} was needed",
            copy.color, copy.dimension
        )));
    }
    if !copy.verify(coloring)? {
        return Err(ConstructError::BugCertificate(format!("{} copy fails verification", copy.color)));
    }
    Ok(Thm11Report {
        plan,
        condition_lhs,
        branch,
        copy,
        audits,
        reservoir_total,
        reservoir_room,
        queries: coloring.queries(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ConstantOracle, GroundSet, HashOracle, LayeredOracle};

    fn oracle(dim: usize, o: impl crate::lattice::ColorOracle + 'static, budget: Option<u64>) -> Coloring {
        Coloring::oracle(GroundSet::new(dim), Box::new(o), budget)
    }

    #[test]
    fn plan_at_1024() {
        let p = TruncationPlan::new(1024, 1024, 0.5, None).unwrap();
        assert_eq!((p.t_mu, p.t_eta), (5, 5));
        assert_eq!(p.dimension, 1_046_016);
        assert_eq!(p.reservoir_sizes(), vec![1024, 5, 10, 20, 40, 80]);
        assert_eq!(p.reservoir_total(), 1179);
        assert_eq!(p.small_volume, 2560.0);
    }

    #[test]
    fn all_blue_and_all_red_at_1024() {
        let dim = 1_046_016;
        let blue = oracle(dim, ConstantOracle(Color::Blue), Some(1_000_000));
        let r = thm11_construct(&blue, 1024, 1024, 0.5, &Thm11Options::default()).unwrap();
        assert_eq!((r.copy.color, r.copy.dimension), (Color::Blue, 1024));
        assert_eq!(r.branch, Branch::BlueCompletion);
        let red = oracle(dim, ConstantOracle(Color::Red), Some(1_000_000));
        let r = thm11_construct(&red, 1024, 1024, 0.5, &Thm11Options::default()).unwrap();
        assert_eq!((r.copy.color, r.copy.dimension), (Color::Red, 1024));
        assert!(matches!(r.branch, Branch::RedBlob { layer: 0, .. }));
        assert!(r.queries < 10);
    }

    #[test]
    fn epsilon_condition_is_enforced() {
        let c = oracle(100, ConstantOracle(Color::Blue), None);
        let e = thm11_construct(&c, 4, 4, 0.5, &Thm11Options::default()).unwrap_err();
        assert!(matches!(e, ConstructError::Extremal(ExtremalError::EpsilonCondition { .. })));
    }

    #[test]
    fn desk_scale_runs_verify() {
        let opts = Thm11Options { host_dimension: Some(21), exhaustive_phase1: false };
        for seed in 0..200 {
            let c = oracle(21, HashOracle::uniform(seed), None);
            let r = thm11_construct(&c, 4, 4, 0.5, &opts).unwrap();
            assert!(r.copy.dimension == 4 && r.copy.verify(&c).unwrap());
            for a in &r.audits {
                assert!(a.max_s_x <= a.s_x_bound);
                assert_eq!(a.reservoir_union, a.reservoir_expected);
            }
        }
        for o in [LayeredOracle { threshold: 3 }, LayeredOracle { threshold: 12 }] {
            let c = oracle(21, o, None);
            let r = thm11_construct(&c, 4, 4, 0.5, &opts).unwrap();
            assert!(r.copy.verify(&c).unwrap());
        }
    }

    #[test]
    fn desk_scale_needs_room_for_reservoirs() {
        let opts = Thm11Options { host_dimension: Some(20), exhaustive_phase1: false };
        let c = oracle(20, ConstantOracle(Color::Blue), None);
        let e = thm11_construct(&c, 4, 4, 0.5, &opts).unwrap_err();
        assert!(matches!(e, ConstructError::InfeasibleArithmetic { .. }));
    }

    #[test]
    fn scan_finds_red_blobs() {
        let c = oracle(6, ConstantOracle(Color::Red), None);
        assert_eq!(phase1_scan(&c, 6, 2, 1, 0).unwrap(), Some((Vertex::empty(), Vertex::from_members([0, 1]))));
        let c = oracle(6, LayeredOracle { threshold: 2 }, None);
        assert_eq!(phase1_scan(&c, 6, 2, 1, 2).unwrap(), Some((Vertex::empty(), Vertex::from_members([0, 1]))));
        let c = oracle(6, LayeredOracle { threshold: 1 }, None);
        assert_eq!(phase1_scan(&c, 6, 2, 1, 3).unwrap(), None);
        assert!(phase1_scan(&c, 20, 2, 1, 0).is_err());
    }
}

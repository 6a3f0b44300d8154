//! Exact small poset Ramsey numbers by depth-first search over colorings.
//!
//! Vertices are colored in layer-then-lexicographic order. After each choice,
//! every uncolored vertex that would complete a forbidden copy in one color is
//! forced to the other, and the branch dies as soon as some vertex can take
//! neither color.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{Color, ColorTable, GroundSet};
use crate::posets::{EmbeddingKind, FinitePoset, SearchPlan};

/// Colorings are held as 64-bit vertex sets, so `Q_6` is the largest host.
pub const MAX_SEARCH_DIMENSION: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("search dimension {0} exceeds the supported maximum of {MAX_SEARCH_DIMENSION}")]
    TooLarge(usize),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub kind: EmbeddingKind,
    /// Cap on DFS nodes per dimension; exhausting it yields `Unknown`.
    pub node_budget: Option<u64>,
    /// Worker threads; `1` runs sequentially.
    pub threads: usize,
    /// Fix `∅` red when `P ≅ Q`.
    pub use_color_symmetry: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { kind: EmbeddingKind::Induced, node_budget: None, threads: 1, use_color_symmetry: true }
    }
}

impl SearchConfig {
    pub fn weak() -> Self {
        SearchConfig { kind: EmbeddingKind::Weak, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GoodColoring {
    /// A coloring with no blue `P` and no red `Q`.
    Found(ColorTable),
    /// Exhaustive search proved none exists.
    NotFound,
    /// The node budget ran out first.
    Unknown,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    #[serde(serialize_with = "seconds")]
    pub elapsed: Duration,
}

fn seconds<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// Above this many listed copies the index falls back to searching on demand.
const MAX_LISTED_COPIES: usize = 4_000_000;

/// The copies of a poset through a given vertex.
enum CopyIndex {
    /// Per vertex mask, the vertex sets (as 64-bit masks) of those copies.
    Listed(Vec<Vec<u64>>),
    /// One plan per poset element, pinned to the vertex at query time.
    Planned(Vec<SearchPlan>),
}

impl CopyIndex {
    fn build(x: &FinitePoset, kind: EmbeddingKind, dim: usize) -> Self {
        let plans: Vec<SearchPlan> = (0..x.len()).map(|e| SearchPlan::new(x, kind, Some(e))).collect();
        let everything = |_: u32| true;
        let mut lists = vec![Vec::new(); 1 << dim];
        let mut total = 0usize;
        for (v, list) in lists.iter_mut().enumerate() {
            for plan in &plans {
                plan.for_each(dim as u32, &everything, Some(v as u32), &mut |images| {
                    list.push(images.iter().fold(0u64, |acc, &m| acc | 1 << m));
                    total += 1;
                    total <= MAX_LISTED_COPIES
                });
                if total > MAX_LISTED_COPIES {
                    return CopyIndex::Planned(plans);
                }
            }
            list.sort_unstable();
            list.dedup();
        }
        CopyIndex::Listed(lists)
    }

    /// Whether some copy through `v` lies inside `set`.
    fn completes(&self, dim: usize, set: u64, v: u32) -> bool {
        match self {
            CopyIndex::Listed(lists) => lists[v as usize].iter().any(|&c| c & !set == 0),
            CopyIndex::Planned(plans) => {
                let allowed = |m: u32| set >> m & 1 == 1;
                plans.iter().any(|plan| plan.search(dim as u32, &allowed, Some(v)).is_some())
            }
        }
    }
}

struct Searcher {
    dim: usize,
    /// Masks in coloring order.
    order: Vec<u32>,
    /// Copies of `P` (forbidden in blue) and `Q` (forbidden in red).
    blue_copies: CopyIndex,
    red_copies: CopyIndex,
    fix_empty_red: bool,
    budget: Option<u64>,
    nodes: AtomicU64,
    out_of_budget: AtomicBool,
    stop: AtomicBool,
}

/// Partial coloring as two vertex sets indexed by mask.
#[derive(Clone, Copy, Default)]
struct Partial {
    blue: u64,
    red: u64,
}

impl Partial {
    fn with(self, mask: u32, color: Color) -> Partial {
        let bit = 1u64 << mask;
        match color {
            Color::Blue => Partial { blue: self.blue | bit, ..self },
            Color::Red => Partial { red: self.red | bit, ..self },
        }
    }

    fn assigned(self, mask: u32) -> bool {
        (self.blue | self.red) >> mask & 1 == 1
    }

    fn to_table(self, dim: usize) -> ColorTable {
        ColorTable::from_fn(dim, |m| if self.red >> m & 1 == 1 { Color::Red } else { Color::Blue }).expect("small table")
    }
}

impl Searcher {
    fn new(dim: usize, p: &FinitePoset, q: &FinitePoset, config: &SearchConfig) -> Self {
        let order = GroundSet::new(dim)
            .vertices()
            .map(|v| v.as_mask().expect("dense vertex") as u32)
            .collect();
        let symmetric = config.use_color_symmetry && p.len() <= 12 && q.len() <= 12 && p.is_isomorphic(q).unwrap_or(false);
        Searcher {
            dim,
            order,
            blue_copies: CopyIndex::build(p, config.kind, dim),
            red_copies: CopyIndex::build(q, config.kind, dim),
            fix_empty_red: symmetric,
            budget: config.node_budget,
            nodes: AtomicU64::new(0),
            out_of_budget: AtomicBool::new(false),
            stop: AtomicBool::new(false),
        }
    }

    /// Whether coloring `mask` with `color` completes a forbidden copy.
    fn completes_copy(&self, partial: Partial, mask: u32, color: Color) -> bool {
        match color {
            Color::Blue => self.blue_copies.completes(self.dim, partial.blue, mask),
            Color::Red => self.red_copies.completes(self.dim, partial.red, mask),
        }
    }

    /// Forces every uncolored vertex that one color would complete a copy with to
    /// the other color, until nothing changes. `None` when some vertex can take
    /// neither color.
    fn propagate(&self, mut partial: Partial) -> Option<Partial> {
        loop {
            let mut changed = false;
            for &w in self.order.iter().rev() {
                if partial.assigned(w) {
                    continue;
                }
                let blue_dead = self.completes_copy(partial.with(w, Color::Blue), w, Color::Blue);
                let red_dead = self.completes_copy(partial.with(w, Color::Red), w, Color::Red);
                match (blue_dead, red_dead) {
                    (true, true) => return None,
                    (true, false) => partial = partial.with(w, Color::Red),
                    (false, true) => partial = partial.with(w, Color::Blue),
                    (false, false) => continue,
                }
                changed = true;
            }
            if !changed {
                return Some(partial);
            }
        }
    }

    fn colors_for(&self, pos: usize) -> &'static [Color] {
        if pos == 0 && self.fix_empty_red {
            &[Color::Red]
        } else {
            &[Color::Red, Color::Blue]
        }
    }

    fn charge_node(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.budget.is_some_and(|b| n > b) {
            self.out_of_budget.store(true, Ordering::Relaxed);
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn dfs(&self, mut pos: usize, partial: Partial) -> Option<Partial> {
        while pos < self.order.len() && partial.assigned(self.order[pos]) {
            pos += 1;
        }
        if pos == self.order.len() {
            return Some(partial);
        }
        let mask = self.order[pos];
        for &color in self.colors_for(pos) {
            if self.stop.load(Ordering::Relaxed) || !self.charge_node() {
                return None;
            }
            let next = partial.with(mask, color);
            if self.completes_copy(next, mask, color) {
                continue;
            }
            let Some(next) = self.propagate(next) else { continue };
            if let Some(done) = self.dfs(pos + 1, next) {
                return Some(done);
            }
        }
        None
    }

    /// All surviving partial colorings of the first `depth` vertices.
    fn prefixes(&self, depth: usize) -> Vec<Partial> {
        let mut frontier = vec![Partial::default()];
        for pos in 0..depth.min(self.order.len()) {
            let mask = self.order[pos];
            frontier = frontier
                .into_iter()
                .flat_map(|partial| {
                    if partial.assigned(mask) {
                        return vec![partial];
                    }
                    self.colors_for(pos)
                        .iter()
                        .map(|&c| (partial.with(mask, c), c))
                        .filter(|&(next, c)| !self.completes_copy(next, mask, c))
                        .filter_map(|(next, _)| self.propagate(next))
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        frontier
    }

    fn run(&self, threads: usize) -> Option<Partial> {
        if threads <= 1 {
            return self.dfs(0, Partial::default());
        }
        let depth = 8.min(self.order.len());
        let found = Mutex::new(None);
        self.prefixes(depth).into_par_iter().for_each(|start| {
            if self.stop.load(Ordering::Relaxed) {
                return;
            }
            if let Some(done) = self.dfs(depth, start) {
                self.stop.store(true, Ordering::Relaxed);
                found.lock().expect("result lock").get_or_insert(done);
            }
        });
        found.into_inner().expect("result lock")
    }
}

/// Searches for a coloring of `Q_dim` with no blue copy of `p` and no red copy of `q`.
pub fn exists_good_coloring(
    dim: usize,
    p: &FinitePoset,
    q: &FinitePoset,
    config: &SearchConfig,
) -> Result<(GoodColoring, SearchStats), SearchError> {
    if dim > MAX_SEARCH_DIMENSION {
        return Err(SearchError::TooLarge(dim));
    }
    let start = Instant::now();
    let searcher = Searcher::new(dim, p, q, config);
    let found = if config.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| SearchError::ThreadPool(e.to_string()))?;
        pool.install(|| searcher.run(config.threads))
    } else {
        searcher.run(1)
    };
    let outcome = match found {
        Some(partial) => GoodColoring::Found(partial.to_table(dim)),
        None if searcher.out_of_budget.load(Ordering::Relaxed) => GoodColoring::Unknown,
        None => GoodColoring::NotFound,
    };
    let stats = SearchStats { nodes: searcher.nodes.load(Ordering::Relaxed), elapsed: start.elapsed() };
    Ok((outcome, stats))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub p: String,
    pub q: String,
    pub kind: EmbeddingKind,
    pub value: usize,
    /// A good coloring of `Q_{value−1}`; absent when `value = 0`.
    pub witness: Option<ColorTable>,
    pub stats: SearchStats,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RamseyOutcome {
    Exact(SearchResult),
    /// Undecided: every dimension up to `checked` has a good coloring, or the
    /// budget ran out at dimension `checked`.
    Unknown { checked: usize, stats: SearchStats },
}

/// Smallest `N ≤ n_max` where no good coloring exists.
pub fn ramsey_number_exact(p: &FinitePoset, q: &FinitePoset, n_max: usize, config: &SearchConfig) -> Result<RamseyOutcome, SearchError> {
    let mut witness = None;
    let mut total = SearchStats::default();
    for dim in 0..=n_max.min(MAX_SEARCH_DIMENSION) {
        let (outcome, stats) = exists_good_coloring(dim, p, q, config)?;
        total.nodes += stats.nodes;
        total.elapsed += stats.elapsed;
        match outcome {
            GoodColoring::Found(table) => witness = Some(table),
            GoodColoring::NotFound => {
                return Ok(RamseyOutcome::Exact(SearchResult {
                    p: p.name().to_string(),
                    q: q.name().to_string(),
                    kind: config.kind,
                    value: dim,
                    witness,
                    stats: total,
                }))
            }
            GoodColoring::Unknown => return Ok(RamseyOutcome::Unknown { checked: dim, stats: total }),
        }
    }
    Ok(RamseyOutcome::Unknown { checked: n_max.min(MAX_SEARCH_DIMENSION), stats: total })
}

/// `ramsey_number_exact` with weak copies.
pub fn weak_ramsey_exact(p: &FinitePoset, q: &FinitePoset, n_max: usize, config: &SearchConfig) -> Result<RamseyOutcome, SearchError> {
    let config = SearchConfig { kind: EmbeddingKind::Weak, ..config.clone() };
    ramsey_number_exact(p, q, n_max, &config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Vertex;
    use crate::posets::{find_mono_copy, make_poset};

    fn exact(outcome: RamseyOutcome) -> SearchResult {
        match outcome {
            RamseyOutcome::Exact(r) => r,
            other => panic!("undecided: {other:?}"),
        }
    }

    fn is_good(table: &ColorTable, p: &FinitePoset, q: &FinitePoset, kind: EmbeddingKind) -> bool {
        find_mono_copy(table, p, Color::Blue, kind).is_none() && find_mono_copy(table, q, Color::Red, kind).is_none()
    }

    #[test]
    fn two_chain_examples() {
        let c2 = FinitePoset::chain(2);
        let (found, _) = exists_good_coloring(1, &c2, &c2, &SearchConfig::default()).unwrap();
        match found {
            GoodColoring::Found(t) => {
                assert_eq!(t.color_of(&Vertex::empty()).unwrap(), Color::Red);
                assert_eq!(t.color_of(&Vertex::from_members([0])).unwrap(), Color::Blue);
            }
            other => panic!("{other:?}"),
        }
        let (none, _) = exists_good_coloring(2, &c2, &c2, &SearchConfig::default()).unwrap();
        assert_eq!(none, GoodColoring::NotFound);
    }

    #[test]
    fn q1_and_q2_diagonal() {
        let q1 = make_poset("boolean:1").unwrap();
        assert_eq!(exact(ramsey_number_exact(&q1, &q1, 6, &SearchConfig::default()).unwrap()).value, 2);
        let q2 = make_poset("boolean:2").unwrap();
        let r = exact(ramsey_number_exact(&q2, &q2, 6, &SearchConfig::default()).unwrap());
        assert_eq!(r.value, 4);
        assert!(is_good(r.witness.as_ref().unwrap(), &q2, &q2, EmbeddingKind::Induced));
    }

    #[test]
    fn budget_gives_unknown() {
        let q2 = make_poset("boolean:2").unwrap();
        let config = SearchConfig { node_budget: Some(10), ..SearchConfig::default() };
        let (outcome, stats) = exists_good_coloring(4, &q2, &q2, &config).unwrap();
        assert_eq!(outcome, GoodColoring::Unknown);
        assert!(stats.nodes >= 10);
    }

    #[test]
    fn symmetry_does_not_change_decisions() {
        let names = ["chain:2", "chain:3", "antichain:2", "fork:2", "boolean:2"];
        for name in names {
            let p = make_poset(name).unwrap();
            for dim in 0..=3 {
                let with = exists_good_coloring(dim, &p, &p, &SearchConfig::default()).unwrap().0;
                let plain = SearchConfig { use_color_symmetry: false, ..SearchConfig::default() };
                let without = exists_good_coloring(dim, &p, &p, &plain).unwrap().0;
                assert_eq!(matches!(with, GoodColoring::Found(_)), matches!(without, GoodColoring::Found(_)), "{name} at {dim}");
            }
        }
    }

    #[test]
    fn parallel_search_agrees() {
        let q2 = make_poset("boolean:2").unwrap();
        let par = SearchConfig { threads: 4, ..SearchConfig::default() };
        assert_eq!(exact(ramsey_number_exact(&q2, &q2, 6, &par).unwrap()).value, 4);
    }

    #[test]
    fn too_large_is_rejected() {
        let c = FinitePoset::chain(2);
        assert!(exists_good_coloring(7, &c, &c, &SearchConfig::default()).is_err());
    }
}

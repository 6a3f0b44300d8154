use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::mapref::entry::Entry;
use dashmap::DashMap;
use serde::Serialize;

use super::blob::{Blob, GroundSet};
use super::vertex::Vertex;
use super::LatticeError;

/// Largest dimension for which a full color table is kept in memory.
pub const MAX_TABLE_DIMENSION: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Blue => Color::Red,
            Color::Red => Color::Blue,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Color::Blue => 'B',
            Color::Red => 'R',
        }
    }

    pub fn from_char(c: char) -> Option<Color> {
        match c {
            'B' => Some(Color::Blue),
            'R' => Some(Color::Red),
            _ => None,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Blue => "blue",
            Color::Red => "red",
        })
    }
}

impl std::str::FromStr for Color {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "blue" | "b" => Ok(Color::Blue),
            "red" | "r" => Ok(Color::Red),
            _ => Err(LatticeError::Parse(format!("unknown color `{s}`"))),
        }
    }
}

/// An explicit coloring of `Q([N])`: cell `i` holds the color of the vertex
/// whose bit pattern is `i`. Red cells are stored as set bits.
#[derive(Clone, PartialEq, Eq)]
pub struct ColorTable {
    dimension: usize,
    red: Vec<u64>,
}

impl ColorTable {
    pub fn uniform(dimension: usize, color: Color) -> Result<Self, LatticeError> {
        Self::from_fn(dimension, |_| color)
    }

    /// Builds a table by evaluating `f` on every bit pattern.
    pub fn from_fn(dimension: usize, mut f: impl FnMut(u32) -> Color) -> Result<Self, LatticeError> {
        if dimension > MAX_TABLE_DIMENSION {
            return Err(LatticeError::TableTooLarge { dimension });
        }
        let cells = 1usize << dimension;
        let mut red = vec![0u64; cells.div_ceil(64)];
        for i in 0..cells {
            if f(i as u32) == Color::Red {
                red[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(ColorTable { dimension, red })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn cells(&self) -> usize {
        1 << self.dimension
    }

    #[inline]
    pub fn at(&self, pattern: u32) -> Color {
        let i = pattern as usize;
        if self.red[i / 64] >> (i % 64) & 1 == 1 {
            Color::Red
        } else {
            Color::Blue
        }
    }

    pub fn set(&mut self, pattern: u32, color: Color) {
        let i = pattern as usize;
        match color {
            Color::Red => self.red[i / 64] |= 1 << (i % 64),
            Color::Blue => self.red[i / 64] &= !(1 << (i % 64)),
        }
    }

    pub fn color_of(&self, v: &Vertex) -> Result<Color, LatticeError> {
        match v.as_mask() {
            Some(m) if (m >> self.dimension) == 0 => Ok(self.at(m as u32)),
            _ => Err(LatticeError::OutsideLattice { vertex: v.clone(), dimension: self.dimension }),
        }
    }

    /// Swaps every color.
    pub fn swapped(&self) -> ColorTable {
        ColorTable::from_fn(self.dimension, |i| self.at(i).opposite()).expect("same dimension")
    }

    /// The coloring file format: `N=<int>` followed by `2^N` characters over `{B,R}`.
    pub fn to_file_string(&self) -> String {
        let mut s = String::with_capacity(self.cells() + 16);
        s.push_str(&format!("N={}\n", self.dimension));
        for i in 0..self.cells() {
            s.push(self.at(i as u32).as_char());
        }
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, LatticeError> {
        let mut lines = text.split('\n');
        let header = lines.next().unwrap_or_default();
        let dimension: usize = header
            .strip_prefix("N=")
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| LatticeError::Parse(format!("bad header `{header}`, expected `N=<int>`")))?;
        if dimension > MAX_TABLE_DIMENSION {
            return Err(LatticeError::TableTooLarge { dimension });
        }
        let body = lines.next().unwrap_or_default();
        if lines.any(|rest| !rest.is_empty()) {
            return Err(LatticeError::Parse("trailing content after the color string".into()));
        }
        if body.len() != 1 << dimension {
            return Err(LatticeError::Parse(format!(
                "expected {} color cells, found {}",
                1usize << dimension,
                body.len()
            )));
        }
        let cells: Vec<Color> = body
            .chars()
            .map(|c| Color::from_char(c).ok_or_else(|| LatticeError::Parse(format!("bad color cell `{c}`"))))
            .collect::<Result<_, _>>()?;
        ColorTable::from_fn(dimension, |i| cells[i as usize])
    }
}

impl fmt::Debug for ColorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ColorTable({})", self.to_file_string().trim_end().replace('\n', ", "))
    }
}

/// A coloring given as a function, queried one vertex at a time.
pub trait ColorOracle: Send + Sync {
    fn color(&self, v: &Vertex) -> Color;

    /// A color that every vertex of `blob` is known to have without querying
    /// them one by one. Oracles without such structural knowledge return `None`.
    fn uniform_on(&self, _blob: &Blob) -> Option<Color> {
        None
    }

    fn describe(&self) -> String;
}

/// Every vertex gets the same color.
#[derive(Clone, Copy, Debug)]
pub struct ConstantOracle(pub Color);

impl ColorOracle for ConstantOracle {
    fn color(&self, _v: &Vertex) -> Color {
        self.0
    }

    fn uniform_on(&self, _blob: &Blob) -> Option<Color> {
        Some(self.0)
    }

    fn describe(&self) -> String {
        format!("all-{}", self.0)
    }
}

/// Red iff `|v| < threshold`.
#[derive(Clone, Copy, Debug)]
pub struct LayeredOracle {
    pub threshold: usize,
}

impl ColorOracle for LayeredOracle {
    fn color(&self, v: &Vertex) -> Color {
        if v.len() < self.threshold {
            Color::Red
        } else {
            Color::Blue
        }
    }

    fn uniform_on(&self, blob: &Blob) -> Option<Color> {
        let extra = blob.max_extra()?;
        let (lo, hi) = (blob.base.len(), blob.base.len() + extra);
        if hi < self.threshold {
            Some(Color::Red)
        } else if lo >= self.threshold {
            Some(Color::Blue)
        } else {
            None
        }
    }

    fn describe(&self) -> String {
        format!("layered:{}", self.threshold)
    }
}

/// Pseudo-random coloring derived from a seed by hashing the vertex, so the
/// color of a vertex does not depend on query order.
#[derive(Clone, Copy, Debug)]
pub struct HashOracle {
    pub seed: u64,
    /// Probability that a vertex is blue.
    pub p_blue: f64,
}

impl HashOracle {
    pub fn uniform(seed: u64) -> Self {
        HashOracle { seed, p_blue: 0.5 }
    }

    fn hash(&self, v: &Vertex) -> u64 {
        let mut h = SplitMix(self.seed ^ 0x9e37_79b9_7f4a_7c15);
        h.write_u64(v.len() as u64);
        for x in v.iter() {
            h.write_u32(x);
        }
        h.finish()
    }
}

impl ColorOracle for HashOracle {
    fn color(&self, v: &Vertex) -> Color {
        let u = (self.hash(v) >> 11) as f64 / (1u64 << 53) as f64;
        if u < self.p_blue {
            Color::Blue
        } else {
            Color::Red
        }
    }

    fn describe(&self) -> String {
        if self.p_blue == 0.5 {
            format!("random:{}", self.seed)
        } else {
            format!("biased:{}:{}", self.p_blue, self.seed)
        }
    }
}

struct SplitMix(u64);

impl Hasher for SplitMix {
    fn finish(&self) -> u64 {
        let mut z = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = (self.0 ^ x).wrapping_mul(0xff51_afd7_ed55_8ccd).rotate_left(29);
        self.0 = self.finish();
    }

    fn write_u32(&mut self, x: u32) {
        self.write_u64(x as u64);
    }
}

/// Adapts a closure into an oracle.
pub struct FnOracle<F> {
    f: F,
    name: String,
}

impl<F: Fn(&Vertex) -> Color + Send + Sync> FnOracle<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnOracle { f, name: name.into() }
    }
}

impl<F: Fn(&Vertex) -> Color + Send + Sync> ColorOracle for FnOracle<F> {
    fn color(&self, v: &Vertex) -> Color {
        (self.f)(v)
    }

    fn describe(&self) -> String {
        self.name.clone()
    }
}

/// Parses the built-in oracle names: `all-blue`, `all-red`, `random:<seed>`,
/// `biased:<p_blue>:<seed>` and `layered:<threshold>`.
pub fn parse_oracle(spec: &str) -> Result<Box<dyn ColorOracle>, LatticeError> {
    let bad = || LatticeError::Parse(format!("unknown oracle `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    let oracle: Box<dyn ColorOracle> = match parts.as_slice() {
        ["all-blue"] => Box::new(ConstantOracle(Color::Blue)),
        ["all-red"] => Box::new(ConstantOracle(Color::Red)),
        ["random"] => Box::new(HashOracle::uniform(0)),
        ["random", seed] => Box::new(HashOracle::uniform(seed.parse().map_err(|_| bad())?)),
        ["biased", p, seed] => {
            let p_blue: f64 = p.parse().map_err(|_| bad())?;
            if !(0.0..=1.0).contains(&p_blue) {
                return Err(bad());
            }
            Box::new(HashOracle { seed: seed.parse().map_err(|_| bad())?, p_blue })
        }
        ["layered", t] => Box::new(LayeredOracle { threshold: t.parse().map_err(|_| bad())? }),
        _ => return Err(bad()),
    };
    Ok(oracle)
}

enum Source {
    Table(ColorTable),
    Oracle(Box<dyn ColorOracle>),
}

/// Memo key for oracle answers. Vertices met deep inside large constructions
/// have millions of members, so the memo keeps a 128-bit fingerprint instead
/// of the vertex.
fn fingerprint(v: &Vertex) -> u128 {
    let half = |salt: u8| {
        let mut h = DefaultHasher::new();
        salt.hash(&mut h);
        v.hash(&mut h);
        h.finish() as u128
    };
    (half(0) << 64) | half(1)
}

/// A total blue/red coloring of `Q([N])`, backed by an explicit table or by a
/// memoizing oracle with an optional query budget.
pub struct Coloring {
    ground: GroundSet,
    source: Source,
    memo: DashMap<u128, Color>,
    budget: Option<u64>,
    queries: AtomicU64,
}

impl Coloring {
    pub fn explicit(table: ColorTable) -> Self {
        Coloring {
            ground: GroundSet::new(table.dimension()),
            source: Source::Table(table),
            memo: DashMap::new(),
            budget: None,
            queries: AtomicU64::new(0),
        }
    }

    pub fn oracle(ground: GroundSet, oracle: Box<dyn ColorOracle>, budget: Option<u64>) -> Self {
        Coloring { ground, source: Source::Oracle(oracle), memo: DashMap::new(), budget, queries: AtomicU64::new(0) }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn table(&self) -> Option<&ColorTable> {
        match &self.source {
            Source::Table(t) => Some(t),
            Source::Oracle(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.source {
            Source::Table(t) => format!("table:N={}", t.dimension()),
            Source::Oracle(o) => o.describe(),
        }
    }

    /// Fresh oracle queries charged so far.
    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    fn charge(&self) -> Result<(), LatticeError> {
        let used = self.queries.fetch_add(1, Ordering::Relaxed) + 1;
        match self.budget {
            Some(budget) if used > budget => {
                self.queries.fetch_sub(1, Ordering::Relaxed);
                Err(LatticeError::BudgetExceeded { budget })
            }
            _ => Ok(()),
        }
    }

    pub fn color_of(&self, v: &Vertex) -> Result<Color, LatticeError> {
        if !self.ground.contains(v) {
            return Err(LatticeError::OutsideLattice { vertex: v.clone(), dimension: self.ground.size });
        }
        match &self.source {
            Source::Table(t) => t.color_of(v),
            Source::Oracle(o) => match self.memo.entry(fingerprint(v)) {
                Entry::Occupied(e) => Ok(*e.get()),
                Entry::Vacant(e) => {
                    self.charge()?;
                    let c = o.color(v);
                    e.insert(c);
                    Ok(c)
                }
            },
        }
    }

    /// A color shared by every vertex of `blob`, when that is known without
    /// a full scan. Small blobs of a table coloring are scanned directly; an
    /// oracle answer costs one query.
    pub fn uniform_on(&self, blob: &Blob) -> Result<Option<Color>, LatticeError> {
        match &self.source {
            Source::Table(_) => {
                let mut it = blob.enumerate();
                let Some(first) = it.next() else { return Ok(None) };
                let c = self.color_of(&first)?;
                for z in it {
                    if self.color_of(&z)? != c {
                        return Ok(None);
                    }
                }
                Ok(Some(c))
            }
            Source::Oracle(o) => match o.uniform_on(blob) {
                Some(c) => {
                    self.charge()?;
                    Ok(Some(c))
                }
                None => Ok(None),
            },
        }
    }

    /// The first vertex of `blob` (in enumeration order) with color `color`,
    /// or `None` when the blob has no such vertex.
    pub fn find_in_blob(&self, blob: &Blob, color: Color) -> Result<Option<Vertex>, LatticeError> {
        if matches!(self.source, Source::Oracle(_)) {
            match self.uniform_on(blob)? {
                Some(c) if c == color => return Ok(blob.first()),
                Some(_) => return Ok(None),
                None => {}
            }
        }
        for z in blob.enumerate() {
            if self.color_of(&z)? == color {
                return Ok(Some(z));
            }
        }
        Ok(None)
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coloring")
            .field("ground", &self.ground)
            .field("source", &self.describe())
            .field("queries", &self.queries())
            .finish()
    }
}

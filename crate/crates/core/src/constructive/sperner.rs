//! Monochromatic diamonds `D_n` and forks `V_n` from Sperner-type counting,
//! and the layered colorings that have neither.

use serde::Serialize;

use super::{middle_antichain, ConstructError};
use crate::extremal::{beta, n_plus, n_star, sperner_alpha};
use crate::lattice::{Color, ColorTable, Coloring, Combinations, Vertex};
use crate::posets::{verify_embedding, Embedding, EmbeddingKind, FinitePoset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Diamond,
    Fork,
}

/// A monochromatic induced copy of a named poset inside `Q([dimension])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonoCopy {
    pub color: Color,
    pub dimension: usize,
    pub embedding: Embedding,
}

impl MonoCopy {
    pub fn verify(&self, p: &FinitePoset, coloring: &Coloring) -> Result<bool, ConstructError> {
        if !verify_embedding(&self.embedding, p) {
            return Ok(false);
        }
        for v in &self.embedding.map {
            if !coloring.ground().contains(v) || coloring.color_of(v)? != self.color {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

type ColorFn<'a> = dyn Fn(&Vertex) -> Result<Color, ConstructError> + 'a;

fn layer_of(dim: usize, k: usize) -> impl Iterator<Item = Vertex> {
    Combinations::new((0..dim as u32).collect(), k).map(Vertex::from_members)
}

/// `n` of the `2n − 1` vertices of the middle antichain of `[lo, hi]` that
/// share the majority color.
fn majority(lo: &Vertex, hi: &Vertex, n: usize, f: &ColorFn) -> Result<(Color, Vec<Vertex>), ConstructError> {
    let mut by_color: [Vec<Vertex>; 2] = [Vec::new(), Vec::new()];
    for z in middle_antichain(lo, hi, 2 * n - 1) {
        let c = f(&z)?;
        by_color[(c == Color::Red) as usize].push(z);
    }
    let (c, mut picked) = if by_color[0].len() >= n {
        (Color::Blue, std::mem::take(&mut by_color[0]))
    } else {
        (Color::Red, std::mem::take(&mut by_color[1]))
    };
    if picked.len() < n {
        return Err(ConstructError::BugCertificate(format!("interval [{lo}, {hi}] has no antichain of size {}", 2 * n - 1)));
    }
    picked.truncate(n);
    Ok((c, picked))
}

struct DiamondSetting {
    n: usize,
    dim: usize,
    alpha: usize,
    low: usize,
}

impl DiamondSetting {
    fn top(&self) -> Vertex {
        Vertex::range(0, self.dim as u32)
    }

    fn assemble(&self, bottom: Vertex, middle: Vec<Vertex>, top: Vertex) -> Vec<Vertex> {
        std::iter::once(bottom).chain(middle).chain(std::iter::once(top)).collect()
    }

    /// `y` in the upper layer has a color different from the top vertex.
    fn upper_mixed(&self, y: Vertex, f: &ColorFn) -> Result<(Color, Vec<Vertex>), ConstructError> {
        let (top, bottom) = (self.top(), Vertex::empty());
        let c_y = f(&y)?;
        let c_bottom = f(&bottom)?;
        let below_y: Vec<Vertex> = layer_of(self.dim, self.low).filter(|z| z.is_subset(&y)).collect();
        for x in &below_y {
            let c_x = f(x)?;
            if c_x != c_bottom {
                let (c, middle) = majority(x, &y, self.n, f)?;
                let lo = if c_x == c { x.clone() } else { bottom };
                let hi = if c_y == c { y } else { top };
                return Ok((c, self.assemble(lo, middle, hi)));
            }
        }
        let hi = if c_y == c_bottom { y } else { top };
        let middle = below_y.into_iter().take(self.n).collect();
        Ok((c_bottom, self.assemble(bottom, middle, hi)))
    }

    fn find(&self, f: &ColorFn) -> Result<(Color, Vec<Vertex>), ConstructError> {
        let (top, bottom) = (self.top(), Vertex::empty());
        let (c_top, c_bottom) = (f(&top)?, f(&bottom)?);
        for y in layer_of(self.dim, self.dim - self.low) {
            if f(&y)? != c_top {
                return self.upper_mixed(y, f);
            }
        }
        // Complementing swaps the two ends, so a mixed lower end becomes a
        // mixed upper end.
        let dim = self.dim as u32;
        for x in layer_of(self.dim, self.low) {
            if f(&x)? != c_bottom {
                let dual = |z: &Vertex| f(&z.complement_in(dim));
                let (c, map) = self.upper_mixed(x.complement_in(dim), &dual)?;
                let mut map: Vec<Vertex> = map.iter().map(|z| z.complement_in(dim)).collect();
                let last = map.len() - 1;
                map.swap(0, last);
                return Ok((c, map));
            }
        }
        if c_top == c_bottom {
            let middle = layer_of(self.dim, self.low).take(self.n).collect();
            return Ok((c_top, self.assemble(bottom, middle, top)));
        }
        let x = Vertex::range(0, self.alpha as u32);
        if f(&x)? == c_bottom {
            let middle = layer_of(self.dim, self.low).filter(|z| z.is_subset(&x)).take(self.n).collect();
            Ok((c_bottom, self.assemble(bottom, middle, x)))
        } else {
            let middle = layer_of(self.dim, self.dim - self.low).filter(|z| x.is_subset(z)).take(self.n).collect();
            Ok((c_top, self.assemble(x, middle, top)))
        }
    }
}

fn host(coloring: &Coloring, required: usize) -> Result<(), ConstructError> {
    let dimension = coloring.ground().size;
    if dimension < required {
        return Err(ConstructError::DimensionTooSmall { dimension, required });
    }
    Ok(())
}

fn checked(coloring: &Coloring, p: &FinitePoset, dim: usize, color: Color, map: Vec<Vertex>) -> Result<MonoCopy, ConstructError> {
    let copy = MonoCopy { color, dimension: dim, embedding: Embedding::new(EmbeddingKind::Induced, map) };
    if !copy.verify(p, coloring)? {
        return Err(ConstructError::BugCertificate(format!("{} copy of {} fails verification", color, p.name())));
    }
    Ok(copy)
}

/// A monochromatic `D_n` inside `Q([α(n) + α(2n − 1)])`.
pub fn find_mono_diamond(coloring: &Coloring, n: usize) -> Result<MonoCopy, ConstructError> {
    if n < 2 {
        return Err(ConstructError::BadParameters("diamond finder needs n ≥ 2".into()));
    }
    let alpha = sperner_alpha(n as u64)? as usize;
    let dim = alpha + sperner_alpha(2 * n as u64 - 1)? as usize;
    host(coloring, dim)?;
    let setting = DiamondSetting { n, dim, alpha, low: alpha / 2 };
    let f = |z: &Vertex| Ok(coloring.color_of(z)?);
    let (color, map) = setting.find(&f)?;
    checked(coloring, &FinitePoset::diamond(n), dim, color, map)
}

/// A monochromatic `V_n` inside `Q([N₊(n)])`.
pub fn find_mono_fork(coloring: &Coloring, n: usize) -> Result<MonoCopy, ConstructError> {
    let dim = n_plus(n as u64)? as usize;
    host(coloring, dim)?;
    let level = beta(dim as u32, n as u64)? as usize;
    // Work as if the bottom were red; swap back at the end.
    let flip = coloring.color_of(&Vertex::empty())? == Color::Blue;
    let g = |z: &Vertex| -> Result<Color, ConstructError> {
        let c = coloring.color_of(z)?;
        Ok(if flip { c.opposite() } else { c })
    };
    let mut blue = None;
    for z in layer_of(dim, level) {
        if g(&z)? == Color::Blue {
            blue = Some(z);
            break;
        }
    }
    let (color, map) = match blue {
        None => {
            let map = std::iter::once(Vertex::empty()).chain(layer_of(dim, level).take(n)).collect();
            (Color::Red, map)
        }
        Some(x) => {
            let (c, middle) = majority(&x, &Vertex::range(0, dim as u32), n, &g)?;
            let apex = if c == Color::Blue { x } else { Vertex::empty() };
            (c, std::iter::once(apex).chain(middle).collect())
        }
    };
    let color = if flip { color.opposite() } else { color };
    checked(coloring, &FinitePoset::fork(n), dim, color, map)
}

/// The layered coloring showing the lower bound: for diamonds,
/// `N = 2α(n) − 1` with red below layer `α(n)`; for forks, `N = N*(n)` with
/// red below layer `β(N*, n)`.
pub fn witness_coloring(kind: WitnessKind, n: usize) -> Result<ColorTable, ConstructError> {
    if n < 2 {
        return Err(ConstructError::BadParameters("witness colorings need n ≥ 2".into()));
    }
    let (dim, threshold) = match kind {
        WitnessKind::Diamond => {
            let alpha = sperner_alpha(n as u64)? as usize;
            (2 * alpha - 1, alpha)
        }
        WitnessKind::Fork => {
            let dim = n_star(n as u64)?;
            (dim as usize, beta(dim, n as u64)? as usize)
        }
    };
    Ok(ColorTable::from_fn(dim, |p| if (p.count_ones() as usize) < threshold { Color::Red } else { Color::Blue })?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posets::find_mono_copy;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn witnesses_have_no_copy() {
        for n in 2..=4 {
            let t = witness_coloring(WitnessKind::Diamond, n).unwrap();
            assert_eq!(t.dimension(), 2 * sperner_alpha(n as u64).unwrap() as usize - 1);
            for c in [Color::Blue, Color::Red] {
                assert!(find_mono_copy(&t, &FinitePoset::diamond(n), c, EmbeddingKind::Induced).is_none());
            }
            let t = witness_coloring(WitnessKind::Fork, n).unwrap();
            for c in [Color::Blue, Color::Red] {
                assert!(find_mono_copy(&t, &FinitePoset::fork(n), c, EmbeddingKind::Induced).is_none());
            }
        }
    }

    #[test]
    fn finders_on_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2, 3] {
            for _ in 0..100 {
                let t = ColorTable::from_fn(8, |_| if rng.gen_bool(0.5) { Color::Blue } else { Color::Red }).unwrap();
                let c = Coloring::explicit(t);
                find_mono_diamond(&c, n).unwrap();
                find_mono_fork(&c, n).unwrap();
            }
        }
    }

    #[test]
    fn finders_on_structured_tables() {
        for n in [2, 3, 4] {
            let dim = 10;
            let tables = [
                ColorTable::uniform(dim, Color::Blue).unwrap(),
                ColorTable::uniform(dim, Color::Red).unwrap(),
                ColorTable::from_fn(dim, |p| if p.count_ones() < 3 { Color::Red } else { Color::Blue }).unwrap(),
                ColorTable::from_fn(dim, |p| if p.count_ones() < 6 { Color::Blue } else { Color::Red }).unwrap(),
                ColorTable::from_fn(dim, |p| if p.count_ones() % 2 == 0 { Color::Blue } else { Color::Red }).unwrap(),
                ColorTable::from_fn(dim, |p| if p & 1 == 0 { Color::Blue } else { Color::Red }).unwrap(),
            ];
            for t in tables {
                let c = Coloring::explicit(t);
                find_mono_diamond(&c, n).unwrap();
                find_mono_fork(&c, n).unwrap();
            }
        }
    }

    #[test]
    fn host_must_be_large_enough() {
        let c = Coloring::explicit(ColorTable::uniform(4, Color::Red).unwrap());
        assert!(matches!(find_mono_diamond(&c, 2), Err(ConstructError::DimensionTooSmall { dimension: 4, required: 5 })));
    }
}

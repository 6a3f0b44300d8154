//! Exact extremal parameters (Sperner number, `β`, `N*`, `N₊`) and the
//! closed-form Ramsey bounds built from them.
//!
//! Every threshold test compares exact big-integer binomials, never floats.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtremalError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("epsilon condition fails: lhs {lhs} > epsilon {epsilon}")]
    EpsilonCondition { lhs: f64, epsilon: f64 },
}

/// Exact `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub fn ceil_log2(x: &BigUint) -> u64 {
    assert!(*x >= BigUint::from(1u32), "ceil_log2 of zero");
    let bits = x.bits();
    if x.count_ones() == 1 {
        bits - 1
    } else {
        bits
    }
}

/// The Sperner number `α(n)`: least `N` with `C(N, ⌊N/2⌋) ≥ n`.
pub fn sperner_alpha(n: u64) -> Result<u32, ExtremalError> {
    if n == 0 {
        return Err(ExtremalError::Precondition("α(n) needs n ≥ 1".into()));
    }
    let target = BigUint::from(n);
    let mut dim = 0u64;
    while binomial(dim, dim / 2) < target {
        dim += 1;
    }
    Ok(dim as u32)
}

/// `β(N, n) = min { β : C(N, β) ≥ n }`.
///
/// For `n = 1` this is `0`, one below the range `1 ≤ β ≤ α(n)/2` that holds for `n ≥ 2`.
pub fn beta(dim: u32, n: u64) -> Result<u32, ExtremalError> {
    let alpha = sperner_alpha(n)?;
    if dim < alpha {
        return Err(ExtremalError::Precondition(format!("β(N, n) needs N ≥ α(n) = {alpha}, got N = {dim}")));
    }
    let target = BigUint::from(n);
    let b = (0..=dim as u64)
        .find(|&b| binomial(dim as u64, b) >= target)
        .expect("C(N, ⌊N/2⌋) ≥ n once N ≥ α(n)");
    Ok(b as u32)
}

fn require_at_least_two(n: u64, what: &str) -> Result<(), ExtremalError> {
    if n < 2 {
        return Err(ExtremalError::Precondition(format!("{what} needs n ≥ 2, got {n}")));
    }
    Ok(())
}

/// `N*(n) = max { N ≥ α(n) : N − β(N, n) < α(n) }`, scanning `α(n) ≤ N ≤ 2α(n)`.
pub fn n_star(n: u64) -> Result<u32, ExtremalError> {
    require_at_least_two(n, "N*(n)")?;
    let alpha = sperner_alpha(n)?;
    let mut best = None;
    for dim in alpha..=2 * alpha {
        if dim - beta(dim, n)? < alpha {
            best = Some(dim);
        }
    }
    Ok(best.expect("N = α(n) always qualifies"))
}

/// `N₊(n)`: least `N` with `N − β(N, n) ≥ α(2n − 1)`.
pub fn n_plus(n: u64) -> Result<u32, ExtremalError> {
    require_at_least_two(n, "N₊(n)")?;
    let alpha = sperner_alpha(n)?;
    let wide = sperner_alpha(2 * n - 1)?;
    let mut dim = alpha;
    loop {
        if dim - beta(dim, n)? >= wide {
            return Ok(dim);
        }
        dim += 1;
    }
}

/// Left-hand side of the ε-condition, `(n+m)/n · 1/((1−ε) log m) + m^(−ε)`.
pub fn epsilon_condition_lhs(m: u64, n: u64, epsilon: f64) -> f64 {
    let (m, n) = (m as f64, n as f64);
    (n + m) / n / ((1.0 - epsilon) * m.log2()) + m.powf(-epsilon)
}

fn check_qm_qn_domain(m: u64, n: u64, epsilon: f64) -> Result<(), ExtremalError> {
    if !(m >= 2 && n >= m) {
        return Err(ExtremalError::Precondition(format!("need n ≥ m ≥ 2, got m = {m}, n = {n}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(ExtremalError::Precondition(format!("need 0 < ε < 1, got {epsilon}")));
    }
    Ok(())
}

/// Whether `(n+m)/n · 1/((1−ε) log m) + m^(−ε) ≤ ε` (log base 2).
pub fn epsilon_condition(m: u64, n: u64, epsilon: f64) -> Result<bool, ExtremalError> {
    check_qm_qn_domain(m, n, epsilon)?;
    Ok(epsilon_condition_lhs(m, n, epsilon) <= epsilon)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Headline {
    /// `(1 − 2/√(log m)) · log m`
    pub coefficient: f64,
    /// `n (m − coefficient)`
    pub value: f64,
}

/// Upper bound on `R(Q_m, Q_n)` from the ε-refined truncated-blob construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm11Bound {
    pub theorem_tag: &'static str,
    pub m: u64,
    pub n: u64,
    pub epsilon: f64,
    pub condition_lhs: f64,
    /// `n (m − (1−ε)² log m)`
    pub value: f64,
    /// Present when `ε = 1/√(log m)`.
    pub headline: Option<Headline>,
}

pub fn thm11_bound(m: u64, n: u64, epsilon: f64) -> Result<Thm11Bound, ExtremalError> {
    check_qm_qn_domain(m, n, epsilon)?;
    let lhs = epsilon_condition_lhs(m, n, epsilon);
    if lhs > epsilon {
        return Err(ExtremalError::EpsilonCondition { lhs, epsilon });
    }
    let log_m = (m as f64).log2();
    let value = n as f64 * (m as f64 - (1.0 - epsilon).powi(2) * log_m);
    let headline = ((epsilon - 1.0 / log_m.sqrt()).abs() < 1e-12).then(|| {
        let coefficient = (1.0 - 2.0 / log_m.sqrt()) * log_m;
        Headline { coefficient, value: n as f64 * (m as f64 - coefficient) }
    });
    Ok(Thm11Bound { theorem_tag: "qm-qn-truncated-blobs", m, n, epsilon, condition_lhs: lhs, value, headline })
}

/// Dimension `nm + n + m` that forces a blue `Q_m` or red `Q_n`.
pub fn blob_lemma_dimension(m: u64, n: u64) -> Result<u64, ExtremalError> {
    if m == 0 || n == 0 {
        return Err(ExtremalError::Precondition("blob lemma needs m, n ≥ 1".into()));
    }
    Ok(n * m + n + m)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiamondBounds {
    pub theorem_tag: &'static str,
    pub n: u64,
    /// `2α(n)`
    pub lower: u32,
    /// `α(n) + α(2n − 1)`
    pub upper: u32,
    /// `n = 1`: `D_1` is a 3-chain and the formula collapses to `(0, 0)`.
    pub degenerate: bool,
}

pub fn diamond_bounds(n: u64) -> Result<DiamondBounds, ExtremalError> {
    let alpha = sperner_alpha(n)?;
    let upper = alpha + sperner_alpha(2 * n - 1)?;
    if upper > 2 * alpha + 2 {
        return Err(ExtremalError::Precondition(format!(
            "α(2n−1) ≤ α(n)+2 failed at n = {n}: upper {upper} > {}",
            2 * alpha + 2
        )));
    }
    Ok(DiamondBounds { theorem_tag: "diamond", n, lower: 2 * alpha, upper, degenerate: n == 1 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForkBounds {
    pub theorem_tag: &'static str,
    pub n: u64,
    pub n_star: u32,
    /// `N*(n) + 1`
    pub lower: u32,
    /// `N*(n) + 3`
    pub upper: u32,
    /// `N*(n) + 2`, available when `α(2n−1) ≤ α(n) + 1`.
    pub sharper_upper: Option<u32>,
}

pub fn fork_bounds(n: u64) -> Result<ForkBounds, ExtremalError> {
    let star = n_star(n)?;
    let sharper = sperner_alpha(2 * n - 1)? <= sperner_alpha(n)? + 1;
    Ok(ForkBounds {
        theorem_tag: "fork",
        n,
        n_star: star,
        lower: star + 1,
        upper: star + 3,
        sharper_upper: sharper.then_some(star + 2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert_eq!(binomial(4, 5), BigUint::from(0u32));
        assert_eq!(binomial(0, 0), BigUint::from(1u32));
        assert_eq!(binomial(100, 50).to_string(), "100891344545564193334812497256");
        assert_eq!(ceil_log2(&BigUint::from(1u32)), 0);
        assert_eq!(ceil_log2(&BigUint::from(8u32)), 3);
        assert_eq!(ceil_log2(&BigUint::from(9u32)), 4);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(sperner_alpha(1).unwrap(), 0);
        assert_eq!(sperner_alpha(2).unwrap(), 2);
        assert_eq!(sperner_alpha(6).unwrap(), 4);
        assert_eq!(sperner_alpha(20).unwrap(), 6);
        assert_eq!(sperner_alpha(21).unwrap(), 7);
        assert!(sperner_alpha(0).is_err());
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta(4, 6).unwrap(), 2);
        assert_eq!(beta(3, 2).unwrap(), 1);
        for dim in 0..10 {
            assert_eq!(beta(dim, 1).unwrap(), 0);
        }
        assert!(beta(3, 6).is_err());
    }

    #[test]
    fn n_star_examples() {
        assert_eq!(n_star(2).unwrap(), 2);
        assert_eq!(n_star(3).unwrap(), 3);
        assert_eq!(n_star(6).unwrap(), 5);
        assert!(n_star(1).is_err());
    }

    #[test]
    fn n_plus_examples() {
        assert_eq!(n_plus(2).unwrap(), 4);
        assert_eq!(n_plus(3).unwrap(), 5);
        assert!(n_plus(6).unwrap() <= n_star(6).unwrap() + 3);
    }

    #[test]
    fn epsilon_condition_examples() {
        assert!(epsilon_condition(1024, 1024, 0.5).unwrap());
        assert!((epsilon_condition_lhs(1024, 1024, 0.5) - 0.43125).abs() < 1e-12);
        let m = 1u64 << 25;
        assert!(epsilon_condition(m, m, 0.2).unwrap());
        assert!(!epsilon_condition(4, 4, 0.5).unwrap());
        assert!((epsilon_condition_lhs(4, 4, 0.5) - 2.5).abs() < 1e-12);
        assert!(epsilon_condition(4, 3, 0.5).is_err());
    }

    #[test]
    fn thm11_examples() {
        let b = thm11_bound(1024, 1024, 0.5).unwrap();
        assert_eq!(b.value, 1024.0 * 1021.5);
        assert!(b.headline.is_none());
        let m = 1u64 << 25;
        let b = thm11_bound(m, m, 0.2).unwrap();
        let h = b.headline.unwrap();
        assert!((h.coefficient - 15.0).abs() < 1e-9);
        assert!((h.value - m as f64 * (m as f64 - 15.0)).abs() < 1e-3);
        assert!(matches!(thm11_bound(4, 4, 0.5), Err(ExtremalError::EpsilonCondition { .. })));
    }

    #[test]
    fn blob_lemma_examples() {
        assert_eq!(blob_lemma_dimension(2, 2).unwrap(), 8);
        assert_eq!(blob_lemma_dimension(1, 1).unwrap(), 3);
        assert_eq!(blob_lemma_dimension(2, 3).unwrap(), 11);
    }

    #[test]
    fn diamond_examples() {
        let d = diamond_bounds(2).unwrap();
        assert_eq!((d.lower, d.upper), (4, 5));
        let d = diamond_bounds(6).unwrap();
        assert_eq!((d.lower, d.upper), (8, 10));
        let d = diamond_bounds(1).unwrap();
        assert_eq!((d.lower, d.upper, d.degenerate), (0, 0, true));
    }

    #[test]
    fn fork_examples() {
        for (n, lo, hi) in [(2, 3, 5), (3, 4, 6), (6, 6, 8)] {
            let f = fork_bounds(n).unwrap();
            assert_eq!((f.lower, f.upper), (lo, hi));
        }
        // α(3) = 3 = α(2) + 1
        assert_eq!(fork_bounds(2).unwrap().sharper_upper, Some(4));
    }
}

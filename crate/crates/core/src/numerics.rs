//! Binary entropy and the constants defined through it.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("entropy argument {0} outside [0, 1]")]
    Domain(f64),
    #[error("bad integration interval [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },
}

/// `H(p) = −p log₂ p − (1−p) log₂(1−p)`; the endpoints take the limit value `0`.
pub fn entropy(p: f64) -> Result<f64, NumericsError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(NumericsError::Domain(p));
    }
    Ok(entropy_unchecked(p))
}

fn entropy_unchecked(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Bisection for a sign change of `f` on `[lo, hi]` down to width `tol`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let lo_sign = f(lo) < 0.0;
    debug_assert_ne!(lo_sign, f(hi) < 0.0, "no sign change on bracket");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const ROOT_TOLERANCE: f64 = 1e-12;

/// The `q ∈ (0, ½)` with `H(q) = ½`, the minimiser of `(1−q) + 2∫₀^q H`.
pub fn solve_q() -> f64 {
    bisect(|p| entropy_unchecked(p) - 0.5, 0.0, 0.5, ROOT_TOLERANCE)
}

/// `c ∈ (0, ½)` with `1 − c = H(c)`, and `d = 1/(1−c)`.
pub fn solve_c_d() -> (f64, f64) {
    let c = bisect(|p| 1.0 - p - entropy_unchecked(p), 0.0, 0.5, ROOT_TOLERANCE);
    (c, 1.0 / (1.0 - c))
}

/// `log₂(c^{−c} (1−c)^{c−1})`, the same function as `H(c)` written as a single log.
pub fn entropy_product_form(c: f64) -> f64 {
    (c.powf(-c) * (1.0 - c).powf(c - 1.0)).log2()
}

const QUADRATURE_TOLERANCE: f64 = 1e-10;
const MAX_DEPTH: u32 = 60;

/// `∫_a^b H(s) ds` by adaptive Simpson quadrature.
pub fn entropy_integral(a: f64, b: f64) -> Result<f64, NumericsError> {
    if !(0.0 <= a && a <= b && b <= 1.0) {
        return Err(NumericsError::BadInterval { a, b });
    }
    if a == b {
        return Ok(0.0);
    }
    let h = entropy_unchecked;
    let (fa, fb) = (h(a), h(b));
    let m = 0.5 * (a + b);
    let fm = h(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    Ok(simpson(&h, a, b, fa, fm, fb, whole, QUADRATURE_TOLERANCE, MAX_DEPTH))
}

#[allow(clippy::too_many_arguments)]
fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// `(1 − p) + 2∫₀^p H`, the per-`n²` size of the weak-copy construction.
pub fn weak_objective(p: f64) -> Result<f64, NumericsError> {
    Ok(1.0 - p + 2.0 * entropy_integral(0.0, p)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyConstants {
    pub q: f64,
    pub c: f64,
    pub d: f64,
    /// `∫₀^q H`
    pub integral_q: f64,
    /// `(1−q) + 2∫₀^q H`
    pub weak_objective: f64,
}

impl EntropyConstants {
    pub fn compute() -> Self {
        let q = solve_q();
        let (c, d) = solve_c_d();
        let integral_q = entropy_integral(0.0, q).expect("q in (0, 1/2)");
        EntropyConstants { q, c, d, integral_q, weak_objective: 1.0 - q + 2.0 * integral_q }
    }
}

/// The chain `(1−q)n² + 2n²∫₀^q H ≤ 0.956n² ≤ 0.96n²` evaluated at one `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakBudgetReport {
    pub n: u64,
    pub lhs: f64,
    pub middle: f64,
    pub rhs: f64,
    pub lhs_le_middle: bool,
    pub middle_le_rhs: bool,
}

pub fn check_weak_budget(n: u64) -> WeakBudgetReport {
    let constants = EntropyConstants::compute();
    let sq = (n * n) as f64;
    let (lhs, middle, rhs) = (constants.weak_objective * sq, 0.956 * sq, 0.96 * sq);
    WeakBudgetReport { n, lhs, middle, rhs, lhs_le_middle: lhs <= middle, middle_le_rhs: middle <= rhs }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(0.5).unwrap(), 1.0);
        let quarter = 0.25 * 2.0 + 0.75 * (4.0f64 / 3.0).log2();
        assert!((entropy(0.25).unwrap() - quarter).abs() < 1e-15);
        assert!((entropy(0.25).unwrap() - 0.811278).abs() < 1e-6);
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        assert!(entropy(1.5).is_err());
        assert!(entropy(-0.1).is_err());
        assert!(entropy(f64::NAN).is_err());
    }

    #[test]
    fn entropy_is_symmetric() {
        for i in 1..100 {
            let p = i as f64 / 100.0;
            assert!((entropy(p).unwrap() - entropy(1.0 - p).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn q_is_the_half_entropy_point() {
        let q = solve_q();
        assert!((entropy(q).unwrap() - 0.5).abs() <= 1e-9);
        assert!(0.11 < q && q < 0.111);
    }

    #[test]
    fn q_minimises_the_weak_objective() {
        let at_q = weak_objective(solve_q()).unwrap();
        for p in [0.05, 0.2, 0.3] {
            assert!(at_q <= weak_objective(p).unwrap());
        }
    }

    #[test]
    fn c_and_d() {
        let (c, d) = solve_c_d();
        assert!((c - 0.2271).abs() <= 5e-4);
        assert!((1.0 - c - entropy(c).unwrap()).abs() <= 1e-9);
        assert!((d - 1.29).abs() <= 5e-3);
        assert!((entropy_product_form(c) - (1.0 - c)).abs() <= 1e-9);
    }

    #[test]
    fn c_is_the_only_sign_change() {
        let g = |p: f64| 1.0 - p - entropy(p).unwrap();
        let grid: Vec<f64> = (0..10_000).map(|i| 0.001 + 0.498 * i as f64 / 9_999.0).collect();
        let changes = grid.windows(2).filter(|w| (g(w[0]) < 0.0) != (g(w[1]) < 0.0)).count();
        assert_eq!(changes, 1);
    }

    #[test]
    fn integral_edge_cases() {
        assert_eq!(entropy_integral(0.0, 0.0).unwrap(), 0.0);
        let whole = 0.5 * std::f64::consts::LOG2_E;
        assert!((entropy_integral(0.0, 1.0).unwrap() - whole).abs() < 1e-8);
        assert!(entropy_integral(0.0, solve_q()).unwrap() <= 0.033);
        assert!(entropy_integral(0.6, 0.2).is_err());
    }

    #[test]
    fn weak_budget() {
        let c = EntropyConstants::compute();
        assert!(c.weak_objective <= 0.956);
        let r = check_weak_budget(100);
        assert!(r.lhs <= 9560.0 && r.middle_le_rhs && r.lhs_le_middle);
        assert_eq!(r.rhs, 9600.0);
    }
}

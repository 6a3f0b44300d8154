use poset_ramsey::extremal::{beta, binomial, n_star};
use poset_ramsey::numerics::{entropy, entropy_integral};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Closed-form antiderivative of `H`, derived by integrating `−p ln p` and
/// `−(1−p) ln(1−p)` separately and converting to base 2.
fn entropy_antiderivative(p: f64) -> f64 {
    let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x / 2.0 * x.ln() };
    let r = 1.0 - p;
    (-xlnx(p) + p * p / 4.0 + xlnx(r) - r * r / 4.0) / std::f64::consts::LN_2
}

#[test]
fn quadrature_matches_antiderivative_on_random_intervals() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let (x, y): (f64, f64) = (rng.gen(), rng.gen());
        let (a, b) = (x.min(y), x.max(y));
        let exact = entropy_antiderivative(b) - entropy_antiderivative(a);
        let got = entropy_integral(a, b).unwrap();
        assert!((got - exact).abs() <= 1e-8, "[{a}, {b}]: {got} vs {exact}");
    }
}

fn log2_binomial(n: u64, k: u64) -> f64 {
    let b = binomial(n, k);
    let bits = b.bits();
    // keep the top 53 bits so the float conversion is exact enough
    let shift = bits.saturating_sub(53);
    let top: u64 = (&b >> shift).try_into().unwrap();
    (top as f64).log2() + shift as f64
}

#[test]
fn binomial_growth_approaches_entropy() {
    for p in [0.11, 0.2271, 0.25] {
        let errors: Vec<f64> = [50u64, 100, 200, 400]
            .iter()
            .map(|&n| {
                let k = (p * n as f64).floor() as u64;
                (log2_binomial(n, k) / (n as f64 * entropy(p).unwrap()) - 1.0).abs()
            })
            .collect();
        assert!(errors.windows(2).all(|w| w[1] < w[0]), "p = {p}: {errors:?}");
        assert!(errors[3] < 0.1, "p = {p}: {errors:?}");
    }
}

#[test]
fn beta_stays_above_a_sixteenth_past_n_star() {
    for n in 2..=10_000u64 {
        let dim = n_star(n).unwrap() + 1;
        let b = beta(dim, n).unwrap();
        assert!(16 * b > dim, "n = {n}: β = {b}, N = {dim}");
    }
}

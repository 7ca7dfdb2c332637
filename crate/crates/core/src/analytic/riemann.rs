use super::{check_sigma, EvalResult, Neumaier};
use crate::error::{Error, Result};

/// `B_2, B_4, B_6, B_8` over `(2j)!`.
const BERNOULLI_OVER_FACTORIAL: [f64; 4] =
    [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0];

/// `B_10 / 10!`, the first omitted correction.
const B10_OVER_FACTORIAL: f64 = 1.0 / 47900160.0;

/// `ζ(σ)` for real `σ > 1`.
///
/// ```
/// use towertree::analytic::riemann_zeta;
/// let z = riemann_zeta(2.0).unwrap();
/// assert!(z.contains(std::f64::consts::PI.powi(2) / 6.0));
/// ```
pub fn riemann_zeta(sigma: f64) -> Result<EvalResult> {
    let rest = zeta_minus_one(sigma)?;
    let value = 1.0 + rest.value;
    Ok(EvalResult::new(
        value,
        rest.error_bound + f64::EPSILON * value,
    ))
}

/// `ζ(σ) - 1 = Σ_{n >= 2} n^{-σ}`, accurate in relative terms for large `σ`
/// where `ζ(σ)` itself rounds to 1.
///
/// Euler–Maclaurin with cut `N`: the partial sum to `N - 1`, the integral
/// tail, half the boundary term and the corrections through `B_8`. For
/// `x^{-σ}` the remainder is bounded by the first omitted (`B_10`) term.
pub fn zeta_minus_one(sigma: f64) -> Result<EvalResult> {
    check_sigma(sigma)?;
    if sigma <= 1.0 {
        return Err(Error::domain(format!("zeta needs sigma > 1, got {sigma}")));
    }
    let mut n_cut = 16u32;
    loop {
        let (value, bound, abs) = euler_maclaurin(sigma, n_cut);
        let rounding = 4.0 * f64::EPSILON * abs;
        if bound <= 0.125 * f64::EPSILON * value || n_cut >= 1 << 12 {
            return Ok(EvalResult::new(value, bound + rounding));
        }
        n_cut *= 2;
    }
}

/// Returns (value, truncation bound, Σ|terms|).
fn euler_maclaurin(s: f64, n_cut: u32) -> (f64, f64, f64) {
    let mut sum = Neumaier::default();
    // Smallest terms first.
    let n = n_cut as f64;
    let n_pow = n.powf(-s);
    let mut corr = Neumaier::default();
    let mut rising = s; // s (s+1) ... (s + 2j - 2)
    let mut n_pow_j = n_pow / n; // N^{-s-2j+1}
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            let a = s + (2 * j) as f64;
            rising *= a * (a - 1.0);
            n_pow_j /= n * n;
        }
        corr.add(c * rising * n_pow_j);
    }
    let a = s + 8.0;
    let bound = B10_OVER_FACTORIAL * rising * a * (a - 1.0) * n_pow_j / (n * n);

    sum.add(corr.value());
    sum.add(0.5 * n_pow);
    sum.add(n * n_pow / (s - 1.0));
    for k in (2..n_cut).rev() {
        sum.add((k as f64).powf(-s));
    }
    (sum.value(), bound.abs(), sum.abs_sum() + corr.abs_sum())
}

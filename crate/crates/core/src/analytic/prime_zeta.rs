use super::riemann::zeta_minus_one;
use super::{check_sigma, EvalResult, Neumaier, Tolerance};
use crate::error::{Error, Result};

/// `μ(0..=limit)` by a linear sieve; `μ(0)` is stored as 0.
pub fn mobius_table(limit: usize) -> Result<Vec<i8>> {
    if limit == 0 {
        return Err(Error::domain("mobius table needs limit >= 1"));
    }
    let mut mu = vec![0i8; limit + 1];
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    mu[1] = 1;
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let Some(ip) = i.checked_mul(p).filter(|&v| v <= limit) else {
                break;
            };
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    Ok(mu)
}

/// Prime zeta `P(σ) = Σ_p p^{-σ}` for real `σ > 1`, from
/// `P(σ) = Σ_n μ(n)/n · log ζ(nσ)`.
///
/// For `t >= 2`, `|log ζ(t)| <= 2 · 2^{-t}`, so the terms after `N` sum to at
/// most `2 · 2^{-(N+1)σ} / ((N+1)(1 - 2^{-σ}))`. Only the first term feels the
/// pole of `ζ` at 1.
///
/// ```
/// use towertree::analytic::{prime_zeta, Tolerance};
/// let p = prime_zeta(2.0, Tolerance::new(1e-13).unwrap()).unwrap();
/// assert!((p.value - 0.452247420041065).abs() < 1e-13);
/// ```
pub fn prime_zeta(sigma: f64, tol: Tolerance) -> Result<EvalResult> {
    let result = prime_zeta_series(sigma, tol.target() / 2.0, tol.max_terms)?;
    if result.error_bound > tol.target() {
        return Err(Error::ToleranceUnachievable {
            target: tol.target(),
            partial: result,
        });
    }
    Ok(result)
}

pub(crate) fn tail_bound(sigma: f64, n: u64) -> f64 {
    let n1 = (n + 1) as f64;
    2.0 * (-n1 * sigma).exp2() / (n1 * (1.0 - (-sigma).exp2()))
}

/// The series with its truncation pushed below `truncation`, or to
/// `max_terms` terms, whichever comes first. The error bound covers the
/// truncation, the per-term `ζ` errors and rounding.
pub(crate) fn prime_zeta_series(sigma: f64, truncation: f64, max_terms: u64) -> Result<EvalResult> {
    check_sigma(sigma)?;
    if sigma <= 1.0 {
        return Err(Error::domain(format!(
            "prime zeta needs sigma > 1, got {sigma}"
        )));
    }
    let mut terms = 1u64;
    while terms < max_terms.max(1) && tail_bound(sigma, terms) > truncation {
        terms += 1;
    }
    let mu = mobius_table(terms as usize)?;
    let mut sum = Neumaier::default();
    let mut eval_err = 0.0;
    // Smallest terms first.
    for n in (1..=terms).rev() {
        let m = mu[n as usize];
        if m == 0 {
            continue;
        }
        let rest = zeta_minus_one(n as f64 * sigma)?;
        let log_zeta = rest.value.ln_1p();
        // d log ζ / dζ = 1/ζ, and ζ >= max(1, value - error) on the enclosure.
        let zeta_low = (1.0 + rest.value - rest.error_bound).max(1.0);
        let nf = n as f64;
        sum.add(m as f64 * log_zeta / nf);
        eval_err += (rest.error_bound / zeta_low + 2.0 * f64::EPSILON * log_zeta) / nf;
    }
    let rounding = 4.0 * f64::EPSILON * sum.abs_sum();
    let bound = tail_bound(sigma, terms) + eval_err + rounding;
    Ok(EvalResult::new(sum.value(), bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::primes_up_to;

    fn tol(t: f64) -> Tolerance {
        Tolerance::new(t).unwrap()
    }

    #[test]
    fn mobius_values() {
        let mu = mobius_table(10_000).unwrap();
        assert_eq!(&mu[1..=6], &[1, -1, -1, 0, -1, 1]);
        assert_eq!(mu[30], -1);
        assert_eq!(mu[4], 0);
        // Mertens function by factorization.
        let mut mertens = 0i64;
        for n in 1..=10_000u64 {
            let f = crate::tree::factorize(n).unwrap();
            if f.pairs().iter().all(|&(_, e)| e == 1) {
                mertens += if f.omega() % 2 == 0 { 1 } else { -1 };
            }
        }
        assert_eq!(mertens, -23);
        assert_eq!(mu.iter().map(|&m| m as i64).sum::<i64>(), -23);
        assert!(mobius_table(0).is_err());
    }

    #[test]
    fn log_zeta_bound_on_a_grid() {
        let mut t = 2.0;
        while t <= 100.0 {
            let z = zeta_minus_one(t).unwrap();
            assert!(z.value.ln_1p() <= 2.0 * (-t).exp2(), "t = {t}");
            t += 0.01;
        }
    }

    #[test]
    fn sigma_two() {
        let p = prime_zeta(2.0, tol(1e-14)).unwrap();
        assert!((p.value - 0.4522474200410655).abs() <= p.error_bound);
        assert!(p.error_bound <= 1e-14);
    }

    #[test]
    fn prime_sum_oracle() {
        // Σ_{p < 10^7} p^-2 plus the tail Σ_{n >= 10^7} n^-2 bracket.
        let mut acc = Neumaier::default();
        for p in primes_up_to(10_000_000).into_iter().rev() {
            acc.add((p as f64).powi(-2));
        }
        let p = prime_zeta(2.0, tol(1e-13)).unwrap();
        let gap = p.value - acc.value();
        assert!(gap > 0.0 && gap < 1e-7, "{gap}");
    }

    #[test]
    fn sigma_thirty() {
        // 2^-30 dominates, but 3^-30 is 5.2e-6 of it: the value sits above
        // 2^-30 (1 + 10^-6).
        let p = prime_zeta(30.0, tol(1e-14)).unwrap();
        let two = 2f64.powi(-30);
        assert!(p.lower() >= two && p.upper() <= two * (1.0 + 1e-5), "{p:?}");
        assert!(p.contains(9.313274315523019e-10));
        assert!(p.lower() > two * (1.0 + 1e-6));
    }

    #[test]
    fn near_the_pole() {
        let s = 1.001;
        let p = prime_zeta(s, tol(1e-10)).unwrap();
        assert!((p.value - (1.0 / (s - 1.0)).ln()).abs() < 2.0);
        assert!((p.value - 6.593368133356675).abs() <= p.error_bound + 1e-14);
    }

    #[test]
    fn bracket() {
        let mut s = 2.0;
        while s <= 40.0 {
            let p = prime_zeta(s, tol(1e-14)).unwrap();
            assert!(
                p.lower() > (-s).exp2() && p.upper() < (1.0 - s).exp2(),
                "s = {s}"
            );
            s += 0.25;
        }
    }

    #[test]
    fn unreachable_tolerance_keeps_the_partial_result() {
        let t = Tolerance {
            max_terms: 1,
            ..tol(1e-12)
        };
        match prime_zeta(2.0, t) {
            Err(Error::ToleranceUnachievable { target, partial }) => {
                assert_eq!(target, 1e-12);
                assert!(partial.error_bound > 1e-12);
                assert!(partial.contains(0.4522474200410655));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn domain() {
        assert!(prime_zeta(1.0, tol(1e-10)).is_err());
        assert!(prime_zeta(f64::NAN, tol(1e-10)).is_err());
    }
}

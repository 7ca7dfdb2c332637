use serde::Serialize;

use crate::error::{Error, Result};

/// Prime factorization of a positive integer: `(prime, exponent)` pairs with
/// strictly increasing primes and exponents at least one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FactorView {
    pairs: Vec<(u64, u64)>,
}

impl FactorView {
    /// Wraps pairs that are already sorted, prime and positive.
    pub(crate) fn from_sorted_pairs(pairs: Vec<(u64, u64)>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(pairs.iter().all(|&(_, e)| e >= 1));
        FactorView { pairs }
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> usize {
        self.pairs.len()
    }

    /// Multiplies the factorization back out. `None` on `u64` overflow.
    pub fn value(&self) -> Option<u64> {
        self.pairs.iter().try_fold(1u64, |acc, &(p, e)| {
            let e = u32::try_from(e).ok()?;
            acc.checked_mul(p.checked_pow(e)?)
        })
    }
}

/// Exact factorization by trial division over 2, 3 and `6k ± 1`.
pub fn factorize(n: u64) -> Result<FactorView> {
    if n == 0 {
        return Err(Error::domain("cannot factorize 0"));
    }
    let mut pairs = Vec::new();
    let mut rest = n;
    for p in [2u64, 3] {
        strip(&mut rest, p, &mut pairs);
    }
    let mut d = 5u64;
    while d <= rest / d {
        strip(&mut rest, d, &mut pairs);
        strip(&mut rest, d + 2, &mut pairs);
        d += 6;
    }
    if rest > 1 {
        pairs.push((rest, 1));
    }
    Ok(FactorView { pairs })
}

fn strip(rest: &mut u64, p: u64, pairs: &mut Vec<(u64, u64)>) {
    if *rest % p != 0 {
        return;
    }
    let mut e = 0;
    while *rest % p == 0 {
        *rest /= p;
        e += 1;
    }
    pairs.push((p, e));
}

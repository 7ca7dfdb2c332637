use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::tree::{tree_of_factors, FactorView, Tree};

/// Memory allowed for a flat [`SpfTable`], in bytes.
pub const DEFAULT_SPF_BUDGET_BYTES: u64 = 1 << 30;

/// Smallest-prime-factor table for `0..=limit`.
///
/// `spf[p] = p` for primes; `spf[1] = 1` and `spf[0] = 0` are sentinels.
#[derive(Clone, Debug)]
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.spf
    }

    pub fn factorize(&self, n: u64) -> Result<FactorView> {
        if n == 0 || n > self.limit() {
            return Err(Error::domain(format!(
                "{n} is outside 1..={}",
                self.limit()
            )));
        }
        let mut pairs: Vec<(u64, u64)> = Vec::new();
        let mut rest = n;
        while rest > 1 {
            let p = self.spf(rest);
            rest /= p;
            match pairs.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => pairs.push((p, 1)),
            }
        }
        Ok(FactorView::from_sorted_pairs(pairs))
    }

    pub fn tree_of(&self, n: u64) -> Result<Tree> {
        Ok(tree_of_factors(&self.factorize(n)?))
    }
}

pub fn build_spf(limit: u64) -> Result<SpfTable> {
    build_spf_with_budget(limit, DEFAULT_SPF_BUDGET_BYTES)
}

/// Linear sieve. Every composite is written once, by its smallest prime.
pub fn build_spf_with_budget(limit: u64, budget_bytes: u64) -> Result<SpfTable> {
    if limit == 0 {
        return Err(Error::domain("spf table needs limit >= 1"));
    }
    let bytes = limit.saturating_add(1).saturating_mul(4);
    if bytes > budget_bytes || limit > u32::MAX as u64 {
        return Err(Error::Resource(format!(
            "a flat spf table to {limit} needs {bytes} bytes (budget {budget_bytes}); use the segmented census"
        )));
    }
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    spf[1] = 1;
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            if p > si || p as usize * i > n {
                break;
            }
            spf[p as usize * i] = p;
        }
    }
    Ok(SpfTable { spf })
}

/// All primes `<= limit`, by a segmented sieve of Eratosthenes over odd
/// numbers.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_prime(limit, |p| out.push(p));
    out
}

/// Calls `f` on every prime `<= limit`, in increasing order.
pub fn for_each_prime(limit: u64, mut f: impl FnMut(u64)) {
    if limit < 2 {
        return;
    }
    f(2);
    let root = isqrt(limit);
    let base = small_odd_primes(root);
    const SEG: u64 = 1 << 18;
    // Segment covers odd numbers lo, lo+2, .., < lo + 2*SEG.
    let mut lo = 3u64;
    let mut marks = vec![false; SEG as usize];
    while lo <= limit {
        let hi = lo.saturating_add(2 * SEG).min(limit + 1);
        let len = (hi - lo).div_ceil(2) as usize;
        marks[..len].iter_mut().for_each(|m| *m = false);
        for &p in &base {
            let p2 = p * p;
            if p2 >= hi {
                break;
            }
            let mut start = if p2 >= lo { p2 } else { lo.div_ceil(p) * p };
            if start % 2 == 0 {
                start += p;
            }
            let mut i = ((start - lo) / 2) as usize;
            while i < len {
                marks[i] = true;
                i += p as usize;
            }
        }
        for (i, &m) in marks[..len].iter().enumerate() {
            if !m {
                f(lo + 2 * i as u64);
            }
        }
        lo = hi + (hi % 2 == 0) as u64;
        if hi > limit {
            break;
        }
    }
}

/// Shared table of primes, grown on demand. The returned list covers at least
/// `limit` and may run past it. `limit` must fit in `u32`.
pub(crate) fn cached_primes(limit: u64) -> Arc<Vec<u32>> {
    static CACHE: Mutex<Option<(u64, Arc<Vec<u32>>)>> = Mutex::new(None);
    assert!(limit <= u32::MAX as u64, "prime cache is 32-bit");
    let mut slot = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some((covered, primes)) = slot.as_ref() {
        if *covered >= limit {
            return Arc::clone(primes);
        }
    }
    let mut primes = Vec::new();
    for_each_prime(limit, |p| primes.push(p as u32));
    let primes = Arc::new(primes);
    *slot = Some((limit, Arc::clone(&primes)));
    primes
}

fn small_odd_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in (3..=n).step_by(2) {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
    }
    out
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Largest `r` with `r^k <= n`.
pub(crate) fn iroot(n: u64, k: u32) -> u64 {
    if k == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64) as u64;
    while r > 0 && r.checked_pow(k).map_or(true, |v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::tree_of;

    #[test]
    fn spf_small() {
        let t = build_spf(10).unwrap();
        assert_eq!(&t.as_slice()[1..], &[1, 2, 3, 2, 5, 2, 7, 2, 3, 2]);
        let t = build_spf(1 << 20).unwrap();
        assert_eq!(t.spf(97), 97);
        assert_eq!(t.spf(1 << 20), 2);
        assert_eq!(t.spf(999_983), 999_983);
        assert_eq!(t.spf(999_981), 3);
    }

    #[test]
    fn spf_invariants() {
        let t = build_spf(100_000).unwrap();
        for n in 2..=100_000u64 {
            let p = t.spf(n);
            assert_eq!(n % p, 0);
            assert!(p * p <= n || p == n);
            assert_eq!(t.tree_of(n).unwrap(), tree_of(n).unwrap());
        }
    }

    #[test]
    fn spf_budget() {
        assert!(build_spf(0).is_err());
        assert!(matches!(
            build_spf_with_budget(1000, 100),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn prime_lists() {
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(2), [2]);
        assert_eq!(primes_up_to(30), [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
        // Segment boundaries: 3 + 2*2^18 = 524291 is prime.
        let around: Vec<u64> = primes_up_to(524_300)
            .into_iter()
            .filter(|&p| p > 524_200)
            .collect();
        let naive: Vec<u64> = (524_201..=524_300)
            .filter(|&n| crate::tree::factorize(n).unwrap().pairs() == [(n, 1)])
            .collect();
        assert_eq!(around, naive);
    }

    #[test]
    fn roots() {
        assert_eq!(isqrt(99), 9);
        assert_eq!(isqrt(100), 10);
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
        assert_eq!(iroot(1000, 3), 10);
        assert_eq!(iroot(999, 3), 9);
        assert_eq!(iroot(u64::MAX, 2), 4_294_967_295);
        assert_eq!(iroot(7, 1), 7);
    }
}

//! Exact per-tree counts `π_T(x) = #{n <= x : t(n) = T}`.
//!
//! The range `1..=x` is cut into segments. Each segment is sieved by the primes
//! up to `√x`, dividing every multiple down and recording the exponent of each
//! prime met. The root children of `t(n)` depend only on the multiset of those
//! exponents, and for `n < 2^64` the exponents are at most 63, whose trees take
//! ten shapes. A multiset is therefore packed into a `u64` with one 4-bit
//! counter per shape (there are at most 15 distinct primes), and segments only
//! ever count integers. Trees are built once per distinct key at the end.

mod sieve;
mod table;

use num_traits::PrimInt;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

pub use sieve::{
    build_spf, build_spf_with_budget, for_each_prime, primes_up_to, SpfTable,
    DEFAULT_SPF_BUDGET_BYTES,
};
pub use table::{CensusRow, CensusTable};

pub(crate) use sieve::{cached_primes, iroot, isqrt};

use crate::error::{Error, Result};
use crate::tree::{tree_of, Tree};

/// Default number of integers per segment.
pub const DEFAULT_SEGMENT: u64 = 1 << 18;

/// Largest segment accepted; keeps per-worker buffers near 2 GiB at worst.
pub const MAX_SEGMENT: u64 = 1 << 27;

/// Sieving primes above this would need more memory than a desk machine has.
const MAX_SIEVE_PRIME: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    pub segment: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            segment: DEFAULT_SEGMENT,
            threads: None,
        }
    }
}

/// Census of `1..=x` with default options.
///
/// ```
/// use towertree::census::census;
/// use towertree::tree::tree_of;
/// let table = census(100).unwrap();
/// assert_eq!(table.count(&tree_of(2).unwrap()), 25);
/// assert_eq!(table.count(&tree_of(4).unwrap()), 7);
/// assert_eq!(table.total(), 100);
/// ```
pub fn census(x: u64) -> Result<CensusTable> {
    census_with(x, CensusOptions::default())
}

pub fn census_with(x: u64, opts: CensusOptions) -> Result<CensusTable> {
    Ok(census_many(&[x], opts)?
        .pop()
        .expect("one table per threshold"))
}

/// Tables for every threshold in `xs`, from a single sweep up to the largest.
/// Output order follows `xs`.
pub fn census_many(xs: &[u64], opts: CensusOptions) -> Result<Vec<CensusTable>> {
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(&bad) = xs.iter().find(|&&x| x == 0) {
        return Err(Error::domain(format!("census needs x >= 1, got {bad}")));
    }
    if opts.segment == 0 || opts.segment > MAX_SEGMENT {
        return Err(Error::CapExceeded {
            what: "segment",
            value: opts.segment,
            cap: MAX_SEGMENT,
        });
    }
    if x_too_large(xs) {
        return Err(Error::domain("census counts are limited to x <= 2^63"));
    }
    let mut thresholds = xs.to_vec();
    thresholds.sort_unstable();
    thresholds.dedup();
    let top = *thresholds.last().unwrap();
    let root = isqrt(top);
    if root > MAX_SIEVE_PRIME {
        return Err(Error::Resource(format!(
            "sieving to {top} needs primes up to {root}"
        )));
    }

    let shapes = ExponentShapes::new()?;
    let primes = primes_up_to(root);
    let segments = segment_plan(&thresholds, opts.segment);

    let run = || count_segments(&segments, thresholds.len(), &primes, &shapes, opts.segment);
    let per_bucket = match opts.threads {
        None => run(),
        Some(0) => return Err(Error::domain("thread count must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Resource(format!("thread pool: {e}")))?
            .install(run),
    };

    // Bucket b holds n in (thresholds[b-1], thresholds[b]]; prefix sums give
    // the tables.
    let mut running: FxHashMap<u64, u64> = FxHashMap::default();
    let mut by_threshold: FxHashMap<u64, CensusTable> = FxHashMap::default();
    for (b, bucket) in per_bucket.into_iter().enumerate() {
        for (key, c) in bucket {
            *running.entry(key).or_insert(0) += c;
        }
        let rows = running.iter().map(|(&key, &c)| (shapes.tree(key), c));
        by_threshold.insert(
            thresholds[b],
            CensusTable::from_counts(thresholds[b], rows)?,
        );
    }
    Ok(xs.iter().map(|x| by_threshold[x].clone()).collect())
}

fn x_too_large(xs: &[u64]) -> bool {
    xs.iter().any(|&x| x > 1 << 63)
}

/// `π_t(x)` read from a census table; zero for trees not realised below x.
pub fn count_tree(table: &CensusTable, t: &Tree) -> u64 {
    table.count(t)
}

/// Number of `d <= x` (including `d = 1`) all of whose prime exponents exceed
/// `m`.
pub fn count_min_exponent(x: u64, m: u32) -> Result<u64> {
    if x == 0 || m == 0 {
        return Err(Error::domain("count_min_exponent needs x >= 1 and m >= 1"));
    }
    let first = m + 1;
    let primes = primes_up_to(iroot(x, first));
    Ok(1 + count_full(x, first, &primes))
}

/// Integers `> 1`, `<= bound`, built from `primes` with exponents `>= first`.
fn count_full(bound: u64, first: u32, primes: &[u64]) -> u64 {
    let mut total = 0;
    for (i, &p) in primes.iter().enumerate() {
        let Some(mut pk) = p.checked_pow(first).filter(|&v| v <= bound) else {
            break;
        };
        loop {
            total += 1 + count_full(bound / pk, first, &primes[i + 1..]);
            match pk.checked_mul(p) {
                Some(next) if next <= bound => pk = next,
                _ => break,
            }
        }
    }
    total
}

/// `t(n)` for every `n` in `lo..=hi`, through the sieve path.
pub fn sieve_trees(lo: u64, hi: u64) -> Result<Vec<Tree>> {
    if lo == 0 || hi < lo {
        return Err(Error::domain(format!("bad range {lo}..={hi}")));
    }
    if hi - lo >= MAX_SEGMENT {
        return Err(Error::CapExceeded {
            what: "range length",
            value: hi - lo + 1,
            cap: MAX_SEGMENT,
        });
    }
    let shapes = ExponentShapes::new()?;
    let primes = primes_up_to(isqrt(hi));
    let mut buf = Buffers::default();
    let keys = buf.keys(lo, hi + 1, &primes, &shapes);
    Ok(keys.iter().map(|&k| shapes.tree(k)).collect())
}

/// Trees of the exponents `1..=63`, each with a 4-bit slot in a key.
struct ExponentShapes {
    unit: [u64; 64],
    trees: Vec<Tree>,
}

impl ExponentShapes {
    fn new() -> Result<Self> {
        let mut unit = [0u64; 64];
        let mut trees: Vec<Tree> = Vec::new();
        for e in 1..64u64 {
            let t = tree_of(e)?;
            let id = match trees.iter().position(|s| *s == t) {
                Some(id) => id,
                None => {
                    trees.push(t);
                    trees.len() - 1
                }
            };
            debug_assert!(id < 16);
            unit[e as usize] = 1 << (4 * id);
        }
        Ok(ExponentShapes { unit, trees })
    }

    fn tree(&self, key: u64) -> Tree {
        let mut children = Vec::new();
        for (id, t) in self.trees.iter().enumerate() {
            let c = (key >> (4 * id)) & 0xF;
            children.extend(std::iter::repeat(t).take(c as usize).cloned());
        }
        Tree::from_children(children)
    }
}

#[derive(Clone, Copy)]
struct Segment {
    lo: u64,
    hi: u64,
    bucket: usize,
}

/// Half-open segments covering `1..=max(thresholds)`, never straddling a
/// threshold.
fn segment_plan(thresholds: &[u64], size: u64) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut lo = 1u64;
    for (bucket, &x) in thresholds.iter().enumerate() {
        let end = x + 1;
        while lo < end {
            let hi = lo.saturating_add(size).min(end);
            out.push(Segment { lo, hi, bucket });
            lo = hi;
        }
    }
    out
}

fn count_segments(
    segments: &[Segment],
    buckets: usize,
    primes: &[u64],
    shapes: &ExponentShapes,
    size: u64,
) -> Vec<FxHashMap<u64, u64>> {
    let empty = || vec![FxHashMap::default(); buckets];
    segments
        .par_iter()
        .with_min_len(1)
        .fold(
            || (empty(), Buffers::with_capacity(size as usize)),
            |(mut acc, mut buf), seg| {
                let counts = &mut acc[seg.bucket];
                for &k in buf.keys(seg.lo, seg.hi, primes, shapes) {
                    *counts.entry(k).or_insert(0) += 1;
                }
                (acc, buf)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(empty, |mut a, b| {
            for (into, from) in a.iter_mut().zip(b) {
                for (k, c) in from {
                    *into.entry(k).or_insert(0) += c;
                }
            }
            a
        })
}

#[derive(Default)]
struct Buffers {
    rem32: Vec<u32>,
    rem64: Vec<u64>,
    keys: Vec<u64>,
}

impl Buffers {
    fn with_capacity(n: usize) -> Self {
        Buffers {
            rem32: Vec::with_capacity(n),
            rem64: Vec::new(),
            keys: Vec::with_capacity(n),
        }
    }

    /// Shape keys of `lo..hi`. `primes` must reach `√(hi - 1)`.
    fn keys(&mut self, lo: u64, hi: u64, primes: &[u64], shapes: &ExponentShapes) -> &[u64] {
        // 32-bit division is markedly cheaper; most desk-scale runs fit.
        if hi <= 1 << 32 {
            sieve_segment(&mut self.rem32, &mut self.keys, lo, hi, primes, shapes);
        } else {
            sieve_segment(&mut self.rem64, &mut self.keys, lo, hi, primes, shapes);
        }
        &self.keys
    }
}

fn sieve_segment<T: PrimInt>(
    rem: &mut Vec<T>,
    keys: &mut Vec<u64>,
    lo: u64,
    hi: u64,
    primes: &[u64],
    shapes: &ExponentShapes,
) {
    let len = (hi - lo) as usize;
    rem.clear();
    rem.extend((lo..hi).map(|n| T::from(n).expect("segment fits the word size")));
    keys.clear();
    keys.resize(len, 0);
    let last = hi - 1;
    for &p in primes {
        if p > last / p {
            break;
        }
        let pt = T::from(p).unwrap();
        let mut i = (lo.div_ceil(p) * p - lo) as usize;
        while i < len {
            let mut r = rem[i] / pt;
            let mut e = 1;
            while r % pt == T::zero() {
                r = r / pt;
                e += 1;
            }
            rem[i] = r;
            keys[i] += shapes.unit[e];
            i += p as usize;
        }
    }
    let one_prime = shapes.unit[1];
    for (k, r) in keys.iter_mut().zip(rem.iter()) {
        if *r > T::one() {
            *k += one_prime;
        }
    }
}

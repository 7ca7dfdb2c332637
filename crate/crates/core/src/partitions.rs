//! Set partitions of `{0, .., k-1}` and the partition-based inclusion–exclusion
//! formula for sums over tuples of pairwise distinct elements.
//!
//! For `F` on `P^k`,
//!
//! ```text
//! Σ_{p distinct} F(p) = Σ_{A_1 ⊔ .. ⊔ A_ℓ = [k]} (-1)^{k-ℓ} Π (|A_i| - 1)!  Σ_{q ∈ P^ℓ} F(p),
//! ```
//!
//! where in the inner sum every coordinate `j ∈ A_v` is set to `q_v`, and the
//! blocks are listed by increasing minima. Partitions are generated from
//! restricted growth strings, which yields exactly that block order.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_traits::{FromPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_K: usize = 12;

/// Largest number of tuples [`brute_force_distinct`] will visit.
pub const BRUTE_FORCE_CAP: u64 = 10_000_000;

/// A partition of `{0, .., k-1}` into nonempty blocks, ordered by their
/// minimum element; each block is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
    k: usize,
}

impl SetPartition {
    fn from_growth_string(rgs: &[usize]) -> Self {
        let nblocks = rgs.iter().max().map_or(0, |&m| m + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        SetPartition {
            blocks,
            k: rgs.len(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks, `ℓ`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Size of the ground set.
    pub fn ground_size(&self) -> usize {
        self.k
    }

    /// `block_of[j]` is the index of the block containing `j`.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for (b, block) in self.blocks.iter().enumerate() {
            for &j in block {
                out[j] = b;
            }
        }
        out
    }
}

impl fmt::Display for SetPartition {
    /// One-based, e.g. `{1,3}{2}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            f.write_str("{")?;
            for (i, j) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", j + 1)?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// Iterator over all set partitions of a `k`-set via restricted growth strings
/// `a` with `a[0] = 0` and `a[i] <= 1 + max(a[..i])`.
#[derive(Clone, Debug)]
pub struct Partitions {
    rgs: Vec<usize>,
    // prefix_max[i] = max(rgs[..=i])
    prefix_max: Vec<usize>,
    done: bool,
}

impl Partitions {
    fn new(k: usize) -> Self {
        Partitions {
            rgs: vec![0; k],
            prefix_max: vec![0; k],
            done: false,
        }
    }

    fn advance(&mut self) {
        let k = self.rgs.len();
        for i in (1..k).rev() {
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..k {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Partitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let p = SetPartition::from_growth_string(&self.rgs);
        self.advance();
        Some(p)
    }
}

/// All partitions of a `k`-set, `1 <= k <= 12`.
///
/// ```
/// use towertree::partitions::enumerate_partitions;
/// let all: Vec<String> = enumerate_partitions(3).unwrap().map(|p| p.to_string()).collect();
/// assert_eq!(all, ["{1,2,3}", "{1,2}{3}", "{1,3}{2}", "{1}{2,3}", "{1}{2}{3}"]);
/// ```
pub fn enumerate_partitions(k: usize) -> Result<Partitions> {
    enumerate_partitions_capped(k, DEFAULT_MAX_K)
}

pub fn enumerate_partitions_capped(k: usize, cap: usize) -> Result<Partitions> {
    if k == 0 {
        return Err(Error::domain("partitions need k >= 1"));
    }
    if k > cap {
        return Err(Error::CapExceeded {
            what: "k",
            value: k as u64,
            cap: cap as u64,
        });
    }
    Ok(Partitions::new(k))
}

/// Sign and coefficient of one partition in the expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IEWeight {
    /// `(-1)^(k - ℓ)`
    pub sign: i8,
    /// `Π (|A_i| - 1)!`
    pub coefficient: u64,
}

impl IEWeight {
    pub fn signed(&self) -> i64 {
        self.sign as i64 * self.coefficient as i64
    }
}

pub fn weight(p: &SetPartition) -> IEWeight {
    let k = p.ground_size();
    let sign = if (k - p.len()) % 2 == 0 { 1 } else { -1 };
    let coefficient = p
        .blocks()
        .iter()
        .map(|b| (1..b.len() as u64).product::<u64>())
        .product();
    IEWeight { sign, coefficient }
}

/// Numbers the expansion can run over: `f64`, exact rationals, integers.
pub trait Scalar:
    Clone + Zero + Add<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + FromPrimitive
{
}

impl<T> Scalar for T where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T> + Neg<Output = T> + FromPrimitive
{
}

/// `Σ_partitions sign · coefficient · block_value(partition)`, in enumeration
/// order.
pub fn expand<T, F>(k: usize, mut block_value: F) -> Result<T>
where
    T: Scalar,
    F: FnMut(&SetPartition) -> T,
{
    let mut acc = T::zero();
    for p in enumerate_partitions(k)? {
        let w = T::from_i64(weight(&p).signed()).expect("weights fit any scalar");
        acc = acc + w * block_value(&p);
    }
    Ok(acc)
}

fn check_distinct<D: PartialEq>(domain: &[D]) -> Result<()> {
    for (i, a) in domain.iter().enumerate() {
        if domain[..i].contains(a) {
            return Err(Error::domain(format!(
                "domain element {i} repeats an earlier one"
            )));
        }
    }
    Ok(())
}

/// Sum of `f` over all `k`-tuples of pairwise distinct domain elements, by
/// the partition expansion. Each partition contributes the unrestricted sum
/// over `domain^ℓ` with coordinates identified blockwise.
pub fn sum_distinct<D, T, F>(f: F, domain: &[D], k: usize) -> Result<T>
where
    D: Copy + PartialEq,
    T: Scalar,
    F: Fn(&[D]) -> T,
{
    check_distinct(domain)?;
    if domain.is_empty() {
        return Ok(T::zero());
    }
    let mut tuple = vec![domain[0]; k];
    expand(k, |p| {
        let block_of = p.block_of();
        let mut q = vec![0usize; p.len()];
        let mut acc = T::zero();
        loop {
            for (j, slot) in tuple.iter_mut().enumerate() {
                *slot = domain[q[block_of[j]]];
            }
            acc = acc + f(&tuple);
            if !odometer(&mut q, domain.len()) {
                return acc;
            }
        }
    })
}

/// Direct sum of `f` over `k`-tuples with pairwise distinct entries.
pub fn brute_force_distinct<D, T, F>(f: F, domain: &[D], k: usize) -> Result<T>
where
    D: Copy + PartialEq,
    T: Scalar,
    F: Fn(&[D]) -> T,
{
    check_distinct(domain)?;
    let visits = (domain.len() as u64)
        .checked_pow(k as u32)
        .unwrap_or(u64::MAX);
    if visits > BRUTE_FORCE_CAP {
        return Err(Error::CapExceeded {
            what: "|domain|^k",
            value: visits,
            cap: BRUTE_FORCE_CAP,
        });
    }
    if domain.is_empty() || k == 0 {
        return Ok(T::zero());
    }
    let mut idx = vec![0usize; k];
    let mut tuple = vec![domain[0]; k];
    let mut acc = T::zero();
    loop {
        let distinct = (1..k).all(|j| !idx[..j].contains(&idx[j]));
        if distinct {
            for (slot, &i) in tuple.iter_mut().zip(&idx) {
                *slot = domain[i];
            }
            acc = acc + f(&tuple);
        }
        if !odometer(&mut idx, domain.len()) {
            return Ok(acc);
        }
    }
}

/// Advances a base-`radix` counter; false once it wraps to all zeros.
fn odometer(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn small_cases() {
        let one: Vec<_> = enumerate_partitions(1).unwrap().collect();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].to_string(), "{1}");
        let two: Vec<String> = enumerate_partitions(2)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(two, ["{1,2}", "{1}{2}"]);
        assert_eq!(enumerate_partitions(4).unwrap().count(), 15);
    }

    #[test]
    fn caps() {
        assert!(enumerate_partitions(0).is_err());
        assert!(matches!(
            enumerate_partitions(13),
            Err(Error::CapExceeded { .. })
        ));
        assert!(enumerate_partitions_capped(13, 13).is_ok());
    }

    #[test]
    fn weights() {
        let parts: Vec<_> = enumerate_partitions(3).unwrap().collect();
        let whole = &parts[0];
        assert_eq!(whole.to_string(), "{1,2,3}");
        assert_eq!(
            weight(whole),
            IEWeight {
                sign: 1,
                coefficient: 2
            }
        );
        let discrete = parts.last().unwrap();
        assert_eq!(
            weight(discrete),
            IEWeight {
                sign: 1,
                coefficient: 1
            }
        );
        let pair = enumerate_partitions(2).unwrap().next().unwrap();
        assert_eq!(
            weight(&pair),
            IEWeight {
                sign: -1,
                coefficient: 1
            }
        );
    }

    #[test]
    fn distinct_sum_examples() {
        let s: i64 = sum_distinct(|t: &[i64]| t[0] * t[1], &[2, 3], 2).unwrap();
        assert_eq!(s, 12);
        let ones: i64 = sum_distinct(|_: &[u32]| 1, &[1, 2, 3, 4, 5], 3).unwrap();
        assert_eq!(ones, 60);
        let b: i64 = brute_force_distinct(|_: &[u32]| 1, &[1, 2, 3, 4], 2).unwrap();
        assert_eq!(b, 12);
        let none: i64 = brute_force_distinct(|_: &[u32]| 1, &[1, 2, 3, 4], 5).unwrap();
        assert_eq!(none, 0);
        let none: i64 = sum_distinct(|_: &[u32]| 1, &[1, 2, 3, 4], 5).unwrap();
        assert_eq!(none, 0);
    }

    #[test]
    fn reciprocal_pairs_match_hand_expansion() {
        let r = |n: i64| BigRational::new(1.into(), n.into());
        let f = |t: &[i64]| r(t[0] * t[1]);
        // (1/2 + 1/3 + 1/5)^2 - (1/4 + 1/9 + 1/25), with 1/2 + 1/3 + 1/5 = 31/30
        let s = r(2) + r(3) + r(5);
        assert_eq!(s, BigRational::new(31.into(), 30.into()));
        let expected = s.clone() * s - (r(4) + r(9) + r(25));
        let brute: BigRational = brute_force_distinct(f, &[2, 3, 5], 2).unwrap();
        assert_eq!(brute, expected);
        let ie: BigRational = sum_distinct(f, &[2, 3, 5], 2).unwrap();
        assert_eq!(ie, expected);
    }

    #[test]
    fn rejects_repeated_domain() {
        assert!(sum_distinct(|_: &[u32]| 1i64, &[1, 1], 2).is_err());
        assert!(brute_force_distinct(|_: &[u32]| 1i64, &[2, 2], 2).is_err());
    }

    #[test]
    fn brute_force_cap() {
        let big: Vec<u32> = (0..100).collect();
        assert!(matches!(
            brute_force_distinct(|_: &[u32]| 1i64, &big, 4),
            Err(Error::CapExceeded { .. })
        ));
    }
}

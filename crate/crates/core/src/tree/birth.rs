use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use super::{tree_of, Tree};
use crate::error::{Error, Result};

/// Date of birth of a tree: the least `n` with `t(n) = T`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Birth(BigUint);

impl Birth {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }
}

impl From<u64> for Birth {
    fn from(n: u64) -> Self {
        Birth(BigUint::from(n))
    }
}

impl From<BigUint> for Birth {
    fn from(n: BigUint) -> Self {
        Birth(n)
    }
}

impl FromStr for Birth {
    type Err = Error;

    /// Decimal digits only.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(i) = s.bytes().position(|b| !b.is_ascii_digit()) {
            return Err(Error::parse(i, "birth must be decimal digits"));
        }
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(Birth)
            .ok_or_else(|| Error::parse(0, "empty birth"))
    }
}

impl fmt::Display for Birth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Birth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Birth({})", self.0)
    }
}

impl Serialize for Birth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// Largest birth, in bits, that [`birth_with_budget`] will materialise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BirthBudget {
    pub bits: u64,
}

impl Default for BirthBudget {
    fn default() -> Self {
        BirthBudget { bits: 1_000_000 }
    }
}

/// Birth under the default budget of 10^6 bits.
pub fn birth(t: &Tree) -> Result<Birth> {
    birth_with_budget(t, BirthBudget::default())
}

/// Exact birth of `t`.
///
/// The child births, sorted in decreasing order, become the exponents of
/// 2, 3, 5, ... (largest exponent on the smallest prime). Each child needs an
/// exponent whose own tree is that child, and the child's birth is the least
/// such exponent, so this is the minimum.
pub fn birth_with_budget(t: &Tree, budget: BirthBudget) -> Result<Birth> {
    birth_rec(t, budget).map(Birth)
}

fn birth_rec(t: &Tree, budget: BirthBudget) -> Result<BigUint> {
    let overflow = || Error::BirthOverflow {
        budget_bits: budget.bits,
    };
    let mut exps = t
        .children()
        .iter()
        .map(|c| birth_rec(c, budget))
        .collect::<Result<Vec<_>>>()?;
    exps.sort_unstable_by(|a, b| b.cmp(a));

    let mut acc = BigUint::one();
    for (p, e) in small_primes(exps.len()).into_iter().zip(exps) {
        let e = e.to_u64().ok_or_else(overflow)?;
        // p^e has more than e*log2(p) bits; reject before materialising.
        if e as f64 * (p as f64).log2() > budget.bits as f64 + 1.0 {
            return Err(overflow());
        }
        let e = u32::try_from(e).map_err(|_| overflow())?;
        acc *= BigUint::from(p).pow(e);
        if acc.bits() > budget.bits {
            return Err(overflow());
        }
    }
    Ok(acc)
}

/// The first `count` primes.
fn small_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut c = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= c)
            .all(|&p| c % p != 0)
        {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

/// The first `count` trees in birth order, found by scanning `n = 1, 2, ...`
/// up to `search_bound` and keeping first occurrences.
///
/// ```
/// use towertree::tree::enumerate_births;
/// let births: Vec<u64> = enumerate_births(6, 100)
///     .unwrap()
///     .iter()
///     .map(|(b, _)| b.to_u64().unwrap())
///     .collect();
/// assert_eq!(births, [1, 2, 4, 6, 12, 16]);
/// ```
pub fn enumerate_births(count: usize, search_bound: u64) -> Result<Vec<(Birth, Tree)>> {
    if count == 0 {
        return Err(Error::domain("count must be positive"));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    for n in 1..=search_bound {
        let t = tree_of(n)?;
        if seen.insert(t.clone()) {
            out.push((Birth::from(n), t));
            if out.len() == count {
                return Ok(out);
            }
        }
    }
    Err(Error::InsufficientBound {
        wanted: count,
        found: out.len(),
        bound: search_bound,
    })
}

/// Every tree born at or below `bound`, in birth order.
pub fn trees_born_up_to(bound: u64) -> Result<Vec<(u64, Tree)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in 1..=bound {
        let t = tree_of(n)?;
        if seen.insert(t.clone()) {
            out.push((n, t));
        }
    }
    Ok(out)
}

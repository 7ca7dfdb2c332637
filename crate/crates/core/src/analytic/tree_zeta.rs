use std::collections::HashMap;

use super::prime_zeta::prime_zeta_series;
use super::riemann::riemann_zeta;
use super::{check_sigma, EvalResult, Neumaier, Tolerance};
use crate::census::{cached_primes, iroot};
use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, weight};
use crate::tree::{decompose_with_budget, BirthBudget, Tree};

/// Largest prime the direct method will sieve to.
const MAX_DIRECT_PRIME: u64 = 1_000_000_000;

/// Every `v <= bound` with `t(v) = t`, increasing.
///
/// ```
/// use towertree::analytic::exponents_with_tree;
/// use towertree::tree::tree_of;
/// let chain = tree_of(4).unwrap();
/// assert_eq!(exponents_with_tree(&chain, 100).unwrap(), [4, 8, 9, 25, 27, 32, 49]);
/// ```
pub fn exponents_with_tree(t: &Tree, bound: u64) -> Result<Vec<u64>> {
    if bound == 0 {
        return Err(Error::domain("exponent bound must be >= 1"));
    }
    if t.is_root() {
        return Ok(vec![1]);
    }
    let Some(shape) = Shape::new(t, bound)? else {
        return Ok(Vec::new());
    };
    let primes = shape.primes(bound)?;
    let mut out = Vec::new();
    shape.walk(&primes, &[], bound, |n, _| out.push(n));
    out.sort_unstable();
    Ok(out)
}

/// `Σ_{n <= budget, t(n) = t} n^{-σ}` plus a bound on the rest of the series.
///
/// Every `n` with tree `t` has all prime exponents `>= m`, the birth of the
/// oldest root child. Such `n` number at most `C_m Y^{1/m}` up to `Y`, with
/// `C_m = Π_{j=1}^{m-1} ζ(1 + j/m)` (write `n = a^m Π b_j^{m+j}`), and partial
/// summation turns that into the tail bound `C_m σ B^{1/m - σ} / (σ - 1/m)`.
/// For `m = 1` the plain integral bound `B^{1-σ} / (σ - 1)` is used.
pub fn tree_zeta_direct(t: &Tree, sigma: f64, budget: u64) -> Result<EvalResult> {
    check_sigma(sigma)?;
    if t.is_root() {
        return Ok(EvalResult::exact(1.0));
    }
    let m = decompose_with_budget(t, BirthBudget::default())?.m_u64()?;
    check_abscissa(sigma, m)?;
    if budget == 0 {
        return Err(Error::domain("budget must be >= 1"));
    }

    let mut sum = Neumaier::default();
    let mut depth = 1u64;
    if let Some(shape) = Shape::new(t, budget)? {
        let primes = shape.primes(budget)?;
        let weights: Vec<f64> = primes.iter().map(|&p| (p as f64).powf(-sigma)).collect();
        depth = shape.slots() as u64 + shape.max_exponent();
        shape.walk(&primes, &weights, budget, |_, w| sum.add(w));
    }
    let tail = direct_tail(sigma, m, budget)?;
    let rounding = 4.0 * depth as f64 * f64::EPSILON * sum.abs_sum();
    Ok(EvalResult::new(sum.value(), tail + rounding))
}

fn check_abscissa(sigma: f64, m: u64) -> Result<()> {
    if sigma * m as f64 <= 1.0 {
        return Err(Error::domain(format!(
            "the series converges only for sigma > 1/{m}, got {sigma}"
        )));
    }
    Ok(())
}

fn direct_tail(sigma: f64, m: u64, budget: u64) -> Result<f64> {
    let b = budget as f64;
    let tail = if m == 1 {
        b.powf(1.0 - sigma) / (sigma - 1.0)
    } else {
        let mf = m as f64;
        let mut c = 1.0;
        for j in 1..m {
            c *= riemann_zeta(1.0 + j as f64 / mf)?.upper();
            if !c.is_finite() {
                break;
            }
        }
        c * sigma * b.powf(1.0 / mf - sigma) / (sigma - 1.0 / mf)
    };
    if !tail.is_finite() {
        return Err(Error::Resource(format!(
            "no finite tail bound for m = {m} at budget {budget}"
        )));
    }
    Ok(tail * (1.0 + 8.0 * f64::EPSILON))
}

/// Root children grouped by type, with the exponents each type allows.
struct Shape {
    exps: Vec<Vec<u64>>,
    counts: Vec<usize>,
}

impl Shape {
    /// `None` when some child has no admissible exponent below `bound`, so no
    /// `n <= bound` has this tree.
    fn new(t: &Tree, bound: u64) -> Result<Option<Self>> {
        let max_exp = 63 - bound.leading_zeros() as u64; // floor(log2 bound)
        let mut exps = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        let mut last: Option<&Tree> = None;
        for c in t.children() {
            if last == Some(c) {
                *counts.last_mut().unwrap() += 1;
                continue;
            }
            last = Some(c);
            let e = if max_exp == 0 {
                Vec::new()
            } else {
                exponents_with_tree(c, max_exp)?
            };
            if e.is_empty() {
                return Ok(None);
            }
            exps.push(e);
            counts.push(1);
        }
        Ok(Some(Shape { exps, counts }))
    }

    fn slots(&self) -> usize {
        self.counts.iter().sum()
    }

    fn max_exponent(&self) -> u64 {
        self.exps
            .iter()
            .map(|e| *e.last().unwrap())
            .max()
            .unwrap_or(0)
    }

    fn min_total(&self) -> u64 {
        self.exps
            .iter()
            .zip(&self.counts)
            .map(|(e, &c)| e[0] * c as u64)
            .sum()
    }

    /// Primes that can occur: a prime carrying type `j` has `p^{e_j} <= bound
    /// / 2^{S - e_j}`, where `S` is the least total exponent.
    fn primes(&self, bound: u64) -> Result<Vec<u32>> {
        let total = self.min_total();
        let mut limit = 1u64;
        for e in &self.exps {
            let shift = total - e[0];
            let room = if shift >= 64 { 0 } else { bound >> shift };
            limit = limit.max(iroot(room, e[0].min(64) as u32));
        }
        if limit > MAX_DIRECT_PRIME {
            return Err(Error::Resource(format!(
                "enumeration needs primes up to {limit} (cap {MAX_DIRECT_PRIME}); lower the budget"
            )));
        }
        let all = cached_primes(limit);
        let end = all.partition_point(|&p| p as u64 <= limit);
        Ok(all[..end].to_vec())
    }

    /// Calls `visit(n, weight)` for every `n <= bound` of this shape, where
    /// `weight` multiplies `weights[i]^v` over the prime powers used (0 when
    /// `weights` is empty).
    fn walk(&self, primes: &[u32], weights: &[f64], bound: u64, visit: impl FnMut(u64, f64)) {
        let mut w = Walk {
            shape: self,
            primes,
            weights,
            remaining: self.counts.clone(),
            bound,
            visit,
        };
        let start_weight = if weights.is_empty() { 0.0 } else { 1.0 };
        w.go(0, 1, start_weight, self.slots(), self.min_total());
    }
}

struct Walk<'a, F> {
    shape: &'a Shape,
    primes: &'a [u32],
    weights: &'a [f64],
    remaining: Vec<usize>,
    bound: u64,
    visit: F,
}

impl<F: FnMut(u64, f64)> Walk<'_, F> {
    fn go(&mut self, start: usize, prod: u64, weight: f64, slots: usize, min_rest: u64) {
        if slots == 0 {
            (self.visit)(prod, weight);
            return;
        }
        let room = self.bound / prod;
        for i in start..self.primes.len() {
            let p = self.primes[i] as u64;
            // All remaining slots use primes >= p.
            if power_exceeds(p, min_rest, room) {
                break;
            }
            for j in 0..self.shape.exps.len() {
                if self.remaining[j] == 0 {
                    continue;
                }
                let exps = &self.shape.exps[j];
                let rest_after = min_rest - exps[0];
                for &v in exps {
                    let Some(pv) = p.checked_pow(v as u32).filter(|&pv| pv <= room) else {
                        break;
                    };
                    let w = if self.weights.is_empty() {
                        0.0
                    } else {
                        weight * self.weights[i].powi(v as i32)
                    };
                    self.remaining[j] -= 1;
                    self.go(i + 1, prod * pv, w, slots - 1, rest_after);
                    self.remaining[j] += 1;
                }
            }
        }
    }
}

fn power_exceeds(p: u64, e: u64, cap: u64) -> bool {
    e >= 64 || p.checked_pow(e as u32).map_or(true, |v| v > cap)
}

/// `ζ_t(σ)` from the partition expansion over the root children.
///
/// With root children `T_1..T_K`, summing `Π p_i^{-σ v_i}` over distinct
/// primes and `t(v_i) = T_i` counts each `n` once per permutation of equal
/// children, so the expansion is divided by `Π mult_j!`. A block `A` of a
/// partition contributes `S_A = Σ_n q_A(n) P(σn)`, where `q_A(n)` counts the
/// exponent tuples of the block with sum `n`. The sum over `n` stops at `V`,
/// with `q_A(n) <= n^{|A|-1}` and `P(σn) <= 2^{1-σn}` bounding the rest; `V`
/// doubles until the whole error fits `tol`.
///
/// ```
/// use towertree::analytic::{tree_zeta_partition, Tolerance};
/// use towertree::tree::tree_of;
/// let edge = tree_of(2).unwrap();
/// let z = tree_zeta_partition(&edge, 2.0, Tolerance::new(1e-12).unwrap()).unwrap();
/// assert!((z.value - 0.452247420041065).abs() < 1e-12);
/// ```
pub fn tree_zeta_partition(t: &Tree, sigma: f64, tol: Tolerance) -> Result<EvalResult> {
    check_sigma(sigma)?;
    if t.is_root() {
        return Ok(EvalResult::exact(1.0));
    }
    let m = decompose_with_budget(t, tol.birth_budget)?.m_u64()?;
    check_abscissa(sigma, m)?;

    // Type index of each root child; equal children are adjacent.
    let children = t.children();
    let mut types: Vec<usize> = Vec::with_capacity(children.len());
    let mut distinct: Vec<&Tree> = Vec::new();
    let mut multiplicity_factorial = 1.0;
    let mut run = 0;
    for (i, c) in children.iter().enumerate() {
        if i > 0 && children[i - 1] == *c {
            run += 1;
            multiplicity_factorial *= run as f64;
        } else {
            run = 1;
            distinct.push(c);
        }
        types.push(distinct.len() - 1);
    }
    let k = children.len();
    let partitions: Vec<_> = enumerate_partitions(k)?.collect();

    let cap = tol.max_exponent_sum.max(1);
    let mut v_max = ((3.0 / sigma).ceil() as u64 + k as u64).max(16).min(cap);
    let mut p_cache: HashMap<u64, EvalResult> = HashMap::new();
    loop {
        let exps = distinct
            .iter()
            .map(|c| exponents_with_tree(c, v_max))
            .collect::<Result<Vec<_>>>()?;
        let mut blocks: HashMap<Vec<usize>, EvalResult> = HashMap::new();
        let mut sum = Neumaier::default();
        let mut error = 0.0;
        for p in &partitions {
            let w = weight(p);
            let mut prod = 1.0;
            let mut prod_abs = 1.0;
            let mut prod_upper = 1.0;
            for block in p.blocks() {
                let mut key: Vec<usize> = block.iter().map(|&i| types[i]).collect();
                key.sort_unstable();
                let s = match blocks.get(&key) {
                    Some(s) => *s,
                    None => {
                        let s = block_sum(&key, &exps, sigma, v_max, &mut p_cache, tol)?;
                        blocks.insert(key, s);
                        s
                    }
                };
                prod *= s.value;
                prod_abs *= s.value.abs();
                prod_upper *= s.value.abs() + s.error_bound;
            }
            let c = w.coefficient as f64;
            sum.add(w.sign as f64 * c * prod);
            error += c * (prod_upper - prod_abs);
        }
        let rounding = (k as f64 + 4.0) * f64::EPSILON * sum.abs_sum();
        let result = EvalResult::new(
            sum.value() / multiplicity_factorial,
            (error + rounding) / multiplicity_factorial * (1.0 + 4.0 * f64::EPSILON),
        );
        if result.error_bound <= tol.target() {
            return Ok(result);
        }
        if v_max >= cap {
            return Err(Error::ToleranceUnachievable {
                target: tol.target(),
                partial: result,
            });
        }
        v_max = (v_max * 2).min(cap);
    }
}

/// `S_A = Σ_{n <= v_max} q_A(n) P(σn)` with its error, including the tail.
fn block_sum(
    types: &[usize],
    exps: &[Vec<u64>],
    sigma: f64,
    v_max: u64,
    p_cache: &mut HashMap<u64, EvalResult>,
    tol: Tolerance,
) -> Result<EvalResult> {
    let len = v_max as usize + 1;
    let mut q = vec![0.0f64; len];
    q[0] = 1.0;
    for &j in types {
        let mut next = vec![0.0f64; len];
        for (n, &c) in q.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for &v in &exps[j] {
                let at = n + v as usize;
                if at >= len {
                    break;
                }
                next[at] += c;
            }
        }
        q = next;
    }
    let mut sum = Neumaier::default();
    let mut error = 0.0;
    for (n, &c) in q.iter().enumerate().rev() {
        if c == 0.0 {
            continue;
        }
        let n = n as u64;
        let p = match p_cache.get(&n) {
            Some(p) => *p,
            None => {
                let p = prime_zeta_series(
                    sigma * n as f64,
                    Tolerance::MIN_TARGET / 4.0,
                    tol.max_terms,
                )?;
                p_cache.insert(n, p);
                p
            }
        };
        sum.add(c * p.value);
        error += c * p.error_bound;
    }
    let tail = block_tail(sigma, v_max, types.len() as i32 - 1);
    let rounding = 4.0 * f64::EPSILON * sum.abs_sum();
    Ok(EvalResult::new(sum.value(), error + tail + rounding))
}

/// `Σ_{n > v} n^a 2^{1-σn}`, or infinity when the geometric majorant does not
/// apply yet (`P(s) <= 2^{1-s}` needs `s >= 3`).
fn block_tail(sigma: f64, v: u64, a: i32) -> f64 {
    let n1 = (v + 1) as f64;
    if sigma * n1 < 3.0 {
        return f64::INFINITY;
    }
    let ratio = ((n1 + 1.0) / n1).powi(a) * (-sigma).exp2();
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let first = n1.powi(a) * (1.0 - sigma * n1).exp2();
    first / (1.0 - ratio) * (1.0 + 8.0 * f64::EPSILON)
}

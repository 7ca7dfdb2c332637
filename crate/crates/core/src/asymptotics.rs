//! Predicted growth of `π_T(x)` and the behaviour of `ζ_T(s)` near `s = 1/m`.
//!
//! For a tree with signature `(m, k)` and remainder `T'`,
//!
//! ```text
//! π_T(x) ~ m x^{1/m} / log x · (log log x)^{k-1} / (k-1)! · ζ_{T'}(1/m)
//! ```
//!
//! Convergence is at log-log speed, so the comparisons here only report
//! ratios; they make no judgement.

use serde::Serialize;

use crate::analytic::{tree_zeta_partition, EvalResult, Tolerance};
use crate::census::CensusTable;
use crate::error::{Error, Result};
use crate::tree::{decompose_with_budget, Decomposition, Tree, TreeCode};

/// Smallest `x` accepted by [`main_term`]; `log log x` must be positive.
pub const MIN_X: u64 = 16;

/// Default smallest `ε` for [`singularity_probe`].
pub const DEFAULT_EPSILON_FLOOR: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prediction {
    pub tree: TreeCode,
    pub m: u64,
    pub k: usize,
    /// `ζ_{T'}(1/m)`.
    pub constant: EvalResult,
    pub x: u64,
    pub main_term: f64,
    pub remainder_class: String,
}

/// Order of the remainder, as text. Its constant is never estimated.
pub fn remainder_class(m: u64, k: usize) -> String {
    let root = if m == 1 {
        "x".to_string()
    } else {
        format!("x^(1/{m})")
    };
    match k {
        1 => format!("{root} loglog x / (log x)^2"),
        2 => format!("{root} / log x"),
        _ => format!("{root} (loglog x)^{} / log x", k - 2),
    }
}

/// `ζ_{T'}(1/m)`, exactly 1 when `T'` is the bare root.
pub fn leading_constant(d: &Decomposition, tol: Tolerance) -> Result<EvalResult> {
    if d.t_prime.is_root() {
        return Ok(EvalResult::exact(1.0));
    }
    tree_zeta_partition(&d.t_prime, 1.0 / d.m_u64()? as f64, tol)
}

pub fn main_term(t: &Tree, x: u64) -> Result<Prediction> {
    main_term_with(t, x, Tolerance::default())
}

/// ```
/// use towertree::asymptotics::main_term;
/// use towertree::tree::tree_of;
/// let p = main_term(&tree_of(2).unwrap(), 1_000_000).unwrap();
/// assert_eq!(p.main_term, 1e6 / 1e6f64.ln());
/// ```
pub fn main_term_with(t: &Tree, x: u64, tol: Tolerance) -> Result<Prediction> {
    let d = decompose_with_budget(t, tol.birth_budget)?;
    if x < MIN_X {
        return Err(Error::domain(format!(
            "main term needs x >= {MIN_X}, got {x}"
        )));
    }
    let m = d.m_u64()?;
    let constant = leading_constant(&d, tol)?;
    Ok(Prediction {
        tree: t.encode(),
        m,
        k: d.k,
        constant,
        x,
        main_term: formula(m, d.k, x as f64, constant.value),
        remainder_class: remainder_class(m, d.k),
    })
}

fn formula(m: u64, k: usize, x: f64, constant: f64) -> f64 {
    let mf = m as f64;
    let root = if m == 1 { x } else { x.powf(1.0 / mf) };
    let lnx = x.ln();
    let loglog = lnx.ln().powi(k as i32 - 1) / factorial(k - 1);
    mf * root / lnx * loglog * constant
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub x: u64,
    pub empirical: u64,
    pub predicted: f64,
    pub ratio: f64,
}

/// Census counts against the main term, one row per `x` in input order.
pub fn compare_census(t: &Tree, xs: &[u64], tables: &[CensusTable]) -> Result<Vec<ComparisonRow>> {
    compare_census_with(t, xs, tables, Tolerance::default())
}

pub fn compare_census_with(
    t: &Tree,
    xs: &[u64],
    tables: &[CensusTable],
    tol: Tolerance,
) -> Result<Vec<ComparisonRow>> {
    let d = decompose_with_budget(t, tol.birth_budget)?;
    let m = d.m_u64()?;
    let constant = leading_constant(&d, tol)?;
    let code = t.encode();
    xs.iter()
        .map(|&x| {
            let table = tables
                .iter()
                .find(|tb| tb.limit() == x)
                .ok_or(Error::MissingCensus(x))?;
            if x < MIN_X {
                return Err(Error::domain(format!(
                    "comparison needs x >= {MIN_X}, got {x}"
                )));
            }
            let empirical = table.count_code(&code);
            let predicted = formula(m, d.k, x as f64, constant.value);
            Ok(ComparisonRow {
                x,
                empirical,
                predicted,
                ratio: empirical as f64 / predicted,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeOptions {
    /// Smaller `ε` are refused: `P` near 1 then needs very long series.
    pub epsilon_floor: f64,
    pub tol: Tolerance,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            epsilon_floor: DEFAULT_EPSILON_FLOOR,
            tol: Tolerance::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub epsilon: f64,
    pub zeta: f64,
    pub error_bound: f64,
    pub ratio: f64,
    /// Set when the tolerance was not reached and the row holds the best
    /// partial value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub tree: TreeCode,
    pub m: u64,
    pub k: usize,
    pub constant: EvalResult,
    pub rows: Vec<ProbeRow>,
}

pub fn singularity_probe(t: &Tree, epsilons: &[f64]) -> Result<ProbeReport> {
    singularity_probe_with(t, epsilons, ProbeOptions::default())
}

/// Evaluates `ζ_T(1/m + ε)` and divides by `ζ_{T'}(1/m) (log 1/ε)^k / k!`,
/// which tends to 1 as `ε -> 0`.
///
/// The `k!` counts orderings of the `k` oldest children: `ζ_T` sums each
/// integer once, while the product of `k` prime sums meets it `k!` times.
pub fn singularity_probe_with(
    t: &Tree,
    epsilons: &[f64],
    opts: ProbeOptions,
) -> Result<ProbeReport> {
    let d = decompose_with_budget(t, opts.tol.birth_budget)?;
    let m = d.m_u64()?;
    if epsilons.is_empty() {
        return Err(Error::domain("probe needs at least one epsilon"));
    }
    for (i, &e) in epsilons.iter().enumerate() {
        if !(e.is_finite() && e > 0.0) {
            return Err(Error::domain(format!("epsilon {e} is not a positive real")));
        }
        if e < opts.epsilon_floor {
            return Err(Error::domain(format!(
                "epsilon {e:e} is below the floor {:e}; lower the floor to accept the cost",
                opts.epsilon_floor
            )));
        }
        if i > 0 && e >= epsilons[i - 1] {
            return Err(Error::domain("epsilons must be strictly decreasing"));
        }
    }
    let constant = leading_constant(&d, opts.tol)?;
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let sigma = 1.0 / m as f64 + eps;
        let (z, note) = match tree_zeta_partition(t, sigma, opts.tol) {
            Ok(z) => (z, None),
            Err(Error::ToleranceUnachievable { target, partial }) => {
                (partial, Some(format!("tolerance {target:e} not reached")))
            }
            Err(e) => return Err(e),
        };
        let scale = constant.value * (1.0 / eps).ln().powi(d.k as i32) / factorial(d.k);
        rows.push(ProbeRow {
            epsilon: eps,
            zeta: z.value,
            error_bound: z.error_bound,
            ratio: z.value / scale,
            note,
        });
    }
    Ok(ProbeReport {
        tree: t.encode(),
        m,
        k: d.k,
        constant,
        rows,
    })
}

use std::fs::File;
use std::io::{self, Write};

use serde::Serialize;

use towertree::analytic::{tree_zeta_direct, tree_zeta_partition};
use towertree::asymptotics::{
    compare_census_with, main_term_with, singularity_probe_with, ProbeOptions,
};
use towertree::census::{census_many, census_with};
use towertree::tree::{birth_with_budget, decompose_with_budget, enumerate_births};
use towertree::{Error, Result, Tree};

use crate::{Config, Format, Method};

fn sink(cfg: &Config) -> Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => {
            Box::new(io::BufWriter::new(File::create(path).map_err(|e| {
                Error::Resource(format!("{}: {e}", path.display()))
            })?))
        }
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Resource(format!("writing output: {e}"))
}

/// CSV rows with a header taken from the field names, or a JSON document.
fn emit<R: Serialize, J: Serialize + ?Sized>(cfg: &Config, rows: &[R], json: &J) -> Result<()> {
    let mut out = sink(cfg)?;
    match cfg.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for row in rows {
                w.serialize(row).map_err(io_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, json).map_err(io_err)?;
            writeln!(out).map_err(io_err)?;
        }
    }
    out.flush().map_err(io_err)
}

#[derive(Serialize)]
struct TreeRow {
    tree_code: String,
    birth: String,
    m: Option<String>,
    k: Option<usize>,
    t0: Option<String>,
    t_prime: Option<String>,
}

pub fn tree(cfg: &Config, t: &Tree) -> Result<()> {
    let birth = birth_with_budget(t, cfg.birth)?;
    let split = decompose_with_budget(t, cfg.birth);
    let mut row = TreeRow {
        tree_code: t.to_string(),
        birth: birth.to_string(),
        m: None,
        k: None,
        t0: None,
        t_prime: None,
    };
    if let Ok(d) = &split {
        row.m = Some(d.m.to_string());
        row.k = Some(d.k);
        row.t0 = Some(d.t0.to_string());
        row.t_prime = Some(d.t_prime.to_string());
    }
    emit(cfg, std::slice::from_ref(&row), &row)?;
    split.map(|_| ())
}

pub fn census(cfg: &Config, x: u64) -> Result<()> {
    let table = census_with(x, cfg.census)?;
    match cfg.format {
        Format::Csv => {
            let mut out = sink(cfg)?;
            table.write_csv(&mut out)?;
            out.flush().map_err(io_err)
        }
        Format::Json => emit::<(), _>(cfg, &[], &table),
    }
}

#[derive(Serialize)]
struct CountRow {
    x: u64,
    tree_code: String,
    count: u64,
}

pub fn count(cfg: &Config, x: u64, t: &Tree) -> Result<()> {
    let table = census_with(x, cfg.census)?;
    let row = CountRow {
        x,
        tree_code: t.to_string(),
        count: table.count(t),
    };
    emit(cfg, std::slice::from_ref(&row), &row)
}

#[derive(Serialize)]
struct SeqRow {
    index: usize,
    birth: String,
    tree_code: String,
}

pub fn seq(cfg: &Config, count: usize, search_bound: u64) -> Result<()> {
    let rows: Vec<SeqRow> = enumerate_births(count, search_bound)?
        .into_iter()
        .enumerate()
        .map(|(i, (b, t))| SeqRow {
            index: i + 1,
            birth: b.to_string(),
            tree_code: t.to_string(),
        })
        .collect();
    emit(cfg, &rows, &rows)
}

#[derive(Serialize)]
struct ZetaRow {
    tree_code: String,
    sigma: f64,
    direct: Option<f64>,
    direct_error: Option<f64>,
    partition: Option<f64>,
    partition_error: Option<f64>,
    /// Whether the two enclosures overlap; only with both methods.
    agree: Option<bool>,
}

pub fn zeta(cfg: &Config, t: &Tree, sigma: f64, method: Method, budget: u64) -> Result<()> {
    let direct = match method {
        Method::Direct | Method::Both => Some(tree_zeta_direct(t, sigma, budget)?),
        Method::Partition => None,
    };
    let partition = match method {
        Method::Partition | Method::Both => Some(tree_zeta_partition(t, sigma, cfg.tol)?),
        Method::Direct => None,
    };
    let agree = match (&direct, &partition) {
        (Some(d), Some(p)) => Some(d.agrees_with(p)),
        _ => None,
    };
    let row = ZetaRow {
        tree_code: t.to_string(),
        sigma,
        direct: direct.map(|r| r.value),
        direct_error: direct.map(|r| r.error_bound),
        partition: partition.map(|r| r.value),
        partition_error: partition.map(|r| r.error_bound),
        agree,
    };
    emit(cfg, std::slice::from_ref(&row), &row)
}

#[derive(Serialize)]
struct PredictRow {
    tree_code: String,
    m: u64,
    k: usize,
    x: u64,
    constant: f64,
    constant_error: f64,
    main_term: f64,
    remainder_class: String,
}

pub fn predict(cfg: &Config, t: &Tree, x: u64) -> Result<()> {
    let p = main_term_with(t, x, cfg.tol)?;
    let row = PredictRow {
        tree_code: p.tree.to_string(),
        m: p.m,
        k: p.k,
        x: p.x,
        constant: p.constant.value,
        constant_error: p.constant.error_bound,
        main_term: p.main_term,
        remainder_class: p.remainder_class.clone(),
    };
    emit(cfg, std::slice::from_ref(&row), &p)
}

pub fn verify(cfg: &Config, t: &Tree, xs: &[u64]) -> Result<()> {
    // Check the tree before paying for the census.
    decompose_with_budget(t, cfg.birth)?;
    let tables = census_many(xs, cfg.census)?;
    let rows = compare_census_with(t, xs, &tables, cfg.tol)?;
    emit(cfg, &rows, &rows)
}

#[derive(Serialize)]
struct ProbeCsvRow {
    epsilon: f64,
    zeta: f64,
    error_bound: f64,
    ratio: f64,
}

pub fn probe(cfg: &Config, t: &Tree, epsilons: &[f64], opts: ProbeOptions) -> Result<()> {
    let report = singularity_probe_with(t, epsilons, opts)?;
    for row in &report.rows {
        if let Some(note) = &row.note {
            eprintln!("towertree: epsilon {:e}: {note}", row.epsilon);
        }
    }
    let rows: Vec<ProbeCsvRow> = report
        .rows
        .iter()
        .map(|r| ProbeCsvRow {
            epsilon: r.epsilon,
            zeta: r.zeta,
            error_bound: r.error_bound,
            ratio: r.ratio,
        })
        .collect();
    emit(cfg, &rows, &report)
}

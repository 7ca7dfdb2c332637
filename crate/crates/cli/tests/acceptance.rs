//! Acceptance criteria, one test each. Every test writes a single
//! `PASS`/`FAIL` line straight to stderr (so it shows without
//! `--nocapture`) and then asserts the same condition.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use towertree::analytic::{prime_zeta, tree_zeta_direct, tree_zeta_partition, Tolerance};
use towertree::asymptotics::{compare_census, singularity_probe};
use towertree::census::{census, census_many, count_min_exponent, CensusOptions};
use towertree::partitions::{brute_force_distinct, enumerate_partitions, sum_distinct};
use towertree::tree::{decompose, tree_of, Tree};

fn verdict(id: &str, ok: bool, detail: String) {
    let line = format!(
        "{} criterion {id}: {detail}\n",
        if ok { "PASS" } else { "FAIL" }
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(ok, "criterion {id}: {detail}");
}

fn t(n: u64) -> Tree {
    tree_of(n).unwrap()
}

fn tol(x: f64) -> Tolerance {
    Tolerance::new(x).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

#[test]
fn c1_birth_sequence() {
    let ((births, status), took) = timed(|| {
        let out = Command::new(env!("CARGO_BIN_EXE_towertree"))
            .args(["seq", "13"])
            .output()
            .unwrap();
        let text = String::from_utf8(out.stdout).unwrap();
        let births: Vec<u64> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        (births, out.status)
    });
    let want = [1u64, 2, 4, 6, 12, 16, 30, 36, 48, 60, 64, 90, 144];
    let ok = status.success() && births == want && took < Duration::from_secs(1);
    verdict(
        "1",
        ok,
        format!("seq 13 = {births:?}, expected {want:?}, {took:.2?}"),
    );
}

#[test]
fn c2_signature_table() {
    let table = [
        (16u64, 4u64, 1usize),
        (300, 1, 1),
        (4800, 1, 1),
        (307_200, 1, 1),
        (18_662_400, 2, 1),
        (192_000_000, 1, 1),
        (729_000_000, 6, 3),
    ];
    let (got, took) = timed(|| {
        table
            .iter()
            .map(|&(n, _, _)| {
                let d = decompose(&t(n)).unwrap();
                (n, d.m_u64().unwrap(), d.k)
            })
            .collect::<Vec<_>>()
    });
    let ok = got == table && took < Duration::from_secs(1);
    verdict("2", ok, format!("signatures {got:?}, {took:.2?}"));
}

#[test]
fn c3_census_integrity() {
    let sums: Vec<(u64, u64)> = [10u64, 1_000, 1_000_000]
        .iter()
        .map(|&x| (x, census(x).unwrap().total()))
        .collect();
    let edge6 = census(1_000_000).unwrap().count(&t(2));
    let (big, took) = timed(|| census(100_000_000).unwrap());
    let edge8 = big.count(&t(2));
    let ok = sums.iter().all(|&(x, s)| x == s)
        && edge6 == 78_498
        && edge8 == 5_761_455
        && big.total() == 100_000_000
        && took < Duration::from_secs(120);
    verdict(
        "3",
        ok,
        format!(
            "sums {sums:?}, edge 10^6 = {edge6}, edge 10^8 = {edge8}, census 10^8 in {took:.2?}"
        ),
    );
}

type Q = BigRational;

fn q(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn c4_inclusion_exclusion_oracle() {
    let (mismatches, took) = timed(|| {
        let domain = [2i64, 3, 5, 7, 11, 13];
        let families: [fn(&[i64]) -> Q; 3] = [
            |_| q(1, 1),
            |v| q(v.iter().product(), 1),
            |v| {
                v.iter()
                    .enumerate()
                    .map(|(j, &x)| q(1, x.pow(j as u32 + 1)))
                    .product()
            },
        ];
        let mut bad = Vec::new();
        for (fi, f) in families.iter().enumerate() {
            for size in 0..=6 {
                for k in 1..=5 {
                    let d = &domain[..size];
                    let a: Q = sum_distinct(f, d, k).unwrap();
                    let b: Q = brute_force_distinct(f, d, k).unwrap();
                    if a != b {
                        bad.push((fi, size, k));
                    }
                }
            }
        }
        bad
    });
    let bell: Vec<usize> = (1..=8)
        .map(|k| enumerate_partitions(k).unwrap().count())
        .collect();
    let ok = mismatches.is_empty()
        && bell == [1, 2, 5, 15, 52, 203, 877, 4140]
        && took < Duration::from_secs(10);
    verdict(
        "4",
        ok,
        format!("mismatches {mismatches:?}, Bell {bell:?}, {took:.2?}"),
    );
}

#[test]
fn c5_zeta_cross_validation() {
    let (rows, took) = timed(|| {
        let mut rows = Vec::new();
        for n in [2u64, 4, 6, 12] {
            for sigma in [1.5, 2.0, 3.0] {
                let d = tree_zeta_direct(&t(n), sigma, 10_000_000).unwrap();
                let p = tree_zeta_partition(&t(n), sigma, tol(1e-9)).unwrap();
                rows.push((
                    n,
                    sigma,
                    (d.value - p.value).abs() <= d.error_bound + p.error_bound,
                ));
            }
        }
        rows
    });
    let agree = rows.iter().all(|r| r.2);
    let star = tree_zeta_partition(&t(6), 2.0, tol(1e-12)).unwrap();
    let p2 = prime_zeta(2.0, tol(1e-13)).unwrap().value;
    let p4 = prime_zeta(4.0, tol(1e-13)).unwrap().value;
    let closed = p2 * p2 - p4;
    let gap = (star.value - closed).abs();
    let ok = agree && gap <= 1e-10 && took < Duration::from_secs(60);
    verdict(
        "5",
        ok,
        format!(
            "method agreement {agree} over {} cases; zeta_2-star(2) = {:.15}, P(2)^2 - P(4) = {closed:.15}, \
             gap {gap:.3e} (half the closed form: {:.15}); {took:.2?}",
            rows.len(),
            star.value,
            closed / 2.0
        ),
    );
}

#[test]
fn c6_chain_constant() {
    let chain = t(4);
    let d = tree_zeta_direct(&chain, 1.0, 10_000_000_000_000_000).unwrap();
    let p = tree_zeta_partition(&chain, 1.0, tol(1e-12)).unwrap();
    let pinned = 0.671675222221733;
    let gap = (d.value - p.value).abs();
    let ok = gap <= 1e-8 && (p.value - pinned).abs() <= 1e-8;
    verdict(
        "6",
        ok,
        format!(
            "direct {:.15}, partition {:.15}, gap {gap:.3e}",
            d.value, p.value
        ),
    );
}

#[test]
fn c7_census_trend() {
    let xs = [10_000u64, 1_000_000, 100_000_000];
    let tables = census_many(&xs, CensusOptions::default()).unwrap();
    let ratios = |n: u64| -> Vec<f64> {
        compare_census(&t(n), &xs, &tables)
            .unwrap()
            .iter()
            .map(|r| r.ratio)
            .collect()
    };
    // Strictly monotone, and each step closer to 1.
    let approaching = |r: &[f64]| {
        let up = r.windows(2).all(|w| w[0] < w[1]);
        let down = r.windows(2).all(|w| w[0] > w[1]);
        (up || down)
            && r.windows(2)
                .all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs())
    };
    let edge = ratios(2);
    let star = ratios(6);
    let ok = approaching(&edge) && approaching(&star) && (1.05..=1.08).contains(&edge[2]);
    verdict(
        "7",
        ok,
        format!("edge ratios {edge:?}, 2-star ratios {star:?}"),
    );
}

#[test]
fn c8_probe_trend() {
    let (reports, took) = timed(|| {
        [2u64, 4]
            .iter()
            .map(|&n| {
                let r = singularity_probe(&t(n), &[1e-2, 1e-3, 1e-4]).unwrap();
                r.rows.iter().map(|row| row.ratio).collect::<Vec<f64>>()
            })
            .collect::<Vec<_>>()
    });
    let shrinking = |r: &[f64]| {
        r.windows(2)
            .all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs())
    };
    let ok = reports.iter().all(|r| shrinking(r)) && took < Duration::from_secs(60);
    verdict(
        "8",
        ok,
        format!(
            "edge {:?}, 2-chain {:?}, {took:.2?}",
            reports[0], reports[1]
        ),
    );
}

#[test]
fn c9_powerful_numbers() {
    let rows: Vec<(u64, u64, f64)> = [10_000u64, 1_000_000, 100_000_000]
        .iter()
        .map(|&x| {
            let c = count_min_exponent(x, 1).unwrap();
            (x, c, c as f64 / (x as f64).sqrt())
        })
        .collect();
    let ok = rows.iter().all(|r| (1.9..=2.6).contains(&r.2));
    verdict("9", ok, format!("(x, count, count/sqrt x) = {rows:?}"));
}

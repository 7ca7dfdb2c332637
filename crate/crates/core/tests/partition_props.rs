use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use towertree::partitions::{
    brute_force_distinct, enumerate_partitions, expand, sum_distinct, weight, SetPartition,
};

type Q = BigRational;
type Family = (&'static str, fn(&[i128]) -> Q);

fn int(v: i128) -> Q {
    Q::from_integer(BigInt::from(v))
}

fn frac(a: i128, b: i128) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

const DOMAIN: [i128; 6] = [2, 3, 5, 7, 11, 13];

fn one(_: &[i128]) -> Q {
    int(1)
}

fn prod(v: &[i128]) -> Q {
    int(v.iter().product())
}

/// `Π v_j^{-(j+1)}`: not symmetric in its arguments.
fn reciprocal_powers(v: &[i128]) -> Q {
    v.iter()
        .enumerate()
        .map(|(j, &x)| frac(1, x.pow(j as u32 + 1)))
        .product()
}

fn bell(k: usize) -> usize {
    // Bell triangle.
    let mut row = vec![1usize];
    for _ in 1..k {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    *row.last().unwrap()
}

#[test]
fn expansion_matches_brute_force_exactly() {
    let families: [Family; 3] = [
        ("one", one),
        ("product", prod),
        ("reciprocal powers", reciprocal_powers),
    ];
    for (name, f) in families {
        for size in 0..=DOMAIN.len() {
            for k in 1..=5 {
                let d = &DOMAIN[..size];
                let fast: Q = sum_distinct(f, d, k).unwrap();
                let slow: Q = brute_force_distinct(f, d, k).unwrap();
                assert_eq!(fast, slow, "{name}, |domain| = {size}, k = {k}");
            }
        }
    }
}

#[test]
fn bell_numbers() {
    let counts: Vec<usize> = (1..=8)
        .map(|k| enumerate_partitions(k).unwrap().count())
        .collect();
    assert_eq!(counts, [1, 2, 5, 15, 52, 203, 877, 4140]);
    assert_eq!(counts, (1..=8).map(bell).collect::<Vec<_>>());
}

#[test]
fn falling_factorials() {
    for k in 1..=8usize {
        for m in 1..=10i128 {
            let got: i128 = expand(k, |p: &SetPartition| m.pow(p.len() as u32)).unwrap();
            let want: i128 = (0..k as i128).map(|i| m - i).product();
            assert_eq!(got, want, "M = {m}, k = {k}");
        }
    }
}

#[test]
fn blocks_ordered_by_minimum() {
    for k in 1..=8 {
        for p in enumerate_partitions(k).unwrap() {
            let mins: Vec<usize> = p.blocks().iter().map(|b| b[0]).collect();
            assert!(mins.windows(2).all(|w| w[0] < w[1]), "{p:?}");
            assert_eq!(mins[0], 0);
            let mut all: Vec<usize> = p.blocks().concat();
            all.sort_unstable();
            assert_eq!(all, (0..k).collect::<Vec<_>>());
        }
    }
}

#[test]
fn hand_worked_examples() {
    let d = [2i128, 3, 5, 7];
    assert_eq!(sum_distinct::<_, Q, _>(one, &d, 2).unwrap(), int(12));
    assert_eq!(sum_distinct::<_, Q, _>(one, &d, 5).unwrap(), int(0));
    let inv = |v: &[i128]| frac(1, v.iter().product());
    let got: Q = sum_distinct(inv, &[2, 3, 5], 2).unwrap();
    let s = frac(31, 30);
    let sq = frac(1, 4) + frac(1, 9) + frac(1, 25);
    assert_eq!(got, &s * &s - sq);
}

proptest! {
    #[test]
    fn weights_count_permutations(k in 1usize..8) {
        // Σ |sign · coefficient| over partitions of [k] is k!.
        let total: u64 = enumerate_partitions(k).unwrap().map(|p| weight(&p).coefficient).sum();
        prop_assert_eq!(total, (1..=k as u64).product::<u64>());
    }

    #[test]
    fn random_tables_agree(
        k in 1usize..=4,
        table in prop::collection::vec(-20i128..20, 6usize.pow(4)),
        size in 1usize..=6,
    ) {
        let domain: Vec<usize> = (0..size).collect();
        let f = |v: &[usize]| {
            let idx = v.iter().fold(0usize, |acc, &x| acc * 6 + x);
            int(table[idx % table.len()])
        };
        let fast: Q = sum_distinct(f, &domain, k).unwrap();
        let slow: Q = brute_force_distinct(f, &domain, k).unwrap();
        prop_assert_eq!(fast, slow);
    }
}

use serde::Serialize;

use super::{birth_with_budget, Birth, BirthBudget, Tree};
use crate::error::{Error, Result};

/// Unique splitting of a non-trivial tree as `(e^{T0})^k ∘ T'`, where `T0` is
/// the oldest root-child subtree and every root child of `T'` is younger.
///
/// `(m, k)` with `m = birth(T0)` is the density signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub t0: Tree,
    pub k: usize,
    pub m: Birth,
    pub t_prime: Tree,
}

impl Decomposition {
    /// The density signature `(m, k)`.
    pub fn signature(&self) -> (&Birth, usize) {
        (&self.m, self.k)
    }

    /// `m` as a machine integer, when it fits.
    pub fn m_u64(&self) -> Result<u64> {
        self.m.to_u64().ok_or_else(|| {
            Error::domain(format!("signature m = {} does not fit in 64 bits", self.m))
        })
    }

    /// Glues `k` copies of `e^{T0}` onto `T'`.
    pub fn reconstruct(&self) -> Tree {
        let mut children = self.t_prime.children().to_vec();
        children.extend(std::iter::repeat(self.t0.clone()).take(self.k));
        Tree::from_children(children)
    }
}

#[derive(Serialize)]
struct DecompositionRecord<'a> {
    t0: String,
    k: usize,
    m: &'a Birth,
    t_prime: String,
}

impl Serialize for Decomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionRecord {
            t0: self.t0.to_string(),
            k: self.k,
            m: &self.m,
            t_prime: self.t_prime.to_string(),
        }
        .serialize(s)
    }
}

pub fn decompose(t: &Tree) -> Result<Decomposition> {
    decompose_with_budget(t, BirthBudget::default())
}

/// Splits off the oldest root-child subtree.
///
/// Births are compared exactly; a child whose birth exceeds `budget` yields
/// [`Error::BirthOverflow`] rather than a guessed order.
pub fn decompose_with_budget(t: &Tree, budget: BirthBudget) -> Result<Decomposition> {
    if t.is_root() {
        return Err(Error::domain(
            "the density signature needs a tree with at least one edge; r has none",
        ));
    }
    // Equal children are adjacent in canonical order.
    let mut groups: Vec<(&Tree, usize)> = Vec::new();
    for c in t.children() {
        match groups.last_mut() {
            Some((g, n)) if *g == c => *n += 1,
            _ => groups.push((c, 1)),
        }
    }
    let mut oldest: Option<(Birth, usize)> = None;
    for (i, (g, _)) in groups.iter().enumerate() {
        let b = birth_with_budget(g, budget)?;
        if oldest.as_ref().map_or(true, |(ob, _)| b < *ob) {
            oldest = Some((b, i));
        }
    }
    let (m, idx) = oldest.expect("non-root tree has a child");
    let (t0, k) = groups[idx];
    let rest = t.children().iter().filter(|c| *c != t0).cloned().collect();
    Ok(Decomposition {
        t0: t0.clone(),
        k,
        m,
        t_prime: Tree::from_children(rest),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::tree_of;

    fn sig(n: u64) -> (u64, usize) {
        let d = decompose(&tree_of(n).unwrap()).unwrap();
        (d.m.to_u64().unwrap(), d.k)
    }

    #[test]
    fn signature_table() {
        assert_eq!(sig(16), (4, 1));
        assert_eq!(sig(300), (1, 1));
        assert_eq!(sig(4_800), (1, 1));
        assert_eq!(sig(307_200), (1, 1));
        assert_eq!(sig(18_662_400), (2, 1));
        assert_eq!(sig(192_000_000), (1, 1));
        assert_eq!(sig(729_000_000), (6, 3));
        assert_eq!(sig(207_360_000), (4, 2));
        assert_eq!(sig(331_776), (4, 1));
    }

    #[test]
    fn parts() {
        let d = decompose(&tree_of(16).unwrap()).unwrap();
        assert_eq!(d.t0, tree_of(4).unwrap());
        assert!(d.t_prime.is_root());

        let d = decompose(&tree_of(729_000_000).unwrap()).unwrap();
        assert_eq!(d.t0, tree_of(6).unwrap());
        assert!(d.t_prime.is_root());

        let d = decompose(&tree_of(18_662_400).unwrap()).unwrap();
        assert_eq!(d.t0, tree_of(2).unwrap());
        let expected = Tree::from_children(vec![tree_of(10).unwrap(), tree_of(6).unwrap()]);
        assert_eq!(d.t_prime, expected);

        // Example: t(331776) = e^{t(4)} ∘ e^{t(12)}.
        let d = decompose(&tree_of(331_776).unwrap()).unwrap();
        assert_eq!(d.t0, tree_of(4).unwrap());
        assert_eq!(d.t_prime, tree_of(1 << 12).unwrap());
    }

    #[test]
    fn root_is_rejected() {
        let e = decompose(&Tree::root()).unwrap_err();
        assert!(e.to_string().contains("at least one edge"));
    }

    #[test]
    fn reconstruction() {
        for n in 2..3000u64 {
            let t = tree_of(n).unwrap();
            let d = decompose(&t).unwrap();
            assert_eq!(d.reconstruct(), t, "n = {n}");
        }
    }
}

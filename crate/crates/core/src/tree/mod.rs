//! Non-planar rooted trees and the integer-to-tree map `t(n)`.
//!
//! The tree of `n` is read off its prime tower: the root gets one child per
//! distinct prime factor, and the child belonging to `p^a` carries the tree of
//! the exponent `a`. Exponents are factored again, and so on until only ones
//! remain, so `t(1)` is the bare root and every prime maps to a single edge.

mod birth;
mod code;
mod decompose;
mod factor;

use std::cmp::Ordering;
use std::fmt;

pub use birth::{birth, birth_with_budget, enumerate_births, trees_born_up_to, Birth, BirthBudget};
pub use code::TreeCode;
pub use decompose::{decompose, decompose_with_budget, Decomposition};
pub use factor::{factorize, FactorView};

use crate::error::{Error, Result};

/// A finite non-planar rooted tree.
///
/// Children are kept in canonical order (see [`canonical_cmp`]), so the derived
/// equality and hashing are multiset equality of the children, recursively.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Tree {
    children: Vec<Tree>,
}

impl Tree {
    /// The one-vertex tree `r = t(1)`.
    pub fn root() -> Self {
        Tree {
            children: Vec::new(),
        }
    }

    /// Builds a tree whose root has the given children, in any order.
    pub fn from_children(mut children: Vec<Tree>) -> Self {
        sort_canonical(&mut children);
        Tree { children }
    }

    /// Root children in canonical order.
    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn is_root(&self) -> bool {
        self.children.is_empty()
    }

    /// Number of edges leaving the root (the number of distinct primes of any
    /// `n` with this tree).
    pub fn degree(&self) -> usize {
        self.children.len()
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.children.iter().map(Tree::vertex_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Glues two trees at their roots. Commutative, with `r` as unit.
    pub fn product(&self, other: &Tree) -> Tree {
        let mut children = Vec::with_capacity(self.degree() + other.degree());
        children.extend(self.children.iter().cloned());
        children.extend(other.children.iter().cloned());
        Tree::from_children(children)
    }

    /// `e^T`: a new root with a single edge whose far end carries `self`.
    pub fn lift(&self) -> Tree {
        Tree {
            children: vec![self.clone()],
        }
    }

    pub fn encode(&self) -> TreeCode {
        TreeCode::from_tree(self)
    }

    pub(crate) fn write_code(&self, out: &mut String) {
        out.push('(');
        for c in &self.children {
            c.write_code(out);
        }
        out.push(')');
    }
}

/// Free-function form of [`Tree::product`].
pub fn product(a: &Tree, b: &Tree) -> Tree {
    a.product(b)
}

/// Free-function form of [`Tree::lift`].
pub fn lift(t: &Tree) -> Tree {
    t.lift()
}

/// Canonical child order: shorter codes first, then bytewise with `(` < `)`.
pub fn canonical_cmp(a: &Tree, b: &Tree) -> Ordering {
    a.vertex_count()
        .cmp(&b.vertex_count())
        .then_with(|| a.encode().as_str().cmp(b.encode().as_str()))
}

fn sort_canonical(children: &mut [Tree]) {
    if children.len() > 1 {
        children.sort_by_cached_key(|c| {
            let code = c.encode();
            (code.len(), code)
        });
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(self, other)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.encode().as_str())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({self})")
    }
}

/// The tree `t(n)` of a positive integer, by trial division.
///
/// ```
/// use towertree::tree::tree_of;
/// assert_eq!(tree_of(16).unwrap().to_string(), "(((())))");
/// assert_eq!(tree_of(300).unwrap().to_string(), "(()(())(()))");
/// ```
pub fn tree_of(n: u64) -> Result<Tree> {
    if n == 0 {
        return Err(Error::domain("t(n) is defined for n >= 1 only"));
    }
    Ok(tree_of_factors(&factorize(n)?))
}

pub(crate) fn tree_of_factors(f: &FactorView) -> Tree {
    let children = f
        .pairs()
        .iter()
        .map(|&(_, e)| tree_of(e).expect("exponents are positive"))
        .collect();
    Tree::from_children(children)
}

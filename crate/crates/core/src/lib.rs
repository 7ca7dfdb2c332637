//! Prime factorization towers as rooted trees.
//!
//! Every positive integer `n` has a tree `t(n)`: factor `n`, give the root one
//! child per prime, and hang below each child the tree of that prime's
//! exponent. This crate builds those trees, counts how many `n <= x` share a
//! tree, evaluates the Dirichlet series `ζ_T(s)` of a tree on the real axis,
//! and compares the counts with their predicted growth.
//!
//! - [`tree`]: trees, their codes, births and the oldest-child decomposition.
//! - [`census`]: sieve-based counts `π_T(x)`.
//! - [`partitions`]: set partitions and the distinct-tuple expansion.
//! - [`analytic`]: `ζ`, the prime zeta function and tree zeta functions.
//! - [`asymptotics`]: main terms, census comparisons and probes near the
//!   abscissa of convergence.

pub mod analytic;
pub mod asymptotics;
pub mod census;
pub mod error;
pub mod partitions;
pub mod tree;

pub use error::{Error, ErrorKind, Result};
pub use tree::{tree_of, Tree, TreeCode};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/census.md")]
    mod census {}
    #[doc = include_str!("../../../book/src/partitions.md")]
    mod partitions {}
    #[doc = include_str!("../../../book/src/zeta.md")]
    mod zeta {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    mod asymptotics {}
}

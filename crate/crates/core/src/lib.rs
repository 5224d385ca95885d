//! Intersecting families of k-spaces in PG(n,q) and AG(n,q): exact counts,
//! the extremal example constructions, brute-force oracles, and the grid of
//! inequalities behind the Hilton–Milner-type classification.

pub mod counting;
pub mod error;
pub mod families;
pub mod geometry;
pub mod gf;
pub mod grid;
pub mod lemmas;
pub mod search;
pub mod subspace;

pub use error::{Error, Result};

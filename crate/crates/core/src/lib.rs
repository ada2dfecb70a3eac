//! Computational machinery for generic small-cancellation groups.
//!
//! The crate is `no_std` (it needs `alloc`) and covers:
//!
//! * [`words`]: free-group words, cyclic words, exact counting and uniform
//!   sampling of cyclically reduced words.
//! * [`agraph`]: Stallings A-graphs, union-find folding, cores, maximal arcs,
//!   spanning-tree bases and canonical forms.
//! * [`cancel`]: symmetrized relator sets, pieces, `C'(λ)` checks,
//!   λ-reduced words, Dehn's algorithm and ladder-shaped equality diagrams.
//! * [`generic`]: `(μ,k)`-readability, the `(λ,μ,k)`-condition, random
//!   presentation samplers and Monte Carlo genericity estimates.
//! * [`minimize`]: AO-moves, greedy minimization of subgroup graphs over a
//!   small-cancellation presentation, and subgroup membership.
//! * [`chains`]: ascending-chain experiments in `G` and in the free group.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod agraph;
pub mod cancel;
pub mod chains;
mod error;
pub mod generic;
pub mod minimize;
#[cfg(any(test, feature = "oracles"))]
pub mod oracles;
pub mod rng;
pub mod words;

pub use error::Error;

/// Exact rational used for λ, μ and densities.
pub type Rational = num_rational::Ratio<i64>;

/// Convenience result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;

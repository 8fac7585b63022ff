//! Iterative Byzantine vector consensus on incomplete directed graphs.
//!
//! The crate is organised around the pieces needed to study the `Byz-Iter`
//! algorithm end to end:
//!
//! * [`graph`]: directed graphs, strongly connected components, reduced graphs.
//! * [`conditions`]: exhaustive certification of the necessary (NC) and
//!   sufficient (SC) partition conditions, plus the population and in-degree bounds.
//! * [`geometry`]: exact rational convex-hull membership, hull intersections and
//!   Tverberg points, backed by an in-repo exact simplex.
//! * [`protocol`]: the synchronous Transmit/Receive/Update state machine with
//!   pluggable Byzantine adversaries, scenario files, traces and the `t_end` bound.
//! * [`analysis`]: row-stochastic matrix tools (ergodicity coefficients, backward
//!   products, connectivity matrices) and post-hoc trace verifiers.
//!
//! All arithmetic on points and matrices is exact ([`Rational`]).

pub mod analysis;
pub mod conditions;
mod error;
pub mod geometry;
pub mod graph;
pub mod protocol;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
pub use rational::Rational;

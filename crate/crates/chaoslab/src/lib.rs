//! A computational laboratory for the chaos game on general iterated
//! function systems.
//!
//! The crate approximates attractors deterministically (Hutchinson
//! iteration), runs chaos-game orbits driven by deterministic and stochastic
//! symbol sources, and measures what the orbits do with metric diagnostics:
//! Hausdorff distances between orbit tails and attractor approximations,
//! fibre intersection checks, forward-invariance residuals, and escape
//! statistics for attractor/repeller pairs of invertible systems.
//!
//! On the symbolic side it provides disjunctiveness diagnostics for symbol
//! streams, cylinder measures and doubling ratios for explicit stochastic
//! processes, and exact Baire-metric computations on the code space,
//! including a constructive porosity witness for the sets of sequences that
//! avoid a given word.
//!
//! See the `book/` directory of the repository for a guided tour; every
//! code snippet there is compiled and run as a test.

// Tolerance checks are written `!(x > 0.0)` on purpose: the negation also
// rejects NaN, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builtin;
pub mod chaosgame;
pub mod codespace;
mod error;
pub mod hyperspace;
pub mod ifs;
pub mod symbols;

pub use error::{Error, Result};
pub use hyperspace::PointCloud;
pub use ifs::{ExtComplex, FiniteWord, Ifs, MapSpec, MetricPoint, SpaceTag};
pub use symbols::{StochasticKernel, SymbolStream};

//! Exact and randomized solvers for set cover, set partition,
//! chromatic-number decision, and weighted GF(2) linear systems.
//!
//! The crate is organized bottom-up:
//!
//! - [`instances`]: problem types, file formats, seeded generators, and
//!   guarded brute-force reference solvers.
//! - [`lattice`]: down-closed subset families and counting transforms
//!   (zeta, Möbius, weight-profile composition) restricted to them.
//! - [`dp_core`]: dynamic programs over subsets — the classic cover DP and
//!   partition-counting profiles on closures.
//! - [`reductions`]: size-preserving translations between cover, partition,
//!   and linear-system questions.
//! - [`witness`]: entropy bookkeeping, sampling schedules, and structural
//!   checks behind the sampled solvers.
//! - [`few_sets`]: branching solver for instances whose solutions use few
//!   large sets.
//! - [`linsat_solver`]: randomized solver for weighted GF(2) systems.
//! - [`sampled_solver`]: the sampled-subset partition and cover solvers and
//!   the chromatic-number driver.
//!
//! Randomized solvers never return a false YES: every YES carries a
//! certificate that the caller can re-verify. False NO answers are possible
//! but bounded in probability by each solver's documentation.

pub mod dp_core;
pub mod error;
pub mod few_sets;
pub mod instances;
pub mod lattice;
pub mod linsat_solver;
pub mod reductions;
pub mod sampled_solver;
pub mod witness;

mod bits;

pub use error::{Error, Result};

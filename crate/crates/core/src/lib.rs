//! Exact and randomized tools around three classical extremal questions:
//!
//! * the maximum edge count of a triangle-free graph (`graph`, `shift`),
//! * the maximum size of an antichain of subsets (`sperner`),
//! * the minimum number of l-subsets meeting every k-subset (`cover`).
//!
//! Everything that can be exact is exact: counts are big integers,
//! probabilities are reduced rationals, and the randomized layer
//! (`montecarlo`) is seeded and reproducible so its estimates can be
//! checked against the exact values they approximate. `verify` bundles
//! the cross-checks into named suites used by both the test harness and
//! the `turanlab` binary.

pub mod counting;
pub mod cover;
pub mod error;
pub mod graph;
pub mod montecarlo;
pub mod rational;
pub mod rng;
pub mod shift;
pub mod sperner;
pub mod subset;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
pub use rng::Seed;
pub use subset::{Subset, SubsetFamily};

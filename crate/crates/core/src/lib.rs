//! Zero-sum security games in which the protection status of a single target
//! may leak to the attacker.
//!
//! The crate is `no_std` (it needs `alloc`). It contains:
//!
//! - [`game`]: instances, leakage models, pure and mixed strategies;
//! - [`marginals`]: pairwise coverage matrices and exact utility evaluation
//!   under no leakage, probabilistic leakage (PRIL) and adversarial leakage
//!   (ADIL);
//! - [`membership`]: an exact hull-membership test for small pairwise
//!   marginal matrices;
//! - [`linprog`]: a dense two-phase simplex with dual values;
//! - [`opt`]: the no-leakage marginal LP, the full enumeration LP, column
//!   generation and the two defender oracles;
//! - [`sampling`]: comb sampling, uniform comb sampling, independent
//!   sampling without replacement and max-entropy sampling.
//!
//! Target indices are 0-based everywhere.

#![no_std]

extern crate alloc;

pub mod combin;
pub mod error;
pub mod game;
pub mod linalg;
pub mod linprog;
pub mod marginals;
pub mod membership;
pub mod opt;
pub mod sampling;

pub use error::{Error, Result};
pub use game::{validate_instance, GameInstance, LeakageModel, MixedStrategy, PureStrategy, Violation};
pub use marginals::{
    conditional_utilities, leakage_utility, pairwise_marginals, ConditionalUtilities, PairwiseMarginals,
};

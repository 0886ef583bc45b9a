//! Independence systems, hulls and cores, and free-order secretary algorithms
//! on one- and two-sided constraints.
//!
//! Element sets are [`ElemSet`] bitmasks over ground sets of at most
//! [`set::MAX_GROUND`] elements. Systems are immutable and shareable across
//! threads; every randomized routine takes its RNG explicitly.

pub mod agent;
pub mod assignment;
pub mod classes;
pub mod combination;
pub mod edge;
pub mod error;
pub mod format;
pub mod hull;
pub mod ops;
pub mod set;
pub mod system;
pub mod weights;

pub use combination::{CombinationSystem, Part};
pub use error::{Error, Result};
pub use hull::{core, pcore, phull_contains, HullSystem, RelevanceContext};
pub use ops::{circuits_of, contract, greedy, opt_basis, parallel_extend, rank, restrict, span};
pub use set::ElemSet;
pub use system::{Independence, IndependenceSystem, Kind, Rational};
pub use weights::WeightedInstance;

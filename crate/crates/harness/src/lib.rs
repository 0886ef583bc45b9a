//! Generators, Monte Carlo estimation, experiment configs and the acceptance
//! suite for the secretary algorithms in `secretary-core`.

pub mod accept;
pub mod config;
pub mod estimate;
pub mod gen;
pub mod runs;
pub mod structural;

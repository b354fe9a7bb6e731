//! Simulation-based actor-critic and critic-actor learning for stochastic
//! shortest path problems, with exact solvers, tabular and linear-function
//! approximation learners, environment generators and an experiment harness.

pub mod envs;
pub mod episode;
pub mod error;
pub mod features;
pub mod format;
pub mod harness;
pub mod linear_fa;
pub mod mdp;
pub mod policies;
pub mod record;
pub mod rng;
pub mod schedules;
pub mod tabular;

pub use error::{Error, Result};

//! Exact simulation of p-tempered α-stable Ornstein-Uhlenbeck processes.
//!
//! The transition law of the process splits into an affine part, a few
//! tempered stable components and a compound Poisson sum whose jump sizes
//! are products of a draw from the normalized Rosiński measure and an
//! incomplete gamma variate.

pub mod base_dists;
pub mod error;
pub mod harness;
pub mod ou_transition;
pub mod par;
pub mod power_model;
pub mod quad;
pub mod special_fn;
pub mod ts_core;

pub use error::{Error, Result};

//! Stability of threshold cellular automata on a two-dimensional torus.
//!
//! The crate provides an exact simulation oracle, structural
//! characterisations of stable configurations for the Threshold-2 and
//! Majority rules, a one-sided sublinear stability tester for Threshold-2,
//! a stabilization procedure, and instance generators.

pub mod cli;
pub mod error;
pub mod generators;
pub mod stabilizer;
pub mod structure;
pub mod tester;
pub mod torus;

pub use error::{Error, Result};

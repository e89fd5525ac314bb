//! Moderate dimension reduction for k-center clustering.
//!
//! The crate is organised in layers:
//!
//! - [`geometry`]: point sets, Euclidean primitives, greedy nets, doubling
//!   estimates and seeded dataset generators.
//! - [`dimred`]: Gaussian random maps, target-dimension calculators and the
//!   statistical probes used to calibrate them.
//! - [`solvers`]: Gonzalez / furthest-point queries, brute-force oracles for
//!   the vanilla, outlier and assignment-constrained objectives, and the
//!   max-flow feasibility checks behind capacitated and fair clustering.
//! - [`streaming`]: a dynamic geometric-stream engine (insertions and
//!   deletions) built on grid sketches and two-level l0-samplers.
//! - [`harness`]: reproducible experiments with CSV/JSON reporting.

pub mod dimred;
pub mod error;
pub mod geometry;
pub mod harness;
pub(crate) mod rng;
pub mod solvers;
pub mod streaming;

pub use error::{Error, Result};
pub use geometry::{Point, PointSet};

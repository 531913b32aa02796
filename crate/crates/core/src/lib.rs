//! Solvers for robust linear optimization problems of the form
//!
//! ```text
//!     min_{x in X}  max_{c in U}  c' x
//! ```
//!
//! where the feasible region `X` is a polytope reachable only through a
//! linear minimization oracle and the uncertainty set `U` is reachable only
//! through support maximization and Euclidean projection.
//!
//! The main entry point is [`solvers::solve`], which dispatches on
//! [`config::Method`]:
//!
//! * smoothed Frank-Wolfe with a fixed smoothing parameter,
//! * smoothed Frank-Wolfe with a decreasing smoothing schedule,
//! * smoothed Frank-Wolfe augmented with convex-hull restricted solves that
//!   produce certified dual bounds,
//! * constraint generation on the epigraph formulation.
//!
//! The crate is `no_std` compatible (with `alloc`): disable the default
//! `std` feature and enable `libm` to build for targets without a standard
//! library. Wall-clock timestamps in traces then require a caller-supplied
//! [`trace::WallClock`].

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod config;
pub mod error;
pub mod lp;
mod math;
pub mod oracles;
pub mod point;
pub mod problem;
pub mod smoothing;
pub mod solvers;
pub mod trace;
pub mod uncertainty;

pub use config::{Method, SolverConfig};
pub use error::{Error, Result};
pub use point::Point;
pub use problem::{GeometricConstants, ProblemInstance};
pub use solvers::{RunResult, Termination};
pub use uncertainty::UncertaintySet;

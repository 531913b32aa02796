//! Benchmark harness around the `robustfw-core` solvers: JSON instance
//! files, seeded random instance generation, independent brute-force
//! reference oracles, and CSV-producing experiment runs.

pub mod error;
pub mod experiment;
pub mod gen;
pub mod groundtruth;
pub mod instance;

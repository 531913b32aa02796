//! Per-iteration measurements collected during a solver run.

use alloc::vec::Vec;

/// One row of a solver trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord {
    /// Iteration counter, strictly increasing within a trace, starting at 1.
    pub iteration: usize,
    /// True objective `max_{c in U} c'x` at the current iterate.
    pub f_value: f64,
    /// Smoothed objective at the current iterate, when the method computes one.
    pub f_mu_value: Option<f64>,
    /// Best certified lower bound on the optimal value seen so far, when the
    /// method produces bounds.
    pub dual_bound: Option<f64>,
    /// Cumulative number of linear minimization oracle calls.
    pub lmo_calls: usize,
    /// Seconds since the run started, as reported by the run's clock.
    pub elapsed_seconds: f64,
}

/// Ordered log of [`TraceRecord`]s for one solver run.
#[derive(Clone, Debug, Default)]
pub struct SolverTrace {
    records: Vec<TraceRecord>,
}

impl SolverTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: TraceRecord) {
        if let Some(last) = self.records.last() {
            debug_assert!(record.iteration > last.iteration, "iterations must increase");
            debug_assert!(record.lmo_calls >= last.lmo_calls, "lmo count cannot decrease");
            debug_assert!(
                record.elapsed_seconds >= last.elapsed_seconds,
                "elapsed time cannot decrease"
            );
        }
        self.records.push(record);
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Time source injected into solver runs.
///
/// The library itself never reads the system clock, so `no_std` builds can
/// supply their own source (or [`NullClock`] to disable timing).
pub trait WallClock {
    /// Seconds elapsed since the clock was started. Must be nondecreasing.
    fn elapsed_seconds(&self) -> f64;
}

/// Clock that always reads zero.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullClock;

impl WallClock for NullClock {
    fn elapsed_seconds(&self) -> f64 {
        0.0
    }
}

/// Clock backed by [`std::time::Instant`].
#[cfg(feature = "std")]
#[derive(Clone, Copy, Debug)]
pub struct StdClock {
    start: std::time::Instant,
}

#[cfg(feature = "std")]
impl StdClock {
    pub fn start() -> Self {
        Self { start: std::time::Instant::now() }
    }
}

#[cfg(feature = "std")]
impl WallClock for StdClock {
    fn elapsed_seconds(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_are_kept_in_order() {
        let mut trace = SolverTrace::new();
        for t in 1..=3 {
            trace.push(TraceRecord {
                iteration: t,
                f_value: 10.0 - t as f64,
                f_mu_value: None,
                dual_bound: None,
                lmo_calls: t,
                elapsed_seconds: t as f64 * 0.25,
            });
        }
        assert_eq!(trace.len(), 3);
        assert_eq!(trace.last().unwrap().iteration, 3);
        assert_eq!(trace.records()[0].lmo_calls, 1);
    }

    #[test]
    #[should_panic(expected = "iterations must increase")]
    #[cfg(debug_assertions)]
    fn rejects_backwards_iteration() {
        let mut trace = SolverTrace::new();
        let rec = TraceRecord {
            iteration: 2,
            f_value: 0.0,
            f_mu_value: None,
            dual_bound: None,
            lmo_calls: 0,
            elapsed_seconds: 0.0,
        };
        trace.push(rec);
        trace.push(rec);
    }
}

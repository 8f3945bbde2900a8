use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

/// Shared predicate-call counters. Attach one to a [`KernelConfig`] to
/// instrument a kernel.
///
/// [`KernelConfig`]: super::KernelConfig
#[derive(Debug, Default)]
pub struct PredicateCounters {
    orient2d_total: AtomicU64,
    orient2d_exact: AtomicU64,
    orient3d_total: AtomicU64,
    orient3d_exact: AtomicU64,
}

/// Calls of one predicate, split by evaluation path.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCounts {
    pub total: u64,
    pub exact_fallback: u64,
}

impl PathCounts {
    pub fn filtered(&self) -> u64 {
        self.total - self.exact_fallback
    }
}

/// Snapshot of a [`PredicateCounters`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateCounts {
    pub orient2d: PathCounts,
    pub orient3d: PathCounts,
}

impl PredicateCounts {
    pub fn total(&self) -> u64 {
        self.orient2d.total + self.orient3d.total
    }

    pub fn exact_fallback(&self) -> u64 {
        self.orient2d.exact_fallback + self.orient3d.exact_fallback
    }

    /// Fraction of calls that needed the exact path; zero when nothing ran.
    pub fn fallback_fraction(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            n => self.exact_fallback() as f64 / n as f64,
        }
    }
}

impl std::ops::Add for PredicateCounts {
    type Output = PredicateCounts;

    fn add(self, rhs: PredicateCounts) -> PredicateCounts {
        PredicateCounts {
            orient2d: PathCounts {
                total: self.orient2d.total + rhs.orient2d.total,
                exact_fallback: self.orient2d.exact_fallback + rhs.orient2d.exact_fallback,
            },
            orient3d: PathCounts {
                total: self.orient3d.total + rhs.orient3d.total,
                exact_fallback: self.orient3d.exact_fallback + rhs.orient3d.exact_fallback,
            },
        }
    }
}

impl PredicateCounters {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn record_orient2d(&self, exact: bool) {
        self.orient2d_total.fetch_add(1, Ordering::Relaxed);
        if exact {
            self.orient2d_exact.fetch_add(1, Ordering::Relaxed);
        }
    }

    #[inline]
    pub(crate) fn record_orient3d(&self, exact: bool) {
        self.orient3d_total.fetch_add(1, Ordering::Relaxed);
        if exact {
            self.orient3d_exact.fetch_add(1, Ordering::Relaxed);
        }
    }

    pub fn snapshot(&self) -> PredicateCounts {
        PredicateCounts {
            orient2d: PathCounts {
                total: self.orient2d_total.load(Ordering::Relaxed),
                exact_fallback: self.orient2d_exact.load(Ordering::Relaxed),
            },
            orient3d: PathCounts {
                total: self.orient3d_total.load(Ordering::Relaxed),
                exact_fallback: self.orient3d_exact.load(Ordering::Relaxed),
            },
        }
    }

    pub fn reset(&self) {
        for c in [
            &self.orient2d_total,
            &self.orient2d_exact,
            &self.orient3d_total,
            &self.orient3d_exact,
        ] {
            c.store(0, Ordering::Relaxed);
        }
    }
}

//! Work accounting and per-run statistics.
//!
//! Wall-clock comparisons are machine-dependent, so scaling claims are
//! checked against a machine-independent counter: adjacency entries touched
//! by traversals plus hyperedge members / interval endpoints scanned.

use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU64, Ordering};

/// Cheap global work counter. Kernels accumulate locally and flush once,
/// so the atomics are not on hot paths.
#[derive(Debug, Default)]
pub struct WorkCounter {
    adjacency: AtomicU64,
    hyperedge: AtomicU64,
}

impl WorkCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_adjacency(&self, n: u64) {
        self.adjacency.fetch_add(n, Ordering::Relaxed);
    }

    pub fn add_hyperedge(&self, n: u64) {
        self.hyperedge.fetch_add(n, Ordering::Relaxed);
    }

    pub fn adjacency(&self) -> u64 {
        self.adjacency.load(Ordering::Relaxed)
    }

    pub fn hyperedge(&self) -> u64 {
        self.hyperedge.load(Ordering::Relaxed)
    }

    pub fn total(&self) -> u64 {
        self.adjacency().saturating_add(self.hyperedge())
    }

    pub fn snapshot(&self) -> WorkSnapshot {
        WorkSnapshot {
            adjacency: self.adjacency(),
            hyperedge: self.hyperedge(),
            total: self.total(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct WorkSnapshot {
    pub adjacency: u64,
    pub hyperedge: u64,
    pub total: u64,
}

/// How a cached path level was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelProvenance {
    /// Materialised neighbourhood hypergraph plus a partitioned path.
    Exact,
    /// Radius increment from the previous level.
    Lift,
    /// Radius doubling through an r-division.
    Double,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: u32,
    pub provenance: LevelProvenance,
    pub max_stab: usize,
    pub mean_stab: f64,
    /// Signature groups formed by the net (refinement levels only).
    pub groups: Option<usize>,
    pub net_size: Option<usize>,
    pub group_cap: Option<f64>,
    pub max_symdiff: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DivisionStats {
    pub n: usize,
    pub r: usize,
    pub clusters: usize,
    pub max_cluster: usize,
    pub excess: usize,
    pub boundary_vertices: usize,
    pub degraded: bool,
    pub census_size: Option<usize>,
}

/// Everything a run wants to report besides the answer.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunStats {
    pub levels: Vec<LevelStats>,
    pub divisions: Vec<DivisionStats>,
    /// (k, verdict) pairs in the order the dichotomic search asked them.
    pub decisions: Vec<(u32, bool)>,
    pub work: WorkSnapshot,
}

impl RunStats {
    /// Decision trace must be monotone: once "diameter <= k" holds it holds
    /// for every larger k the search asked about.
    pub fn decisions_monotone(&self) -> bool {
        let mut sorted = self.decisions.clone();
        sorted.sort_by_key(|&(k, _)| k);
        let mut seen_true_at = None;
        let mut seen_false_at = None;
        for (k, v) in sorted {
            if v {
                if seen_true_at.is_none() {
                    seen_true_at = Some(k);
                }
            } else {
                seen_false_at = Some(k);
            }
        }
        match (seen_true_at, seen_false_at) {
            (Some(t), Some(f)) => f < t,
            _ => true,
        }
    }
}

/// Least-squares slope of log(y) against log(x); the scaling-fit helper used
/// by the acceptance suite and the bench runner.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "need at least two points for a fit");
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| (x.max(1.0).ln(), y.max(1.0).ln()))
        .collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

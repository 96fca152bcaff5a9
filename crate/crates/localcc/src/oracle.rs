//! Ground truth and baselines: exhaustive search over set partitions, the
//! classical random-pivot clustering, worst-vertex agreement scoring, and
//! the per-vertex tolerance predicate.
//!
//! The exact search enumerates restricted-growth strings in lexicographic
//! order, so the number of partitions examined is the Bell number of the
//! vertex count. The cap below keeps that tractable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::clustering::{clustering_error_vector, Clustering, Objective};
use crate::graphs::{SignedCompleteGraph, SignedGraph};

/// Largest vertex count the exact search accepts (Bell(13) ≈ 2.8e7).
pub const EXACT_SEARCH_CAP: usize = 13;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("instance has {vertices} vertices; the exact search caps at {cap}")]
    TooLarge { vertices: usize, cap: usize },
    #[error("tolerance map covers {have} vertices, need {need}")]
    MissingTolerance { have: usize, need: usize },
    #[error("trial count must be positive")]
    NoTrials,
    #[error("parameter {name} must be at least {min}, got {got}")]
    ParameterTooSmall { name: &'static str, min: usize, got: usize },
}

/// Iterator over all set partitions of 0..n as restricted-growth strings in
/// lexicographic order. The string itself is a canonical cluster assignment
/// (clusters numbered by smallest member).
pub struct RgsIter {
    a: Vec<u8>,
    prefix_max: Vec<u8>,
    started: bool,
    done: bool,
}

impl RgsIter {
    pub fn new(n: usize) -> RgsIter {
        assert!(n >= 1 && n <= 64, "partition enumeration supports 1..=64 vertices");
        RgsIter { a: vec![0; n], prefix_max: vec![0; n], started: false, done: false }
    }

    /// Advances to the next string, returning it, or None when exhausted.
    pub fn next_rgs(&mut self) -> Option<&[u8]> {
        let n = self.a.len();
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.a);
        }
        // Successor: bump the rightmost position that may grow, zero the rest.
        let mut i = n;
        loop {
            if i == 1 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.a[i] <= self.prefix_max[i - 1] {
                break;
            }
        }
        self.a[i] += 1;
        self.prefix_max[i] = self.prefix_max[i - 1].max(self.a[i]);
        for j in (i + 1)..n {
            self.a[j] = 0;
            self.prefix_max[j] = self.prefix_max[j - 1];
        }
        Some(&self.a)
    }

    /// Runs `f` on every partition; convenience over the streaming API.
    pub fn for_each(n: usize, mut f: impl FnMut(&[u8])) {
        let mut iter = RgsIter::new(n);
        while let Some(rgs) = iter.next_rgs() {
            f(rgs);
        }
    }
}

/// Result of the exhaustive search.
#[derive(Clone, Debug)]
pub struct ExactResult {
    pub best: Clustering,
    pub value: f64,
    pub partitions_examined: u64,
}

/// Finds a partition minimizing the objective over the error vector by
/// enumerating all set partitions. Ties resolve to the lexicographically
/// smallest restricted-growth string. For bipartite graphs the objective is
/// evaluated on the guaranteed side (V1); for complete graphs that is every
/// vertex.
pub fn exact_best(g: &impl SignedGraph, objective: Objective) -> Result<ExactResult, OracleError> {
    let n = g.total_vertices();
    if n > EXACT_SEARCH_CAP {
        return Err(OracleError::TooLarge { vertices: n, cap: EXACT_SEARCH_CAP });
    }
    let guaranteed = g.guaranteed_vertices();
    let edges: Vec<(usize, usize, bool)> =
        g.labeled_pairs().map(|(u, v, s)| (u, v, s.is_positive())).collect();

    let mut best_rgs: Vec<u8> = Vec::new();
    let mut best_value = f64::INFINITY;
    let mut examined = 0u64;
    let mut errs = vec![0.0f64; n];

    RgsIter::for_each(n, |rgs| {
        examined += 1;
        errs.iter_mut().for_each(|e| *e = 0.0);
        for &(u, v, positive) in &edges {
            let same = rgs[u] == rgs[v];
            if same != positive {
                errs[u] += 1.0;
                errs[v] += 1.0;
            }
        }
        let value = objective.evaluate_slice(&errs[..guaranteed]);
        if value < best_value {
            best_value = value;
            best_rgs = rgs.to_vec();
        }
    });

    let assignment: Vec<usize> = best_rgs.iter().map(|&c| c as usize).collect();
    Ok(ExactResult {
        best: Clustering::from_assignment(&assignment).expect("n >= 1"),
        value: best_value,
        partitions_examined: examined,
    })
}

/// Worst-vertex agreement: the minimum over vertices of the number of
/// incident edges the clustering gets right.
pub fn max_agree_value(g: &SignedCompleteGraph, c: &Clustering) -> usize {
    let n = g.vertex_count();
    let errors = clustering_error_vector(g, c).expect("matching dimensions");
    (0..n).map(|v| n - 1 - errors.get(v) as usize).min().unwrap_or(0)
}

/// Per-vertex error tolerances over the guaranteed side of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToleranceMap {
    tolerances: Vec<u32>,
}

impl ToleranceMap {
    pub fn new(tolerances: Vec<u32>) -> ToleranceMap {
        ToleranceMap { tolerances }
    }

    pub fn uniform(count: usize, t: u32) -> ToleranceMap {
        ToleranceMap { tolerances: vec![t; count] }
    }

    pub fn get(&self, v: usize) -> u32 {
        self.tolerances[v]
    }

    pub fn len(&self) -> usize {
        self.tolerances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tolerances.is_empty()
    }
}

/// Outcome of the tolerance predicate: either every covered vertex is within
/// its tolerance, or the first (smallest-index) violating vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TPerfectVerdict {
    pub holds: bool,
    pub first_violation: Option<usize>,
}

/// Checks whether each guaranteed-side vertex has at most its tolerated
/// number of incident errors.
pub fn is_t_perfect(
    g: &impl SignedGraph,
    c: &Clustering,
    tolerances: &ToleranceMap,
) -> Result<TPerfectVerdict, OracleError> {
    let need = g.guaranteed_vertices();
    if tolerances.len() != need {
        return Err(OracleError::MissingTolerance { have: tolerances.len(), need });
    }
    let errors = clustering_error_vector(g, c).expect("matching dimensions");
    for v in 0..need {
        if errors.get(v) > tolerances.get(v) as f64 {
            return Ok(TPerfectVerdict { holds: false, first_violation: Some(v) });
        }
    }
    Ok(TPerfectVerdict { holds: true, first_violation: None })
}

/// The classical random-pivot clustering: repeatedly pick a surviving vertex
/// uniformly at random and emit it together with its surviving positive
/// neighbors. Deterministic given the seed.
pub fn acn_cluster(g: &SignedCompleteGraph, seed: u64) -> Clustering {
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut surviving: Vec<usize> = (0..n).collect();
    let mut raw = vec![0usize; n];
    let mut cluster = 0usize;
    while !surviving.is_empty() {
        let pivot = surviving[rng.random_range(0..surviving.len())];
        let members: Vec<usize> = surviving
            .iter()
            .copied()
            .filter(|&w| w == pivot || g.edge_sign(pivot, w).is_positive())
            .collect();
        for &w in &members {
            raw[w] = cluster;
        }
        cluster += 1;
        surviving.retain(|v| !members.contains(v));
    }
    Clustering::from_assignment(&raw).expect("n >= 1")
}

/// Worst-vertex error statistics over repeated random-pivot runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapSummary {
    pub trials: usize,
    pub min_worst_error: f64,
    pub max_worst_error: f64,
    pub mean_worst_error: f64,
}

/// Runs the random-pivot baseline on the matching instance repeatedly and
/// summarizes the worst-vertex error. On this family every run leaves one
/// matched partner outside the big cluster, so the worst vertex sees 2t-2
/// errors while the single-cluster optimum sees 1: the gap grows without
/// bound in t.
pub fn acn_minimax_gap(t: usize, trials: usize, seed: u64) -> Result<GapSummary, OracleError> {
    if t < 2 {
        return Err(OracleError::ParameterTooSmall { name: "t", min: 2, got: t });
    }
    if trials == 0 {
        return Err(OracleError::NoTrials);
    }
    let g = crate::graphs::matching_instance(t).expect("t >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for _ in 0..trials {
        let c = acn_cluster(&g, rng.random());
        let worst = clustering_error_vector(&g, &c).expect("matching dimensions").max();
        min = min.min(worst);
        max = max.max(worst);
        sum += worst;
    }
    Ok(GapSummary {
        trials,
        min_worst_error: min,
        max_worst_error: max,
        mean_worst_error: sum / trials as f64,
    })
}

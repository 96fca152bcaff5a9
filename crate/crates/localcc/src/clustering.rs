//! Partitions, fractional clusterings, error vectors, and objective functions.
//!
//! A discrete clustering is a partition of the vertex set. A fractional
//! clustering assigns each unordered pair a distance in [0, 1] subject to the
//! triangle inequalities; integral points are exactly the discrete
//! clusterings (distance 0 inside a cluster, 1 across). The error vector of a
//! fractional clustering charges each vertex the distances to its positive
//! neighbors plus the complements of distances to its negative neighbors.

use thiserror::Error;

use crate::graphs::{pair_count, pair_index, SignedGraph};

/// Absolute tolerance for box and triangle checks on fractional clusterings.
/// Distances arrive from floating-point LP solves, so exact checks are too strict.
pub const METRIC_EPS: f64 = 1e-9;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ClusteringError {
    #[error("assignment is empty")]
    Empty,
    #[error("fractional clustering covers {x_vertices} vertices but the graph has {g_vertices}")]
    DimensionMismatch { x_vertices: usize, g_vertices: usize },
    #[error("pair ({u}, {v}) is not an edge of the graph")]
    NotAnEdge { u: usize, v: usize },
    #[error("p-norm exponent must satisfy p >= 1, got {p}")]
    BadExponent { p: f64 },
    #[error("distance for pair ({u}, {v}) outside [0, 1]: {value}")]
    DistanceOutOfRange { u: usize, v: usize, value: f64 },
}

/// A partition of 0..n into nonempty clusters.
///
/// Cluster ids are canonical: contiguous from 0 and ordered by each
/// cluster's smallest member, so equal partitions compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clustering {
    assignment: Vec<usize>,
    num_clusters: usize,
}

impl Clustering {
    /// Builds a clustering from any vertex -> cluster-id map, relabeling
    /// cluster ids into canonical form.
    pub fn from_assignment(raw: &[usize]) -> Result<Clustering, ClusteringError> {
        if raw.is_empty() {
            return Err(ClusteringError::Empty);
        }
        let mut relabel: Vec<Option<usize>> = vec![None; raw.len()];
        let mut assignment = Vec::with_capacity(raw.len());
        let mut next = 0;
        for &c in raw {
            let slot = relabel.get_mut(c).expect("cluster id exceeds vertex count");
            let id = *slot.get_or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            assignment.push(id);
        }
        Ok(Clustering { assignment, num_clusters: next })
    }

    /// Builds a clustering from explicit clusters covering 0..n exactly once.
    pub fn from_clusters(n: usize, clusters: &[Vec<usize>]) -> Result<Clustering, ClusteringError> {
        let mut raw = vec![usize::MAX; n];
        for (id, cluster) in clusters.iter().enumerate() {
            for &v in cluster {
                assert!(v < n && raw[v] == usize::MAX, "clusters must partition 0..n");
                raw[v] = id;
            }
        }
        assert!(raw.iter().all(|&c| c != usize::MAX), "clusters must cover 0..n");
        Clustering::from_assignment(&raw)
    }

    /// The single-cluster partition.
    pub fn giant(n: usize) -> Clustering {
        Clustering::from_assignment(&vec![0; n]).expect("n >= 1")
    }

    /// The all-singletons partition.
    pub fn singletons(n: usize) -> Clustering {
        Clustering::from_assignment(&(0..n).collect::<Vec<_>>()).expect("n >= 1")
    }

    pub fn vertex_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn same_cluster(&self, u: usize, v: usize) -> bool {
        self.assignment[u] == self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Clusters as sorted member lists, ordered by cluster id.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_clusters];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// A violation of the fractional-clustering constraints.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricViolation {
    /// x_uv outside [0, 1] by more than the tolerance.
    Box { u: usize, v: usize, value: f64 },
    /// x_vz > x_vw + x_wz + tolerance; `slack` is the (negative) margin
    /// x_vw + x_wz - x_vz.
    Triangle { v: usize, w: usize, z: usize, slack: f64 },
}

/// Pairwise distances in [0, 1] over n vertices, intended to satisfy the
/// triangle inequalities. The convention x_uu = 0 is built in.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalClustering {
    n: usize,
    distances: Vec<f64>,
}

impl FractionalClustering {
    /// Wraps raw distances given in lexicographic pair order. Values are
    /// checked against the box constraints only; call [`Self::violations`]
    /// for the full metric check.
    pub fn from_distances(n: usize, distances: Vec<f64>) -> Result<Self, ClusteringError> {
        assert_eq!(distances.len(), pair_count(n), "distance vector has wrong length");
        let x = FractionalClustering { n, distances };
        for u in 0..n {
            for v in (u + 1)..n {
                let d = x.distance(u, v);
                if !(-METRIC_EPS..=1.0 + METRIC_EPS).contains(&d) {
                    return Err(ClusteringError::DistanceOutOfRange { u, v, value: d });
                }
            }
        }
        Ok(x)
    }

    /// The constant-distance clustering x = value on every pair.
    pub fn constant(n: usize, value: f64) -> Self {
        assert!((0.0..=1.0).contains(&value));
        FractionalClustering { n, distances: vec![value; pair_count(n)] }
    }

    /// The integral fractional clustering of a partition: distance 0 inside
    /// a cluster and 1 across clusters. Satisfies the triangle inequalities
    /// exactly.
    pub fn from_clustering(c: &Clustering) -> Self {
        let n = c.vertex_count();
        let mut distances = vec![0.0; pair_count(n)];
        for u in 0..n {
            for v in (u + 1)..n {
                distances[pair_index(n, u, v)] = if c.same_cluster(u, v) { 0.0 } else { 1.0 };
            }
        }
        FractionalClustering { n, distances }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Distance between two vertices; x_uu = 0 by convention.
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        if u == v {
            return 0.0;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.distances[pair_index(self.n, a, b)]
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    /// Checks the box and triangle constraints within [`METRIC_EPS`].
    /// An empty result means the clustering is valid; violations are data,
    /// not errors.
    pub fn violations(&self) -> Vec<MetricViolation> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                let d = self.distance(u, v);
                if !(-METRIC_EPS..=1.0 + METRIC_EPS).contains(&d) {
                    out.push(MetricViolation::Box { u, v, value: d });
                }
            }
        }
        for v in 0..self.n {
            for w in 0..self.n {
                if w == v {
                    continue;
                }
                for z in (v + 1)..self.n {
                    if z == w {
                        continue;
                    }
                    // x_vz <= x_vw + x_wz; scanning v < z covers each of the
                    // three inequalities of a triple once via the middle w.
                    let slack = self.distance(v, w) + self.distance(w, z) - self.distance(v, z);
                    if slack < -METRIC_EPS {
                        out.push(MetricViolation::Triangle { v, w, z, slack });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Per-vertex error weights. Entries are real numbers; for a discrete
/// clustering they are exact integers counting the incident error edges.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorVector {
    errors: Vec<f64>,
}

impl ErrorVector {
    pub fn new(errors: Vec<f64>) -> Self {
        ErrorVector { errors }
    }

    pub fn len(&self) -> usize {
        self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn get(&self, v: usize) -> f64 {
        self.errors[v]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.errors
    }

    pub fn max(&self) -> f64 {
        self.errors.iter().fold(0.0, |acc, &e| acc.max(e))
    }

    /// The leading entries covered by a guarantee (all vertices for complete
    /// graphs, V1 for bipartite graphs).
    pub fn guaranteed_prefix(&self, count: usize) -> ErrorVector {
        ErrorVector { errors: self.errors[..count].to_vec() }
    }
}

/// LP-cost of the pair {u, v} relative to x: the distance on positive edges
/// and its complement on negative edges.
pub fn lp_cost(
    g: &impl SignedGraph,
    x: &FractionalClustering,
    u: usize,
    v: usize,
) -> Result<f64, ClusteringError> {
    if x.vertex_count() != g.total_vertices() {
        return Err(ClusteringError::DimensionMismatch {
            x_vertices: x.vertex_count(),
            g_vertices: g.total_vertices(),
        });
    }
    if u == v || u >= g.total_vertices() || v >= g.total_vertices() {
        return Err(ClusteringError::NotAnEdge { u, v });
    }
    match g.pair_sign(u, v) {
        Some(s) if s.is_positive() => Ok(x.distance(u, v)),
        Some(_) => Ok(1.0 - x.distance(u, v)),
        None => Err(ClusteringError::NotAnEdge { u, v }),
    }
}

/// The error vector of x with respect to g: at each vertex, the sum of
/// LP-costs of its incident edges. For bipartite graphs the sums run over
/// the opposite side only.
pub fn error_vector(
    g: &impl SignedGraph,
    x: &FractionalClustering,
) -> Result<ErrorVector, ClusteringError> {
    if x.vertex_count() != g.total_vertices() {
        return Err(ClusteringError::DimensionMismatch {
            x_vertices: x.vertex_count(),
            g_vertices: g.total_vertices(),
        });
    }
    let mut errors = vec![0.0; g.total_vertices()];
    for (u, v, sign) in g.labeled_pairs() {
        let d = x.distance(u, v);
        let cost = if sign.is_positive() { d } else { 1.0 - d };
        errors[u] += cost;
        errors[v] += cost;
    }
    Ok(ErrorVector::new(errors))
}

/// Error vector of a discrete clustering (integral entries).
pub fn clustering_error_vector(
    g: &impl SignedGraph,
    c: &Clustering,
) -> Result<ErrorVector, ClusteringError> {
    error_vector(g, &FractionalClustering::from_clustering(c))
}

/// Objective functions over error vectors. All three kinds satisfy positive
/// homogeneity (f(cy) = c f(y)) and coordinate-wise monotonicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Objective {
    /// Mean absolute error: the classical total-error objective scaled by 1/n.
    L1Mean,
    /// The p-norm for a finite p >= 1. Construct via [`Objective::lp`].
    Lp(f64),
    /// Worst-vertex error (the minimax objective).
    Linf,
}

impl Objective {
    /// A finite p-norm objective; rejects p < 1.
    pub fn lp(p: f64) -> Result<Objective, ClusteringError> {
        if !p.is_finite() || p < 1.0 {
            return Err(ClusteringError::BadExponent { p });
        }
        Ok(Objective::Lp(p))
    }

    /// Evaluates the objective on an error vector.
    pub fn evaluate(&self, e: &ErrorVector) -> f64 {
        self.evaluate_slice(e.as_slice())
    }

    /// Evaluates the objective on raw error entries.
    pub fn evaluate_slice(&self, errs: &[f64]) -> f64 {
        match *self {
            Objective::L1Mean => errs.iter().map(|x| x.abs()).sum::<f64>() / errs.len() as f64,
            Objective::Lp(p) => {
                assert!(p >= 1.0, "Lp objective requires p >= 1");
                errs.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
            }
            Objective::Linf => errs.iter().fold(0.0, |acc: f64, &e| acc.max(e)),
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Objective::L1Mean => write!(f, "l1"),
            Objective::Lp(p) => write!(f, "lp:{p}"),
            Objective::Linf => write!(f, "linf"),
        }
    }
}

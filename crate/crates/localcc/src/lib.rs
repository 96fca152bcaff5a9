//! Correlation clustering with per-vertex (local) error guarantees.
//!
//! Given a complete or complete-bipartite graph whose pairs are labeled
//! `+` (similar) or `-` (dissimilar), a clustering's errors are the positive
//! pairs it cuts and the negative pairs it merges. Rather than only the
//! classical total-error objective, this crate optimizes any objective of
//! the *per-vertex* error counts that is positively homogeneous and
//! monotone: the mean (`l1`), any finite p-norm, or the worst vertex
//! (`linf`, the minimax objective).
//!
//! The pipeline:
//!
//! 1. [`lp::minimax_lp`] / [`lp::l1_lp`] build the relaxation over the
//!    triangle-inequality polytope and [`lp::solve`] (a dense simplex)
//!    produces an optimal fractional clustering;
//! 2. [`rounding::round_complete`] / [`rounding::round_bipartite`] convert
//!    any fractional clustering into a partition while growing each vertex's
//!    error weight by at most a constant factor (about 47.6 for complete
//!    graphs; about 9.84 one-sided for bipartite graphs);
//! 3. [`oracle`] supplies exhaustive exact optima, a random-pivot baseline,
//!    and tolerance predicates to measure everything against.

pub mod clustering;
pub mod graphs;
pub mod lp;
pub mod oracle;
pub mod rounding;

pub use clustering::{
    clustering_error_vector, error_vector, lp_cost, Clustering, ClusteringError, ErrorVector,
    FractionalClustering, MetricViolation, Objective, METRIC_EPS,
};
pub use graphs::{
    matching_instance, pair_count, pair_index, random_bipartite, random_complete, star_instance,
    GenError, Instance, ParseError, Sign, SignedBipartiteGraph, SignedCompleteGraph, SignedGraph,
};
pub use lp::{
    fractional_from_solution, l1_lp, matching_dual_certificate, minimax_lp, solve,
    star_dual_certificate, verify_certificate, CertificateVerdict, DualCertificate, DualViolation,
    LinearProgram, LpError, LpSolution, LpStatus, SparseRow, LP_EPS,
};
pub use oracle::{
    acn_cluster, acn_minimax_gap, exact_best, is_t_perfect, max_agree_value, ExactResult,
    GapSummary, OracleError, RgsIter, TPerfectVerdict, ToleranceMap, EXACT_SEARCH_CAP,
};
pub use rounding::{
    audit_cross_edges, round_bipartite, round_bipartite_clustering, round_complete,
    round_complete_clustering, AuditRecord, AuditReport, ClusterEmission, EmissionKind,
    RoundingError, RoundingParams, RoundingTrace, THRESHOLD_EPS,
};

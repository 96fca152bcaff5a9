//! Threshold-pivot rounding of fractional clusterings with per-vertex
//! constant-factor error guarantees, plus the closed-form ratio constants
//! and an audit of the cross-edge charging bound.
//!
//! Both rounders repeatedly pick the surviving vertex whose tight ball
//! T*_u = {w : x_uw <= gamma} is largest, look at its loose ball
//! T_u = {w : x_uw <= alpha}, and either emit the pivot alone (Type 1, when
//! the ball is far on average) or the pivot together with its loose ball
//! (Type 2). The pivot rule is what makes the per-vertex bound go through;
//! with the published parameter sets the bound is about 47.6 for complete
//! graphs and about 9.84 (one-sided) for complete bipartite graphs.

use thiserror::Error;

use crate::clustering::{Clustering, FractionalClustering};
use crate::graphs::{SignedBipartiteGraph, SignedCompleteGraph, SignedGraph};

/// Tolerance added to the alpha/gamma threshold comparisons: LP solutions
/// sit exactly on thresholds up to float noise.
pub const THRESHOLD_EPS: f64 = 1e-9;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum RoundingError {
    #[error("rounding parameters violate {constraint}")]
    InvalidParams { constraint: &'static str },
    #[error("parameters lack {name}, required for the complete-graph analysis")]
    MissingConstant { name: &'static str },
    #[error("fractional clustering is invalid ({violations} box/triangle violations)")]
    InvalidFractional { violations: usize },
    #[error("fractional clustering covers {x_vertices} vertices, graph has {g_vertices}")]
    DimensionMismatch { x_vertices: usize, g_vertices: usize },
    #[error("trace does not match the instance: {detail}")]
    TraceMismatch { detail: &'static str },
}

/// Thresholds and analysis constants for the rounding algorithms.
///
/// `alpha` and `gamma` are the ball radii with 0 < gamma < alpha < 1/2.
/// `k1..k3` only enter the ratio constants: the complete-graph analysis uses
/// all three, the bipartite analysis only `k1` (so `k2`/`k3` stay unset).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundingParams {
    pub alpha: f64,
    pub gamma: f64,
    pub k1: f64,
    pub k2: Option<f64>,
    pub k3: Option<f64>,
}

impl RoundingParams {
    /// The published parameter set for complete graphs.
    pub fn complete_defaults() -> RoundingParams {
        RoundingParams {
            alpha: 0.465744,
            gamma: 0.0887449,
            k1: 0.767566,
            k2: Some(0.117219),
            k3: Some(0.308433),
        }
    }

    /// The published parameter set for complete bipartite graphs.
    pub fn bipartite_defaults() -> RoundingParams {
        RoundingParams { alpha: 0.377, gamma: 0.102, k1: 0.730, k2: None, k3: None }
    }

    fn validate_thresholds(&self) -> Result<(), RoundingError> {
        if !(self.gamma > 0.0 && self.gamma < self.alpha && self.alpha < 0.5) {
            return Err(RoundingError::InvalidParams { constraint: "0 < gamma < alpha < 1/2" });
        }
        Ok(())
    }

    /// Checks the complete-graph constraint set.
    pub fn validate_complete(&self) -> Result<(), RoundingError> {
        self.validate_thresholds()?;
        let k2 = self.k2.ok_or(RoundingError::MissingConstant { name: "k2" })?;
        let k3 = self.k3.ok_or(RoundingError::MissingConstant { name: "k3" })?;
        if !(self.k1 > 0.5 && self.k1 < 1.0) {
            return Err(RoundingError::InvalidParams { constraint: "1/2 < k1 < 1" });
        }
        if !(k2 > 0.0 && 2.0 * k2 <= k3 && k3 < 0.5) {
            return Err(RoundingError::InvalidParams { constraint: "0 < 2 k2 <= k3 < 1/2" });
        }
        if self.k1 * self.alpha <= self.gamma {
            return Err(RoundingError::InvalidParams { constraint: "k1 alpha > gamma" });
        }
        if k2 * self.alpha > 1.0 - 2.0 * self.alpha {
            return Err(RoundingError::InvalidParams { constraint: "k2 alpha <= 1 - 2 alpha" });
        }
        Ok(())
    }

    /// Checks the bipartite constraint set.
    pub fn validate_bipartite(&self) -> Result<(), RoundingError> {
        self.validate_thresholds()?;
        if !(self.k1 > 0.0 && self.k1 < 1.0) {
            return Err(RoundingError::InvalidParams { constraint: "0 < k1 < 1" });
        }
        if self.k1 * self.alpha <= self.gamma {
            return Err(RoundingError::InvalidParams { constraint: "k1 alpha > gamma" });
        }
        Ok(())
    }

    /// The per-vertex ratio constant for complete graphs:
    /// max{c1, c2, c3} with
    /// c1 = B + 1/(1-2a) + 1/(k1 a - g),
    /// c2 = B + max{1/((1-k1) a), 1/g},
    /// c3 = B + 1/(k2 a),
    /// where B = 1/((1-2 k3)(k3-k2) a) is the bank-account term.
    pub fn ratio_complete(&self) -> Result<f64, RoundingError> {
        self.validate_complete()?;
        let (a, g, k1) = (self.alpha, self.gamma, self.k1);
        let (k2, k3) = (self.k2.unwrap(), self.k3.unwrap());
        let bank = 1.0 / ((1.0 - 2.0 * k3) * (k3 - k2) * a);
        let c1 = bank + 1.0 / (1.0 - 2.0 * a) + 1.0 / (k1 * a - g);
        let c2 = bank + (1.0 / ((1.0 - k1) * a)).max(1.0 / g);
        let c3 = bank + 1.0 / (k2 * a);
        Ok(c1.max(c2).max(c3))
    }

    /// The one-sided ratio constant for bipartite graphs:
    /// max{c1, c2, c3} with
    /// c1 = 1/(1-2a) + 1/(k1 a - g),
    /// c2 = max{1/((1-k1) a), 1/g, 2/a},
    /// c3 = max{1/(1-2a), 2/a}.
    pub fn ratio_bipartite(&self) -> Result<f64, RoundingError> {
        self.validate_bipartite()?;
        let (a, g, k1) = (self.alpha, self.gamma, self.k1);
        let c1 = 1.0 / (1.0 - 2.0 * a) + 1.0 / (k1 * a - g);
        let c2 = (1.0 / ((1.0 - k1) * a)).max(1.0 / g).max(2.0 / a);
        let c3 = (1.0 / (1.0 - 2.0 * a)).max(2.0 / a);
        Ok(c1.max(c2).max(c3))
    }

    /// The cross-edge charging bound max{1/(1-2a), 2/a} used by the audit.
    pub fn cross_edge_bound(&self) -> f64 {
        (1.0 / (1.0 - 2.0 * self.alpha)).max(2.0 / self.alpha)
    }
}

/// How a cluster left the rounding loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmissionKind {
    Type1,
    Type2,
    /// Bipartite only: a V2 vertex left over after V1 is exhausted.
    LeftoverSingleton,
}

/// One emitted cluster with the pivot's ball snapshots.
#[derive(Clone, Debug)]
pub struct ClusterEmission {
    pub kind: EmissionKind,
    pub pivot: Option<usize>,
    /// Sorted members of the emitted cluster (includes the pivot).
    pub members: Vec<usize>,
    /// The pivot's loose ball T at emission time (sorted).
    pub t_ball: Vec<usize>,
    /// The pivot's tight ball T* at emission time (sorted).
    pub t_star_ball: Vec<usize>,
}

/// Ordered record of the clusters a rounding run emitted.
#[derive(Clone, Debug, Default)]
pub struct RoundingTrace {
    pub emissions: Vec<ClusterEmission>,
}

impl RoundingTrace {
    /// One line per emitted cluster, e.g. `type2 pivot=0 members=0,1,2`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.emissions {
            let members =
                e.members.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
            match e.kind {
                EmissionKind::Type1 => {
                    out.push_str(&format!("type1 pivot={}\n", e.pivot.unwrap()));
                }
                EmissionKind::Type2 => {
                    out.push_str(&format!("type2 pivot={} members={members}\n", e.pivot.unwrap()));
                }
                EmissionKind::LeftoverSingleton => {
                    out.push_str(&format!("singleton v={members}\n"));
                }
            }
        }
        out
    }
}

fn check_inputs(
    g_vertices: usize,
    x: &FractionalClustering,
) -> Result<(), RoundingError> {
    if x.vertex_count() != g_vertices {
        return Err(RoundingError::DimensionMismatch {
            x_vertices: x.vertex_count(),
            g_vertices,
        });
    }
    let violations = x.violations();
    if !violations.is_empty() {
        return Err(RoundingError::InvalidFractional { violations: violations.len() });
    }
    Ok(())
}

fn clustering_from_emissions(n: usize, emissions: &[ClusterEmission]) -> Clustering {
    let mut raw = vec![usize::MAX; n];
    for (id, e) in emissions.iter().enumerate() {
        for &v in &e.members {
            raw[v] = id;
        }
    }
    debug_assert!(raw.iter().all(|&c| c != usize::MAX));
    Clustering::from_assignment(&raw).expect("emissions partition the vertex set")
}

fn rounding_loop(
    n: usize,
    x: &FractionalClustering,
    p: &RoundingParams,
    pivot_pool: impl Fn(usize) -> bool,
    t_star_pool: impl Fn(usize) -> bool,
    branch_pool: impl Fn(usize) -> bool,
    keep_trace: bool,
) -> (Vec<ClusterEmission>, Vec<usize>) {
    let mut surviving: Vec<usize> = (0..n).collect();
    let mut emissions = Vec::new();

    loop {
        // Pivot: the eligible vertex maximizing |T*_u|, ties to the smallest id.
        let mut pivot: Option<(usize, usize)> = None;
        for &u in surviving.iter().filter(|&&u| pivot_pool(u)) {
            let count = surviving
                .iter()
                .filter(|&&w| w != u && t_star_pool(w) && x.distance(u, w) <= p.gamma + THRESHOLD_EPS)
                .count();
            match pivot {
                Some((_, best)) if best >= count => {}
                _ => pivot = Some((u, count)),
            }
        }
        let Some((u, _)) = pivot else { break };

        let t_ball: Vec<usize> = surviving
            .iter()
            .copied()
            .filter(|&w| w != u && x.distance(u, w) <= p.alpha + THRESHOLD_EPS)
            .collect();
        let branch_members: Vec<usize> =
            t_ball.iter().copied().filter(|&w| branch_pool(w)).collect();
        let ball_weight: f64 = branch_members.iter().map(|&w| x.distance(u, w)).sum();

        let type1 = ball_weight >= p.alpha * branch_members.len() as f64 / 2.0;
        let members: Vec<usize> = if type1 {
            vec![u]
        } else {
            let mut m = t_ball.clone();
            m.push(u);
            m.sort_unstable();
            m
        };

        let emission = ClusterEmission {
            kind: if type1 { EmissionKind::Type1 } else { EmissionKind::Type2 },
            pivot: Some(u),
            members: members.clone(),
            t_ball: if keep_trace { t_ball } else { Vec::new() },
            t_star_ball: if keep_trace {
                surviving
                    .iter()
                    .copied()
                    .filter(|&w| {
                        w != u && t_star_pool(w) && x.distance(u, w) <= p.gamma + THRESHOLD_EPS
                    })
                    .collect()
            } else {
                Vec::new()
            },
        };
        emissions.push(emission);
        surviving.retain(|v| !members.contains(v));
    }

    (emissions, surviving)
}

fn round_complete_impl(
    g: &SignedCompleteGraph,
    x: &FractionalClustering,
    p: &RoundingParams,
    keep_trace: bool,
) -> Result<(Clustering, RoundingTrace), RoundingError> {
    p.validate_complete()?;
    check_inputs(g.vertex_count(), x)?;
    let n = g.vertex_count();
    let (emissions, leftover) =
        rounding_loop(n, x, p, |_| true, |_| true, |_| true, keep_trace);
    debug_assert!(leftover.is_empty());
    let clustering = clustering_from_emissions(n, &emissions);
    Ok((clustering, RoundingTrace { emissions }))
}

/// Rounds a fractional clustering of a complete graph. Deterministic in its
/// inputs; the returned trace records each emission in order.
pub fn round_complete(
    g: &SignedCompleteGraph,
    x: &FractionalClustering,
    p: &RoundingParams,
) -> Result<(Clustering, RoundingTrace), RoundingError> {
    round_complete_impl(g, x, p, true)
}

/// Trace-free variant for callers that do not audit.
pub fn round_complete_clustering(
    g: &SignedCompleteGraph,
    x: &FractionalClustering,
    p: &RoundingParams,
) -> Result<Clustering, RoundingError> {
    round_complete_impl(g, x, p, false).map(|(c, _)| c)
}

fn round_bipartite_impl(
    g: &SignedBipartiteGraph,
    x: &FractionalClustering,
    p: &RoundingParams,
    keep_trace: bool,
) -> Result<(Clustering, RoundingTrace), RoundingError> {
    p.validate_bipartite()?;
    check_inputs(g.vertex_count(), x)?;
    let n = g.vertex_count();
    let n1 = g.guaranteed_vertices();

    // Pivots come from V1; T* counts V2 survivors only; the branch test
    // weighs the V2 part of the loose ball. T itself spans both sides.
    let (mut emissions, leftover) = rounding_loop(
        n,
        x,
        p,
        |u| u < n1,
        |w| w >= n1,
        |w| w >= n1,
        keep_trace,
    );
    for v in leftover {
        debug_assert!(v >= n1);
        emissions.push(ClusterEmission {
            kind: EmissionKind::LeftoverSingleton,
            pivot: None,
            members: vec![v],
            t_ball: Vec::new(),
            t_star_ball: Vec::new(),
        });
    }
    let clustering = clustering_from_emissions(n, &emissions);
    Ok((clustering, RoundingTrace { emissions }))
}

/// Rounds a fractional clustering of a complete bipartite graph. The
/// per-vertex guarantee covers V1; leftover V2 vertices become singletons.
/// `x` must cover all pairs of V1 ∪ V2 (within-side distances included), as
/// produced by the LP builders in this crate.
pub fn round_bipartite(
    g: &SignedBipartiteGraph,
    x: &FractionalClustering,
    p: &RoundingParams,
) -> Result<(Clustering, RoundingTrace), RoundingError> {
    round_bipartite_impl(g, x, p, true)
}

/// Trace-free variant for callers that do not audit.
pub fn round_bipartite_clustering(
    g: &SignedBipartiteGraph,
    x: &FractionalClustering,
    p: &RoundingParams,
) -> Result<Clustering, RoundingError> {
    round_bipartite_impl(g, x, p, false).map(|(c, _)| c)
}

/// One audited (Type-2 cluster, outside vertex) pair.
#[derive(Clone, Debug)]
pub struct AuditRecord {
    pub emission: usize,
    pub outside_vertex: usize,
    /// Number of cross-edges from the vertex into the cluster that are errors.
    pub cluster_cost: f64,
    /// Total LP-cost of those cross-edges.
    pub lp_cost: f64,
    pub violated: bool,
}

/// Audit output: every record plus the bound that was enforced.
#[derive(Clone, Debug)]
pub struct AuditReport {
    pub bound: f64,
    pub records: Vec<AuditRecord>,
}

impl AuditReport {
    pub fn violations(&self) -> impl Iterator<Item = &AuditRecord> {
        self.records.iter().filter(|r| r.violated)
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }
}

/// Checks the cross-edge charging bound on a rounding trace: after each
/// Type-2 emission, every surviving vertex's cross-edges into the emitted
/// cluster have cluster-cost at most max{1/(1-2a), 2/a} times their LP-cost.
/// For bipartite graphs the check covers surviving V1 vertices, matching the
/// one-sided guarantee.
pub fn audit_cross_edges<G: SignedGraph>(
    g: &G,
    x: &FractionalClustering,
    trace: &RoundingTrace,
    p: &RoundingParams,
) -> Result<AuditReport, RoundingError> {
    let n = g.total_vertices();
    if x.vertex_count() != n {
        return Err(RoundingError::DimensionMismatch {
            x_vertices: x.vertex_count(),
            g_vertices: n,
        });
    }
    let mut surviving = vec![true; n];
    let mut seen = 0usize;
    let bound = p.cross_edge_bound();
    let mut records = Vec::new();

    for (idx, e) in trace.emissions.iter().enumerate() {
        for &v in &e.members {
            if v >= n || !surviving[v] {
                return Err(RoundingError::TraceMismatch {
                    detail: "emission contains a vertex already clustered",
                });
            }
        }
        for &v in &e.members {
            surviving[v] = false;
        }
        seen += e.members.len();

        if e.kind == EmissionKind::Type2 {
            for z in (0..n).filter(|&z| surviving[z] && z < g.guaranteed_vertices()) {
                let mut cluster_cost = 0.0;
                let mut lp = 0.0;
                for &w in &e.members {
                    let Some(sign) = g.pair_sign(z, w) else { continue };
                    let d = x.distance(z, w);
                    if sign.is_positive() {
                        cluster_cost += 1.0;
                        lp += d;
                    } else {
                        lp += 1.0 - d;
                    }
                }
                let violated = cluster_cost > bound * lp + 1e-9;
                records.push(AuditRecord {
                    emission: idx,
                    outside_vertex: z,
                    cluster_cost,
                    lp_cost: lp,
                    violated,
                });
            }
        }
    }
    if seen != n {
        return Err(RoundingError::TraceMismatch { detail: "trace does not cover the vertex set" });
    }
    Ok(AuditReport { bound, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::{clustering_error_vector, error_vector};
    use crate::graphs::{
        matching_instance, random_bipartite, random_complete, SignedBipartiteGraph,
        SignedCompleteGraph, Sign,
    };

    #[test]
    fn default_params_satisfy_invariants() {
        assert!(RoundingParams::complete_defaults().validate_complete().is_ok());
        assert!(RoundingParams::bipartite_defaults().validate_bipartite().is_ok());
    }

    #[test]
    fn ratio_constant_complete_matches_closed_form() {
        let p = RoundingParams::complete_defaults();
        let ratio = p.ratio_complete().unwrap();
        assert!((ratio - 47.62).abs() <= 0.05, "ratio = {ratio}");

        // The shared bank-account term.
        let (a, k2, k3) = (p.alpha, p.k2.unwrap(), p.k3.unwrap());
        let bank = 1.0 / ((1.0 - 2.0 * k3) * (k3 - k2) * a);
        assert!((bank - 29.31).abs() < 0.01, "bank = {bank}");
    }

    #[test]
    fn ratio_constant_bipartite_matches_closed_form() {
        let p = RoundingParams::bipartite_defaults();
        let ratio = p.ratio_bipartite().unwrap();
        assert!((ratio - 9.84).abs() < 0.01, "ratio = {ratio}");
        assert!(ratio <= 10.0);

        // k1 alpha - gamma at the defaults.
        assert!((p.k1 * p.alpha - p.gamma - 0.17321).abs() < 1e-6);
        // c3 = max{1/(1-2a), 2/a} = 2/a here.
        let c3 = (1.0 / (1.0 - 2.0 * p.alpha)).max(2.0 / p.alpha);
        assert!((c3 - 5.30504).abs() < 1e-4);
    }

    #[test]
    fn ratio_rejects_invalid_params() {
        let mut p = RoundingParams::complete_defaults();
        p.gamma = p.k1 * p.alpha + 0.01; // push gamma past k1 alpha
        assert!(p.ratio_complete().is_err());

        let mut p = RoundingParams::bipartite_defaults();
        p.alpha = 0.6;
        assert!(p.ratio_bipartite().is_err());
    }

    #[test]
    fn rounding_all_zero_gives_giant_cluster() {
        let g = matching_instance(3).unwrap();
        let x = FractionalClustering::constant(6, 0.0);
        let (c, trace) = round_complete(&g, &x, &RoundingParams::complete_defaults()).unwrap();
        assert_eq!(c, Clustering::giant(6));
        assert_eq!(trace.emissions.len(), 1);
        assert_eq!(trace.emissions[0].kind, EmissionKind::Type2);
        let e = clustering_error_vector(&g, &c).unwrap();
        assert!(e.as_slice().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn rounding_all_one_on_negative_graph_gives_singletons() {
        let g = SignedCompleteGraph::from_fn(5, |_, _| Sign::Minus);
        let x = FractionalClustering::constant(5, 1.0);
        let (c, trace) = round_complete(&g, &x, &RoundingParams::complete_defaults()).unwrap();
        assert_eq!(c, Clustering::singletons(5));
        assert!(trace.emissions.iter().all(|e| e.kind == EmissionKind::Type1));
        let e = clustering_error_vector(&g, &c).unwrap();
        assert!(e.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rounding_rejects_invalid_fractional() {
        let g = matching_instance(2).unwrap();
        let x = FractionalClustering::from_distances(4, vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
            .unwrap();
        assert!(matches!(
            round_complete(&g, &x, &RoundingParams::complete_defaults()),
            Err(RoundingError::InvalidFractional { .. })
        ));
    }

    #[test]
    fn rounding_is_deterministic() {
        let g = random_complete(9, 0.5, 17).unwrap();
        let x = FractionalClustering::constant(9, 0.3);
        let p = RoundingParams::complete_defaults();
        let (c1, t1) = round_complete(&g, &x, &p).unwrap();
        let (c2, t2) = round_complete(&g, &x, &p).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(t1.dump(), t2.dump());
    }

    #[test]
    fn bipartite_all_zero_all_positive() {
        let g = SignedBipartiteGraph::from_fn(3, 4, |_, _| Sign::Plus);
        let x = FractionalClustering::constant(7, 0.0);
        let (c, _) = round_bipartite(&g, &x, &RoundingParams::bipartite_defaults()).unwrap();
        assert_eq!(c, Clustering::giant(7));
        let e = clustering_error_vector(&g, &c).unwrap();
        assert!(e.as_slice()[..3].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn bipartite_all_one_all_negative() {
        let g = SignedBipartiteGraph::from_fn(3, 4, |_, _| Sign::Minus);
        let x = FractionalClustering::constant(7, 1.0);
        let (c, trace) = round_bipartite(&g, &x, &RoundingParams::bipartite_defaults()).unwrap();
        assert_eq!(c, Clustering::singletons(7));
        // V1 pivots emit Type 1; the V2 remainder leaves as singletons.
        assert_eq!(
            trace.emissions.iter().filter(|e| e.kind == EmissionKind::LeftoverSingleton).count(),
            4
        );
        let e = clustering_error_vector(&g, &c).unwrap();
        assert!(e.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn bipartite_per_vertex_bound_on_lp_solutions() {
        use crate::lp::{fractional_from_solution, minimax_lp, solve};
        let p = RoundingParams::bipartite_defaults();
        let ratio = p.ratio_bipartite().unwrap();
        let g = random_bipartite(5, 6, 0.5, 424242).unwrap();
        let sol = solve(&minimax_lp(&g).unwrap()).unwrap();
        let x = fractional_from_solution(11, &sol);
        let (c, _) = round_bipartite(&g, &x, &p).unwrap();
        let frac = error_vector(&g, &x).unwrap();
        let disc = clustering_error_vector(&g, &c).unwrap();
        for v in 0..5 {
            assert!(
                disc.get(v) <= 10.0 * frac.get(v) + 1e-6,
                "v={v}: {} vs {}",
                disc.get(v),
                frac.get(v)
            );
            assert!(disc.get(v) <= ratio * frac.get(v) + 1e-6);
        }
    }

    #[test]
    fn audit_zero_x_is_vacuous() {
        let g = matching_instance(3).unwrap();
        let x = FractionalClustering::constant(6, 0.0);
        let p = RoundingParams::complete_defaults();
        let (_, trace) = round_complete(&g, &x, &p).unwrap();
        let report = audit_cross_edges(&g, &x, &trace, &p).unwrap();
        assert_eq!(report.records.len(), 0);
        assert_eq!(report.violation_count(), 0);
    }

    #[test]
    fn audit_hand_instance_with_type2_emission() {
        // K4: {0,1,2} mutually close, vertex 3 far; positive inside the
        // close triple and toward 3 from vertex 0 only.
        let g = SignedCompleteGraph::from_fn(4, |u, v| {
            if v < 3 || u == 0 {
                Sign::Plus
            } else {
                Sign::Minus
            }
        });
        let p = RoundingParams::complete_defaults();
        let mut d = vec![0.0; 6];
        let n = 4;
        d[crate::graphs::pair_index(n, 0, 1)] = 0.05;
        d[crate::graphs::pair_index(n, 0, 2)] = 0.05;
        d[crate::graphs::pair_index(n, 1, 2)] = 0.05;
        d[crate::graphs::pair_index(n, 0, 3)] = 0.9;
        d[crate::graphs::pair_index(n, 1, 3)] = 0.9;
        d[crate::graphs::pair_index(n, 2, 3)] = 0.9;
        let x = FractionalClustering::from_distances(4, d).unwrap();
        let (c, trace) = round_complete(&g, &x, &p).unwrap();
        assert_eq!(c.clusters(), vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(trace.emissions[0].kind, EmissionKind::Type2);

        let report = audit_cross_edges(&g, &x, &trace, &p).unwrap();
        assert_eq!(report.violation_count(), 0);
        // One surviving vertex (3) audited against the first emission.
        let record = &report.records[0];
        assert_eq!(record.outside_vertex, 3);
        assert!(record.cluster_cost <= report.bound * record.lp_cost + 1e-9);
    }

    #[test]
    fn audit_detects_mismatched_trace() {
        let g = matching_instance(2).unwrap();
        let x = FractionalClustering::constant(4, 0.0);
        let p = RoundingParams::complete_defaults();
        let (_, trace) = round_complete(&g, &x, &p).unwrap();
        let other = FractionalClustering::constant(5, 0.0);
        assert!(audit_cross_edges(&g, &other, &trace, &p).is_err());
    }

    #[test]
    fn per_vertex_bound_holds_on_random_valid_fractionals() {
        // Random convex combinations of integral clusterings are valid
        // fractional clusterings; the per-vertex bound must hold on them.
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let p = RoundingParams::complete_defaults();
        let ratio = p.ratio_complete().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for trial in 0..25 {
            let n = 6 + (trial % 4);
            let g = random_complete(n, 0.5, 1000 + trial as u64).unwrap();
            let weights: Vec<f64> = (0..3).map(|_| rng.random::<f64>() + 0.01).collect();
            let total: f64 = weights.iter().sum();
            let parts: Vec<Clustering> = (0..3)
                .map(|_| {
                    let raw: Vec<usize> =
                        (0..n).map(|_| rng.random_range(0..3.min(n))).collect();
                    Clustering::from_assignment(&raw).unwrap()
                })
                .collect();
            let mut dist = vec![0.0; crate::graphs::pair_count(n)];
            for (w, part) in weights.iter().zip(parts.iter()) {
                let xi = FractionalClustering::from_clustering(part);
                for (d, &v) in dist.iter_mut().zip(xi.distances()) {
                    *d += (w / total) * v;
                }
            }
            let x = FractionalClustering::from_distances(n, dist).unwrap();
            assert!(x.is_valid());
            let (c, _) = round_complete(&g, &x, &p).unwrap();
            let frac = error_vector(&g, &x).unwrap();
            let disc = clustering_error_vector(&g, &c).unwrap();
            for v in 0..n {
                assert!(
                    disc.get(v) <= ratio * frac.get(v) + 1e-6,
                    "n={n} trial={trial} v={v}: {} vs {}",
                    disc.get(v),
                    frac.get(v)
                );
            }
        }
    }

    #[test]
    fn trace_dump_format() {
        let g = SignedCompleteGraph::from_fn(3, |_, _| Sign::Minus);
        let x = FractionalClustering::constant(3, 1.0);
        let (_, trace) = round_complete(&g, &x, &RoundingParams::complete_defaults()).unwrap();
        assert_eq!(trace.dump(), "type1 pivot=0\ntype1 pivot=1\ntype1 pivot=2\n");
    }
}

//! Linear-programming relaxations of the clustering objectives, an internal
//! dense simplex, and hand-constructed dual certificates for the two
//! instance families.
//!
//! Two relaxations are built over the triangle-inequality polytope:
//!
//! * the worst-vertex (minimax) program: minimize M subject to each
//!   guaranteed vertex's error weight being at most M, and
//! * the total-cost program: minimize the sum of per-edge LP-costs.
//!
//! Variables are the pair distances in lexicographic pair order, followed by
//! the scalar M when present. For bipartite graphs the distance variables
//! cover *all* pairs of V1 ∪ V2: within-side distances carry no objective
//! weight but participate in the triangle rows, so the fractional solution
//! provides every distance the bipartite rounding algorithm reads.

mod simplex;

pub use simplex::LP_EPS;

use thiserror::Error;

use crate::clustering::FractionalClustering;
use crate::graphs::{pair_count, pair_index, Sign, SignedCompleteGraph, SignedGraph};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LpError {
    #[error("graph has {vertices} vertices; the relaxation needs at least 2")]
    TooSmall { vertices: usize },
    #[error("row {row} references a variable out of range")]
    BadRow { row: usize },
    #[error("objective length does not match the variable count")]
    BadObjective,
    #[error("variable {var} has lo > hi")]
    BadBounds { var: usize },
    #[error("certificate parameter {name} must be at least {min}, got {got}")]
    ParameterTooSmall { name: &'static str, min: usize, got: usize },
    #[error("certificate dimensions do not match the graph")]
    CertificateMismatch,
    #[error("iteration limit exceeded after {iterations} pivots")]
    IterationLimit { iterations: u64 },
    #[error("numerical failure: {detail}")]
    Numerical { detail: String },
}

/// One `<=` constraint row with sparse coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// A minimization LP: minimize c'x + offset subject to `rows` (all `<=`)
/// and box bounds on the variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub objective_offset: f64,
    pub rows: Vec<SparseRow>,
    /// Per-variable bounds (lo, hi); hi may be infinite.
    pub bounds: Vec<(f64, f64)>,
    pub var_names: Vec<String>,
}

impl LinearProgram {
    pub(crate) fn check_well_formed(&self) -> Result<(), LpError> {
        if self.objective.len() != self.num_vars
            || self.bounds.len() != self.num_vars
            || self.var_names.len() != self.num_vars
        {
            return Err(LpError::BadObjective);
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.iter().any(|&(j, _)| j >= self.num_vars) {
                return Err(LpError::BadRow { row: i });
            }
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            if lo > hi || lo.is_infinite() {
                return Err(LpError::BadBounds { var: j });
            }
        }
        Ok(())
    }

    /// Largest violation of rows and bounds at the given point.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.rows {
            let activity: f64 = row.coeffs.iter().map(|&(j, a)| a * values[j]).sum();
            worst = worst.max(activity - row.rhs);
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            worst = worst.max(lo - values[j]);
            if hi.is_finite() {
                worst = worst.max(values[j] - hi);
            }
        }
        worst
    }

    /// Deterministic plain-text rendering used by golden tests: the
    /// objective, one constraint per line, then the bounds, with variables
    /// in their fixed order (pairs lexicographic, then M).
    pub fn dump(&self) -> String {
        fn term(out: &mut String, coeff: f64, name: &str, first: bool) {
            let sign = if coeff < 0.0 { '-' } else { '+' };
            let mag = coeff.abs();
            let mag = if (mag - 1.0).abs() < 1e-12 { String::new() } else { format!("{mag} ") };
            match (first, sign) {
                (true, '+') => out.push_str(&format!("{mag}{name}")),
                (true, _) => out.push_str(&format!("- {mag}{name}")),
                (false, _) => out.push_str(&format!(" {sign} {mag}{name}")),
            }
        }
        let mut out = String::from("min ");
        let mut first = true;
        for (j, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                term(&mut out, c, &self.var_names[j], first);
                first = false;
            }
        }
        if self.objective_offset != 0.0 {
            out.push_str(&format!(" + {}", self.objective_offset));
        }
        if first {
            out.push('0');
        }
        out.push('\n');
        for row in &self.rows {
            let mut line = String::new();
            let mut first = true;
            for &(j, a) in &row.coeffs {
                term(&mut line, a, &self.var_names[j], first);
                first = false;
            }
            let rhs = if row.rhs == 0.0 { 0.0 } else { row.rhs };
            out.push_str(&format!("{line} <= {rhs}\n"));
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            let hi = if hi.is_finite() { hi.to_string() } else { "inf".to_string() };
            out.push_str(&format!("{lo} <= {} <= {hi}\n", self.var_names[j]));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. When `status` is optimal the values satisfy every
/// constraint within [`LP_EPS`] and `objective` is consistent with them.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective: f64,
    pub iterations: u64,
}

/// Solves the LP with the internal dense simplex.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    simplex::solve_impl(lp)
}

fn pair_var_names(n: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(pair_count(n));
    for u in 0..n {
        for v in (u + 1)..n {
            names.push(format!("x_{u}_{v}"));
        }
    }
    names
}

fn triangle_rows(n: usize, rows: &mut Vec<SparseRow>) {
    for u in 0..n {
        for v in (u + 1)..n {
            for w in (v + 1)..n {
                let uv = pair_index(n, u, v);
                let uw = pair_index(n, u, w);
                let vw = pair_index(n, v, w);
                rows.push(SparseRow {
                    coeffs: vec![(uv, 1.0), (uw, -1.0), (vw, -1.0)],
                    rhs: 0.0,
                });
                rows.push(SparseRow {
                    coeffs: vec![(uw, 1.0), (uv, -1.0), (vw, -1.0)],
                    rhs: 0.0,
                });
                rows.push(SparseRow {
                    coeffs: vec![(vw, 1.0), (uv, -1.0), (uw, -1.0)],
                    rhs: 0.0,
                });
            }
        }
    }
}

/// Builds the worst-vertex LP: pair variables plus a scalar M, triangle rows
/// for every vertex triple, and one error row per guaranteed vertex
/// (every vertex for complete graphs, V1 for bipartite graphs).
pub fn minimax_lp(g: &impl SignedGraph) -> Result<LinearProgram, LpError> {
    let n = g.total_vertices();
    if n < 2 {
        return Err(LpError::TooSmall { vertices: n });
    }
    let np = pair_count(n);
    let m_var = np;
    let num_vars = np + 1;

    let mut rows = Vec::with_capacity(n * (n - 1) * (n - 2) / 2 + g.guaranteed_vertices());
    triangle_rows(n, &mut rows);

    let guaranteed = g.guaranteed_vertices();
    let mut error_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); guaranteed];
    for (u, v, sign) in g.labeled_pairs() {
        let coeff = if sign.is_positive() { 1.0 } else { -1.0 };
        if u < guaranteed {
            error_rows[u].push((pair_index(n, u, v), coeff));
        }
        if v < guaranteed {
            error_rows[v].push((pair_index(n, u, v), coeff));
        }
    }
    for (v, mut coeffs) in error_rows.into_iter().enumerate() {
        coeffs.push((m_var, -1.0));
        rows.push(SparseRow { coeffs, rhs: -(g.negative_deg(v) as f64) });
    }

    let mut objective = vec![0.0; num_vars];
    objective[m_var] = 1.0;
    let mut bounds = vec![(0.0, 1.0); np];
    bounds.push((0.0, f64::INFINITY));
    let mut var_names = pair_var_names(n);
    var_names.push("M".to_string());

    Ok(LinearProgram { num_vars, objective, objective_offset: 0.0, rows, bounds, var_names })
}

/// Builds the total-cost LP: minimize the sum of per-edge LP-costs over the
/// triangle-inequality polytope. The objective equals
/// sum over positive edges of x_e plus sum over negative edges of (1 - x_e),
/// carried as coefficients +1/-1 with a constant offset.
pub fn l1_lp(g: &impl SignedGraph) -> Result<LinearProgram, LpError> {
    let n = g.total_vertices();
    if n < 2 {
        return Err(LpError::TooSmall { vertices: n });
    }
    let np = pair_count(n);
    let mut rows = Vec::new();
    triangle_rows(n, &mut rows);

    let mut objective = vec![0.0; np];
    let mut negative_edges = 0usize;
    for (u, v, sign) in g.labeled_pairs() {
        let idx = pair_index(n, u, v);
        if sign.is_positive() {
            objective[idx] = 1.0;
        } else {
            objective[idx] = -1.0;
            negative_edges += 1;
        }
    }

    Ok(LinearProgram {
        num_vars: np,
        objective,
        objective_offset: negative_edges as f64,
        rows,
        bounds: vec![(0.0, 1.0); np],
        var_names: pair_var_names(n),
    })
}

/// Extracts the pair distances from an LP solution as a fractional
/// clustering, absorbing solver round-off: values are clamped into [0, 1]
/// and closed under shortest paths so the triangle inequalities hold.
pub fn fractional_from_solution(n: usize, solution: &LpSolution) -> FractionalClustering {
    let np = pair_count(n);
    assert!(solution.values.len() >= np, "solution does not cover all pair variables");
    let mut d = vec![0.0; n * n];
    for u in 0..n {
        for v in (u + 1)..n {
            let x = solution.values[pair_index(n, u, v)].clamp(0.0, 1.0);
            d[u * n + v] = x;
            d[v * n + u] = x;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik >= 1.0 {
                continue;
            }
            for j in 0..n {
                let through = dik + d[k * n + j];
                if through < d[i * n + j] {
                    d[i * n + j] = through;
                }
            }
        }
    }
    let mut distances = Vec::with_capacity(np);
    for u in 0..n {
        for v in (u + 1)..n {
            distances.push(d[u * n + v]);
        }
    }
    FractionalClustering::from_distances(n, distances)
        .expect("clamped shortest-path distances stay in [0, 1]")
}

/// A dual solution for the worst-vertex LP on a complete graph.
///
/// `pi` has one multiplier per vertex (for the error rows) and `sigma_hat`
/// one aggregate per unordered pair, standing for the signed sum of the
/// triangle multipliers that touch the pair. The edge feasibility
/// constraints only see the aggregates, so individual triangle multipliers
/// are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCertificate {
    pub pi: Vec<f64>,
    pub sigma_hat: Vec<f64>,
    pub objective: f64,
}

/// A violated dual constraint found by [`verify_certificate`].
#[derive(Clone, Debug, PartialEq)]
pub enum DualViolation {
    NegativePi { v: usize, value: f64 },
    PiSumExceedsOne { sum: f64 },
    /// lhs is -pi_u - pi_v + sigma_hat on positive edges and
    /// pi_u + pi_v + sigma_hat on negative edges; feasibility needs lhs <= 0.
    EdgeConstraint { u: usize, v: usize, sign: Sign, lhs: f64 },
}

/// Outcome of checking a dual certificate against a graph.
#[derive(Clone, Debug)]
pub struct CertificateVerdict {
    pub feasible: bool,
    /// Recomputed dual objective: sum over vertices of d^-(v) * pi_v.
    pub objective: f64,
    pub violations: Vec<DualViolation>,
    /// Positive edges whose dual constraint holds with strict slack,
    /// as (u, v, slack); these drive the complementary-slackness argument.
    pub strict_slack_positive_edges: Vec<(usize, usize, f64)>,
}

/// The hand-built dual certificate for the matching family, valid for
/// t >= 2: both endpoints of the first matching edge carry multiplier 1/2
/// and the triangle aggregates spread 1/(2t-2) over the remaining vertices.
/// Its objective is exactly 1, the primal optimum.
pub fn matching_dual_certificate(t: usize) -> Result<DualCertificate, LpError> {
    if t < 2 {
        return Err(LpError::ParameterTooSmall { name: "t", min: 2, got: t });
    }
    let n = 2 * t;
    let mut pi = vec![0.0; n];
    pi[0] = 0.5;
    pi[1] = 0.5;
    let spread = 1.0 / (2.0 * t as f64 - 2.0);
    let mut sigma_hat = vec![0.0; pair_count(n)];
    sigma_hat[pair_index(n, 0, 1)] = -1.0;
    for v in 2..n {
        sigma_hat[pair_index(n, 0, v)] = spread;
        sigma_hat[pair_index(n, 1, v)] = spread;
    }
    Ok(DualCertificate { pi, sigma_hat, objective: 1.0 })
}

/// The hand-built dual certificate for the star family, valid for n >= 2:
/// the hub carries 1 - n/(3(n-1)), every other vertex 1/(3(n-1)), and the
/// triangle aggregates make every edge constraint tight. Its objective is
/// n/3, the primal optimum.
pub fn star_dual_certificate(n: usize) -> Result<DualCertificate, LpError> {
    if n < 2 {
        return Err(LpError::ParameterTooSmall { name: "n", min: 2, got: n });
    }
    let vertices = n + 1;
    let leaf = 1.0 / (3.0 * (n as f64 - 1.0));
    let mut pi = vec![leaf; vertices];
    pi[0] = 1.0 - n as f64 * leaf;
    let mut sigma_hat = vec![0.0; pair_count(vertices)];
    for v in 1..vertices {
        // Hub edges: sigma_hat = 2(n-1) * leaf = 2/3.
        sigma_hat[pair_index(vertices, 0, v)] = 2.0 * (n as f64 - 1.0) * leaf;
        for w in (v + 1)..vertices {
            sigma_hat[pair_index(vertices, v, w)] = -2.0 * leaf;
        }
    }
    Ok(DualCertificate { pi, sigma_hat, objective: n as f64 / 3.0 })
}

/// Checks a dual certificate: multiplier signs, the sum bound on pi, and
/// both families of edge constraints, all within [`LP_EPS`]. Also reports
/// the recomputed objective and the positive edges with strict slack.
pub fn verify_certificate(
    g: &SignedCompleteGraph,
    cert: &DualCertificate,
) -> Result<CertificateVerdict, LpError> {
    let n = g.vertex_count();
    if cert.pi.len() != n || cert.sigma_hat.len() != pair_count(n) {
        return Err(LpError::CertificateMismatch);
    }

    let mut violations = Vec::new();
    for (v, &p) in cert.pi.iter().enumerate() {
        if p < -LP_EPS {
            violations.push(DualViolation::NegativePi { v, value: p });
        }
    }
    let sum: f64 = cert.pi.iter().sum();
    if sum > 1.0 + LP_EPS {
        violations.push(DualViolation::PiSumExceedsOne { sum });
    }

    let mut strict_slack = Vec::new();
    for (u, v, sign) in g.edges() {
        let s = cert.sigma_hat[pair_index(n, u, v)];
        let lhs = if sign.is_positive() {
            -cert.pi[u] - cert.pi[v] + s
        } else {
            cert.pi[u] + cert.pi[v] + s
        };
        if lhs > LP_EPS {
            violations.push(DualViolation::EdgeConstraint { u, v, sign, lhs });
        } else if sign.is_positive() && lhs < -LP_EPS {
            strict_slack.push((u, v, -lhs));
        }
    }

    let objective: f64 =
        (0..n).map(|v| g.negative_degree(v) as f64 * cert.pi[v]).sum();

    Ok(CertificateVerdict {
        feasible: violations.is_empty(),
        objective,
        violations,
        strict_slack_positive_edges: strict_slack,
    })
}

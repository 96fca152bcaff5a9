//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see the lines for passing criteria).
//!
//! Criteria 4, 6, and 8 share one bank of seeded random complete instances
//! (the per-vertex-guarantee suite); criterion 5 runs its own bipartite
//! bank. Both banks are built once and cached.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use localcc::*;

const COMPLETE_DEFAULT_RATIO: f64 = 47.62;
const RATIO_WINDOW: f64 = 0.05;
const PER_VERTEX_SLACK: f64 = 1e-6;

fn report(criterion: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {verdict} — {detail}");
    assert!(ok, "criterion {criterion} failed: {detail}");
}

struct CompleteRecord {
    n: usize,
    graph: SignedCompleteGraph,
    solution_values: Vec<f64>,
    x: FractionalClustering,
    frac_err: ErrorVector,
    clustering: Clustering,
    disc_err: ErrorVector,
    trace: RoundingTrace,
}

struct CompleteSuite {
    records: Vec<CompleteRecord>,
    build_time: Duration,
}

fn complete_suite() -> &'static CompleteSuite {
    static SUITE: OnceLock<CompleteSuite> = OnceLock::new();
    SUITE.get_or_init(|| {
        let started = Instant::now();
        let params = RoundingParams::complete_defaults();
        let mut records = Vec::new();
        for n in 6..=14usize {
            let seeds = if n <= 10 { 12 } else { 2 };
            for (pi, p) in [0.2, 0.5, 0.8].into_iter().enumerate() {
                for s in 0..seeds {
                    let seed = 1000 * n as u64 + 100 * pi as u64 + s;
                    let graph = random_complete(n, p, seed).unwrap();
                    let sol = solve(&minimax_lp(&graph).unwrap()).unwrap();
                    assert_eq!(sol.status, LpStatus::Optimal, "n={n} p={p} seed={seed}");
                    let x = fractional_from_solution(n, &sol);
                    let frac_err = error_vector(&graph, &x).unwrap();
                    let (clustering, trace) = round_complete(&graph, &x, &params).unwrap();
                    let disc_err = clustering_error_vector(&graph, &clustering).unwrap();
                    records.push(CompleteRecord {
                        n,
                        graph,
                        solution_values: sol.values,
                        x,
                        frac_err,
                        clustering,
                        disc_err,
                        trace,
                    });
                }
            }
        }
        CompleteSuite { records, build_time: started.elapsed() }
    })
}

struct BipartiteRecord {
    n1: usize,
    x: FractionalClustering,
    frac_err: ErrorVector,
    disc_err: ErrorVector,
}

fn bipartite_suite() -> &'static Vec<BipartiteRecord> {
    static SUITE: OnceLock<Vec<BipartiteRecord>> = OnceLock::new();
    SUITE.get_or_init(|| {
        let params = RoundingParams::bipartite_defaults();
        let mut records = Vec::new();
        let shapes: &[(usize, usize, u64)] = &[
            (2, 2, 9),
            (2, 3, 9),
            (3, 3, 9),
            (3, 4, 9),
            (4, 4, 9),
            (4, 6, 9),
            (5, 5, 9),
            (6, 6, 2),
            (7, 7, 1),
            (8, 8, 1),
            (10, 10, 1),
        ];
        for &(n1, n2, seeds) in shapes {
            for (pi, p) in [0.2, 0.5, 0.8].into_iter().enumerate() {
                for s in 0..seeds {
                    let seed = 50_000 + 991 * (n1 * 16 + n2) as u64 + 10 * pi as u64 + s;
                    let graph = random_bipartite(n1, n2, p, seed).unwrap();
                    let total = n1 + n2;
                    let sol = solve(&minimax_lp(&graph).unwrap()).unwrap();
                    assert_eq!(sol.status, LpStatus::Optimal, "{n1}x{n2} p={p} seed={seed}");
                    let x = fractional_from_solution(total, &sol);
                    let frac_err = error_vector(&graph, &x).unwrap();
                    let (clustering, _) = round_bipartite(&graph, &x, &params).unwrap();
                    let disc_err = clustering_error_vector(&graph, &clustering).unwrap();
                    records.push(BipartiteRecord { n1, x, frac_err, disc_err });
                }
            }
        }
        records
    })
}

#[test]
fn criterion_1_matching_family() {
    let started = Instant::now();
    let params = RoundingParams::complete_defaults();
    let mut failures = Vec::new();
    for t in 3..=6usize {
        let n = 2 * t;
        let g = matching_instance(t).unwrap();
        let sol = solve(&minimax_lp(&g).unwrap()).unwrap();
        if (sol.objective - 1.0).abs() > 1e-6 {
            failures.push(format!("t={t}: LP value {} != 1", sol.objective));
        }
        let worst_x = sol.values[..pair_count(n)].iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if worst_x > 1e-6 {
            failures.push(format!("t={t}: max |x_e| = {worst_x:.2e} > 1e-6"));
        }
        let x = fractional_from_solution(n, &sol);
        let (clustering, _) = round_complete(&g, &x, &params).unwrap();
        if clustering != Clustering::giant(n) {
            failures.push(format!("t={t}: rounding did not give the giant clustering"));
        }
        let worst = clustering_error_vector(&g, &clustering).unwrap().max();
        if worst != 1.0 {
            failures.push(format!("t={t}: rounded worst-vertex error {worst} != 1"));
        }
        let exact = exact_best(&g, Objective::Linf).unwrap();
        if exact.value != 1.0 {
            failures.push(format!("t={t}: exact optimum {} != 1", exact.value));
        }
    }
    let elapsed = started.elapsed();
    if elapsed > Duration::from_secs(5) {
        failures.push(format!("runtime {elapsed:?} exceeds 5 s"));
    }
    report(
        "1 (matching family)",
        failures.is_empty(),
        &if failures.is_empty() {
            format!("t in 3..=6: LP value 1 at x = 0, rounding gives the giant clustering, exact optimum 1; {elapsed:?}")
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_2_star_family() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for n in 3..=8usize {
        let vertices = n + 1;
        let g = star_instance(n).unwrap();
        let sol = solve(&minimax_lp(&g).unwrap()).unwrap();
        if (sol.objective - n as f64 / 3.0).abs() > 1e-6 {
            failures.push(format!("n={n}: LP value {} != n/3", sol.objective));
        }
        let mut hub_dev = 0.0f64;
        let mut leaf_dev = 0.0f64;
        for v in 1..vertices {
            hub_dev = hub_dev.max((sol.values[pair_index(vertices, 0, v)] - 1.0 / 3.0).abs());
            for w in (v + 1)..vertices {
                leaf_dev =
                    leaf_dev.max((sol.values[pair_index(vertices, v, w)] - 2.0 / 3.0).abs());
            }
        }
        if hub_dev > 1e-5 || leaf_dev > 1e-5 {
            let reason = if n == 3 {
                " [expected at n=3: the optimum is non-unique there (the optimal face is \
                 two-dimensional and the symmetric point is its barycenter, not a vertex), \
                 so a vertex-returning solver cannot produce it; \
                 see lp::tests::star_lp_n3_optimum_is_not_unique for the two-optima witness]"
            } else {
                ""
            };
            failures.push(format!(
                "n={n}: solution deviates from the symmetric point (hub dev {hub_dev:.2e}, leaf dev {leaf_dev:.2e}){reason}"
            ));
        }
        let best = exact_best(&g, Objective::Linf).unwrap();
        let agree = max_agree_value(&g, &best.best);
        if agree != (n + 1) / 2 {
            failures.push(format!("n={n}: worst-vertex agreement {agree} != floor((n+1)/2)"));
        }
    }
    let elapsed = started.elapsed();
    if elapsed > Duration::from_secs(10) {
        failures.push(format!("runtime {elapsed:?} exceeds 10 s"));
    }
    report(
        "2 (star family)",
        failures.is_empty(),
        &if failures.is_empty() {
            format!("n in 3..=8: LP value n/3, symmetric solution, worst-vertex agreement floor((n+1)/2); {elapsed:?}")
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_3_dual_certificates() {
    let mut failures = Vec::new();
    for t in 2..=6usize {
        let g = matching_instance(t).unwrap();
        let cert = matching_dual_certificate(t).unwrap();
        let verdict = verify_certificate(&g, &cert).unwrap();
        if !verdict.feasible {
            failures.push(format!("matching t={t}: infeasible: {:?}", verdict.violations));
        }
        let primal = solve(&minimax_lp(&g).unwrap()).unwrap().objective;
        if (verdict.objective - primal).abs() > 1e-7 {
            failures.push(format!(
                "matching t={t}: dual {} vs primal {primal}",
                verdict.objective
            ));
        }
    }
    for n in 2..=8usize {
        let g = star_instance(n).unwrap();
        let cert = star_dual_certificate(n).unwrap();
        let verdict = verify_certificate(&g, &cert).unwrap();
        if !verdict.feasible {
            failures.push(format!("star n={n}: infeasible: {:?}", verdict.violations));
        }
        let primal = solve(&minimax_lp(&g).unwrap()).unwrap().objective;
        if (verdict.objective - primal).abs() > 1e-7 {
            failures.push(format!("star n={n}: dual {} vs primal {primal}", verdict.objective));
        }
    }
    report(
        "3 (dual certificates)",
        failures.is_empty(),
        &if failures.is_empty() {
            "matching t in 2..=6 and star n in 2..=8 verify feasible with dual = primal".to_string()
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_4_per_vertex_guarantee_complete() {
    let ratio = RoundingParams::complete_defaults().ratio_complete().unwrap();
    let mut failures = Vec::new();
    if (ratio - COMPLETE_DEFAULT_RATIO).abs() > RATIO_WINDOW {
        failures.push(format!("ratio constant {ratio} outside {COMPLETE_DEFAULT_RATIO} ± {RATIO_WINDOW}"));
    }
    let suite = complete_suite();
    if suite.records.len() < 200 {
        failures.push(format!("only {} instances", suite.records.len()));
    }
    let mut worst_ratio = 0.0f64;
    for record in &suite.records {
        for v in 0..record.n {
            let frac = record.frac_err.get(v);
            let disc = record.disc_err.get(v);
            if disc > ratio * frac + PER_VERTEX_SLACK {
                failures.push(format!(
                    "n={} v={v}: discrete {disc} > {ratio} * fractional {frac}",
                    record.n
                ));
            }
            if frac > 0.0 {
                worst_ratio = worst_ratio.max(disc / frac);
            }
        }
    }
    if suite.build_time > Duration::from_secs(120) {
        failures.push(format!("suite build time {:?} exceeds 2 min", suite.build_time));
    }
    report(
        "4 (per-vertex guarantee, complete)",
        failures.is_empty(),
        &if failures.is_empty() {
            format!(
                "{} instances, every vertex within the {ratio:.2} bound (worst observed ratio {worst_ratio:.2}); suite built in {:?}",
                suite.records.len(),
                suite.build_time
            )
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_5_per_vertex_guarantee_bipartite() {
    let ratio = RoundingParams::bipartite_defaults().ratio_bipartite().unwrap();
    let mut failures = Vec::new();
    if ratio > 10.0 {
        failures.push(format!("ratio constant {ratio} exceeds 10"));
    }
    let suite = bipartite_suite();
    if suite.len() < 200 {
        failures.push(format!("only {} instances", suite.len()));
    }
    let mut worst_ratio = 0.0f64;
    for record in suite {
        for v in 0..record.n1 {
            let frac = record.frac_err.get(v);
            let disc = record.disc_err.get(v);
            if disc > ratio * frac + PER_VERTEX_SLACK {
                failures.push(format!(
                    "n1={} v={v}: discrete {disc} > {ratio} * fractional {frac}",
                    record.n1
                ));
            }
            if frac > 0.0 {
                worst_ratio = worst_ratio.max(disc / frac);
            }
        }
    }
    report(
        "5 (per-vertex guarantee, bipartite)",
        failures.is_empty(),
        &if failures.is_empty() {
            format!(
                "{} instances, every V1 vertex within the {ratio:.3} bound (worst observed ratio {worst_ratio:.2})",
                suite.len()
            )
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_6_oracle_sandwich() {
    let mut failures = Vec::new();
    let params = RoundingParams::complete_defaults();
    let mut checked = 0usize;
    for record in &complete_suite().records {
        if record.n > 9 {
            continue;
        }
        checked += 1;
        let g = &record.graph;

        // Worst-vertex objective: the suite already has the fractional and
        // rounded values.
        let lp_value = Objective::Linf.evaluate(&record.frac_err);
        let exact = exact_best(g, Objective::Linf).unwrap().value;
        let rounded = Objective::Linf.evaluate(&record.disc_err);
        if lp_value > exact + 1e-6 || exact > rounded + 1e-6 {
            failures.push(format!(
                "linf n={}: lp {lp_value} exact {exact} rounded {rounded}",
                record.n
            ));
        }

        // Mean objective: solve the total-cost LP and round its solution.
        let sol = solve(&l1_lp(g).unwrap()).unwrap();
        let x = fractional_from_solution(record.n, &sol);
        let lp_value = Objective::L1Mean.evaluate(&error_vector(g, &x).unwrap());
        let exact = exact_best(g, Objective::L1Mean).unwrap().value;
        let (clustering, _) = round_complete(g, &x, &params).unwrap();
        let rounded =
            Objective::L1Mean.evaluate(&clustering_error_vector(g, &clustering).unwrap());
        if lp_value > exact + 1e-6 || exact > rounded + 1e-6 {
            failures.push(format!(
                "l1 n={}: lp {lp_value} exact {exact} rounded {rounded}",
                record.n
            ));
        }
    }
    report(
        "6 (oracle sandwich)",
        failures.is_empty(),
        &if failures.is_empty() {
            format!("LP <= exact <= rounded for linf and l1 on {checked} instances with n <= 9")
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_7_acn_gap() {
    let params = RoundingParams::complete_defaults();
    let mut failures = Vec::new();
    for t in 2..=8usize {
        let n = 2 * t;
        let g = matching_instance(t).unwrap();
        let expected = (2 * t - 2) as f64;

        let gap = acn_minimax_gap(t, 100, 7000 + t as u64).unwrap();
        if gap.min_worst_error != expected || gap.max_worst_error != expected {
            failures.push(format!(
                "t={t}: random-pivot worst errors in [{}, {}], expected exactly {expected}",
                gap.min_worst_error, gap.max_worst_error
            ));
        }

        // Exact worst-vertex optimum is 1: exhaustively for t <= 6; above the
        // oracle cap the giant clustering certifies the upper bound and every
        // multi-cluster partition has at least t-1 >= 2 errors at some vertex.
        if n <= EXACT_SEARCH_CAP {
            let exact = exact_best(&g, Objective::Linf).unwrap();
            if exact.value != 1.0 {
                failures.push(format!("t={t}: exact optimum {} != 1", exact.value));
            }
        }
        let giant_worst = clustering_error_vector(&g, &Clustering::giant(n)).unwrap().max();
        if giant_worst != 1.0 {
            failures.push(format!("t={t}: giant clustering worst error {giant_worst} != 1"));
        }

        // The threshold rounding applied to the LP optimum reaches 1.
        let sol = solve(&minimax_lp(&g).unwrap()).unwrap();
        let x = fractional_from_solution(n, &sol);
        let (clustering, _) = round_complete(&g, &x, &params).unwrap();
        let worst = clustering_error_vector(&g, &clustering).unwrap().max();
        if worst != 1.0 {
            failures.push(format!("t={t}: rounded worst error {worst} != 1"));
        }
    }
    report(
        "7 (random-pivot gap)",
        failures.is_empty(),
        &if failures.is_empty() {
            "t in 2..=8: 100 random-pivot trials each see worst error exactly 2t-2 vs optimum 1; threshold rounding achieves 1".to_string()
        } else {
            failures.join("; ")
        },
    );
}

#[test]
fn criterion_8_cross_edge_audit() {
    let params = RoundingParams::complete_defaults();
    let suite = complete_suite();
    let mut audited_pairs = 0usize;
    let mut violations = 0usize;
    for record in &suite.records {
        let reportage =
            audit_cross_edges(&record.graph, &record.x, &record.trace, &params).unwrap();
        audited_pairs += reportage.records.len();
        violations += reportage.violation_count();
    }
    report(
        "8 (cross-edge audit)",
        violations == 0,
        &format!(
            "{audited_pairs} (cluster, outside-vertex) pairs audited across {} instances, {violations} violations",
            suite.records.len()
        ),
    );
}

//! The shared solve/round/evaluate pipeline behind `pipeline` and `sweep`.

use std::time::Instant;

use anyhow::{bail, Context, Result};
use localcc::*;

use crate::report::{InstanceInfo, ParamsInfo, RunReport, TimingsMs, REPORT_SCHEMA};

/// Parsed `--objective` value.
#[derive(Clone, Copy, Debug)]
pub enum ObjectiveSpec {
    /// Worst-vertex objective; solves the minimax relaxation.
    Linf,
    /// Mean-error objective; solves the total-cost relaxation.
    L1,
    /// A finite p-norm: evaluation only, no fractional solve.
    LpOnly(f64),
}

impl ObjectiveSpec {
    pub fn parse(text: &str) -> Result<ObjectiveSpec> {
        match text {
            "linf" => Ok(ObjectiveSpec::Linf),
            "l1" => Ok(ObjectiveSpec::L1),
            _ => {
                let Some(p) = text.strip_prefix("lp:") else {
                    bail!("unknown objective `{text}` (expected linf, l1, or lp:<p>)");
                };
                let p: f64 = p.parse().context("lp:<p> exponent must be a number")?;
                if p < 1.0 {
                    bail!("lp:<p> requires p >= 1, got {p}");
                }
                Ok(ObjectiveSpec::LpOnly(p))
            }
        }
    }

    fn objective(&self) -> Objective {
        match *self {
            ObjectiveSpec::Linf => Objective::Linf,
            ObjectiveSpec::L1 => Objective::L1Mean,
            ObjectiveSpec::LpOnly(p) => Objective::lp(p).expect("validated at parse"),
        }
    }

    fn label(&self) -> String {
        self.objective().to_string()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct StageFlags {
    pub round: bool,
    pub exact: bool,
    pub acn: bool,
    pub audit: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParamOverrides {
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub k3: Option<f64>,
}

impl ParamOverrides {
    fn apply(&self, mut params: RoundingParams) -> RoundingParams {
        if let Some(alpha) = self.alpha {
            params.alpha = alpha;
        }
        if let Some(gamma) = self.gamma {
            params.gamma = gamma;
        }
        if let Some(k1) = self.k1 {
            params.k1 = k1;
        }
        if let Some(k2) = self.k2 {
            params.k2 = Some(k2);
        }
        if let Some(k3) = self.k3 {
            params.k3 = Some(k3);
        }
        params
    }
}

fn ms(from: Instant) -> f64 {
    from.elapsed().as_secs_f64() * 1e3
}

fn value_on_prefix(objective: Objective, errors: &ErrorVector, count: usize) -> f64 {
    objective.evaluate_slice(&errors.as_slice()[..count])
}

/// Runs the requested stages over one instance and assembles the report.
pub fn run_instance(
    instance: &Instance,
    info: InstanceInfo,
    spec: ObjectiveSpec,
    flags: StageFlags,
    seed: u64,
    overrides: ParamOverrides,
) -> Result<RunReport> {
    let total_start = Instant::now();
    let objective = spec.objective();

    // Validate the stage combination up front.
    if matches!(spec, ObjectiveSpec::LpOnly(_)) && (flags.round || flags.audit) {
        bail!("objective lp:<p> supports evaluation only (--exact/--acn); \
               --round and --audit need a fractional solve (linf or l1)");
    }
    if flags.audit && !flags.round {
        bail!("--audit requires --round");
    }
    if flags.acn && matches!(instance, Instance::Bipartite(_)) {
        bail!("--acn runs on complete instances only");
    }

    // Resolve and validate rounding parameters for this instance kind.
    let (params, ratio_constant) = match instance {
        Instance::Complete(_) => {
            let p = overrides.apply(RoundingParams::complete_defaults());
            let c = p.ratio_complete().context("invalid rounding parameters")?;
            (p, c)
        }
        Instance::Bipartite(_) => {
            let p = overrides.apply(RoundingParams::bipartite_defaults());
            let c = p.ratio_bipartite().context("invalid rounding parameters")?;
            (p, c)
        }
    };

    let mut report = RunReport {
        schema: REPORT_SCHEMA,
        instance: info,
        objective: spec.label(),
        seed,
        params: ParamsInfo {
            alpha: params.alpha,
            gamma: params.gamma,
            k1: params.k1,
            k2: params.k2,
            k3: params.k3,
        },
        ratio_constant,
        lp_status: None,
        lp_value: None,
        lp_raw_objective: None,
        lp_iterations: None,
        rounded_value: None,
        rounded_error_vector: None,
        rounded_num_clusters: None,
        exact_value: None,
        exact_partitions_examined: None,
        acn_value: None,
        ratio_rounded_over_lp: None,
        audit_checked: None,
        audit_violations: None,
        timings_ms: TimingsMs::default(),
    };

    macro_rules! with_graph {
        (|$g:ident| $body:expr) => {
            match instance {
                Instance::Complete($g) => $body,
                Instance::Bipartite($g) => $body,
            }
        };
    }

    let guaranteed = with_graph!(|g| g.guaranteed_vertices());
    let total_vertices = with_graph!(|g| g.total_vertices());

    // Fractional solve (linf/l1 objectives only).
    let mut fractional: Option<FractionalClustering> = None;
    if !matches!(spec, ObjectiveSpec::LpOnly(_)) {
        let lp_start = Instant::now();
        let lp = match spec {
            ObjectiveSpec::Linf => with_graph!(|g| minimax_lp(g))?,
            ObjectiveSpec::L1 => with_graph!(|g| l1_lp(g))?,
            ObjectiveSpec::LpOnly(_) => unreachable!(),
        };
        let solution = solve(&lp)?;
        if solution.status != LpStatus::Optimal {
            bail!("LP solve ended with status {:?}", solution.status);
        }
        let x = fractional_from_solution(total_vertices, &solution);
        let errors = with_graph!(|g| error_vector(g, &x))?;
        report.lp_status = Some("optimal".to_string());
        report.lp_value = Some(value_on_prefix(objective, &errors, guaranteed));
        report.lp_raw_objective = Some(solution.objective);
        report.lp_iterations = Some(solution.iterations);
        report.timings_ms.lp = Some(ms(lp_start));
        fractional = Some(x);
    }

    // Threshold rounding (+ optional audit, which needs the trace).
    if flags.round {
        let x = fractional.as_ref().expect("round implies a fractional solve");
        let round_start = Instant::now();
        let (clustering, trace) = match instance {
            Instance::Complete(g) => round_complete(g, x, &params)?,
            Instance::Bipartite(g) => round_bipartite(g, x, &params)?,
        };
        report.timings_ms.round = Some(ms(round_start));
        let errors = with_graph!(|g| clustering_error_vector(g, &clustering))?;
        report.rounded_value = Some(value_on_prefix(objective, &errors, guaranteed));
        report.rounded_error_vector = Some(errors.as_slice().to_vec());
        report.rounded_num_clusters = Some(clustering.num_clusters());

        if flags.audit {
            let audit_start = Instant::now();
            let audit = with_graph!(|g| audit_cross_edges(g, x, &trace, &params))?;
            report.audit_checked = Some(audit.records.len());
            report.audit_violations = Some(audit.violation_count());
            report.timings_ms.audit = Some(ms(audit_start));
        }
    }

    // Exhaustive oracle.
    if flags.exact {
        if total_vertices > EXACT_SEARCH_CAP {
            bail!(
                "--exact: instance has {total_vertices} vertices, above the exhaustive-search cap {EXACT_SEARCH_CAP}"
            );
        }
        let exact_start = Instant::now();
        let result = with_graph!(|g| exact_best(g, objective))?;
        report.exact_value = Some(result.value);
        report.exact_partitions_examined = Some(result.partitions_examined);
        report.timings_ms.exact = Some(ms(exact_start));
    }

    // Random-pivot baseline (complete instances only, checked above).
    if flags.acn {
        let Instance::Complete(g) = instance else { unreachable!() };
        let acn_start = Instant::now();
        let clustering = acn_cluster(g, seed);
        let errors = clustering_error_vector(g, &clustering)?;
        report.acn_value = Some(objective.evaluate(&errors));
        report.timings_ms.acn = Some(ms(acn_start));
    }

    if let (Some(lp), Some(rounded)) = (report.lp_value, report.rounded_value) {
        if lp > 0.0 {
            report.ratio_rounded_over_lp = Some(rounded / lp);
        }
    }

    report.timings_ms.total = ms(total_start);
    Ok(report)
}

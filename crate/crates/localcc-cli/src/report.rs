//! Machine-readable run reports.
//!
//! A [`RunReport`] is printed as a single JSON document with a fixed field
//! order (see `schema/run_report.schema.json`). Wall-clock measurements live
//! exclusively under `timings_ms`, the last field, so reproducibility checks
//! can strip that one key and compare the rest byte for byte.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct InstanceInfo {
    /// Source path, or null when the instance was generated in-process.
    pub path: Option<String>,
    /// "complete" or "bipartite".
    pub kind: String,
    pub vertices: usize,
    /// Partite sizes (n1, n2) for bipartite instances.
    pub side_sizes: Option<(usize, usize)>,
    /// Generator family for sweep rows.
    pub family: Option<String>,
    /// Family size parameter for sweep rows.
    pub size: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamsInfo {
    pub alpha: f64,
    pub gamma: f64,
    pub k1: f64,
    pub k2: Option<f64>,
    pub k3: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TimingsMs {
    pub lp: Option<f64>,
    pub round: Option<f64>,
    pub exact: Option<f64>,
    pub acn: Option<f64>,
    pub audit: Option<f64>,
    pub total: f64,
}

/// One pipeline run. Objective values are evaluated over the guaranteed
/// side of the error vector (every vertex for complete instances, V1 for
/// bipartite ones); `rounded_error_vector` keeps all entries as
/// diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub instance: InstanceInfo,
    pub objective: String,
    pub seed: u64,
    pub params: ParamsInfo,
    /// The per-vertex guarantee constant for this instance kind and
    /// parameter set.
    pub ratio_constant: f64,
    pub lp_status: Option<String>,
    pub lp_value: Option<f64>,
    /// Raw LP objective (equals lp_value for linf up to solver tolerance;
    /// for l1 it is the total edge cost rather than the per-vertex mean).
    pub lp_raw_objective: Option<f64>,
    pub lp_iterations: Option<u64>,
    pub rounded_value: Option<f64>,
    pub rounded_error_vector: Option<Vec<f64>>,
    pub rounded_num_clusters: Option<usize>,
    pub exact_value: Option<f64>,
    pub exact_partitions_examined: Option<u64>,
    pub acn_value: Option<f64>,
    pub ratio_rounded_over_lp: Option<f64>,
    pub audit_checked: Option<usize>,
    pub audit_violations: Option<usize>,
    pub timings_ms: TimingsMs,
}

pub const REPORT_SCHEMA: &str = "localcc.run_report.v1";

pub const CSV_HEADER: &str =
    "family,n,seed,objective,lp_value,rounded_value,exact_value,acn_value,ratio,c,audit_violations";

fn csv_opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunReport {
    /// The fixed-column CSV row for sweep output.
    pub fn csv_row(&self) -> String {
        let family = self.instance.family.clone().unwrap_or_default();
        let n = self.instance.size.map(|s| s.to_string()).unwrap_or_default();
        format!(
            "{family},{n},{seed},{objective},{lp},{rounded},{exact},{acn},{ratio},{c},{audit}",
            seed = self.seed,
            objective = self.objective,
            lp = csv_opt_f64(self.lp_value),
            rounded = csv_opt_f64(self.rounded_value),
            exact = csv_opt_f64(self.exact_value),
            acn = csv_opt_f64(self.acn_value),
            ratio = csv_opt_f64(self.ratio_rounded_over_lp),
            c = self.ratio_constant,
            audit = self.audit_violations.map(|v| v.to_string()).unwrap_or_default(),
        )
    }
}

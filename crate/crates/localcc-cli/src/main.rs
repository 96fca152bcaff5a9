//! `localcc` — batch front-end for correlation clustering with per-vertex
//! error guarantees: instance generation, LP + rounding pipelines, and
//! family sweeps with CSV output.

mod pipeline;
mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use localcc::*;

use pipeline::{run_instance, ObjectiveSpec, ParamOverrides, StageFlags};
use report::{InstanceInfo, RunReport, CSV_HEADER};

fn long_version() -> &'static str {
    static VERSION: std::sync::OnceLock<String> = std::sync::OnceLock::new();
    VERSION.get_or_init(|| {
        let c = RoundingParams::complete_defaults();
        let b = RoundingParams::bipartite_defaults();
        format!(
            "{}\ncomplete rounding defaults: alpha={} gamma={} k1={} k2={} k3={} (per-vertex ratio {:.4})\n\
             bipartite rounding defaults: alpha={} gamma={} k1={} (per-vertex ratio {:.4})",
            env!("CARGO_PKG_VERSION"),
            c.alpha,
            c.gamma,
            c.k1,
            c.k2.unwrap(),
            c.k3.unwrap(),
            c.ratio_complete().unwrap(),
            b.alpha,
            b.gamma,
            b.k1,
            b.ratio_bipartite().unwrap(),
        )
    })
}

#[derive(Parser)]
#[command(name = "localcc", version, long_version = long_version(), about = "Correlation clustering with per-vertex error guarantees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file for one of the built-in families.
    Generate {
        #[command(subcommand)]
        family: FamilyCmd,
    },
    /// Solve, round, and evaluate one instance; prints a JSON report.
    Pipeline(PipelineArgs),
    /// Run the pipeline across a family and size range; prints CSV.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// 2t vertices; a negative perfect matching in a positive clique.
    Matching {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// n+1 vertices; a positive star at vertex 0 in a negative clique.
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Each pair independently positive with probability p-plus.
    RandomComplete {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p_plus: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Each cross pair independently positive with probability p-plus.
    RandomBipartite {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, default_value_t = 0.5)]
        p_plus: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RoundingOverrideArgs {
    /// Loose-ball threshold override (default per instance kind).
    #[arg(long)]
    alpha: Option<f64>,
    /// Tight-ball threshold override.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    k1: Option<f64>,
    #[arg(long)]
    k2: Option<f64>,
    #[arg(long)]
    k3: Option<f64>,
}

impl RoundingOverrideArgs {
    fn overrides(&self) -> ParamOverrides {
        ParamOverrides {
            alpha: self.alpha,
            gamma: self.gamma,
            k1: self.k1,
            k2: self.k2,
            k3: self.k3,
        }
    }
}

#[derive(Args)]
struct PipelineArgs {
    /// Instance file (format: `localcc generate --help`).
    instance: PathBuf,
    /// linf, l1, or lp:<p> (lp:<p> is evaluation-only: no fractional solve).
    #[arg(long, default_value = "linf")]
    objective: String,
    /// Round the fractional solution with the threshold-pivot algorithm.
    #[arg(long)]
    round: bool,
    /// Run the exhaustive exact oracle (vertex count capped).
    #[arg(long)]
    exact: bool,
    /// Run the random-pivot baseline (complete instances only).
    #[arg(long)]
    acn: bool,
    /// Check the cross-edge charging bound on the rounding trace.
    #[arg(long)]
    audit: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    params: RoundingOverrideArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// matching, star, random-complete, or random-bipartite.
    #[arg(long)]
    family: String,
    /// Inclusive size range, e.g. 3..8 (matching: t; star: n;
    /// random-complete: n; random-bipartite: n1 = n2 = size).
    #[arg(long)]
    sizes: String,
    /// Rows per size; each row gets its own derived seed.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value = "linf")]
    objective: String,
    /// Positive-edge probability for the random families.
    #[arg(long, default_value_t = 0.5)]
    p_plus: f64,
    #[arg(long)]
    round: bool,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    acn: bool,
    #[arg(long)]
    audit: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    params: RoundingOverrideArgs,
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing instance to {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_generate(family: FamilyCmd) -> Result<()> {
    let (instance, out) = match family {
        FamilyCmd::Matching { t, out } => (Instance::Complete(matching_instance(t)?), out),
        FamilyCmd::Star { n, out } => (Instance::Complete(star_instance(n)?), out),
        FamilyCmd::RandomComplete { n, p_plus, seed, out } => {
            (Instance::Complete(random_complete(n, p_plus, seed)?), out)
        }
        FamilyCmd::RandomBipartite { n1, n2, p_plus, seed, out } => {
            (Instance::Bipartite(random_bipartite(n1, n2, p_plus, seed)?), out)
        }
    };
    write_output(out.as_ref(), &instance.to_text())
}

fn instance_info(instance: &Instance, path: Option<String>) -> InstanceInfo {
    match instance {
        Instance::Complete(g) => InstanceInfo {
            path,
            kind: "complete".to_string(),
            vertices: g.vertex_count(),
            side_sizes: None,
            family: None,
            size: None,
        },
        Instance::Bipartite(g) => InstanceInfo {
            path,
            kind: "bipartite".to_string(),
            vertices: g.vertex_count(),
            side_sizes: Some(g.side_sizes()),
            family: None,
            size: None,
        },
    }
}

fn cmd_pipeline(args: PipelineArgs) -> Result<RunReport> {
    let text = fs::read_to_string(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    let instance = Instance::parse(&text)?;
    let info = instance_info(&instance, Some(args.instance.display().to_string()));
    let spec = ObjectiveSpec::parse(&args.objective)?;
    let flags = StageFlags {
        round: args.round,
        exact: args.exact,
        acn: args.acn,
        audit: args.audit,
    };
    let report = run_instance(&instance, info, spec, flags, args.seed, args.params.overrides())?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(report)
}

/// Inclusive "a..b" range; an empty range (a > b) yields no sizes.
fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let Some((lo, hi)) = text.split_once("..") else {
        let single: usize = text.parse().context("sizes must be <a>..<b> or a single size")?;
        return Ok(vec![single]);
    };
    let lo: usize = lo.parse().context("bad lower bound in sizes")?;
    let hi: usize = hi.parse().context("bad upper bound in sizes")?;
    Ok((lo..=hi).collect())
}

fn row_seed(base: u64, size: u64, trial: u64) -> u64 {
    let mut z = base
        ^ size.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ trial.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn sweep_instance(family: &str, size: usize, p_plus: f64, seed: u64) -> Result<Instance> {
    Ok(match family {
        "matching" => Instance::Complete(matching_instance(size)?),
        "star" => Instance::Complete(star_instance(size)?),
        "random-complete" => Instance::Complete(random_complete(size, p_plus, seed)?),
        "random-bipartite" => Instance::Bipartite(random_bipartite(size, size, p_plus, seed)?),
        other => bail!("unknown family `{other}` (matching, star, random-complete, random-bipartite)"),
    })
}

fn cmd_sweep(args: SweepArgs) -> Result<Vec<RunReport>> {
    let sizes = parse_sizes(&args.sizes)?;
    let spec = ObjectiveSpec::parse(&args.objective)?;
    let flags = StageFlags {
        round: args.round,
        exact: args.exact,
        acn: args.acn,
        audit: args.audit,
    };

    // Oracle/LP caps are validated before any work runs.
    if flags.exact {
        for &size in &sizes {
            let vertices = match args.family.as_str() {
                "matching" => 2 * size,
                "star" => size + 1,
                "random-complete" => size,
                "random-bipartite" => 2 * size,
                _ => 0,
            };
            if vertices > EXACT_SEARCH_CAP {
                bail!(
                    "--exact: size {size} gives {vertices} vertices, above the exhaustive-search cap {EXACT_SEARCH_CAP}"
                );
            }
        }
    }

    println!("{CSV_HEADER}");
    let mut reports = Vec::new();
    for &size in &sizes {
        for trial in 0..args.trials {
            let seed = row_seed(args.seed, size as u64, trial as u64);
            let instance = sweep_instance(&args.family, size, args.p_plus, seed)?;
            let mut info = instance_info(&instance, None);
            info.family = Some(args.family.clone());
            info.size = Some(size);
            let report =
                run_instance(&instance, info, spec, flags, seed, args.params.overrides())?;
            println!("{}", report.csv_row());
            reports.push(report);
        }
    }
    Ok(reports)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<usize> = match cli.command {
        Command::Generate { family } => cmd_generate(family).map(|()| 0),
        Command::Pipeline(args) => cmd_pipeline(args).map(|r| r.audit_violations.unwrap_or(0)),
        Command::Sweep(args) => {
            cmd_sweep(args).map(|rs| rs.iter().filter_map(|r| r.audit_violations).sum())
        }
    };
    match outcome {
        Ok(0) => ExitCode::SUCCESS,
        // Audit violations get their own status so harnesses can tell them
        // from operational errors.
        Ok(_) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

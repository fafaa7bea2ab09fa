use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use loopsoup::analytics::{self as an};
use loopsoup::experiment::{run_experiment, ExperimentConfig, ExperimentKind};
use loopsoup::numerics::{polylog, riemann_zeta};
use loopsoup::rng::SeedRecord;
use loopsoup::scaling::{self as sc, ConditionedBridgeLaw, RenewalLaw, SubordinatorLaw};
use loopsoup::soup::{extract_clusters, sample_soup_conditioned, Condition};
use loopsoup::{CircleModel, Error, Result};

#[derive(Parser)]
#[command(name = "loopsoup", about = "Loop soups on the discrete circle")]
struct Cli {
    /// worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Clone, Copy)]
struct ModelArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long)]
    c: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form masses and probabilities of one model (JSON)
    Analytic {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Sample one soup and its clusters (JSON)
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// unconditioned | no-o1 | no-o2o3o4
        #[arg(long, default_value = "unconditioned")]
        condition: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a named formula, e.g. `law levy-density kappa=1 alpha=0.5 t=0.3` (JSON)
    Law {
        /// potential-density (x), levy-density (t), levy-tail (t), laplace-exponent (lambda),
        /// hitting-density (a, x), hitting-cdf (a, x), bridge-weight (x, y),
        /// gd-hitting-joint (a, b, x, y), gd-density (x, y), ab-density (a, b), ab-cdf (a, b)
        /// [all with kappa, alpha]; jk-cdf (a, b), not-single-partition, no-winding-or-covering
        /// [kappa, epsilon, alpha]; hitting-coefficients, renewal-jumps (alpha, r, horizon);
        /// halfline (alpha, s); escape-probability, zeta (alpha); polylog (alpha, s)
        #[arg(verbatim_doc_comment)]
        name: String,
        /// key=value parameters
        params: Vec<String>,
    },
    /// Sample bridge ranges as CSV rows `path,x`
    Bridge {
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 100_000)]
        n_approx: usize,
        #[arg(long, default_value_t = 10)]
        paths: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a config-driven experiment; exit code 1 if any check fails
    Experiment {
        /// JSON config; without it, the preset named by --preset
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Prints a line; a closed pipe (e.g. `| head`) is not an error.
fn say(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io { path: p.clone(), source }),
        None => {
            say(text);
            Ok(())
        }
    }
}

fn model(m: ModelArgs) -> Result<CircleModel> {
    CircleModel::new(m.n, m.p, m.c, m.alpha)
}

fn analytic(m: &CircleModel) -> Result<serde_json::Value> {
    let t = an::mass_by_type(m);
    let edges: Vec<f64> = (1..=m.n()).map(|x| an::prob_edge_closed(m, x)).collect::<Result<_>>()?;
    let mut v = json!({
        "model": m.params(),
        "kappa": m.kappa(),
        "r": m.r(),
        "theta": m.theta(),
        "total_mass": an::total_mass(m),
        "mass_through_vertex1": an::mass_through_vertex1(m),
        "mass_by_type": {"o1": t.o1, "o2": t.o2, "o3": t.o3, "o4": t.o4},
        "prob_edge_closed": edges,
        "prob_no_winding_or_covering": an::prob_no_winding_or_covering(m),
        "prob_two_clusters_given_no_o1": an::prob_two_clusters_given_no_o1(m),
    });
    if m.n() <= 16 {
        v["edge_configuration_law"] = json!(an::edge_configuration_law(m)?);
    }
    Ok(v)
}

fn law(name: &str, raw: &[String]) -> Result<serde_json::Value> {
    let mut p = BTreeMap::new();
    for kv in raw {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Param(format!("expected key=value, got '{kv}'")))?;
        let x: f64 = v.parse().map_err(|_| Error::Param(format!("'{v}' is not a number")))?;
        p.insert(k.to_string(), x);
    }
    let get = |k: &str| p.get(k).copied().ok_or_else(|| Error::Param(format!("{name} needs {k}=")));
    let sub = || SubordinatorLaw::new(get("kappa")?, get("alpha")?);
    let value = match name {
        "potential-density" => json!(sub()?.potential_density(get("x")?)),
        "levy-density" => json!(sub()?.levy_density(get("t")?)),
        "levy-tail" => json!(sub()?.levy_tail(get("t")?)),
        "laplace-exponent" => json!(sub()?.laplace_exponent(get("lambda")?)?),
        "hitting-density" => json!(sub()?.hitting_density(get("a")?, get("x")?)),
        "hitting-cdf" => json!(sub()?.hitting_cdf(get("a")?, get("x")?)?),
        "bridge-weight" => json!(ConditionedBridgeLaw::new(get("kappa")?, get("alpha")?)?.bridge_weight(get("x")?, get("y")?)?),
        "gd-hitting-joint" => {
            json!(sc::gd_hitting_joint(get("kappa")?, get("alpha")?, get("a")?, get("b")?, get("x")?, get("y")?)?)
        }
        "gd-density" => json!(an::gd_limit_density(get("kappa")?, get("alpha")?, get("x")?, get("y")?)?),
        "ab-density" => json!(an::ab_limit_density(get("kappa")?, get("alpha")?, get("a")?, get("b")?)?),
        "ab-cdf" => json!(an::ab_limit_cdf(get("kappa")?, get("alpha")?, get("a")?, get("b")?)?),
        "jk-cdf" => json!(an::jk_joint_cdf_limit(get("kappa")?, get("epsilon")?, get("alpha")?, get("a")?, get("b")?)?),
        "not-single-partition" => json!(an::prob_not_single_partition_limit(get("kappa")?, get("epsilon")?, get("alpha")?)?),
        "no-winding-or-covering" => json!(an::prob_no_winding_or_covering_limit(get("kappa")?, get("epsilon")?, get("alpha")?)?),
        "hitting-coefficients" => json!(sc::hitting_coefficients(get("alpha")?, get("r")?, get("horizon")? as usize)?),
        "renewal-jumps" => json!(RenewalLaw::new(get("alpha")?, get("r")?, get("horizon")? as usize)?.w()),
        "halfline" => json!(sc::halfline_kappa0(get("alpha")?, get("s")?)?),
        "escape-probability" => json!(sc::escape_probability(get("alpha")?)?),
        "polylog" => json!(polylog(get("alpha")?, get("s")?)?),
        "zeta" => json!(riemann_zeta(get("alpha")?)?),
        _ => return Err(Error::Param(format!("unknown formula '{name}' (see `loopsoup law --help`)"))),
    };
    Ok(json!({"name": name, "params": p, "value": value}))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Analytic { model: m } => {
            let v = analytic(&model(m)?)?;
            say(&serde_json::to_string_pretty(&v).unwrap());
        }
        Cmd::Sample { model: m, seed, condition, out } => {
            let m = model(m)?;
            let condition: Condition = condition.parse()?;
            let s = sample_soup_conditioned(&m, SeedRecord::new(seed), condition, true)?;
            let loops: Vec<_> = s
                .loops
                .iter()
                .map(|l| json!({"type": l.footprint.loop_type(), "len": l.len, "labels": l.to_loop()}))
                .collect();
            let v = json!({"model": m.params(), "seed": s.seed, "condition": condition, "loops": loops, "clusters": extract_clusters(&m, &s)});
            emit(&serde_json::to_string_pretty(&v).unwrap(), out.as_ref())?;
        }
        Cmd::Law { name, params } => say(&serde_json::to_string_pretty(&law(&name, &params)?).unwrap()),
        Cmd::Bridge { kappa, alpha, n_approx, paths, seed, out } => {
            ConditionedBridgeLaw::new(kappa, alpha)?;
            let law = RenewalLaw::scaled(alpha, kappa, n_approx)?;
            let mut csv = String::from("path,x\n");
            for i in 0..paths {
                let path = sc::sample_bridge_path(&law, &mut SeedRecord::new(seed).replicate(i).rng())?;
                for x in path {
                    let _ = writeln!(csv, "{i},{x}");
                }
            }
            emit(csv.trim_end(), out.as_ref())?;
        }
        Cmd::Experiment { config, preset, seed, out } => {
            let mut cfg = match (config, preset) {
                (Some(path), _) => ExperimentConfig::load(&path)?,
                (None, Some(name)) => ExperimentConfig::preset(name.parse::<ExperimentKind>()?),
                (None, None) => return Err(Error::Param("experiment needs --config or --preset".into())),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(o) = out {
                cfg.output_dir = Some(o);
            }
            let output = run_experiment(&cfg)?;
            let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from(format!("runs/{}", cfg.experiment)));
            output.write_to(&dir)?;
            for c in &output.report.checks {
                say(&format!("{} {}: {:.6} (threshold {:.6})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.threshold));
            }
            say(&format!("wrote {}", dir.display()));
            return Ok(output.report.passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().expect("thread pool already initialised");
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

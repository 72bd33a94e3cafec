mod build;
mod table;
mod verify;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use gapkit::approx::{bicut_2approx, threshold_round_lbc, trivial_multicut};
use gapkit::exact::{exact_interdiction, exact_min_length_bounded_cut, exact_min_multicut, exact_rmfc_decision, rmfc_simulate};
use gapkit::gadgets::Limits;
use gapkit::io::{instance_to_json, parse_instance, schedule_from_json, schedule_to_json, solution_to_json, Provenance, ScheduleJson};
use gapkit::lp::{multicut_lp, short_path_cover_lp};
use gapkit::prob::{connectedness_bound, gamma_rho, maximal_correlation, shift_noise_space, star_copy_space, star_shift_space};
use gapkit::{CutMode, Instance, Problem, Rational, Scalar};
use serde_json::{json, Value};

use build::{format_params, generate, parse_params, regenerate};

#[derive(Parser)]
#[command(name = "gapkit", version, about = "Gap instances, dictatorship tests and exact cut solvers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for random instances and unique games.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node guard for generators.
    #[arg(long, global = true)]
    max_nodes: Option<u128>,
    /// Cut mode for random instances (vertex or edge).
    #[arg(long, global = true)]
    mode: Option<CutMode>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated instance as JSON.
    Generate {
        /// saks, dict-m, dict-e, dict-v, dict-f or random.
        family: String,
        /// Comma-separated key=value pairs, e.g. `r=3,k=2`.
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Check a generated instance against its completeness claim.
    Verify {
        /// Instance file with provenance; omit to use --family/--params.
        file: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value = "")]
        params: String,
        /// Dictator coordinate, counted from 1.
        #[arg(long, default_value_t = 1)]
        q: usize,
        /// Check this cut (or schedule) instead of the dictator cut.
        #[arg(long)]
        cut: Option<PathBuf>,
        /// Save the cut that was checked.
        #[arg(long)]
        emit_cut: Option<PathBuf>,
    },
    /// Solve the path-covering LP relaxation.
    Lp {
        file: PathBuf,
        /// Length bound override for length-bounded instances.
        #[arg(long)]
        ell: Option<u64>,
    },
    /// Solve exactly by branch and bound.
    Exact {
        file: PathBuf,
        #[arg(long)]
        ell: Option<u64>,
    },
    /// Run the baseline approximation for the instance's problem.
    Approx {
        file: PathBuf,
        #[arg(long)]
        ell: Option<u64>,
    },
    /// Longest s-t distance reachable within a removal budget.
    Interdict {
        file: PathBuf,
        #[arg(long)]
        budget: String,
    },
    /// Simulate a firefighter schedule, decide a budget, or find the least budget.
    Rmfc {
        file: PathBuf,
        /// Schedule to simulate
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Per-day budget to decide, e.g. `3/2`
        #[arg(long)]
        budget: Option<String>,
    },
    /// CSV of LP value, integral value and gap over a parameter sweep.
    GapTable {
        family: String,
        /// Fixed parameters.
        #[arg(long, default_value = "")]
        params: String,
        /// `name=lo..hi` or `name=v1,v2`; repeatable, first is outermost.
        #[arg(long)]
        sweep: Vec<String>,
        /// Fill wall_ms with measured times (otherwise 0).
        #[arg(long)]
        timing: bool,
    },
    /// Probability that rho-correlated Gaussians fall in the lower-a and upper-b tails.
    Gamma {
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
    },
    /// Maximal correlation of one of the built-in correlated spaces.
    Correlation {
        /// shift, star-shift or star-copy.
        #[arg(long, default_value = "shift")]
        space: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        eps: Option<String>,
    },
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub(crate) fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<(Instance, Option<Provenance>)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn rational(text: &str) -> Result<Rational> {
    Ok(Rational::from_wire(text)?)
}

fn ell_of(inst: &Instance, ell: Option<u64>) -> Result<u64> {
    Ok(ell.unwrap_or(inst.length_bound()?.2))
}

fn pretty(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn run(cli: Cli) -> Result<bool> {
    let limits = cli.max_nodes.map(Limits::with_max_nodes).unwrap_or_default();
    let out = cli.out.as_deref();
    match cli.cmd {
        Cmd::Generate { family, params } => {
            let gen = generate(&family, &parse_params(&params)?, cli.seed, cli.mode, &limits)?;
            let doc = instance_to_json(gen.built.instance(), Some(gen.provenance));
            write_text(out, &serde_json::to_string_pretty(&doc)?)?;
        }
        Cmd::Verify { file, family, params, q, cut, emit_cut } => {
            let (built, inst, label) = match (file, family) {
                (Some(path), None) => {
                    let (inst, prov) = load(&path)?;
                    let prov = prov.ok_or_else(|| anyhow!("{} has no provenance to verify against", path.display()))?;
                    let label = format!("{}({})", prov.generator, format_params(&prov.params));
                    (regenerate(&prov, &limits)?.built, inst, label)
                }
                (None, Some(family)) => {
                    let gen = generate(&family, &parse_params(&params)?, cli.seed, cli.mode, &limits)?;
                    let inst = gen.built.instance().clone();
                    let label = format!("{}({})", family, format_params(&gen.provenance.params));
                    (gen.built, inst, label)
                }
                _ => bail!("give either an instance file or --family"),
            };
            let rep = verify::verify(&built, &inst, q, cut.as_deref(), emit_cut.as_deref())?;
            let mut text = format!("{label}\n");
            for line in &rep.lines {
                text.push_str(line);
                text.push('\n');
            }
            text.push_str(if rep.passed { "PASS" } else { "FAIL" });
            write_text(out, &text)?;
            return Ok(rep.passed);
        }
        Cmd::Lp { file, ell } => {
            let (inst, _) = load(&file)?;
            let lp = match &inst.problem {
                Problem::Multicut { .. } => multicut_lp(&inst)?,
                Problem::LengthBound { .. } => short_path_cover_lp(&inst, ell_of(&inst, ell)?)?,
                Problem::Rmfc { .. } => bail!("firefighter instances have no path-covering LP"),
            };
            let space = inst.space();
            let x: serde_json::Map<String, Value> = lp
                .x
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_negligible())
                .map(|(i, v)| (inst.graph.describe(space.element(i)), Value::String(v.to_wire())))
                .collect();
            let doc = json!({"value": lp.value.to_wire(), "rows": lp.rows, "rounds": lp.rounds, "x": x});
            write_text(out, &pretty(&doc)?)?;
        }
        Cmd::Exact { file, ell } => {
            let (inst, _) = load(&file)?;
            let sol = match &inst.problem {
                Problem::Multicut { .. } => exact_min_multicut(&inst)?,
                Problem::LengthBound { .. } => exact_min_length_bounded_cut(&inst, ell_of(&inst, ell)?)?,
                Problem::Rmfc { .. } => bail!("use the rmfc command for firefighter instances"),
            };
            write_text(out, &serde_json::to_string_pretty(&solution_to_json(&inst.graph, &sol))?)?;
            return Ok(sol.verified);
        }
        Cmd::Approx { file, ell } => {
            let (inst, _) = load(&file)?;
            let (algorithm, sol, factor) = match &inst.problem {
                Problem::Multicut { pairs } => {
                    let bicut = pairs.len() == 2 && pairs[0] == (pairs[1].1, pairs[1].0);
                    if bicut {
                        ("bicut-2approx", bicut_2approx(&inst)?, "2".to_string())
                    } else {
                        ("trivial-multicut", trivial_multicut(&inst)?, pairs.len().to_string())
                    }
                }
                Problem::LengthBound { .. } => {
                    let bound = ell_of(&inst, ell)?;
                    let lp = short_path_cover_lp(&inst, bound)?;
                    let sol = threshold_round_lbc(&inst, bound, &lp.x)?;
                    if !(sol.cost <= Rational::from_count(bound.saturating_sub(1) as usize) * lp.value.clone()) {
                        bail!("rounded cost {} exceeds (ell - 1) times the LP value {}", sol.cost, lp.value);
                    }
                    ("threshold-rounding", sol, format!("cost <= {} x LP, LP = {}", bound.saturating_sub(1), lp.value))
                }
                Problem::Rmfc { .. } => bail!("no approximation is provided for firefighter instances"),
            };
            let doc = json!({
                "algorithm": algorithm,
                "guarantee": factor,
                "solution": serde_json::to_value(solution_to_json(&inst.graph, &sol))?,
            });
            write_text(out, &pretty(&doc)?)?;
            return Ok(sol.verified);
        }
        Cmd::Interdict { file, budget } => {
            let (inst, _) = load(&file)?;
            let budget = rational(&budget)?;
            let (dist, sol) = exact_interdiction(&inst, &budget)?;
            let doc = json!({
                "budget": budget.to_wire(),
                "distance": dist.to_string(),
                "solution": serde_json::to_value(solution_to_json(&inst.graph, &sol))?,
            });
            write_text(out, &pretty(&doc)?)?;
            return Ok(sol.verified);
        }
        Cmd::Rmfc { file, schedule, budget } => return rmfc(&file, schedule.as_deref(), budget.as_deref(), out),
        Cmd::GapTable { family, params, sweep, timing } => {
            let spec = table::TableSpec {
                family: &family,
                base: parse_params(&params)?,
                sweeps: sweep.iter().map(|s| table::parse_sweep(s)).collect::<Result<_>>()?,
                seed: cli.seed,
                mode: cli.mode,
                limits,
                timing,
            };
            write_text(out, &table::gap_table(&spec)?)?;
        }
        Cmd::Gamma { rho, a, b } => {
            if !(-1.0..=1.0).contains(&rho) || !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
                bail!("need rho in [-1, 1] and a, b in [0, 1]");
            }
            write_text(out, &pretty(&json!({"rho": rho, "a": a, "b": b, "gamma": gamma_rho(rho, a, b)}))?)?;
        }
        Cmd::Correlation { space, r, eps } => {
            let eps = eps.as_deref().map(rational).transpose()?;
            let need_eps = || eps.clone().ok_or_else(|| anyhow!("--eps is required for {space}"));
            let cs = match space.as_str() {
                "shift" => shift_noise_space::<Rational>(r)?,
                "star-shift" => star_shift_space(r, &need_eps()?)?,
                "star-copy" => star_copy_space(r, &need_eps()?)?,
                other => bail!("unknown space {other:?} (expected shift, star-shift or star-copy)"),
            };
            let bound = connectedness_bound(&cs)?;
            let doc = json!({
                "space": space,
                "r": r,
                "eps": eps.map(|e| e.to_wire()),
                "maximal_correlation": maximal_correlation(&cs)?,
                "alpha": cs.alpha().to_wire(),
                "connectedness_bound": bound.to_wire(),
            });
            write_text(out, &pretty(&doc)?)?;
        }
    }
    Ok(true)
}

/// Cheapest per-day budget that protects the targets, searched over subset
/// sums of the vertex weights.
fn least_rmfc_budget(inst: &Instance) -> Result<Option<Rational>> {
    let weights: Vec<Rational> = inst.graph.nodes().iter().filter_map(|n| n.weight.finite().cloned()).collect();
    if weights.len() > 16 {
        bail!("budget search enumerates subset sums and is limited to 16 cuttable vertices, found {}", weights.len());
    }
    let mut sums = BTreeSet::new();
    for mask in 0u32..1 << weights.len() {
        sums.insert((0..weights.len()).filter(|i| mask >> i & 1 == 1).map(|i| weights[i].clone()).sum::<Rational>());
    }
    let sums: Vec<Rational> = sums.into_iter().collect();
    let (mut lo, mut hi) = (0, sums.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if exact_rmfc_decision(inst, &sums[mid])?.0 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(sums.get(lo).cloned())
}

fn rmfc(file: &Path, schedule: Option<&Path>, budget: Option<&str>, out: Option<&Path>) -> Result<bool> {
    let (inst, _) = load(file)?;
    let g = &inst.graph;
    let budget = budget.map(rational).transpose()?;
    let names = |set: &BTreeSet<usize>| set.iter().map(|&v| g.node(v).name.clone()).collect::<Vec<_>>();
    match (schedule, budget) {
        (Some(path), budget) => {
            let sched = schedule_from_json(g, &read_json::<ScheduleJson>(path)?)?;
            let trace = rmfc_simulate(&inst, &sched.days, budget.as_ref())?;
            let doc = json!({
                "per_day_cost": sched.per_day_cost.iter().map(Scalar::to_wire).collect::<Vec<_>>(),
                "max_day_cost": sched.max_day_cost().to_wire(),
                "burning": trace.burning.iter().map(names).collect::<Vec<_>>(),
                "target_burnt": trace.target_burnt,
                "first_target_day": trace.first_target_day,
            });
            write_text(out, &pretty(&doc)?)?;
            Ok(!trace.target_burnt)
        }
        (None, Some(budget)) => {
            let (saved, sched) = exact_rmfc_decision(&inst, &budget)?;
            let doc = json!({
                "budget": budget.to_wire(),
                "saved": saved,
                "schedule": sched.map(|s| serde_json::to_value(schedule_to_json(g, &s))).transpose()?,
            });
            write_text(out, &pretty(&doc)?)?;
            Ok(true)
        }
        (None, None) => {
            let best = least_rmfc_budget(&inst)?;
            let sched = match &best {
                Some(b) => exact_rmfc_decision(&inst, b)?.1,
                None => None,
            };
            let doc = json!({
                "least_budget": best.map(|b| b.to_wire()),
                "schedule": sched.map(|s| serde_json::to_value(schedule_to_json(g, &s))).transpose()?,
            });
            write_text(out, &pretty(&doc)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{Common, ConstructionConfig, ConstructionInputs, RunConfig};
use super::verify::verify_constructed;
use super::{CliError, Command, CommonArgs, ConstructionArgs};
use crate::analysis::{
    first_moment_log_bound, independence_series, smallest_s_below, BoundVariant, SeriesEntry,
    SeriesMode, SeriesOptions, SeriesReport,
};
use crate::constructions::{
    explicit_power_set, multi_jump_product, sample_jump_graph, sample_simple_jump_graph,
    ConstructedGraph, JumpParams,
};
use crate::graph::{deserialize, is_independent_tuples, power_view, serialize, MaterializationCap};
use crate::solver::{
    max_independent_set, max_independent_set_parallel, MisResult, MisStatus, SolverBudget,
};

pub(super) fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Construct {
            common,
            construction,
        } => construct(&common, &construction),
        Command::Series {
            graph,
            k_max,
            mode,
            common,
        } => series(&graph, k_max, mode.into(), &common),
        Command::JumpDemo {
            nu,
            vertices,
            common,
        } => jump_demo(nu, vertices, &common),
        Command::MultiJump {
            nus,
            n1,
            alpha,
            k_max,
            mode,
            graph,
            common,
        } => {
            let inputs = ConstructionArgs {
                multi: true,
                nus,
                n1,
                alpha,
                ..Default::default()
            };
            multi_jump(&inputs, k_max, mode.into(), graph.as_deref(), &common)
        }
        Command::McAlpha {
            nu,
            vertices,
            trials,
            threshold,
            common,
        } => mc_alpha(nu, vertices, trials, threshold, &common),
        Command::Verify {
            graph,
            k_max,
            common,
        } => verify(&graph, k_max, &common),
    }
}

fn inputs(args: &ConstructionArgs, common: &Common) -> ConstructionInputs {
    let construction = if args.multi {
        Some("product".to_string())
    } else if args.simple {
        Some("simple".to_string())
    } else {
        None
    };
    ConstructionInputs {
        construction,
        nu: args.nu,
        n: args.n,
        nus: args.nus.clone(),
        n1: args.n1,
        first_size: None,
        alpha: args.alpha,
        seed: common.seed,
        seeds: None,
    }
    .merge_file(&common.file)
}

/// Samples the graph described by `cc`.
pub fn build(
    cc: &ConstructionConfig,
    cap: MaterializationCap,
) -> Result<ConstructedGraph, CliError> {
    Ok(match cc {
        ConstructionConfig::Canonical { .. } => sample_jump_graph(&cc.jump_params()?),
        ConstructionConfig::Simple { .. } => sample_simple_jump_graph(&cc.jump_params()?),
        ConstructionConfig::Product { .. } => multi_jump_product(&cc.multi_spec()?, cap)?,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let f = File::create(path).map_err(|e| crate::Error::io(path, e))?;
    serde_json::to_writer_pretty(BufWriter::new(f), value).map_err(crate::Error::from)?;
    Ok(())
}

fn construct(args: &CommonArgs, cargs: &ConstructionArgs) -> Result<(), CliError> {
    let common = args.resolve()?;
    let cc = inputs(cargs, &common).resolve()?;
    let out = common
        .out
        .clone()
        .ok_or_else(|| CliError::Usage("construct needs --out <graph file>".into()))?;
    let mut rc = RunConfig::new("construct", &common);
    rc.construction = Some(cc.clone());
    let started = Instant::now();
    let g = build(&cc, common.cap)?;
    let mut meta = g.meta();
    meta.config = Some(rc.to_value());
    serialize(&out, &g.graph, Some(&meta))?;
    info!("constructed in {:?}", started.elapsed());
    println!(
        "wrote {} ({} vertices, {} edges, {} removed) and {}",
        out.display(),
        g.graph.vertex_count(),
        g.graph.edge_count(),
        g.removed_edges.len(),
        crate::graph::GraphMeta::sidecar_path(&out).display()
    );
    Ok(())
}

fn load(path: &Path) -> Result<ConstructedGraph, CliError> {
    let (graph, meta) = deserialize(path)?;
    Ok(match meta {
        Some(m) => ConstructedGraph::from_meta(graph, &m)?,
        None => ConstructedGraph::plain(graph),
    })
}

fn series_options(
    common: &Common,
    k_max: usize,
    mode: SeriesMode,
) -> Result<SeriesOptions, CliError> {
    if k_max == 0 {
        return Err(CliError::Usage("--k-max must be at least 1".into()));
    }
    Ok(SeriesOptions {
        k_max,
        mode,
        budget: common.budget()?,
        cap: common.cap,
        threads: common.threads,
        seed: common.seed,
        ..Default::default()
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    k: usize,
    alpha_lower: u64,
    alpha_upper: Option<u64>,
    alpha_exact: Option<u64>,
    a_k_lower: f64,
    a_k_upper: Option<f64>,
    method: String,
    upper_source: Option<&'a str>,
    search_nodes: u64,
    elapsed_secs: f64,
}

fn write_series(report: &SeriesReport, json: &Path) -> Result<PathBuf, CliError> {
    write_json(json, report)?;
    let csv_path = json.with_extension("csv");
    let mut w = csv::Writer::from_path(&csv_path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", csv_path.display())))?;
    for e in &report.entries {
        let method: Vec<String> = e
            .method
            .iter()
            .map(|m| {
                serde_json::to_value(m)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default()
            })
            .collect();
        w.serialize(CsvRow {
            k: e.k,
            alpha_lower: e.alpha_lower,
            alpha_upper: e.alpha_upper,
            alpha_exact: e.alpha_exact,
            a_k_lower: e.a_k_lower,
            a_k_upper: e.a_k_upper,
            method: method.join("+"),
            upper_source: e.upper_source.as_deref(),
            search_nodes: e.search_nodes,
            elapsed_secs: e.elapsed_secs,
        })
        .map_err(|e| CliError::Usage(format!("{}: {e}", csv_path.display())))?;
    }
    w.flush().map_err(|e| crate::Error::io(&csv_path, e))?;
    Ok(csv_path)
}

fn print_series(entries: &[SeriesEntry]) {
    println!(
        "{:>3}  {:>12}  {:>12}  {:>10}  {:>10}  method",
        "k", "alpha_lower", "alpha_upper", "a_k_lower", "a_k_upper"
    );
    for e in entries {
        println!(
            "{:>3}  {:>12}  {:>12}  {:>10.4}  {:>10}  {:?}",
            e.k,
            e.alpha_lower,
            e.alpha_upper.map_or("-".into(), |u| u.to_string()),
            e.a_k_lower,
            e.a_k_upper.map_or("-".into(), |u| format!("{u:.4}")),
            e.method
        );
    }
}

fn finish_series(report: &SeriesReport) -> Result<(), CliError> {
    if !report.monotone_violations.is_empty() {
        return Err(CliError::Verification(
            report
                .monotone_violations
                .iter()
                .map(|v| {
                    format!(
                        "a_{} = {} < a_{} = {}",
                        v.multiple, v.a_multiple, v.k, v.a_k
                    )
                })
                .collect(),
        ));
    }
    if report.exact_incomplete {
        return Err(CliError::BudgetExhausted(
            "some exact solve did not finish".into(),
        ));
    }
    Ok(())
}

fn series(
    graph: &Path,
    k_max: Option<usize>,
    mode: SeriesMode,
    args: &CommonArgs,
) -> Result<(), CliError> {
    let common = args.resolve()?;
    let k_max = k_max.or(common.file.k_max).unwrap_or(2);
    let opts = series_options(&common, k_max, mode)?;
    let mut rc = RunConfig::new("series", &common);
    rc.k_max = Some(k_max);
    rc.mode = Some(mode);
    rc.input = Some(graph.to_path_buf());
    let g = load(graph)?;
    let mut report = independence_series(&g, &opts)?;
    report.config = rc.to_value();
    let json = common.out.clone().unwrap_or_else(|| {
        let mut s = graph.as_os_str().to_owned();
        s.push(".series.json");
        PathBuf::from(s)
    });
    let csv = write_series(&report, &json)?;
    print_series(&report.entries);
    println!("capacity >= {:.4}", report.capacity_lower);
    println!("wrote {} and {}", json.display(), csv.display());
    finish_series(&report)
}

fn solve(g: &crate::Graph, budget: &SolverBudget, threads: Option<usize>) -> MisResult {
    match threads {
        Some(t) if t > 1 => max_independent_set_parallel(g, budget, t),
        _ => max_independent_set(g, budget),
    }
}

/// Smallest `t` with `t^nu >= n`.
fn ceil_root(n: usize, nu: usize) -> usize {
    let mut t = (n as f64).powf(1.0 / nu as f64).floor() as usize;
    while (t as u128).pow(nu as u32) < n as u128 {
        t += 1;
    }
    while t > 1 && ((t - 1) as u128).pow(nu as u32) >= n as u128 {
        t -= 1;
    }
    t
}

#[derive(Serialize)]
struct MomentRow {
    s: usize,
    log10_bound: f64,
}

#[derive(Serialize)]
struct DemoReport {
    config: serde_json::Value,
    nu: usize,
    #[serde(rename = "N")]
    vertex_count: usize,
    certificate_size: usize,
    certificate_verified: bool,
    a_nu_lower: f64,
    target: usize,
    target_status: MisStatus,
    alpha1_lower: usize,
    alpha1_upper: Option<usize>,
    alpha1_exact: Option<usize>,
    a1_upper: Option<usize>,
    ratio_lower: Option<f64>,
    search_nodes: u64,
    elapsed_secs: f64,
    first_moment: Vec<MomentRow>,
    caveat: Option<String>,
}

fn jump_demo(
    nu: Option<usize>,
    vertices: Option<usize>,
    args: &CommonArgs,
) -> Result<(), CliError> {
    let common = args.resolve()?;
    let nu = nu.or(common.file.nu).unwrap_or(2);
    let big_n = vertices.or(common.file.vertices).unwrap_or(1024);
    if nu < 2 || !big_n.is_multiple_of(nu) || big_n / nu < 2 {
        return Err(CliError::Usage(format!(
            "N = {big_n} must be a multiple of nu = {nu} with N >= 2 nu"
        )));
    }
    let params = JumpParams::new(nu, big_n / nu, common.seed)?;
    let mut rc = RunConfig::new("jump-demo", &common);
    rc.construction = Some(ConstructionConfig::Canonical {
        nu,
        n: params.n(),
        seed: params.seed(),
    });
    rc.vertices = Some(big_n);
    let started = Instant::now();
    let g = sample_jump_graph(&params);

    let cert = explicit_power_set(&params, nu);
    let verified = is_independent_tuples(&power_view(&g.graph, nu)?, &cert)?;
    let a_nu = (cert.len() as f64).powf(1.0 / nu as f64);

    let budget = common.budget()?;
    let target = ceil_root(big_n, nu);
    let refute = solve(&g.graph, &budget.with_target(target), common.threads);
    info!(
        "target {target}: {:?} after {} nodes",
        refute.status, refute.search_nodes
    );
    let mut nodes = refute.search_nodes;
    let mut lower = refute.size;
    let mut upper = refute.certified_upper;
    if refute.status != MisStatus::Exact {
        let exact = solve(&g.graph, &budget, common.threads);
        nodes += exact.search_nodes;
        lower = lower.max(exact.size);
        if let Some(u) = exact.certified_upper {
            upper = Some(upper.map_or(u, |v| v.min(u)));
        }
    }
    let exact = upper.filter(|&u| u == lower);

    let first_moment = (2.max(lower.saturating_sub(2))..=target.max(lower + 2))
        .map(|s| {
            Ok(MomentRow {
                s,
                log10_bound: first_moment_log_bound(nu, big_n, s, BoundVariant::Base)?
                    / std::f64::consts::LN_10,
            })
        })
        .collect::<Result<Vec<_>, crate::Error>>()?;
    let caveat = match upper {
        Some(u) if (u as f64) < a_nu => None,
        _ => Some(format!(
            "at N = {big_n} the a_1 bracket does not fall below the certificate; the jump is asymptotic in N"
        )),
    };
    let report = DemoReport {
        config: rc.to_value(),
        nu,
        vertex_count: big_n,
        certificate_size: cert.len(),
        certificate_verified: verified,
        a_nu_lower: a_nu,
        target,
        target_status: refute.status,
        alpha1_lower: lower,
        alpha1_upper: upper,
        alpha1_exact: exact,
        a1_upper: upper,
        ratio_lower: upper.map(|u| a_nu / u as f64),
        search_nodes: nodes,
        elapsed_secs: started.elapsed().as_secs_f64(),
        first_moment,
        caveat,
    };

    println!("nu = {nu}, N = {big_n}, seed = {}", params.seed());
    println!(
        "a_{nu} >= {:.4} (certificate of {} tuples, independent: {verified})",
        a_nu,
        cert.len()
    );
    match (exact, upper) {
        (Some(a), _) => println!("a_1 = {a}"),
        (None, Some(u)) => println!("a_1 in [{lower}, {u}]"),
        (None, None) => println!("a_1 >= {lower} (no upper bound within budget)"),
    }
    if let Some(r) = report.ratio_lower {
        println!("a_{nu}/a_1 >= {r:.4}");
    }
    let focus = upper.unwrap_or(lower) + 1;
    for row in report
        .first_moment
        .iter()
        .filter(|r| (focus..focus + 3).contains(&r.s) || r.s == target)
    {
        println!(
            "  union bound at s = {:>3}: 10^{:.2}",
            row.s, row.log10_bound
        );
    }
    if let Some(c) = &report.caveat {
        println!("note: {c}");
    }
    println!("{nodes} search nodes, {:.3}s", report.elapsed_secs);
    if let Some(out) = &common.out {
        write_json(out, &report)?;
        println!("wrote {}", out.display());
    }
    if !verified {
        return Err(CliError::Verification(vec![
            "certificate not independent".into()
        ]));
    }
    Ok(())
}

#[derive(Serialize)]
struct MultiReport<'a> {
    sizes: &'a [usize],
    achieved_ratios: Vec<f64>,
    /// `(nu_i, a_nu_i lower, best a_k lower for k < nu_i)`.
    jumps: Vec<(usize, f64, f64)>,
    series: &'a SeriesReport,
}

fn multi_jump(
    cargs: &ConstructionArgs,
    k_max: Option<usize>,
    mode: SeriesMode,
    graph_out: Option<&Path>,
    args: &CommonArgs,
) -> Result<(), CliError> {
    let common = args.resolve()?;
    let cc = inputs(cargs, &common).resolve()?;
    let spec = cc.multi_spec()?;
    let k_max = k_max
        .or(common.file.k_max)
        .unwrap_or(*spec.nus().last().expect("validated spec"));
    let opts = series_options(&common, k_max, mode)?;
    let mut rc = RunConfig::new("multi-jump", &common);
    rc.construction = Some(cc.clone());
    rc.k_max = Some(k_max);
    rc.mode = Some(mode);
    let g = build(&cc, common.cap)?;
    if let Some(path) = graph_out {
        let mut meta = g.meta();
        meta.config = Some(rc.to_value());
        serialize(path, &g.graph, Some(&meta))?;
        println!("wrote {}", path.display());
    }
    let mut report = independence_series(&g, &opts)?;
    report.config = rc.to_value();
    println!(
        "factor sizes {:?}, total {} vertices",
        spec.sizes(),
        g.graph.vertex_count()
    );
    print_series(&report.entries);
    let jumps: Vec<(usize, f64, f64)> = spec
        .nus()
        .iter()
        .filter(|&&nu| nu <= k_max)
        .map(|&nu| {
            let at = report.entries[nu - 1].a_k_lower;
            let before = report.entries[..nu - 1]
                .iter()
                .map(|e| e.a_k_lower)
                .fold(0.0, f64::max);
            (nu, at, before)
        })
        .collect();
    for &(nu, at, before) in &jumps {
        println!("jump at {nu}: a_{nu} >= {at:.4}, max earlier lower bound {before:.4}");
    }
    if let Some(out) = &common.out {
        let multi = MultiReport {
            sizes: spec.sizes(),
            achieved_ratios: spec.achieved_ratios(),
            jumps,
            series: &report,
        };
        write_json(out, &multi)?;
        let csv = write_series(&report, &out.with_extension("series.json"))?;
        println!("wrote {} and {}", out.display(), csv.display());
    }
    finish_series(&report)
}

#[derive(Serialize)]
struct McReport {
    config: serde_json::Value,
    nu: usize,
    #[serde(rename = "N")]
    vertex_count: usize,
    trials: usize,
    threshold: f64,
    alphas: Vec<usize>,
    histogram: BTreeMap<usize, usize>,
    s_star: Option<usize>,
    at_or_above_s_star: usize,
    short_pairs_always_non_edges: Option<bool>,
    search_nodes: u64,
    elapsed_secs: f64,
}

fn mc_alpha(
    nu: Option<usize>,
    vertices: Option<usize>,
    trials: Option<usize>,
    threshold: f64,
    args: &CommonArgs,
) -> Result<(), CliError> {
    let common = args.resolve()?;
    let nu = nu.or(common.file.nu).unwrap_or(2);
    let big_n = vertices.or(common.file.vertices).unwrap_or(32);
    let trials = trials.or(common.file.trials).unwrap_or(200);
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if nu < 2 || !big_n.is_multiple_of(nu) || big_n / nu < 2 {
        return Err(CliError::Usage(format!(
            "N = {big_n} must be a multiple of nu = {nu} with N >= 2 nu"
        )));
    }
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(CliError::Usage("--threshold must be positive".into()));
    }
    let base = JumpParams::new(nu, big_n / nu, common.seed)?;
    let mut rc = RunConfig::new("mc-alpha", &common);
    rc.construction = Some(ConstructionConfig::Canonical {
        nu,
        n: base.n(),
        seed: common.seed,
    });
    rc.trials = Some(trials);
    rc.vertices = Some(big_n);
    let budget = common.budget()?;
    let started = Instant::now();

    let results: Vec<(MisResult, bool)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let g = sample_jump_graph(&base.with_seed(common.seed.wrapping_add(i)));
            let short_ok = (0..big_n / 2).all(|x| !g.graph.has_edge(x, x + big_n / 2));
            (max_independent_set(&g.graph, &budget), short_ok)
        })
        .collect();
    if let Some(i) = results.iter().position(|(r, _)| !r.is_exact()) {
        return Err(CliError::BudgetExhausted(format!(
            "trial {i} (seed {}) did not finish",
            common.seed.wrapping_add(i as u64)
        )));
    }
    let alphas: Vec<usize> = results.iter().map(|(r, _)| r.size).collect();
    let mut histogram = BTreeMap::new();
    for &a in &alphas {
        *histogram.entry(a).or_insert(0) += 1;
    }
    let s_star = smallest_s_below(nu, big_n, trials, threshold)?;
    let above = s_star.map_or(0, |s| alphas.iter().filter(|&&a| a >= s).count());
    let report = McReport {
        config: rc.to_value(),
        nu,
        vertex_count: big_n,
        trials,
        threshold,
        histogram,
        s_star,
        at_or_above_s_star: above,
        short_pairs_always_non_edges: nu
            .is_multiple_of(2)
            .then(|| results.iter().all(|(_, s)| *s)),
        search_nodes: results.iter().map(|(r, _)| r.search_nodes).sum(),
        elapsed_secs: started.elapsed().as_secs_f64(),
        alphas,
    };
    println!("nu = {nu}, N = {big_n}, {trials} trials");
    for (a, c) in &report.histogram {
        println!(
            "  alpha = {a:>3}: {c:>6} {}",
            "#".repeat((60 * c).div_ceil(trials))
        );
    }
    match s_star {
        Some(s) => println!("s* = {s} (trials * bound < {threshold}); {above} samples reach it"),
        None => println!("no s <= N brings trials * bound below {threshold}"),
    }
    if let Some(ok) = report.short_pairs_always_non_edges {
        println!("short-class pairs removed in every sample: {ok}");
    }
    if let Some(out) = &common.out {
        write_json(out, &report)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    config: serde_json::Value,
    passed: bool,
    checks: &'a [super::Check],
}

fn verify(graph: &Path, k_max: Option<usize>, args: &CommonArgs) -> Result<(), CliError> {
    let common = args.resolve()?;
    let mut rc = RunConfig::new("verify", &common);
    rc.input = Some(graph.to_path_buf());
    rc.k_max = k_max;
    let g = load(graph)?;
    let checks = verify_constructed(&g, k_max.or(common.file.k_max), common.cap)?;
    for c in &checks {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    if let Some(out) = &common.out {
        write_json(
            out,
            &VerifyReport {
                config: rc.to_value(),
                passed: failed.is_empty(),
                checks: &checks,
            },
        )?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed))
    }
}

//! The independence series `a_k = alpha(G^k)^(1/k)` with per-k provenance.

use std::time::Instant;

use log::{debug, info, warn};
use serde::{Deserialize, Serialize};

use super::bounds::{theoretical_bounds, BoundsRecord};
use crate::constructions::{ConstructedGraph, ConstructionKind};
use crate::error::Result;
use crate::graph::{
    is_independent_tuples, power_view, strong_power, GraphMeta, MaterializationCap, TupleVertex,
};
use crate::solver::{
    clique_cover_upper_bound, local_search_lower_bound, max_independent_set,
    max_independent_set_parallel, MisStatus, SolverBudget,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesMode {
    /// Exact solve wherever `G^k` fits under the cap.
    Exact,
    /// Exact solve under the cap, local search on implicit powers beyond it.
    #[default]
    Auto,
    /// Certificates and product bounds only.
    CertificateOnly,
}

#[derive(Clone, Debug)]
pub struct SeriesOptions {
    pub k_max: usize,
    pub mode: SeriesMode,
    pub budget: SolverBudget,
    pub cap: MaterializationCap,
    pub threads: Option<usize>,
    /// Largest implicit power local search is run on.
    pub local_search_limit: usize,
    /// Largest certificate re-verified pair by pair.
    pub certificate_verify_limit: usize,
    pub seed: u64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            k_max: 2,
            mode: SeriesMode::Auto,
            budget: SolverBudget::unlimited(),
            cap: MaterializationCap::DEFAULT,
            threads: None,
            local_search_limit: 1 << 16,
            certificate_verify_limit: 1 << 16,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Certificate,
    LocalSearch,
    ProductBound,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerSources {
    pub certificate: Option<u64>,
    pub search: Option<u64>,
    pub product: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub k: usize,
    pub alpha_lower: u64,
    pub alpha_upper: Option<u64>,
    pub alpha_exact: Option<u64>,
    pub a_k_lower: f64,
    pub a_k_upper: Option<f64>,
    /// Mechanisms attaining `alpha_lower`.
    pub method: Vec<Method>,
    pub sources: LowerSources,
    pub upper_source: Option<String>,
    pub certificate_verified: Option<bool>,
    pub search_status: Option<MisStatus>,
    pub search_nodes: u64,
    pub elapsed_secs: f64,
    pub theory: Vec<BoundsRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneViolation {
    pub k: usize,
    pub multiple: usize,
    pub a_k: f64,
    pub a_multiple: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub graph_meta: GraphMeta,
    #[serde(default)]
    pub config: serde_json::Value,
    pub entries: Vec<SeriesEntry>,
    pub monotone_violations: Vec<MonotoneViolation>,
    /// `max_k a_k_lower`, the best lower bound on the capacity found.
    pub capacity_lower: f64,
    /// Exact mode was requested and some solve ran out of budget.
    pub exact_incomplete: bool,
}

fn root(x: u64, k: usize) -> f64 {
    (x as f64).powf(1.0 / k as f64)
}

const STORED_SET_LIMIT: usize = 1 << 20;

/// Computes entries `k = 1..=k_max`.
///
/// Each entry takes the best of: the construction's certificate (re-verified
/// through the implicit power when small enough), an exact or budgeted solve of
/// the materialized power, local search on the implicit power, and
/// `alpha(G^(i+j)) >= alpha(G^i) alpha(G^j)`. Upper bounds come from completed
/// searches and from `alpha(G^k) <= alpha(G^(k-1)) * cover(G)`.
pub fn independence_series(g: &ConstructedGraph, opts: &SeriesOptions) -> Result<SeriesReport> {
    let base = &g.graph;
    let big_n = base.vertex_count();
    let cover = clique_cover_upper_bound(base) as u64;
    let mut entries: Vec<SeriesEntry> = Vec::with_capacity(opts.k_max);
    // independent sets in G^k as flat indices, kept while small
    let mut sets: Vec<Option<Vec<usize>>> = vec![None; opts.k_max + 1];
    let mut exact_incomplete = false;

    for k in 1..=opts.k_max {
        let started = Instant::now();
        let view = power_view(base, k)?;
        let order = view.vertex_count();
        let mut sources = LowerSources::default();
        let mut certificate_verified = None;
        let mut search_status = None;
        let mut search_nodes = 0;
        let mut upper: Option<(u64, String)> = None;
        let mut best_set: Option<Vec<usize>> = None;
        let mut lowers: Vec<(u64, Method)> = vec![(1, Method::ProductBound)];

        if let Some(size) = g.certificate_size(k) {
            let size = u64::try_from(size).unwrap_or(u64::MAX);
            if size as usize <= opts.certificate_verify_limit {
                let cert = g.certificate(k).unwrap_or_default();
                let ok = is_independent_tuples(&view, &cert)?;
                certificate_verified = Some(ok);
                if ok {
                    sources.certificate = Some(cert.len() as u64);
                    if let Some(flat) = encode_all(&cert, big_n) {
                        best_set = Some(flat);
                    }
                } else {
                    warn!("k={k}: certificate failed verification; ignoring it");
                }
            } else {
                sources.certificate = Some(size);
            }
        }

        let materializable = order.is_some_and(|o| o <= opts.cap.0);
        let run_exact = opts.mode != SeriesMode::CertificateOnly && materializable;
        if run_exact {
            let power = strong_power(base, k, opts.cap)?;
            let result = match opts.threads {
                Some(t) if t > 1 => max_independent_set_parallel(&power, &opts.budget, t),
                _ => max_independent_set(&power, &opts.budget),
            };
            debug!(
                "k={k}: solver {:?} size {} nodes {} in {:?}",
                result.status, result.size, result.search_nodes, result.elapsed
            );
            search_nodes += result.search_nodes;
            search_status = Some(result.status);
            if let Some(u) = result.certified_upper {
                upper = Some((u as u64, format!("{:?}", result.status).to_lowercase()));
            }
            if result.is_exact() {
                lowers.push((result.size as u64, Method::Exact));
            } else {
                if opts.mode == SeriesMode::Exact {
                    exact_incomplete = true;
                }
                lowers.push((result.size as u64, Method::LocalSearch));
            }
            sources.search = Some(result.size as u64);
            if best_set.as_ref().is_none_or(|b| b.len() < result.size) {
                best_set = Some(result.members);
            }
        }

        let mut product_best: Option<(u64, usize)> = None;
        for i in 1..k {
            let v = entries[i - 1]
                .alpha_lower
                .saturating_mul(entries[k - i - 1].alpha_lower);
            if product_best.is_none_or(|(b, _)| v > b) {
                product_best = Some((v, i));
            }
        }
        if let Some((v, i)) = product_best {
            sources.product = Some(v);
            if best_set.as_ref().is_none_or(|b| (b.len() as u64) < v) {
                if let Some(s) = product_set(&sets, i, k - i, big_n) {
                    best_set = Some(s);
                }
            }
        }

        let run_local = opts.mode == SeriesMode::Auto
            && !search_status.is_some_and(|s| s == MisStatus::Exact)
            && order.is_some_and(|o| o <= opts.local_search_limit);
        if run_local {
            let warm = best_set.clone().unwrap_or_default();
            let result =
                local_search_lower_bound(&view, &opts.budget, opts.seed ^ k as u64, &warm)?;
            search_nodes += result.search_nodes;
            sources.search = Some(sources.search.unwrap_or(0).max(result.size as u64));
            lowers.push((result.size as u64, Method::LocalSearch));
            if best_set.as_ref().is_none_or(|b| b.len() < result.size) {
                best_set = Some(result.members);
            }
        }

        if let Some(c) = sources.certificate {
            lowers.push((c, Method::Certificate));
        }
        if let Some(p) = sources.product {
            lowers.push((p, Method::ProductBound));
        }
        let alpha_lower = lowers.iter().map(|&(v, _)| v).max().unwrap_or(1);
        let mut method: Vec<Method> = lowers
            .iter()
            .filter(|&&(v, _)| v == alpha_lower)
            .map(|&(_, m)| m)
            .collect();
        method.sort();
        method.dedup();

        let fiber_upper = match entries.last() {
            Some(prev) => prev.alpha_upper.map(|u| u.saturating_mul(cover)),
            None => Some(cover),
        };
        if let Some(f) = fiber_upper {
            if upper.as_ref().is_none_or(|(u, _)| f < *u) {
                upper = Some((f, "clique_cover".into()));
            }
        }
        let alpha_upper = upper.as_ref().map(|(u, _)| *u);
        let alpha_exact = match (search_status, alpha_upper) {
            (Some(MisStatus::Exact), _) => Some(alpha_lower),
            (_, Some(u)) if u == alpha_lower => Some(alpha_lower),
            _ => None,
        };

        sets[k] = best_set.filter(|s| s.len() <= STORED_SET_LIMIT);
        let theory = theory_for(g, k);
        let entry = SeriesEntry {
            k,
            alpha_lower,
            alpha_upper,
            alpha_exact,
            a_k_lower: root(alpha_lower, k),
            a_k_upper: alpha_upper.map(|u| root(u, k)),
            method,
            sources,
            upper_source: upper.map(|(_, s)| s),
            certificate_verified,
            search_status,
            search_nodes,
            elapsed_secs: started.elapsed().as_secs_f64(),
            theory,
        };
        info!(
            "k={k}: alpha in [{}, {}] a_k >= {:.4} via {:?} ({:.3}s)",
            entry.alpha_lower,
            entry.alpha_upper.map_or("?".into(), |u| u.to_string()),
            entry.a_k_lower,
            entry.method,
            entry.elapsed_secs
        );
        entries.push(entry);
    }

    let monotone_violations = monotone_violations(&entries);
    let capacity_lower = entries.iter().map(|e| e.a_k_lower).fold(0.0, f64::max);
    Ok(SeriesReport {
        graph_meta: g.meta(),
        config: serde_json::Value::Null,
        entries,
        monotone_violations,
        capacity_lower,
        exact_incomplete,
    })
}

fn theory_for(g: &ConstructedGraph, k: usize) -> Vec<BoundsRecord> {
    match g.kind {
        ConstructionKind::Canonical | ConstructionKind::Simple => g
            .jump_params()
            .map(|p| theoretical_bounds(p, k))
            .into_iter()
            .collect(),
        ConstructionKind::Product => g
            .factors
            .iter()
            .filter_map(|f| f.jump_params().map(|p| theoretical_bounds(p, k)))
            .collect(),
        ConstructionKind::Plain => Vec::new(),
    }
}

fn encode_all(tuples: &[TupleVertex], radix: usize) -> Option<Vec<usize>> {
    tuples.iter().map(|t| t.encode(radix)).collect()
}

/// `S_i x S_j` flattened into `G^(i+j)`.
fn product_set(
    sets: &[Option<Vec<usize>>],
    i: usize,
    j: usize,
    radix: usize,
) -> Option<Vec<usize>> {
    let (a, b) = (sets[i].as_ref()?, sets[j].as_ref()?);
    if a.len().checked_mul(b.len())? > STORED_SET_LIMIT {
        return None;
    }
    let shift = radix.checked_pow(j as u32)?;
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        let hi = x.checked_mul(shift)?;
        for &y in b {
            out.push(hi + y);
        }
    }
    Some(out)
}

/// Pairs `k | mk` where both values are exact and `alpha(G^mk) < alpha(G^k)^m`.
pub fn monotone_violations(entries: &[SeriesEntry]) -> Vec<MonotoneViolation> {
    let mut out = Vec::new();
    for e in entries {
        let Some(ak) = e.alpha_exact else { continue };
        for f in entries.iter().filter(|f| f.k > e.k && f.k % e.k == 0) {
            let Some(amk) = f.alpha_exact else { continue };
            let m = (f.k / e.k) as u32;
            if (amk as u128) < (ak as u128).saturating_pow(m) {
                out.push(MonotoneViolation {
                    k: e.k,
                    multiple: f.k,
                    a_k: root(ak, e.k),
                    a_multiple: root(amk, f.k),
                });
            }
        }
    }
    out
}

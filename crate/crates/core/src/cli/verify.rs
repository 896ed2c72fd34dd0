//! Metadata re-checks for constructed graph files.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::{
    explicit_power_set, simple_explicit_set, simple_power_set, ClassIndex, ConstructedGraph,
    ConstructionKind, JumpParams,
};
use crate::graph::{is_independent_tuples, power_view, strong_product, Graph, MaterializationCap};
use crate::Result;

/// Certificates above this size are reported as skipped.
const CERTIFICATE_CHECK_LIMIT: u128 = 1 << 16;
const PRODUCT_SAMPLES: usize = 200_000;
const LISTED_IDS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn list<T: std::fmt::Display>(items: &[T]) -> String {
    let mut s: Vec<String> = items
        .iter()
        .take(LISTED_IDS)
        .map(|i| i.to_string())
        .collect();
    if items.len() > LISTED_IDS {
        s.push(format!("... ({} total)", items.len()));
    }
    s.join(", ")
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Runs every check that applies to `g`'s construction.
///
/// Certificates are re-verified for powers `nu..=k_max` (default: the jump
/// indices themselves).
pub fn verify_constructed(
    g: &ConstructedGraph,
    k_max: Option<usize>,
    cap: MaterializationCap,
) -> Result<Vec<Check>> {
    let mut checks = vec![Check::new(
        "symmetry",
        g.graph.check_symmetric(1 << 16),
        "adjacency symmetric and loop-free",
    )];
    match g.kind {
        ConstructionKind::Canonical => {
            let p = *g.jump_params().expect("canonical graph carries params");
            checks.extend(canonical_checks(g, &p));
            checks.extend(certificate_checks(g, &[p.nu()], k_max)?);
        }
        ConstructionKind::Simple => {
            let p = *g.jump_params().expect("simple graph carries params");
            checks.extend(simple_checks(g, &p));
            let cert = simple_explicit_set(&p, g)?;
            let ok = cert.len() == p.n()
                && is_independent_tuples(&power_view(&g.graph, p.nu())?, &cert)?;
            checks.push(Check::new(
                "row_vectors",
                ok,
                format!("{} row vectors independent in G^{}", cert.len(), p.nu()),
            ));
            checks.extend(certificate_checks(g, &[p.nu()], k_max)?);
        }
        ConstructionKind::Product => {
            for (i, f) in g.factors.iter().enumerate() {
                for c in verify_constructed(f, Some(0), cap)? {
                    checks.push(Check::new(
                        format!("factor[{i}].{}", c.name),
                        c.passed,
                        c.detail,
                    ));
                }
            }
            checks.push(product_structure(g, cap)?);
            let nus: Vec<usize> = g
                .factors
                .iter()
                .filter_map(|f| f.jump_params().map(|p| p.nu()))
                .collect();
            checks.extend(certificate_checks(g, &nus, k_max)?);
        }
        ConstructionKind::Plain => {}
    }
    Ok(checks)
}

fn canonical_checks(g: &ConstructedGraph, p: &JumpParams) -> Vec<Check> {
    let big_n = p.vertex_count();
    let index = ClassIndex::new(*p);
    let mut hits = vec![0usize; index.classes().len()];
    let mut malformed = Vec::new();
    for &(u, v) in &g.removed_edges {
        if u >= v || v >= big_n {
            malformed.push(format!("({u},{v})"));
            continue;
        }
        hits[index.class_of(u, v)] += 1;
    }
    let twice: Vec<usize> = (0..hits.len()).filter(|&c| hits[c] > 1).collect();
    let missed: Vec<usize> = (0..hits.len()).filter(|&c| hits[c] == 0).collect();
    let mut detail = format!("{} classes", hits.len());
    if !twice.is_empty() {
        detail += &format!("; hit more than once: {}", list(&twice));
    }
    if !missed.is_empty() {
        detail += &format!("; never hit: {}", list(&missed));
    }
    if !malformed.is_empty() {
        detail += &format!("; malformed pairs: {}", list(&malformed));
    }
    let classes_ok = twice.is_empty() && missed.is_empty() && malformed.is_empty();
    vec![
        Check::new("one_edge_per_class", classes_ok, detail),
        removed_absent(g),
        edge_count(g, choose2(big_n) - index.classes().len()),
    ]
}

fn simple_checks(g: &ConstructedGraph, p: &JumpParams) -> Vec<Check> {
    let nu = p.nu();
    let mut hits: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut bad = Vec::new();
    for &(u, v) in &g.removed_edges {
        let (ru, rv) = (u / nu, v / nu);
        if u >= v || v >= p.vertex_count() || ru == rv || u % nu != v % nu {
            bad.push(format!("({u},{v})"));
            continue;
        }
        *hits.entry((ru.min(rv), ru.max(rv))).or_default() += 1;
    }
    let mut twice = Vec::new();
    let mut missed = Vec::new();
    for i in 0..p.n() {
        for j in i + 1..p.n() {
            match hits.get(&(i, j)).copied().unwrap_or(0) {
                0 => missed.push(format!("({i},{j})")),
                1 => {}
                _ => twice.push(format!("({i},{j})")),
            }
        }
    }
    let mut detail = format!("{} row pairs", choose2(p.n()));
    if !twice.is_empty() {
        detail += &format!("; hit more than once: {}", list(&twice));
    }
    if !missed.is_empty() {
        detail += &format!("; never hit: {}", list(&missed));
    }
    if !bad.is_empty() {
        detail += &format!("; not a same-column pair: {}", list(&bad));
    }
    let ok = twice.is_empty() && missed.is_empty() && bad.is_empty();
    vec![
        Check::new("one_edge_per_row_pair", ok, detail),
        removed_absent(g),
        edge_count(g, choose2(p.vertex_count()) - choose2(p.n())),
    ]
}

fn removed_absent(g: &ConstructedGraph) -> Check {
    let n = g.graph.vertex_count();
    let present: Vec<String> = g
        .removed_edges
        .iter()
        .filter(|&&(u, v)| u < n && v < n && g.graph.has_edge(u, v))
        .map(|(u, v)| format!("({u},{v})"))
        .collect();
    let detail = if present.is_empty() {
        "all removed pairs are non-edges".to_string()
    } else {
        format!("still present: {}", list(&present))
    };
    Check::new("removed_edges_absent", present.is_empty(), detail)
}

fn edge_count(g: &ConstructedGraph, expected: usize) -> Check {
    let got = g.graph.edge_count();
    Check::new(
        "edge_count",
        got == expected,
        format!("expected {expected}, found {got}"),
    )
}

fn product_structure(g: &ConstructedGraph, cap: MaterializationCap) -> Result<Check> {
    let sizes: Vec<usize> = g.factors.iter().map(|f| f.graph.vertex_count()).collect();
    let total = sizes.iter().try_fold(1usize, |a, &s| a.checked_mul(s));
    if total != Some(g.graph.vertex_count()) {
        return Ok(Check::new(
            "product_structure",
            false,
            format!(
                "factor sizes {sizes:?} do not multiply to {}",
                g.graph.vertex_count()
            ),
        ));
    }
    if g.factors.is_empty() {
        return Ok(Check::new(
            "product_structure",
            false,
            "product without factors",
        ));
    }
    if g.graph.vertex_count() <= cap.0 {
        let mut acc: Graph = g.factors[0].graph.clone();
        for f in &g.factors[1..] {
            acc = strong_product(&acc, &f.graph, cap)?;
        }
        let ok = acc == g.graph;
        return Ok(Check::new(
            "product_structure",
            ok,
            if ok {
                "equals the strong product of its factors"
            } else {
                "differs from the strong product of its factors"
            },
        ));
    }
    let n = g.graph.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let adjacent = |mut a: usize, mut b: usize| {
        for (f, &s) in g.factors.iter().zip(&sizes).rev() {
            if !f.graph.adjacent_or_equal(a % s, b % s) {
                return false;
            }
            a /= s;
            b /= s;
        }
        true
    };
    let bad = (0..PRODUCT_SAMPLES)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .filter(|&(a, b)| a != b && g.graph.has_edge(a, b) != adjacent(a, b))
        .count();
    Ok(Check::new(
        "product_structure",
        bad == 0,
        format!("{bad} mismatches in {PRODUCT_SAMPLES} sampled pairs"),
    ))
}

fn certificate_checks(
    g: &ConstructedGraph,
    nus: &[usize],
    k_max: Option<usize>,
) -> Result<Vec<Check>> {
    let ks: Vec<usize> = match k_max {
        Some(k) => (1..=k)
            .filter(|&k| g.certificate_size(k).is_some())
            .collect(),
        None => nus.to_vec(),
    };
    let mut out = Vec::new();
    for k in ks {
        let Some(size) = g.certificate_size(k) else {
            continue;
        };
        let name = format!("certificate_k{k}");
        if size > CERTIFICATE_CHECK_LIMIT {
            out.push(Check::new(
                name,
                true,
                format!("size {size} above check limit; skipped"),
            ));
            continue;
        }
        let cert = match g.kind {
            ConstructionKind::Canonical => explicit_power_set(g.jump_params().unwrap(), k),
            ConstructionKind::Simple => simple_power_set(g.jump_params().unwrap(), k),
            _ => g.certificate(k).unwrap_or_default(),
        };
        let view = power_view(&g.graph, k)?;
        let independent = is_independent_tuples(&view, &cert)?;
        let ok = independent && cert.len() as u128 == size;
        out.push(Check::new(
            name,
            ok,
            format!(
                "{} of {size} tuples, independent in G^{k}: {independent}",
                cert.len()
            ),
        ));
    }
    Ok(out)
}

use super::classes::enumerate;
use super::{ConstructedGraph, ConstructionKind, ConstructionParams, JumpParams, SamplingRng};
use crate::graph::{Graph, TupleVertex};

/// `K_N` minus one uniformly chosen pair per shift orbit.
///
/// Classes are processed by ascending representative, one draw each.
pub fn sample_jump_graph(params: &JumpParams) -> ConstructedGraph {
    let mut graph = Graph::complete(params.vertex_count()).expect("N >= 4");
    let mut rng = SamplingRng::new(params.seed());
    let removed_edges: Vec<_> = enumerate(params)
        .into_iter()
        .map(|class| {
            let (u, v) = class.members[rng.below(class.size())];
            graph.set_edge(u, v, false);
            (u, v)
        })
        .collect();
    ConstructedGraph {
        graph,
        kind: ConstructionKind::Canonical,
        params: ConstructionParams::Jump(*params),
        removed_edges,
        factors: Vec::new(),
    }
}

/// `N^(k / nu)`, zero when `k < nu`.
pub fn explicit_power_set_size(params: &JumpParams, k: usize) -> u128 {
    if k < params.nu() {
        0
    } else {
        (params.vertex_count() as u128).saturating_pow((k / params.nu()) as u32)
    }
}

/// Independent set of `G^k` valid for every graph sampled with `params`.
///
/// Each block of `nu` coordinates is an orbit `(x, x+n, .., x+(nu-1)n)`; the
/// `k mod nu` trailing coordinates are vertex 0. Empty when `k < nu`.
pub fn explicit_power_set(params: &JumpParams, k: usize) -> Vec<TupleVertex> {
    let (nu, n, big_n) = (params.nu(), params.n(), params.vertex_count());
    if k < nu {
        return Vec::new();
    }
    let blocks = k / nu;
    let total = explicit_power_set_size(params, k);
    let total = usize::try_from(total).expect("certificate too large to enumerate");
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; blocks];
    for _ in 0..total {
        let mut coords = Vec::with_capacity(k);
        for &x in &digits {
            coords.extend((0..nu).map(|t| (x + t * n) % big_n));
        }
        coords.resize(k, 0);
        out.push(TupleVertex(coords));
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < big_n {
                break;
            }
            *d = 0;
        }
    }
    out
}

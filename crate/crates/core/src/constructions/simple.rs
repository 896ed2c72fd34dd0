use super::{ConstructedGraph, ConstructionKind, ConstructionParams, JumpParams, SamplingRng};
use crate::error::{Error, Result};
use crate::graph::{Graph, TupleVertex};

/// Row/column variant: vertex `v_ij = i * nu + j`; for each pair of rows
/// `i < i'` one column `j` is drawn and `v_ij v_i'j` removed.
pub fn sample_simple_jump_graph(params: &JumpParams) -> ConstructedGraph {
    let (nu, rows) = (params.nu(), params.n());
    let mut graph = Graph::complete(params.vertex_count()).expect("N >= 4");
    let mut rng = SamplingRng::new(params.seed());
    let mut removed_edges = Vec::with_capacity(rows * (rows - 1) / 2);
    for i in 0..rows {
        for i2 in i + 1..rows {
            let j = rng.below(nu);
            let (u, v) = (i * nu + j, i2 * nu + j);
            graph.set_edge(u, v, false);
            removed_edges.push((u, v));
        }
    }
    ConstructedGraph {
        graph,
        kind: ConstructionKind::Simple,
        params: ConstructionParams::Jump(*params),
        removed_edges,
        factors: Vec::new(),
    }
}

fn row_vectors(params: &JumpParams) -> Vec<TupleVertex> {
    let nu = params.nu();
    (0..params.n())
        .map(|i| TupleVertex((i * nu..(i + 1) * nu).collect()))
        .collect()
}

/// The `n` row vectors, independent in `G^nu` of a simple construction.
pub fn simple_explicit_set(params: &JumpParams, g: &ConstructedGraph) -> Result<Vec<TupleVertex>> {
    if g.kind != ConstructionKind::Simple {
        return Err(Error::KindMismatch {
            expected: "simple",
            found: g.kind.as_str().into(),
        });
    }
    match g.jump_params() {
        Some(p) if p.nu() == params.nu() && p.n() == params.n() => Ok(row_vectors(params)),
        _ => Err(Error::invalid("parameters do not match the graph")),
    }
}

/// Row vectors repeated over `k / nu` blocks, trailing coordinates 0.
pub fn simple_power_set(params: &JumpParams, k: usize) -> Vec<TupleVertex> {
    let nu = params.nu();
    if k < nu {
        return Vec::new();
    }
    let rows = row_vectors(params);
    let mut out = vec![Vec::with_capacity(k)];
    for _ in 0..k / nu {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                rows.iter().map(move |r| {
                    let mut c = prefix.clone();
                    c.extend_from_slice(r.coords());
                    c
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|mut c| {
            c.resize(k, 0);
            TupleVertex(c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::sample_jump_graph;
    use crate::graph::{is_independent_tuples, power_view};

    #[test]
    fn edge_counts() {
        let g = sample_simple_jump_graph(&JumpParams::new(2, 2, 1).unwrap());
        assert_eq!(g.graph.edge_count(), 5);
        let g = sample_simple_jump_graph(&JumpParams::new(3, 3, 1).unwrap());
        assert_eq!(g.graph.edge_count(), 33);
    }

    #[test]
    fn removed_edges_share_a_column() {
        let p = JumpParams::new(2, 3, 8).unwrap();
        let g = sample_simple_jump_graph(&p);
        assert_eq!(g.removed_edges.len(), 3);
        for &(u, v) in &g.removed_edges {
            assert_eq!(u % 2, v % 2);
            assert_ne!(u / 2, v / 2);
        }
    }

    #[test]
    fn row_set_is_independent() {
        let p = JumpParams::new(2, 2, 3).unwrap();
        let g = sample_simple_jump_graph(&p);
        let s = simple_explicit_set(&p, &g).unwrap();
        assert_eq!(s, vec![TupleVertex(vec![0, 1]), TupleVertex(vec![2, 3])]);
        assert!(is_independent_tuples(&power_view(&g.graph, 2).unwrap(), &s).unwrap());

        let p = JumpParams::new(3, 3, 5).unwrap();
        let g = sample_simple_jump_graph(&p);
        let s = simple_explicit_set(&p, &g).unwrap();
        assert_eq!(s.len(), 3);
        assert!(is_independent_tuples(&power_view(&g.graph, 3).unwrap(), &s).unwrap());
        let s7 = simple_power_set(&p, 7);
        assert_eq!(s7.len(), 9);
        assert!(is_independent_tuples(&power_view(&g.graph, 7).unwrap(), &s7).unwrap());
    }

    #[test]
    fn kind_mismatch() {
        let p = JumpParams::new(2, 2, 3).unwrap();
        let canon = sample_jump_graph(&p);
        assert!(matches!(
            simple_explicit_set(&p, &canon),
            Err(Error::KindMismatch { .. })
        ));
    }
}

#![allow(dead_code)]

use capforge::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_graph(seed: u64, n: usize, density: f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Plain branching on the lowest vertex: `alpha(S) = max(alpha(S - v), 1 + alpha(S - N[v]))`.
pub fn oracle_alpha(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 64, "oracle limited to 64 vertices");
    let closed: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).fold(1u64 << v, |m, u| m | 1 << u))
        .collect();
    fn go(set: u64, closed: &[u64]) -> usize {
        if set == 0 {
            return 0;
        }
        let v = set.trailing_zeros() as usize;
        // v isolated in set: always take it
        if closed[v] & set == 1 << v {
            return 1 + go(set & !(1 << v), closed);
        }
        let take = 1 + go(set & !closed[v], closed);
        let skip = go(set & !(1 << v), closed);
        take.max(skip)
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    go(all, &closed)
}

/// Whether no two distinct members are adjacent, by direct lookup.
pub fn oracle_independent(g: &Graph, members: &[usize]) -> bool {
    members.iter().enumerate().all(|(i, &u)| {
        members[i + 1..]
            .iter()
            .all(|&v| u == v || !g.has_edge(u, v))
    })
}

use crate::bits;
use crate::graph::Graph;

/// Greedy partition of the vertices into cliques, lowest uncovered vertex first.
pub fn clique_cover(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut uncovered = vec![0u64; g.stride()];
    bits::fill_prefix(&mut uncovered, n);
    let mut cliques = Vec::new();
    while let Some(v) = bits::Ones::new(&uncovered).next() {
        bits::clear(&mut uncovered, v);
        let mut clique = vec![v];
        let mut cand: Vec<u64> = uncovered.iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
        while let Some(u) = bits::Ones::new(&cand).next() {
            clique.push(u);
            bits::clear(&mut uncovered, u);
            for (c, r) in cand.iter_mut().zip(g.row(u)) {
                *c &= r;
            }
        }
        cliques.push(clique);
    }
    cliques
}

/// Size of [`clique_cover`]; every independent set meets each clique at most once.
pub fn clique_cover_upper_bound(g: &Graph) -> usize {
    clique_cover(g).len()
}

//! Dense undirected graphs, strong products and implicit strong powers.

mod io;
mod power;

pub use io::{deserialize, read_dimacs, serialize, write_dimacs, GraphMeta, GENERATOR_VERSION};
pub use power::{
    is_independent, is_independent_tuples, power_view, strong_power, strong_product,
    AdjacencyOracle, MaterializationCap, PowerGraphView, TupleVertex,
};

use crate::bits;
use crate::error::{Error, Result};

/// Vertex label in `0..vertex_count`.
pub type VertexId = usize;

/// Undirected simple graph stored as a dense symmetric bit matrix.
///
/// The diagonal is always clear and `has_edge(u, v) == has_edge(v, u)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("vertex_count", &self.n)
            .field("edge_count", &self.edge_count())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let stride = bits::words_for(n);
        Ok(Graph {
            n,
            stride,
            rows: vec![0; n * stride],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for v in 0..n {
            let stride = g.stride;
            let row = &mut g.rows[v * stride..(v + 1) * stride];
            bits::fill_prefix(row, n);
            bits::clear(row, v);
        }
        Ok(g)
    }

    /// Builds a graph from unordered pairs. Duplicate pairs collapse to one edge.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Cycle `0-1-..-(n-1)-0`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!(
                "cycle needs at least 3 vertices, got {n}"
            )));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        bits::get(self.row(u), v)
    }

    /// `u == v` or `u ~ v`.
    #[inline]
    pub fn adjacent_or_equal(&self, u: VertexId, v: VertexId) -> bool {
        u == v || self.has_edge(u, v)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn degree(&self, v: VertexId) -> usize {
        bits::count(self.row(v))
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        bits::Ones::new(self.row(v))
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn complement(&self) -> Graph {
        let mut c = self.clone();
        for v in 0..self.n {
            let row = &mut c.rows[v * self.stride..(v + 1) * self.stride];
            let mut full = vec![0u64; self.stride];
            bits::fill_prefix(&mut full, self.n);
            for (w, f) in row.iter_mut().zip(full) {
                *w = !*w & f;
            }
            bits::clear(row, v);
        }
        c
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut g = Graph::empty(n).expect("non-empty");
        for (u, v) in self.edges() {
            g.set_edge(u, v, true);
        }
        for (u, v) in other.edges() {
            g.set_edge(u + self.n, v + self.n, true);
        }
        g
    }

    #[inline]
    pub(crate) fn row(&self, v: VertexId) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn stride(&self) -> usize {
        self.stride
    }

    pub(crate) fn set_edge(&mut self, u: VertexId, v: VertexId, present: bool) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let s = self.stride;
        if present {
            bits::set(&mut self.rows[u * s..(u + 1) * s], v);
            bits::set(&mut self.rows[v * s..(v + 1) * s], u);
        } else {
            bits::clear(&mut self.rows[u * s..(u + 1) * s], v);
            bits::clear(&mut self.rows[v * s..(v + 1) * s], u);
        }
    }

    pub(crate) fn row_mut(&mut self, v: VertexId) -> &mut [u64] {
        let s = self.stride;
        &mut self.rows[v * s..(v + 1) * s]
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Checks irreflexivity and symmetry. Exhaustive up to `10^4` vertices,
    /// otherwise `samples` pseudo-random pairs.
    pub fn check_symmetric(&self, samples: usize) -> bool {
        if self.n <= 10_000 {
            return (0..self.n)
                .all(|u| !self.has_edge(u, u) && self.neighbors(u).all(|v| self.has_edge(v, u)));
        }
        let mut x = 0x9E37_79B9_7F4A_7C15u64;
        (0..samples).all(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let u = (x % self.n as u64) as usize;
            let v = ((x >> 32) % self.n as u64) as usize;
            !self.has_edge(u, u) && self.has_edge(u, v) == self.has_edge(v, u)
        })
    }
}

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Graph, VertexId};
use crate::bits;
use crate::error::{Error, Result};

/// Largest vertex count a product or power may materialize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaterializationCap(pub usize);

impl MaterializationCap {
    pub const DEFAULT: MaterializationCap = MaterializationCap(20_000);
    pub const ENV_VAR: &'static str = "CAPFORGE_CAP";

    /// `CAPFORGE_CAP` if set and parseable, otherwise the default.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(MaterializationCap)
            .unwrap_or_default()
    }

    pub fn check(self, requested: u128) -> Result<usize> {
        if requested > self.0 as u128 {
            Err(Error::CapExceeded {
                requested,
                cap: self.0,
            })
        } else {
            Ok(requested as usize)
        }
    }
}

impl Default for MaterializationCap {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Anything that can answer adjacency queries over flat vertex indices.
pub trait AdjacencyOracle: Sync {
    /// Number of vertices; saturates at `usize::MAX` for oversized powers.
    fn order(&self) -> usize;
    fn adjacent(&self, u: usize, v: usize) -> bool;
}

impl AdjacencyOracle for Graph {
    fn order(&self) -> usize {
        self.vertex_count()
    }

    #[inline]
    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v)
    }
}

/// Vertex of `G^k`: `k` base-graph coordinates.
///
/// Flat index is mixed radix with coordinate 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TupleVertex(pub Vec<VertexId>);

impl TupleVertex {
    pub fn new(coords: Vec<VertexId>) -> Self {
        TupleVertex(coords)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[VertexId] {
        &self.0
    }

    /// Flat index for base size `radix`, or `None` on overflow.
    pub fn encode(&self, radix: usize) -> Option<usize> {
        self.0.iter().try_fold(0usize, |acc, &c| {
            debug_assert!(c < radix);
            acc.checked_mul(radix)?.checked_add(c)
        })
    }

    pub fn decode(mut flat: usize, radix: usize, k: usize) -> TupleVertex {
        let mut coords = vec![0; k];
        for slot in coords.iter_mut().rev() {
            *slot = flat % radix;
            flat /= radix;
        }
        TupleVertex(coords)
    }
}

/// Implicit `G^k`: answers adjacency without materializing the power.
#[derive(Clone, Copy, Debug)]
pub struct PowerGraphView<'g> {
    base: &'g Graph,
    exponent: usize,
}

pub fn power_view(g: &Graph, k: usize) -> Result<PowerGraphView<'_>> {
    if k == 0 {
        return Err(Error::invalid("power exponent must be at least 1"));
    }
    Ok(PowerGraphView {
        base: g,
        exponent: k,
    })
}

impl<'g> PowerGraphView<'g> {
    pub fn base(&self) -> &'g Graph {
        self.base
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    /// `N^k`, or `None` if it does not fit in `usize`.
    pub fn vertex_count(&self) -> Option<usize> {
        self.base.vertex_count().checked_pow(self.exponent as u32)
    }

    pub fn encode(&self, t: &TupleVertex) -> Option<usize> {
        t.encode(self.base.vertex_count())
    }

    pub fn decode(&self, flat: usize) -> TupleVertex {
        TupleVertex::decode(flat, self.base.vertex_count(), self.exponent)
    }

    pub fn check_tuple(&self, t: &TupleVertex) -> Result<()> {
        if t.len() != self.exponent {
            return Err(Error::TupleLength {
                expected: self.exponent,
                got: t.len(),
            });
        }
        for &c in t.coords() {
            self.base.check_vertex(c)?;
        }
        Ok(())
    }

    /// Strong-power rule: distinct, and every coordinate pair adjacent or equal.
    #[inline]
    pub fn adjacent(&self, u: &TupleVertex, v: &TupleVertex) -> bool {
        self.adjacent_coords(u.coords(), v.coords())
    }

    #[inline]
    pub fn adjacent_coords(&self, u: &[VertexId], v: &[VertexId]) -> bool {
        u != v
            && u.iter()
                .zip(v)
                .all(|(&a, &b)| self.base.adjacent_or_equal(a, b))
    }
}

impl AdjacencyOracle for PowerGraphView<'_> {
    fn order(&self) -> usize {
        self.vertex_count().unwrap_or(usize::MAX)
    }

    fn adjacent(&self, mut u: usize, mut v: usize) -> bool {
        if u == v {
            return false;
        }
        let n = self.base.vertex_count();
        for _ in 0..self.exponent {
            if !self.base.adjacent_or_equal(u % n, v % n) {
                return false;
            }
            u /= n;
            v /= n;
        }
        true
    }
}

/// Strong product `g · h`; vertex `(a, b)` is `a * |V(h)| + b`.
pub fn strong_product(g: &Graph, h: &Graph, cap: MaterializationCap) -> Result<Graph> {
    let (n1, n2) = (g.vertex_count(), h.vertex_count());
    let n = cap.check(n1 as u128 * n2 as u128)?;
    let mut out = Graph::empty(n)?;
    let mut closed_h = vec![0u64; h.stride()];
    for b in 0..n2 {
        closed_h.copy_from_slice(h.row(b));
        bits::set(&mut closed_h, b);
        for a in 0..n1 {
            let v = a * n2 + b;
            let row = out.row_mut(v);
            bits::or_shifted(row, &closed_h, n2, a * n2);
            for a2 in g.neighbors(a) {
                bits::or_shifted(row, &closed_h, n2, a2 * n2);
            }
            bits::clear(row, v);
        }
    }
    Ok(out)
}

/// `G^k` as an iterated strong product, coordinate 0 most significant.
pub fn strong_power(g: &Graph, k: usize, cap: MaterializationCap) -> Result<Graph> {
    if k == 0 {
        return Err(Error::invalid("power exponent must be at least 1"));
    }
    let requested = (g.vertex_count() as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX);
    cap.check(requested)?;
    let mut acc = g.clone();
    for _ in 1..k {
        acc = strong_product(&acc, g, cap)?;
    }
    Ok(acc)
}

const PARALLEL_PAIR_THRESHOLD: usize = 2048;

/// True iff no two distinct members are adjacent. Duplicates are ignored.
pub fn is_independent<A: AdjacencyOracle + ?Sized>(g: &A, members: &[usize]) -> Result<bool> {
    let order = g.order();
    if let Some(&bad) = members.iter().find(|&&v| v >= order) {
        return Err(Error::VertexOutOfRange {
            vertex: bad,
            vertex_count: order,
        });
    }
    let mut s = members.to_vec();
    s.sort_unstable();
    s.dedup();
    let check = |i: usize| s[i + 1..].iter().all(|&v| !g.adjacent(s[i], v));
    Ok(if s.len() >= PARALLEL_PAIR_THRESHOLD {
        (0..s.len()).into_par_iter().all(check)
    } else {
        (0..s.len()).all(check)
    })
}

/// Tuple form of [`is_independent`] on an implicit power.
pub fn is_independent_tuples(view: &PowerGraphView<'_>, members: &[TupleVertex]) -> Result<bool> {
    for t in members {
        view.check_tuple(t)?;
    }
    let mut s: Vec<&[VertexId]> = members.iter().map(|t| t.coords()).collect();
    s.sort_unstable();
    s.dedup();
    let check = |i: usize| s[i + 1..].iter().all(|v| !view.adjacent_coords(s[i], v));
    Ok(if s.len() >= PARALLEL_PAIR_THRESHOLD {
        (0..s.len()).into_par_iter().all(check)
    } else {
        (0..s.len()).all(check)
    })
}

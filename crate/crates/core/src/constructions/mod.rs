//! Random jump-graph constructions and their explicit independent-set certificates.
//!
//! A canonical jump graph on `N = n * nu` vertices starts from `K_N` and deletes
//! one uniformly chosen pair from every shift orbit `{(x + t n, y + t n)}`. The
//! sets `(x, x+n, .., x+(nu-1)n)` are then independent in `G^nu`, while small
//! powers stay close to `log N`.

mod canonical;
pub mod classes;
mod multi;
mod simple;

pub use canonical::{explicit_power_set, explicit_power_set_size, sample_jump_graph};
pub use classes::{class_count, ClassIndex, EdgeClass};
pub use multi::{multi_jump_product, product_certificate, product_certificate_size, MultiJumpSpec};
pub use simple::{sample_simple_jump_graph, simple_explicit_set, simple_power_set};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMeta, TupleVertex, VertexId};

/// Shift-orbit classes for `(nu, n)`, ascending by representative.
pub fn equivalence_classes(nu: usize, n: usize) -> Result<Vec<EdgeClass>> {
    Ok(classes::enumerate(&JumpParams::new(nu, n, 0)?))
}

/// Parameters of a single jump graph: `N = n * nu` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpParams {
    nu: usize,
    n: usize,
    seed: u64,
}

impl JumpParams {
    pub fn new(nu: usize, n: usize, seed: u64) -> Result<Self> {
        if nu < 2 {
            return Err(Error::invalid(format!("nu must be at least 2, got {nu}")));
        }
        if n < 2 {
            return Err(Error::invalid(format!("n must be at least 2, got {n}")));
        }
        n.checked_mul(nu)
            .ok_or_else(|| Error::invalid("n * nu overflows"))?;
        Ok(JumpParams { nu, n, seed })
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `N = n * nu`.
    pub fn vertex_count(&self) -> usize {
        self.n * self.nu
    }

    pub fn with_seed(self, seed: u64) -> Self {
        JumpParams { seed, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    Canonical,
    Simple,
    Product,
    /// A graph with no construction of ours behind it.
    Plain,
}

impl ConstructionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstructionKind::Canonical => "canonical",
            ConstructionKind::Simple => "simple",
            ConstructionKind::Product => "product",
            ConstructionKind::Plain => "plain",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "canonical" => ConstructionKind::Canonical,
            "simple" => ConstructionKind::Simple,
            "product" => ConstructionKind::Product,
            "plain" => ConstructionKind::Plain,
            other => return Err(Error::Metadata(format!("unknown construction {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConstructionParams {
    Jump(JumpParams),
    Multi(MultiJumpSpec),
    None,
}

/// A sampled graph with the parameters and audit trail that produced it.
#[derive(Clone, Debug)]
pub struct ConstructedGraph {
    pub graph: Graph,
    pub kind: ConstructionKind,
    pub params: ConstructionParams,
    /// One pair per class (canonical) or per row pair (simple); empty for products.
    pub removed_edges: Vec<(VertexId, VertexId)>,
    /// Factors of a product, in coordinate order.
    pub factors: Vec<ConstructedGraph>,
}

impl ConstructedGraph {
    pub fn plain(graph: Graph) -> Self {
        ConstructedGraph {
            graph,
            kind: ConstructionKind::Plain,
            params: ConstructionParams::None,
            removed_edges: Vec::new(),
            factors: Vec::new(),
        }
    }

    pub fn jump_params(&self) -> Option<&JumpParams> {
        match &self.params {
            ConstructionParams::Jump(p) => Some(p),
            _ => None,
        }
    }

    /// Explicit independent set in `G^k`, if the construction provides one.
    pub fn certificate(&self, k: usize) -> Option<Vec<TupleVertex>> {
        match (&self.kind, &self.params) {
            (ConstructionKind::Canonical, ConstructionParams::Jump(p)) if k >= p.nu() => {
                Some(explicit_power_set(p, k))
            }
            (ConstructionKind::Simple, ConstructionParams::Jump(p)) if k >= p.nu() => {
                Some(simple_power_set(p, k))
            }
            (ConstructionKind::Product, _) => product_certificate(self, k),
            _ => None,
        }
    }

    /// Size of [`certificate`](Self::certificate) without building it.
    pub fn certificate_size(&self, k: usize) -> Option<u128> {
        match (&self.kind, &self.params) {
            (ConstructionKind::Canonical, ConstructionParams::Jump(p)) if k >= p.nu() => {
                Some(explicit_power_set_size(p, k))
            }
            (ConstructionKind::Simple, ConstructionParams::Jump(p)) if k >= p.nu() => {
                Some((p.n() as u128).saturating_pow((k / p.nu()) as u32))
            }
            (ConstructionKind::Product, _) => product_certificate_size(self, k),
            _ => None,
        }
    }

    pub fn meta(&self) -> GraphMeta {
        let mut meta = GraphMeta::plain(self.graph.vertex_count());
        meta.construction = self.kind.as_str().into();
        meta.removed_edges = self.removed_edges.iter().map(|&(u, v)| [u, v]).collect();
        match &self.params {
            ConstructionParams::Jump(p) => {
                meta.nu = Some(p.nu());
                meta.n = Some(p.n());
                meta.seed = Some(p.seed());
            }
            ConstructionParams::Multi(spec) => {
                meta.nu_list = Some(spec.nus().to_vec());
                meta.first_size = Some(spec.sizes()[0]);
                meta.alpha = Some(spec.alpha());
                meta.seeds = Some(spec.seeds().to_vec());
            }
            ConstructionParams::None => {}
        }
        meta.factors = self.factors.iter().map(ConstructedGraph::meta).collect();
        meta
    }

    /// Rebuilds the construction record for a graph read from disk.
    ///
    /// Factor graphs of a product are rebuilt from their removed-edge lists.
    pub fn from_meta(graph: Graph, meta: &GraphMeta) -> Result<Self> {
        let kind = ConstructionKind::parse(&meta.construction)?;
        if meta.vertex_count != graph.vertex_count() {
            return Err(Error::Metadata("vertex count mismatch".into()));
        }
        let removed_edges: Vec<_> = meta.removed_edges.iter().map(|&[u, v]| (u, v)).collect();
        let params = match kind {
            ConstructionKind::Canonical | ConstructionKind::Simple => {
                let field = |v: Option<usize>, name: &str| {
                    v.ok_or_else(|| {
                        Error::Metadata(format!("{} graph without {name}", kind.as_str()))
                    })
                };
                let p = JumpParams::new(
                    field(meta.nu, "nu")?,
                    field(meta.n, "n")?,
                    meta.seed.unwrap_or(0),
                )
                .map_err(|e| Error::Metadata(e.to_string()))?;
                if p.vertex_count() != graph.vertex_count() {
                    return Err(Error::Metadata(format!(
                        "n * nu = {} but graph has {} vertices",
                        p.vertex_count(),
                        graph.vertex_count()
                    )));
                }
                ConstructionParams::Jump(p)
            }
            ConstructionKind::Product => {
                let nus = meta
                    .nu_list
                    .clone()
                    .ok_or_else(|| Error::Metadata("product without nu_list".into()))?;
                let seeds = meta.seeds.clone().unwrap_or_else(|| vec![0; nus.len()]);
                let first = meta
                    .first_size
                    .ok_or_else(|| Error::Metadata("product without N1".into()))?;
                let alpha = meta
                    .alpha
                    .ok_or_else(|| Error::Metadata("product without alpha".into()))?;
                ConstructionParams::Multi(
                    MultiJumpSpec::new(nus, first, alpha, seeds)
                        .map_err(|e| Error::Metadata(e.to_string()))?,
                )
            }
            ConstructionKind::Plain => ConstructionParams::None,
        };
        let factors = meta
            .factors
            .iter()
            .map(|fm| {
                let mut fg = Graph::complete(fm.vertex_count)?;
                for &[u, v] in &fm.removed_edges {
                    fg.check_vertex(u)?;
                    fg.check_vertex(v)?;
                    if u == v {
                        return Err(Error::SelfLoop(u));
                    }
                    fg.set_edge(u, v, false);
                }
                ConstructedGraph::from_meta(fg, fm)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConstructedGraph {
            graph,
            kind,
            params,
            removed_edges,
            factors,
        })
    }
}

/// Construction PRNG; a seed fixes the whole sampling stream.
pub(crate) struct SamplingRng(ChaCha8Rng);

impl SamplingRng {
    pub(crate) fn new(seed: u64) -> Self {
        SamplingRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform index in `0..bound` from exactly one 64-bit draw (multiply-shift).
    pub(crate) fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        ((self.0.next_u64() as u128 * bound as u128) >> 64) as usize
    }
}

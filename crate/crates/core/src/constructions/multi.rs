use serde::{Deserialize, Serialize};

use super::{
    sample_jump_graph, ConstructedGraph, ConstructionKind, ConstructionParams, JumpParams,
};
use crate::error::{Error, Result};
use crate::graph::{strong_product, MaterializationCap, TupleVertex};

/// Jump indices `nu_1 < .. < nu_s` with factor sizes `N_i ~ N_{i-1}^(alpha nu_i / nu_{i-1})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiJumpSpec {
    nus: Vec<usize>,
    alpha: f64,
    seeds: Vec<u64>,
    sizes: Vec<usize>,
}

fn round_up_to(x: usize, m: usize) -> Option<usize> {
    x.div_ceil(m).checked_mul(m)
}

impl MultiJumpSpec {
    /// `first_size` is rounded up to a multiple of `nu_1` (and at least `2 nu_1`).
    /// Each later size is `round(exp((alpha nu_i / nu_{i-1}) ln N_{i-1}))`
    /// rounded up to a multiple of `nu_i`.
    pub fn new(nus: Vec<usize>, first_size: usize, alpha: f64, seeds: Vec<u64>) -> Result<Self> {
        if nus.is_empty() {
            return Err(Error::invalid("at least one jump index required"));
        }
        if nus[0] < 2 || nus.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "jump indices must be >= 2 and strictly increasing",
            ));
        }
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(Error::invalid(format!("alpha must exceed 1, got {alpha}")));
        }
        if seeds.len() != nus.len() {
            return Err(Error::invalid(format!(
                "{} seeds given for {} factors",
                seeds.len(),
                nus.len()
            )));
        }
        let mut sizes = Vec::with_capacity(nus.len());
        let first = round_up_to(first_size.max(2 * nus[0]), nus[0])
            .ok_or_else(|| Error::invalid("N1 not realizable"))?;
        sizes.push(first);
        for w in nus.windows(2) {
            let prev = *sizes.last().unwrap() as f64;
            let exponent = alpha * w[1] as f64 / w[0] as f64;
            let raw = (exponent * prev.ln()).exp().round();
            if !raw.is_finite() || raw >= usize::MAX as f64 {
                return Err(Error::invalid(format!("factor size {raw} not realizable")));
            }
            let size = round_up_to(raw as usize, w[1])
                .ok_or_else(|| Error::invalid("factor size not realizable"))?;
            sizes.push(size);
        }
        Ok(MultiJumpSpec {
            nus,
            alpha,
            seeds,
            sizes,
        })
    }

    /// Seeds `seed, seed + 1, ..` for each factor.
    pub fn with_base_seed(
        nus: Vec<usize>,
        first_size: usize,
        alpha: f64,
        seed: u64,
    ) -> Result<Self> {
        let seeds = (0..nus.len() as u64)
            .map(|i| seed.wrapping_add(i))
            .collect();
        Self::new(nus, first_size, alpha, seeds)
    }

    pub fn nus(&self) -> &[usize] {
        &self.nus
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn seeds(&self) -> &[u64] {
        &self.seeds
    }

    /// Realized factor sizes `N_i`.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_vertices(&self) -> u128 {
        self.sizes.iter().map(|&s| s as u128).product()
    }

    pub fn factor_params(&self) -> Vec<JumpParams> {
        self.nus
            .iter()
            .zip(&self.sizes)
            .zip(&self.seeds)
            .map(|((&nu, &size), &seed)| JumpParams::new(nu, size / nu, seed).expect("validated"))
            .collect()
    }

    /// `ln N_i / ln N_{i-1}` for consecutive factors.
    pub fn achieved_ratios(&self) -> Vec<f64> {
        self.sizes
            .windows(2)
            .map(|w| (w[1] as f64).ln() / (w[0] as f64).ln())
            .collect()
    }
}

/// Strong product of independently sampled canonical jump graphs.
pub fn multi_jump_product(
    spec: &MultiJumpSpec,
    cap: MaterializationCap,
) -> Result<ConstructedGraph> {
    cap.check(spec.total_vertices())?;
    let factors: Vec<_> = spec.factor_params().iter().map(sample_jump_graph).collect();
    let mut graph = factors[0].graph.clone();
    for f in &factors[1..] {
        graph = strong_product(&graph, &f.graph, cap)?;
    }
    Ok(ConstructedGraph {
        graph,
        kind: ConstructionKind::Product,
        params: ConstructionParams::Multi(spec.clone()),
        removed_edges: Vec::new(),
        factors,
    })
}

fn factor_cert_sizes(g: &ConstructedGraph, k: usize) -> Vec<u128> {
    g.factors
        .iter()
        .map(|f| f.certificate_size(k).filter(|&s| s > 0).unwrap_or(1))
        .collect()
}

/// `prod_i |C_i(k)|`, with factors lacking a certificate contributing a single vertex.
pub fn product_certificate_size(g: &ConstructedGraph, k: usize) -> Option<u128> {
    if g.kind != ConstructionKind::Product {
        return None;
    }
    let sizes = factor_cert_sizes(g, k);
    if sizes.iter().all(|&s| s == 1) {
        return None;
    }
    Some(sizes.iter().fold(1u128, |a, &s| a.saturating_mul(s)))
}

/// Cartesian combination of the factor certificates in `(G_1 · .. · G_s)^k`.
///
/// Factors whose certificate is empty at this `k` contribute the all-zero tuple.
pub fn product_certificate(g: &ConstructedGraph, k: usize) -> Option<Vec<TupleVertex>> {
    product_certificate_size(g, k)?;
    let per_factor: Vec<Vec<TupleVertex>> = g
        .factors
        .iter()
        .map(|f| match f.certificate(k) {
            Some(c) if !c.is_empty() => c,
            _ => vec![TupleVertex(vec![0; k])],
        })
        .collect();
    let radices: Vec<usize> = g.factors.iter().map(|f| f.graph.vertex_count()).collect();
    let mut acc: Vec<Vec<usize>> = vec![vec![0; k]];
    for (cert, &radix) in per_factor.iter().zip(&radices) {
        acc = acc
            .iter()
            .flat_map(|prefix| {
                cert.iter().map(move |t| {
                    prefix
                        .iter()
                        .zip(t.coords())
                        .map(|(&p, &c)| p * radix + c)
                        .collect()
                })
            })
            .collect();
    }
    Some(acc.into_iter().map(TupleVertex).collect())
}

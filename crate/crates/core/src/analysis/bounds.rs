use serde::{Deserialize, Serialize};

use crate::constructions::JumpParams;

/// Closed-form predictions for `a_k` of a random jump graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub k: usize,
    pub nu: usize,
    #[serde(rename = "N")]
    pub vertex_count: usize,
    /// `k^4 nu log2(N) / 2`, for `k < nu`.
    pub prefix_bound: Option<f64>,
    /// `N^(floor(k/nu)/k)`, for `k >= nu`.
    pub sandwich_low: Option<f64>,
    /// `sqrt(2) k^3 nu^((k-1)/(nu-1)) log2(N)`: upper bound on `a_k / sandwich_low`.
    pub sandwich_ratio: Option<f64>,
    /// `sandwich_low * sandwich_ratio`.
    pub sandwich_high: Option<f64>,
    /// `d_1..d_{nu-1} = 0`, `d_nu = 1`, `d_k = 4 k^3 nu^(1 + k/(nu-1)) d_{k-1}`.
    pub d_k: f64,
    /// `d_k N^floor(k/nu) log2(N)^k`, for `k >= nu`.
    pub alpha_upper: Option<f64>,
}

pub fn d_sequence(nu: usize, k: usize) -> f64 {
    if k < nu {
        return 0.0;
    }
    let nuf = nu as f64;
    (nu + 1..=k).fold(1.0, |d, j| {
        let jf = j as f64;
        4.0 * jf.powi(3) * nuf.powf(1.0 + jf / (nuf - 1.0)) * d
    })
}

pub fn theoretical_bounds(params: &JumpParams, k: usize) -> BoundsRecord {
    assert!(k >= 1, "k must be positive");
    let nu = params.nu();
    let big_n = params.vertex_count();
    let (kf, nuf, nf) = (k as f64, nu as f64, big_n as f64);
    let log_n = nf.log2();
    let mut rec = BoundsRecord {
        k,
        nu,
        vertex_count: big_n,
        prefix_bound: None,
        sandwich_low: None,
        sandwich_ratio: None,
        sandwich_high: None,
        d_k: d_sequence(nu, k),
        alpha_upper: None,
    };
    if k < nu {
        rec.prefix_bound = Some(0.5 * kf.powi(4) * nuf * log_n);
    } else {
        let blocks = (k / nu) as f64;
        let low = nf.powf(blocks / kf);
        let ratio = 2f64.sqrt() * kf.powi(3) * nuf.powf((kf - 1.0) / (nuf - 1.0)) * log_n;
        rec.sandwich_low = Some(low);
        rec.sandwich_ratio = Some(ratio);
        rec.sandwich_high = Some(low * ratio);
        rec.alpha_upper = Some(rec.d_k * nf.powf(blocks) * log_n.powf(kf));
    }
    rec
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_regime() {
        let p = JumpParams::new(3, 8, 0).unwrap();
        let r = theoretical_bounds(&p, 2);
        assert_eq!(r.prefix_bound, Some(0.5 * 16.0 * 3.0 * 24f64.log2()));
        assert!(r.sandwich_low.is_none() && r.sandwich_high.is_none());
        assert_eq!(r.d_k, 0.0);
    }

    #[test]
    fn jump_index() {
        let p = JumpParams::new(2, 512, 0).unwrap();
        let r = theoretical_bounds(&p, 2);
        assert_eq!(r.d_k, 1.0);
        assert!((r.sandwich_low.unwrap() - 32.0).abs() < 1e-9);
        assert!(r.prefix_bound.is_none());
    }

    #[test]
    fn one_recurrence_step() {
        for nu in 2..6usize {
            let nuf = nu as f64;
            let expect = 4.0 * (nuf + 1.0).powi(3) * nuf.powf(1.0 + (nuf + 1.0) / (nuf - 1.0));
            let got = d_sequence(nu, nu + 1);
            assert!((got - expect).abs() <= 1e-9 * expect);
        }
    }

    #[test]
    fn sandwich_is_ordered() {
        for nu in 2..6 {
            for n in [2, 10, 1000] {
                let p = JumpParams::new(nu, n, 0).unwrap();
                for k in nu..4 * nu {
                    let r = theoretical_bounds(&p, k);
                    assert!(r.sandwich_low.unwrap() <= r.sandwich_high.unwrap());
                }
            }
        }
    }
}

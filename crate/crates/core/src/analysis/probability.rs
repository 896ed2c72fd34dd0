//! Edge probabilities in powers of jump graphs and union-bound calculators.
//!
//! All bounds are evaluated in log space: `C(N, s) nu^(-C(s,2))` leaves the
//! range of `f64` long before `s` becomes interesting.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::constructions::ClassIndex;
use crate::error::{Error, Result};
use crate::graph::TupleVertex;

/// How many distinct coordinate pairs of `(u, v)` fall into each edge class.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassProfile {
    counts: BTreeMap<usize, usize>,
    k_prime: usize,
}

impl ClassProfile {
    /// Profile from explicit `(class id, t)` entries; every `t` must be positive.
    pub fn from_counts(entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (class, t) in entries {
            if t == 0 {
                return Err(Error::invalid(format!("class {class} has t = 0")));
            }
            *counts.entry(class).or_insert(0) += t;
        }
        let k_prime = counts.values().sum();
        Ok(ClassProfile { counts, k_prime })
    }

    /// Profile of the pair `(u, v)`: distinct unordered coordinate pairs with
    /// `u_i != v_i`, grouped by edge class.
    pub fn between(u: &TupleVertex, v: &TupleVertex, classes: &ClassIndex) -> Self {
        let mut pairs: Vec<(usize, usize)> = u
            .coords()
            .iter()
            .zip(v.coords())
            .filter(|(a, b)| a != b)
            .map(|(&a, &b)| (a.min(b), a.max(b)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut counts = BTreeMap::new();
        for (a, b) in pairs {
            *counts.entry(classes.class_of(a, b)).or_insert(0) += 1;
        }
        let k_prime = counts.values().sum();
        ClassProfile { counts, k_prime }
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn k_prime(&self) -> usize {
        self.k_prime
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassRegime {
    /// `t <= nu`.
    #[default]
    Ordinary,
    /// After full-orbit purging: `t <= nu - 1`.
    Purged,
}

/// `prod_l (nu - t_l) / nu`: probability that every distinct coordinate pair is
/// an edge, each class losing exactly one uniformly chosen member.
pub fn edge_probability(profile: &ClassProfile, nu: usize, regime: ClassRegime) -> Result<f64> {
    if nu < 2 {
        return Err(Error::invalid("nu must be at least 2"));
    }
    let max_t = match regime {
        ClassRegime::Ordinary => nu,
        ClassRegime::Purged => nu - 1,
    };
    let mut p = 1.0;
    for (&class, &t) in profile.counts() {
        if t > max_t {
            return Err(Error::invalid(format!(
                "class {class}: t = {t} exceeds {max_t}"
            )));
        }
        p *= (nu - t) as f64 / nu as f64;
    }
    Ok(p)
}

/// Minimum of [`edge_probability`] over purged profiles with `sum t = k_prime`:
/// `nu^(-floor(k'/(nu-1))) * (nu - k' mod (nu-1)) / nu`.
pub fn purged_edge_probability_floor(k_prime: usize, nu: usize) -> f64 {
    let full = k_prime / (nu - 1);
    let rest = k_prime % (nu - 1);
    (nu as f64).powi(-(full as i32)) * (nu - rest) as f64 / nu as f64
}

/// Cruder closed form `nu^(-k'/(nu-1))`, below [`purged_edge_probability_floor`].
pub fn purged_edge_probability_bound(k_prime: usize, nu: usize) -> f64 {
    (nu as f64).powf(-(k_prime as f64) / (nu - 1) as f64)
}

/// `ln C(n, s)`; exact summation for small `s`, log-gamma otherwise.
pub fn ln_binomial(n: f64, s: usize) -> f64 {
    let sf = s as f64;
    if sf > n {
        return f64::NEG_INFINITY;
    }
    if s <= 4096 {
        (0..s).map(|i| (n - i as f64).ln()).sum::<f64>() - ln_gamma(sf + 1.0)
    } else {
        ln_gamma(n + 1.0) - ln_gamma(sf + 1.0) - ln_gamma(n - sf + 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    /// `C(N, s) nu^(-C(s,2)) 2^(s/2)` bounds `Pr[alpha(G) >= s]`.
    Base,
    /// `C(N^k, s) p^C(s,2)` with `p = exp(-nu^(-k/(nu-1)))`, for filtered sets in `G^k`.
    PowerK { k: usize },
}

/// Natural log of the union bound; see [`BoundVariant`].
pub fn first_moment_log_bound(
    nu: usize,
    big_n: usize,
    s: usize,
    variant: BoundVariant,
) -> Result<f64> {
    if nu < 2 {
        return Err(Error::invalid("nu must be at least 2"));
    }
    if s < 2 {
        return Err(Error::invalid(format!(
            "set size must be at least 2, got {s}"
        )));
    }
    let sf = s as f64;
    let pairs = sf * (sf - 1.0) / 2.0;
    match variant {
        BoundVariant::Base => {
            if s > big_n {
                return Err(Error::invalid(format!("s = {s} exceeds N = {big_n}")));
            }
            Ok(ln_binomial(big_n as f64, s) - pairs * (nu as f64).ln() + sf / 2.0 * 2f64.ln())
        }
        BoundVariant::PowerK { k } => {
            if k == 0 {
                return Err(Error::invalid("k must be at least 1"));
            }
            let vertices = (big_n as f64).powi(k as i32);
            if sf > vertices {
                return Err(Error::invalid(format!("s = {s} exceeds N^k")));
            }
            let ln_p = -(nu as f64).powf(-(k as f64) / (nu - 1) as f64);
            Ok(ln_binomial(vertices, s) + pairs * ln_p)
        }
    }
}

pub fn first_moment_bound(nu: usize, big_n: usize, s: usize, variant: BoundVariant) -> Result<f64> {
    first_moment_log_bound(nu, big_n, s, variant).map(f64::exp)
}

/// Smallest `s` in `2..=N` with `trials * bound(s) < threshold`.
pub fn smallest_s_below(
    nu: usize,
    big_n: usize,
    trials: usize,
    threshold: f64,
) -> Result<Option<usize>> {
    let ln_target = threshold.ln() - (trials.max(1) as f64).ln();
    for s in 2..=big_n {
        if first_moment_log_bound(nu, big_n, s, BoundVariant::Base)? < ln_target {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::JumpParams;

    #[test]
    fn edge_probability_examples() {
        let one = ClassProfile::from_counts([(0, 1)]).unwrap();
        assert_eq!(
            edge_probability(&one, 4, ClassRegime::Ordinary).unwrap(),
            0.75
        );
        let conc = ClassProfile::from_counts([(3, 2)]).unwrap();
        assert_eq!(
            edge_probability(&conc, 4, ClassRegime::Ordinary).unwrap(),
            0.5
        );
        let split = ClassProfile::from_counts([(0, 1), (1, 1)]).unwrap();
        assert_eq!(
            edge_probability(&split, 4, ClassRegime::Ordinary).unwrap(),
            9.0 / 16.0
        );
        let full = ClassProfile::from_counts([(0, 4)]).unwrap();
        assert_eq!(
            edge_probability(&full, 4, ClassRegime::Ordinary).unwrap(),
            0.0
        );
        assert!(edge_probability(&full, 4, ClassRegime::Purged).is_err());
        let over = ClassProfile::from_counts([(0, 5)]).unwrap();
        assert!(edge_probability(&over, 4, ClassRegime::Ordinary).is_err());
        assert!(ClassProfile::from_counts([(0, 0)]).is_err());
    }

    #[test]
    fn profile_between_tuples() {
        let idx = ClassIndex::new(JumpParams::new(3, 2, 0).unwrap());
        // the shift by n = 2 maps (0,2) to (2,4): one class, t = 2
        let u = TupleVertex(vec![0, 2, 5]);
        let v = TupleVertex(vec![2, 4, 5]);
        let p = ClassProfile::between(&u, &v, &idx);
        assert_eq!(p.k_prime(), 2);
        assert_eq!(p.counts().len(), 1);
        assert_eq!(*p.counts().values().next().unwrap(), 2);
    }

    #[test]
    fn base_bound_small_case() {
        let b = first_moment_bound(2, 4, 3, BoundVariant::Base).unwrap();
        let expect = 4.0 * 0.125 * 2f64.powf(1.5);
        assert!((b - expect).abs() < 1e-12, "{b} vs {expect}");
        assert!(b > 1.0);
        assert!(first_moment_bound(2, 4, 5, BoundVariant::Base).is_err());
        assert!(first_moment_bound(2, 4, 1, BoundVariant::Base).is_err());
        assert!(first_moment_bound(1, 4, 2, BoundVariant::Base).is_err());
    }

    #[test]
    fn ln_binomial_matches_direct_values() {
        assert!((ln_binomial(10.0, 3) - 120f64.ln()).abs() < 1e-12);
        assert!((ln_binomial(32.0, 11) - 129_024_480f64.ln()).abs() < 1e-10);
        let big = ln_binomial(1e6, 5000);
        let lg = ln_gamma(1e6 + 1.0) - ln_gamma(5001.0) - ln_gamma(1e6 - 5000.0 + 1.0);
        assert!((big - lg).abs() / lg.abs() < 1e-9);
    }

    #[test]
    fn power_variant_reduces_to_closed_form() {
        // k = nu - 1 = 1: p = exp(-1/2)
        let lb = first_moment_log_bound(2, 8, 3, BoundVariant::PowerK { k: 1 }).unwrap();
        let expect = 56f64.ln() + 3.0 * (-0.5);
        assert!((lb - expect).abs() < 1e-12);
    }
}

//! Representative filtering of tuple sets, and purging of tuples that contain a
//! complete shift orbit.

use crate::constructions::JumpParams;
use crate::error::{Error, Result};
use crate::graph::TupleVertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FilterMode {
    /// Keep a tuple iff none of its residues mod `n` was used by an earlier kept tuple.
    #[default]
    Representatives,
    /// [`purge_full_classes`] first, then representative filtering.
    PurgeThenRepresentatives,
}

fn validate(s: &[TupleVertex], params: &JumpParams, k: usize) -> Result<()> {
    let big_n = params.vertex_count();
    for t in s {
        if t.len() != k {
            return Err(Error::TupleLength {
                expected: k,
                got: t.len(),
            });
        }
        if let Some(&c) = t.coords().iter().find(|&&c| c >= big_n) {
            return Err(Error::VertexOutOfRange {
                vertex: c,
                vertex_count: big_n,
            });
        }
    }
    Ok(())
}

/// Processes `s` in the given order. A kept tuple removes every later tuple that
/// has any coordinate congruent to one of its coordinates modulo `n`.
pub fn filter_representatives(
    s: &[TupleVertex],
    params: &JumpParams,
    k: usize,
    mode: FilterMode,
) -> Result<Vec<TupleVertex>> {
    validate(s, params, k)?;
    let purged;
    let input = match mode {
        FilterMode::Representatives => s,
        FilterMode::PurgeThenRepresentatives => {
            purged = purge_full_classes(s, params, k)?;
            &purged[..]
        }
    };
    let n = params.n();
    let mut used = vec![false; n];
    let mut kept = Vec::new();
    for t in input {
        if t.coords().iter().any(|&c| used[c % n]) {
            continue;
        }
        for &c in t.coords() {
            used[c % n] = true;
        }
        kept.push(t.clone());
    }
    Ok(kept)
}

/// Smallest `x` such that `{x, x+n, .., x+(nu-1)n}` lies inside the coordinate
/// set of `t`, if any. Such an `x` is always `< n`.
pub fn full_orbit_in(t: &TupleVertex, params: &JumpParams) -> Option<usize> {
    let (n, nu) = (params.n(), params.nu());
    let mut present = vec![false; params.vertex_count()];
    for &c in t.coords() {
        present[c] = true;
    }
    (0..n).find(|&x| (0..nu).all(|j| present[x + j * n]))
}

/// Drops the tuples whose coordinates contain a complete shift orbit.
pub fn purge_full_classes(
    s: &[TupleVertex],
    params: &JumpParams,
    k: usize,
) -> Result<Vec<TupleVertex>> {
    if k < params.nu() {
        return Err(Error::invalid(format!(
            "purging needs k >= nu, got k={k}, nu={}",
            params.nu()
        )));
    }
    validate(s, params, k)?;
    Ok(s.iter()
        .filter(|t| full_orbit_in(t, params).is_none())
        .cloned()
        .collect())
}

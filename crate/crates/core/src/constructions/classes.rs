use serde::{Deserialize, Serialize};

use super::JumpParams;
use crate::bits;
use crate::graph::VertexId;

/// One orbit of unordered pairs under the shift `(x, y) -> (x + n, y + n) mod N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    /// Lexicographically smallest member.
    pub representative: (VertexId, VertexId),
    /// Members with `u < v`, lexicographically sorted.
    pub members: Vec<(VertexId, VertexId)>,
}

impl EdgeClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[inline]
fn normalize(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Orbit of `{x, y}` as sorted, deduplicated normalized pairs.
pub fn orbit(params: &JumpParams, x: VertexId, y: VertexId) -> Vec<(VertexId, VertexId)> {
    let (n, big_n) = (params.n(), params.vertex_count());
    let mut members: Vec<_> = (0..params.nu())
        .map(|t| normalize((x + t * n) % big_n, (y + t * n) % big_n))
        .collect();
    members.sort_unstable();
    members.dedup();
    members
}

/// Whether `{x, y}` lies in a short class (`y = x + N/2`, even `nu` only).
pub fn is_short_pair(params: &JumpParams, x: VertexId, y: VertexId) -> bool {
    let big_n = params.vertex_count();
    params.nu().is_multiple_of(2) && (x + big_n / 2) % big_n == y
}

/// Expected number of classes: `C(N,2)/nu`, plus `N/(2 nu)` when `nu` is even.
pub fn class_count(params: &JumpParams) -> usize {
    let big_n = params.vertex_count();
    let pairs = big_n * (big_n - 1) / 2;
    if params.nu().is_multiple_of(2) {
        (pairs + big_n / 2) / params.nu()
    } else {
        pairs / params.nu()
    }
}

/// All shift orbits ordered by ascending representative.
pub fn enumerate(params: &JumpParams) -> Vec<EdgeClass> {
    let big_n = params.vertex_count();
    let mut seen = vec![0u64; bits::words_for(big_n * big_n)];
    let mut classes = Vec::with_capacity(class_count(params));
    for x in 0..big_n {
        for y in x + 1..big_n {
            if bits::get(&seen, x * big_n + y) {
                continue;
            }
            let members = orbit(params, x, y);
            for &(a, b) in &members {
                bits::set(&mut seen, a * big_n + b);
            }
            classes.push(EdgeClass {
                representative: (x, y),
                members,
            });
        }
    }
    classes
}

/// Class lookup by pair.
#[derive(Clone, Debug)]
pub struct ClassIndex {
    params: JumpParams,
    classes: Vec<EdgeClass>,
}

impl ClassIndex {
    pub fn new(params: JumpParams) -> Self {
        ClassIndex {
            params,
            classes: enumerate(&params),
        }
    }

    pub fn classes(&self) -> &[EdgeClass] {
        &self.classes
    }

    pub fn params(&self) -> &JumpParams {
        &self.params
    }

    /// Class id of `{x, y}`, `x != y`.
    pub fn class_of(&self, x: VertexId, y: VertexId) -> usize {
        debug_assert_ne!(x, y);
        let rep = orbit(&self.params, x, y)[0];
        self.classes
            .binary_search_by(|c| c.representative.cmp(&rep))
            .expect("every pair belongs to a class")
    }
}

use std::time::Instant;

use super::{MisResult, MisStatus};
use crate::bits;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const BRUTE_FORCE_LIMIT: usize = 26;

/// Exhaustive subset enumeration. Reports the lexicographically smallest
/// maximum independent set.
pub fn brute_force_mis(g: &Graph) -> Result<MisResult> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLargeForBruteForce {
            vertex_count: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let start = Instant::now();
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u))
        .collect();
    let total = 1usize << n;
    // independent[mask] = independent[mask - lowbit] and lowbit has no neighbor in the rest
    let mut independent = vec![0u64; bits::words_for(total)];
    bits::set(&mut independent, 0);
    let mut best = 0u32;
    for mask in 1..total as u32 {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if !bits::get(&independent, rest as usize) || adj[low] & rest != 0 {
            continue;
        }
        bits::set(&mut independent, mask as usize);
        let (c, b) = (mask.count_ones(), best.count_ones());
        // equal size: smaller sorted list has the lowest differing element
        let diff = mask ^ best;
        if c > b || (c == b && mask & diff & diff.wrapping_neg() != 0) {
            best = mask;
        }
    }
    let members: Vec<usize> = (0..n).filter(|&v| best >> v & 1 == 1).collect();
    let size = members.len();
    Ok(MisResult {
        members,
        size,
        status: MisStatus::Exact,
        certified_upper: Some(size),
        search_nodes: total as u64,
        elapsed: start.elapsed(),
    })
}

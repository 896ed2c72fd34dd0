//! Iterated local search for large independent sets over any adjacency oracle.
//!
//! Greedy fill, then (1,2)- and (2,3)-swaps (remove one or two solution vertices,
//! insert two or three) until a local optimum, then random forced insertions.

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MisResult, MisStatus, SolverBudget};
use crate::error::{Error, Result};
use crate::graph::{is_independent, AdjacencyOracle};

/// Largest oracle the search will keep per-vertex state for.
pub const LOCAL_SEARCH_MAX_ORDER: usize = 1 << 23;

const DEFAULT_PERTURBATIONS: u64 = 64;

struct State<'a, A: AdjacencyOracle + ?Sized> {
    g: &'a A,
    n: usize,
    in_sol: Vec<bool>,
    /// Number of solution neighbors.
    tight: Vec<u32>,
    sol: Vec<usize>,
}

impl<'a, A: AdjacencyOracle + ?Sized> State<'a, A> {
    fn new(g: &'a A) -> Self {
        let n = g.order();
        State {
            g,
            n,
            in_sol: vec![false; n],
            tight: vec![0; n],
            sol: Vec::new(),
        }
    }

    fn insert(&mut self, v: usize) {
        debug_assert!(!self.in_sol[v] && self.tight[v] == 0);
        self.in_sol[v] = true;
        self.sol.push(v);
        for u in 0..self.n {
            if self.g.adjacent(v, u) {
                self.tight[u] += 1;
            }
        }
    }

    fn remove(&mut self, v: usize) {
        self.in_sol[v] = false;
        let pos = self.sol.iter().position(|&x| x == v).expect("in solution");
        self.sol.swap_remove(pos);
        for u in 0..self.n {
            if self.g.adjacent(v, u) {
                self.tight[u] -= 1;
            }
        }
    }

    fn fill_from(&mut self, offset: usize) {
        for i in 0..self.n {
            let v = (offset + i) % self.n;
            if !self.in_sol[v] && self.tight[v] == 0 {
                self.insert(v);
            }
        }
    }

    fn solution_neighbors(&self, v: usize) -> Vec<usize> {
        self.sol
            .iter()
            .copied()
            .filter(|&s| self.g.adjacent(v, s))
            .collect()
    }

    /// One improving (1,2)- or (2,3)-swap, if any exists.
    fn improve_once(&mut self) -> bool {
        let mut one_tight: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut two_tight: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for v in 0..self.n {
            if self.in_sol[v] || !(1..=2).contains(&self.tight[v]) {
                continue;
            }
            let nb = self.solution_neighbors(v);
            match nb[..] {
                [x] => one_tight.entry(x).or_default().push(v),
                [x, y] => two_tight.entry((x.min(y), x.max(y))).or_default().push(v),
                _ => unreachable!("tightness out of sync"),
            }
        }
        let mut xs: Vec<_> = one_tight.keys().copied().collect();
        xs.sort_unstable();
        for x in xs {
            let cands = &one_tight[&x];
            if let Some((a, b)) = self.independent_pair(cands) {
                self.remove(x);
                self.insert(a);
                self.insert(b);
                return true;
            }
        }
        let mut pairs: Vec<_> = two_tight.keys().copied().collect();
        pairs.sort_unstable();
        let empty = Vec::new();
        for (x, y) in pairs {
            let mut cands: Vec<usize> = two_tight[&(x, y)].clone();
            cands.extend(one_tight.get(&x).unwrap_or(&empty));
            cands.extend(one_tight.get(&y).unwrap_or(&empty));
            if let Some(tri) = self.independent_triple(&cands) {
                self.remove(x);
                self.remove(y);
                for v in tri {
                    self.insert(v);
                }
                return true;
            }
        }
        false
    }

    fn independent_pair(&self, c: &[usize]) -> Option<(usize, usize)> {
        for (i, &a) in c.iter().enumerate() {
            for &b in &c[i + 1..] {
                if !self.g.adjacent(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    fn independent_triple(&self, c: &[usize]) -> Option<[usize; 3]> {
        for (i, &a) in c.iter().enumerate() {
            for (j, &b) in c.iter().enumerate().skip(i + 1) {
                if self.g.adjacent(a, b) {
                    continue;
                }
                for &d in &c[j + 1..] {
                    if !self.g.adjacent(a, d) && !self.g.adjacent(b, d) {
                        return Some([a, b, d]);
                    }
                }
            }
        }
        None
    }
}

/// Lower bound on alpha by iterated local search, seeded by `initial`.
///
/// `initial` must be independent; it is extended, never shrunk below its size in
/// the returned result. `budget.max_nodes` bounds the number of perturbation
/// rounds (default 64).
pub fn local_search_lower_bound<A: AdjacencyOracle + ?Sized>(
    g: &A,
    budget: &SolverBudget,
    seed: u64,
    initial: &[usize],
) -> Result<MisResult> {
    let start = Instant::now();
    let n = g.order();
    if n > LOCAL_SEARCH_MAX_ORDER {
        return Err(Error::invalid(format!(
            "local search limited to {LOCAL_SEARCH_MAX_ORDER} vertices, oracle has {n}"
        )));
    }
    if !is_independent(g, initial)? {
        return Err(Error::invalid("initial set is not independent"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = State::new(g);
    let mut init = initial.to_vec();
    init.sort_unstable();
    init.dedup();
    for &v in &init {
        st.insert(v);
    }
    st.fill_from(if n > 0 { rng.random_range(0..n) } else { 0 });
    let mut iterations = 0u64;
    let reached = |size: usize| budget.target.is_some_and(|t| size >= t);
    let out_of_time = || budget.max_time.is_some_and(|t| start.elapsed() >= t);

    while !reached(st.sol.len()) && !out_of_time() && st.improve_once() {
        iterations += 1;
        st.fill_from(0);
    }
    let mut best = st.sol.clone();
    let rounds = budget.max_nodes.unwrap_or(DEFAULT_PERTURBATIONS);
    let mut round = 0;
    while round < rounds && !reached(best.len()) && !out_of_time() && best.len() < n {
        round += 1;
        let v = loop {
            let v = rng.random_range(0..n);
            if !st.in_sol[v] {
                break v;
            }
        };
        for s in st.solution_neighbors(v) {
            st.remove(s);
        }
        st.insert(v);
        st.fill_from(rng.random_range(0..n));
        while !out_of_time() && st.improve_once() {
            iterations += 1;
            st.fill_from(0);
        }
        if st.sol.len() > best.len() {
            best = st.sol.clone();
        } else if st.sol.len() + 1 < best.len() {
            // drifted too far: restart from the incumbent
            st = State::new(g);
            for &v in &best {
                st.insert(v);
            }
        }
    }
    best.sort_unstable();
    let size = best.len();
    Ok(MisResult {
        members: best,
        size,
        status: MisStatus::LowerBound,
        certified_upper: None,
        search_nodes: iterations + round,
        elapsed: start.elapsed(),
    })
}

//! Branch and bound for alpha(G) as maximum clique in the complement.
//!
//! Vertices are renumbered by descending complement degree (ties by index), so
//! the bitset coloring visits high-degree vertices first. Every node recolors its
//! candidate set greedily and branches on the highest color classes only.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use super::{MisResult, MisStatus, SolverBudget};
use crate::bits;
use crate::graph::Graph;

struct Problem {
    n: usize,
    words: usize,
    /// Complement adjacency in search order.
    adj: Vec<u64>,
    /// Search index -> original vertex.
    order: Vec<usize>,
}

impl Problem {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let comp_deg = |v: usize| n - 1 - g.degree(v);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(comp_deg(v)), v));
        let words = bits::words_for(n);
        let mut adj = vec![0u64; n * words];
        for (i, &vi) in order.iter().enumerate() {
            let row = &mut adj[i * words..(i + 1) * words];
            for (j, &vj) in order.iter().enumerate() {
                if i != j && !g.has_edge(vi, vj) {
                    bits::set(row, j);
                }
            }
        }
        Problem {
            n,
            words,
            adj,
            order,
        }
    }

    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    /// Greedy sequential coloring of `p`. Returns `(vertex, color)` for colors
    /// `>= min_color`, in nondecreasing color order, plus the number of colors.
    fn color(&self, p: &[u64], min_color: usize, out: &mut Vec<(usize, usize)>) -> usize {
        out.clear();
        let mut uncolored = p.to_vec();
        let mut class = vec![0u64; self.words];
        let mut color = 0;
        while !bits::is_empty(&uncolored) {
            color += 1;
            class.copy_from_slice(&uncolored);
            let mut w = 0;
            while w < self.words {
                let word = class[w];
                if word == 0 {
                    w += 1;
                    continue;
                }
                let v = w * bits::WORD + word.trailing_zeros() as usize;
                bits::clear(&mut uncolored, v);
                bits::clear(&mut class, v);
                for (c, r) in class.iter_mut().zip(self.row(v)).skip(w) {
                    *c &= !r;
                }
                if color >= min_color {
                    out.push((v, color));
                }
            }
        }
        color
    }

    /// Greedy clique in the complement, in search order.
    fn greedy_clique(&self) -> Vec<usize> {
        let mut cand = vec![0u64; self.words];
        bits::fill_prefix(&mut cand, self.n);
        let mut clique = Vec::new();
        while let Some(v) = bits::Ones::new(&cand).next() {
            clique.push(v);
            for (c, r) in cand.iter_mut().zip(self.row(v)) {
                *c &= r;
            }
        }
        clique
    }
}

/// State shared by all workers of one solve.
struct Shared {
    best_len: AtomicUsize,
    best_set: Mutex<Vec<usize>>,
    nodes: AtomicU64,
    aborted: AtomicBool,
    reached_target: AtomicBool,
    budget: SolverBudget,
    start: Instant,
}

impl Shared {
    fn threshold(&self) -> usize {
        let best = self.best_len.load(Ordering::Relaxed);
        match self.budget.target {
            Some(t) => best.max(t.saturating_sub(1)),
            None => best,
        }
    }

    fn offer(&self, clique: &[usize]) {
        let mut guard = self.best_set.lock().expect("poisoned");
        if clique.len() > guard.len() {
            guard.clear();
            guard.extend_from_slice(clique);
            self.best_len.store(clique.len(), Ordering::Relaxed);
            if self.budget.target.is_some_and(|t| clique.len() >= t) {
                self.reached_target.store(true, Ordering::Relaxed);
            }
        }
    }

    fn halted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed) || self.reached_target.load(Ordering::Relaxed)
    }

    /// Counts a node; returns false once the budget is spent.
    fn tick(&self, local: &mut u64) -> bool {
        let total = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        *local += 1;
        if self.budget.max_nodes.is_some_and(|m| total > m) {
            self.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        if (*local).is_multiple_of(1024) {
            if let Some(limit) = self.budget.max_time {
                if self.start.elapsed() >= limit {
                    self.aborted.store(true, Ordering::Relaxed);
                    return false;
                }
            }
        }
        true
    }
}

struct Worker<'a> {
    problem: &'a Problem,
    shared: &'a Shared,
    clique: Vec<usize>,
    local_nodes: u64,
}

impl Worker<'_> {
    fn expand(&mut self, p: &mut [u64]) {
        if !self.shared.tick(&mut self.local_nodes) {
            return;
        }
        let cur = self.clique.len();
        let min_color = (self.shared.threshold() + 1).saturating_sub(cur).max(1);
        let mut list = Vec::new();
        self.problem.color(p, min_color, &mut list);
        for &(v, color) in list.iter().rev() {
            if self.shared.halted() || cur + color <= self.shared.threshold() {
                return;
            }
            self.branch(p, v);
            bits::clear(p, v);
        }
    }

    fn branch(&mut self, p: &[u64], v: usize) {
        let mut child: Vec<u64> = p
            .iter()
            .zip(self.problem.row(v))
            .map(|(a, b)| a & b)
            .collect();
        self.clique.push(v);
        if bits::is_empty(&child) {
            if self.clique.len() > self.shared.threshold() {
                self.shared.offer(&self.clique);
            }
        } else {
            self.expand(&mut child);
        }
        self.clique.pop();
    }
}

fn solve(g: &Graph, budget: &SolverBudget, threads: Option<usize>) -> MisResult {
    let start = Instant::now();
    let problem = Problem::new(g);
    let shared = Shared {
        best_len: AtomicUsize::new(0),
        best_set: Mutex::new(Vec::new()),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        reached_target: AtomicBool::new(false),
        budget: *budget,
        start,
    };
    shared.offer(&problem.greedy_clique());

    let mut root = vec![0u64; problem.words];
    bits::fill_prefix(&mut root, problem.n);
    let mut scratch = Vec::new();
    let root_colors = problem.color(&root, 1, &mut scratch);

    if !shared.halted() {
        match threads {
            None => {
                let mut w = Worker {
                    problem: &problem,
                    shared: &shared,
                    clique: Vec::new(),
                    local_nodes: 0,
                };
                w.expand(&mut root);
            }
            Some(t) => run_parallel(&problem, &shared, &root, t),
        }
    }

    let best: Vec<usize> = shared.best_set.lock().expect("poisoned").clone();
    let mut members: Vec<usize> = best.iter().map(|&v| problem.order[v]).collect();
    members.sort_unstable();
    let size = members.len();
    let aborted = shared.aborted.load(Ordering::Relaxed);
    let reached = shared.reached_target.load(Ordering::Relaxed);
    let (status, certified_upper) = if aborted || reached {
        (MisStatus::LowerBound, Some(root_colors))
    } else {
        match budget.target {
            // search finished below the target: alpha <= target - 1
            Some(t) if size + 1 < t => (MisStatus::UpperBoundCertified, Some(t - 1)),
            _ => (MisStatus::Exact, Some(size)),
        }
    };
    MisResult {
        members,
        size,
        status,
        certified_upper,
        search_nodes: shared.nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    }
}

fn run_parallel(problem: &Problem, shared: &Shared, root: &[u64], threads: usize) {
    let mut list = Vec::new();
    problem.color(root, 1, &mut list);
    // Task i branches on list[i] with candidates restricted to list[..i],
    // exactly as the sequential loop would after removing later vertices.
    let mut prefix_sets = Vec::with_capacity(list.len());
    let mut p = root.to_vec();
    for &(v, _) in list.iter().rev() {
        prefix_sets.push(p.clone());
        bits::clear(&mut p, v);
    }
    prefix_sets.reverse();
    let tasks: Vec<_> = list.iter().copied().zip(prefix_sets).rev().collect();
    let run = || {
        tasks
            .par_iter()
            .with_max_len(1)
            .for_each(|&((v, color), ref p)| {
                if shared.halted() || color <= shared.threshold() {
                    return;
                }
                let mut w = Worker {
                    problem,
                    shared,
                    clique: Vec::new(),
                    local_nodes: 0,
                };
                if !shared.tick(&mut w.local_nodes) {
                    return;
                }
                w.branch(p, v);
            })
    };
    match rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
    {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

/// Exact alpha(G) by branch and bound, single-threaded and deterministic.
///
/// Budget exhaustion returns the incumbent with `status = LowerBound` and the
/// root coloring as `certified_upper`. With a target, a completed search that
/// stays below it reports `UpperBoundCertified` with `certified_upper = target - 1`.
pub fn max_independent_set(g: &Graph, budget: &SolverBudget) -> MisResult {
    solve(g, budget, None)
}

/// Same search with root subtrees explored on `threads` workers. The size is
/// the same as the sequential result when the search completes; the member set may differ.
pub fn max_independent_set_parallel(g: &Graph, budget: &SolverBudget, threads: usize) -> MisResult {
    solve(g, budget, Some(threads))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_independent, strong_product, MaterializationCap};

    #[test]
    fn c5_squared_is_five() {
        let c5 = Graph::cycle(5).unwrap();
        let sq = strong_product(&c5, &c5, MaterializationCap::DEFAULT).unwrap();
        let r = max_independent_set(&sq, &SolverBudget::unlimited());
        assert_eq!((r.size, r.status), (5, MisStatus::Exact));
        assert!(is_independent(&sq, &r.members).unwrap());
        let r = max_independent_set_parallel(&sq, &SolverBudget::unlimited(), 3);
        assert_eq!(r.size, 5);
        assert!(is_independent(&sq, &r.members).unwrap());
        assert_eq!(max_independent_set(&c5, &SolverBudget::unlimited()).size, 2);
    }

    #[test]
    fn trivial_graphs() {
        let r = max_independent_set(&Graph::empty(9).unwrap(), &SolverBudget::unlimited());
        assert_eq!(r.size, 9);
        let r = max_independent_set(&Graph::complete(9).unwrap(), &SolverBudget::unlimited());
        assert_eq!(r.size, 1);
        let r = max_independent_set(&Graph::empty(1).unwrap(), &SolverBudget::unlimited());
        assert_eq!(r.size, 1);
    }

    #[test]
    fn target_refutation_and_success() {
        let c5 = Graph::cycle(5).unwrap();
        let r = max_independent_set(&c5, &SolverBudget::unlimited().with_target(4));
        assert_eq!(r.status, MisStatus::UpperBoundCertified);
        assert_eq!(r.certified_upper, Some(3));
        let r = max_independent_set(&c5, &SolverBudget::unlimited().with_target(3));
        // alpha = 2 = target - 1, so the refutation is also exact
        assert_eq!((r.status, r.size), (MisStatus::Exact, 2));
        let r = max_independent_set(&c5, &SolverBudget::unlimited().with_target(2));
        assert_eq!((r.status, r.size), (MisStatus::LowerBound, 2));
    }

    #[test]
    fn node_budget_stops_search() {
        let c5 = Graph::cycle(5).unwrap();
        let g = strong_product(&c5, &c5, MaterializationCap::DEFAULT).unwrap();
        let g = strong_product(&g, &c5, MaterializationCap::DEFAULT).unwrap();
        let r = max_independent_set(&g, &SolverBudget::unlimited().with_nodes(3));
        assert_eq!(r.status, MisStatus::LowerBound);
        assert!(r.certified_upper.unwrap() >= 10);
        assert!(is_independent(&g, &r.members).unwrap());
    }
}

mod common;

use capforge::analysis::{independence_series, SeriesMode, SeriesOptions};
use capforge::constructions::ConstructedGraph;
use capforge::graph::strong_power;
use capforge::solver::{
    brute_force_mis, clique_cover_upper_bound, local_search_lower_bound, max_independent_set,
    max_independent_set_parallel, MisStatus, SolverBudget,
};
use capforge::{Graph, MaterializationCap};
use common::{oracle_alpha, oracle_independent, random_graph};

fn c5_plus_isolated() -> Graph {
    Graph::cycle(5)
        .unwrap()
        .disjoint_union(&Graph::empty(1).unwrap())
}

#[test]
fn solver_matches_recursive_oracle() {
    let mut seed = 0;
    for density in [0.2, 0.5, 0.8] {
        for n in (1..=40).step_by(3) {
            seed += 1;
            let g = random_graph(seed, n, density);
            let want = oracle_alpha(&g);
            let r = max_independent_set(&g, &SolverBudget::unlimited());
            assert_eq!(r.status, MisStatus::Exact);
            assert_eq!(r.size, want, "n={n} density={density}");
            assert!(oracle_independent(&g, &r.members));
            let p = max_independent_set_parallel(&g, &SolverBudget::unlimited(), 3);
            assert_eq!(p.size, want);
            assert!(oracle_independent(&g, &p.members));
            assert!(clique_cover_upper_bound(&g) >= want);
            if n <= 26 {
                assert_eq!(brute_force_mis(&g).unwrap().size, want);
            }
        }
    }
}

#[test]
fn c5_powers() {
    let c5 = Graph::cycle(5).unwrap();
    assert_eq!(oracle_alpha(&c5), 2);
    let sq = strong_power(&c5, 2, MaterializationCap::DEFAULT).unwrap();
    assert_eq!(oracle_alpha(&sq), 5);
    assert_eq!(max_independent_set(&sq, &SolverBudget::unlimited()).size, 5);
}

#[test]
fn c5_with_isolated_vertex_series() {
    let g = c5_plus_isolated();
    assert_eq!(oracle_alpha(&g), 3);
    let sq = strong_power(&g, 2, MaterializationCap::DEFAULT).unwrap();
    // 5 from C5^2, 2 + 2 from C5 x K1 and K1 x C5, 1 from K1^2
    assert_eq!(oracle_alpha(&sq), 10);

    let opts = SeriesOptions {
        k_max: 2,
        mode: SeriesMode::Exact,
        ..Default::default()
    };
    let report = independence_series(&ConstructedGraph::plain(g), &opts).unwrap();
    assert_eq!(report.entries[0].alpha_exact, Some(3));
    assert_eq!(report.entries[1].alpha_exact, Some(10));
    assert!((report.entries[1].a_k_lower - 10f64.sqrt()).abs() < 1e-12);
    assert!(report.monotone_violations.is_empty());
    assert!((report.capacity_lower - 10f64.sqrt()).abs() < 1e-12);
}

#[test]
fn local_search_is_sound() {
    for seed in 0..40 {
        let g = random_graph(100 + seed, 30, 0.4);
        let want = oracle_alpha(&g);
        let r = local_search_lower_bound(&g, &SolverBudget::unlimited().with_nodes(32), seed, &[])
            .unwrap();
        assert!(oracle_independent(&g, &r.members));
        assert!(r.size <= want);
        assert_eq!(r.size, r.members.len());
    }
}

#[test]
fn budgeted_upper_bounds_hold() {
    for seed in 0..30 {
        let g = random_graph(200 + seed, 24, 0.3);
        let want = oracle_alpha(&g);
        for nodes in [1, 5, 50] {
            let r = max_independent_set(&g, &SolverBudget::unlimited().with_nodes(nodes));
            assert!(oracle_independent(&g, &r.members));
            assert!(r.size <= want);
            if let Some(u) = r.certified_upper {
                assert!(u >= want, "seed {seed}: upper {u} < alpha {want}");
            }
        }
        for target in 1..=want + 2 {
            let r = max_independent_set(&g, &SolverBudget::unlimited().with_target(target));
            if let Some(u) = r.certified_upper {
                assert!(u >= want);
            }
            if r.status == MisStatus::UpperBoundCertified {
                assert!(target > want);
            }
        }
    }
}

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use capforge::analysis::{
    edge_probability, filter_representatives, independence_series, purge_full_classes,
    purged_edge_probability_bound, purged_edge_probability_floor, ClassProfile, ClassRegime,
    FilterMode, SeriesMode, SeriesOptions,
};
use capforge::cli::verify_constructed;
use capforge::constructions::{
    equivalence_classes, explicit_power_set, multi_jump_product, sample_jump_graph,
    sample_simple_jump_graph, ClassIndex, ConstructedGraph, JumpParams, MultiJumpSpec,
};
use capforge::graph::{
    deserialize, is_independent_tuples, power_view, serialize, strong_power, strong_product,
};
use capforge::solver::{max_independent_set, max_independent_set_parallel, SolverBudget};
use capforge::{Graph, MaterializationCap, TupleVertex};
use common::{oracle_alpha, random_graph};

fn alpha(g: &Graph) -> usize {
    max_independent_set(g, &SolverBudget::unlimited()).size
}

fn tuples(nu: usize, n: usize, k: usize) -> impl Strategy<Value = Vec<TupleVertex>> {
    prop::collection::vec(
        prop::collection::vec(0..nu * n, k).prop_map(TupleVertex::new),
        0..25,
    )
}

fn jump_params() -> impl Strategy<Value = (usize, usize, u64)> {
    (2usize..=4, 2usize..=5, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classes_partition_pairs(nu in 2usize..=6, n in 2usize..=8) {
        let big_n = nu * n;
        let classes = equivalence_classes(nu, n).unwrap();
        let mut seen = BTreeSet::new();
        for c in &classes {
            let short = c.members.iter().all(|&(x, y)| nu % 2 == 0 && (x + big_n / 2) % big_n == y);
            prop_assert_eq!(c.members.len(), if short { nu / 2 } else { nu });
            for &(x, y) in &c.members {
                prop_assert!(seen.insert((x.min(y), x.max(y))));
            }
        }
        prop_assert_eq!(seen.len(), big_n * (big_n - 1) / 2);
        let short = classes.iter().filter(|c| c.members.len() < nu).count();
        prop_assert_eq!(short, if nu % 2 == 0 { n } else { 0 });
    }

    #[test]
    fn sampling_removes_one_edge_per_class((nu, n, seed) in jump_params()) {
        let p = JumpParams::new(nu, n, seed).unwrap();
        let g = sample_jump_graph(&p);
        let index = ClassIndex::new(p);
        let mut hits = vec![0; index.classes().len()];
        for &(u, v) in &g.removed_edges {
            prop_assert!(!g.graph.has_edge(u, v));
            hits[index.class_of(u, v)] += 1;
        }
        prop_assert!(hits.iter().all(|&h| h == 1));
        let big_n = p.vertex_count();
        prop_assert_eq!(g.graph.edge_count(), big_n * (big_n - 1) / 2 - hits.len());
        prop_assert!(g.graph.check_symmetric(1 << 12));
    }

    #[test]
    fn certificates_independent_up_to_three_nu(nu in 2usize..=3, n in 2usize..=3, seed: u64) {
        let p = JumpParams::new(nu, n, seed).unwrap();
        let g = sample_jump_graph(&p);
        for k in 1..=3 * nu {
            let cert = explicit_power_set(&p, k);
            prop_assert_eq!(cert.len(), p.vertex_count().pow((k / nu) as u32) * usize::from(k >= nu));
            prop_assert!(is_independent_tuples(&power_view(&g.graph, k).unwrap(), &cert).unwrap());
        }
    }

    #[test]
    fn verify_accepts_fresh_constructions((nu, n, seed) in jump_params(), simple: bool) {
        let p = JumpParams::new(nu, n, seed).unwrap();
        let g = if simple { sample_simple_jump_graph(&p) } else { sample_jump_graph(&p) };
        let checks = verify_constructed(&g, Some(2 * nu), MaterializationCap::DEFAULT).unwrap();
        prop_assert!(checks.iter().all(|c| c.passed), "{:?}", checks);
    }

    #[test]
    fn filtered_tuples_have_disjoint_residues(
        (nu, n, k, s) in (2usize..=4, 2usize..=6, 1usize..=5)
            .prop_flat_map(|(nu, n, k)| (Just(nu), Just(n), Just(k), tuples(nu, n, k)))
    ) {
        let p = JumpParams::new(nu, n, 0).unwrap();
        let index = ClassIndex::new(p);
        let kept = filter_representatives(&s, &p, k, FilterMode::Representatives).unwrap();
        let mut used_classes: BTreeSet<usize> = BTreeSet::new();
        for (i, u) in kept.iter().enumerate() {
            for v in &kept[i + 1..] {
                for a in u.coords() {
                    for b in v.coords() {
                        prop_assert_ne!(a % n, b % n);
                    }
                }
                // edge classes touched by distinct kept pairs never repeat
                let classes: BTreeSet<usize> = u
                    .coords()
                    .iter()
                    .zip(v.coords())
                    .filter(|(a, b)| a != b)
                    .map(|(&a, &b)| index.class_of(a, b))
                    .collect();
                for c in classes {
                    prop_assert!(used_classes.insert(c));
                }
            }
        }
        // a tuple is dropped exactly when it clashes with an earlier kept one
        let mut pos = 0;
        for t in &s {
            let clash = kept[..pos].iter().any(|u| {
                u.coords().iter().any(|a| t.coords().iter().any(|b| a % n == b % n))
            });
            if !clash {
                prop_assert_eq!(kept.get(pos), Some(t));
                pos += 1;
            }
        }
        prop_assert_eq!(pos, kept.len());
    }

    #[test]
    fn purge_matches_subset_scanner(
        (nu, n, k, s) in (2usize..=4, 2usize..=5)
            .prop_flat_map(|(nu, n)| (Just(nu), Just(n), nu..=nu + 3))
            .prop_flat_map(|(nu, n, k)| (Just(nu), Just(n), Just(k), tuples(nu, n, k)))
    ) {
        let p = JumpParams::new(nu, n, 0).unwrap();
        let big_n = nu * n;
        let orbits: Vec<BTreeSet<usize>> = (0..big_n)
            .map(|x| (0..nu).map(|j| (x + j * n) % big_n).collect())
            .collect();
        // a tuple is purged iff some nu-subset of its coordinates is an orbit
        let scanned: Vec<TupleVertex> = s
            .iter()
            .filter(|t| {
                let c = t.coords();
                !(0u32..1 << c.len()).any(|mask| {
                    let sub: BTreeSet<usize> =
                        (0..c.len()).filter(|&i| mask >> i & 1 == 1).map(|i| c[i]).collect();
                    sub.len() == nu && orbits.contains(&sub)
                })
            })
            .cloned()
            .collect();
        prop_assert_eq!(purge_full_classes(&s, &p, k).unwrap(), scanned);
    }

    #[test]
    fn merging_classes_never_raises_edge_probability(
        nu in 2usize..=6,
        ts in prop::collection::vec(1usize..=6, 2..6),
    ) {
        let ts: Vec<usize> = ts.into_iter().map(|t| t.min(nu)).collect();
        let (a, b) = (ts[0], ts[1]);
        prop_assume!(a + b <= nu);
        let before = ClassProfile::from_counts(ts.iter().copied().enumerate()).unwrap();
        let mut merged = vec![a + b];
        merged.extend_from_slice(&ts[2..]);
        let after = ClassProfile::from_counts(merged.into_iter().enumerate()).unwrap();
        let pb = edge_probability(&before, nu, ClassRegime::Ordinary).unwrap();
        let pa = edge_probability(&after, nu, ClassRegime::Ordinary).unwrap();
        prop_assert!(pa <= pb + 1e-15);
    }

    #[test]
    fn pushing_toward_nu_minus_one_never_raises(
        nu in 3usize..=6,
        ts in prop::collection::vec(1usize..=5, 2..6),
        shift in 1usize..=4,
    ) {
        let ts: Vec<usize> = ts.into_iter().map(|t| t.min(nu - 1)).collect();
        let (hi, lo) = (ts[0].max(ts[1]), ts[0].min(ts[1]));
        let d = shift.min(nu - 1 - hi).min(lo);
        let mut moved = ts.clone();
        moved[0] = hi + d;
        moved[1] = lo - d;
        let profile = |v: &[usize]| {
            ClassProfile::from_counts(v.iter().copied().enumerate().filter(|&(_, t)| t > 0)).unwrap()
        };
        let p0 = edge_probability(&profile(&ts), nu, ClassRegime::Purged).unwrap();
        let p1 = edge_probability(&profile(&moved), nu, ClassRegime::Purged).unwrap();
        prop_assert!(p1 <= p0 + 1e-15);
    }

    #[test]
    fn purged_edge_probability_floor_holds(
        nu in 2usize..=6,
        ts in prop::collection::vec(1usize..=5, 0..8),
    ) {
        let ts: Vec<usize> = ts.into_iter().map(|t| t.min(nu - 1)).collect();
        let k_prime: usize = ts.iter().sum();
        let profile = ClassProfile::from_counts(ts.iter().copied().enumerate()).unwrap();
        prop_assert_eq!(profile.k_prime(), k_prime);
        let p = edge_probability(&profile, nu, ClassRegime::Purged).unwrap();
        let floor = purged_edge_probability_floor(k_prime, nu);
        let bound = purged_edge_probability_bound(k_prime, nu);
        prop_assert!(p >= floor * (1.0 - 1e-12));
        prop_assert!(floor >= bound * (1.0 - 1e-12));
    }

    #[test]
    fn view_matches_materialized(seed: u64, n in 1usize..=6, density in 0.0f64..1.0, k in 1usize..=4) {
        prop_assume!(n.pow(k as u32) <= 4096);
        let g = random_graph(seed, n, density);
        let m = strong_power(&g, k, MaterializationCap::DEFAULT).unwrap();
        let view = power_view(&g, k).unwrap();
        let order = m.vertex_count();
        prop_assert_eq!(view.vertex_count(), Some(order));
        for a in 0..order {
            let ta = view.decode(a);
            prop_assert_eq!(view.encode(&ta), Some(a));
            for b in 0..order {
                let tb = view.decode(b);
                prop_assert_eq!(m.has_edge(a, b), a != b && view.adjacent(&ta, &tb));
            }
        }
    }

    #[test]
    fn series_lower_bounds_only_improve_with_search((nu, n, seed) in (2usize..=3, 2usize..=3, any::<u64>())) {
        let g = sample_jump_graph(&JumpParams::new(nu, n, seed).unwrap());
        let big_n = nu * n;
        let k_max = (1..=nu + 1).take_while(|&k| big_n.pow(k as u32) <= 1000).last().unwrap();
        let run = |mode| {
            let opts = SeriesOptions {
                k_max,
                mode,
                budget: SolverBudget::unlimited().with_nodes(20_000),
                ..Default::default()
            };
            independence_series(&g, &opts).unwrap()
        };
        let cert = run(SeriesMode::CertificateOnly);
        let exact = run(SeriesMode::Exact);
        for (c, e) in cert.entries.iter().zip(&exact.entries) {
            prop_assert!(e.a_k_lower >= c.a_k_lower - 1e-12);
            if let Some(u) = e.alpha_upper {
                prop_assert!(u >= e.alpha_lower);
            }
        }
        prop_assert!(exact.monotone_violations.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn product_is_super_multiplicative_and_commutative(
        s1: u64, s2: u64, n1 in 1usize..=7, n2 in 1usize..=7, d1 in 0.1f64..0.9, d2 in 0.1f64..0.9,
    ) {
        let g = random_graph(s1, n1, d1);
        let h = random_graph(s2, n2, d2);
        let gh = strong_product(&g, &h, MaterializationCap::DEFAULT).unwrap();
        let hg = strong_product(&h, &g, MaterializationCap::DEFAULT).unwrap();
        prop_assert_eq!(gh.vertex_count(), n1 * n2);
        prop_assert_eq!(gh.edge_count(), hg.edge_count());
        let (ag, ah, agh) = (oracle_alpha(&g), oracle_alpha(&h), alpha(&gh));
        prop_assert!(agh >= ag * ah);
        prop_assert_eq!(agh, alpha(&hg));
        // coordinate swap is an isomorphism
        for a in 0..n1 * n2 {
            for b in 0..n1 * n2 {
                let (sa, sb) = ((a % n2) * n1 + a / n2, (b % n2) * n1 + b / n2);
                prop_assert_eq!(gh.has_edge(a, b), hg.has_edge(sa, sb));
            }
        }
    }

    #[test]
    fn larger_budget_never_shrinks_result(seed: u64, n in 20usize..=60, density in 0.1f64..0.6, b in 1u64..200) {
        let g = random_graph(seed, n, density);
        let small = max_independent_set(&g, &SolverBudget::unlimited().with_nodes(b));
        let large = max_independent_set(&g, &SolverBudget::unlimited().with_nodes(b * 4));
        prop_assert!(large.size >= small.size);
    }

    #[test]
    fn solver_is_deterministic(seed: u64, n in 1usize..=50, density in 0.05f64..0.95) {
        let g = random_graph(seed, n, density);
        let a = max_independent_set(&g, &SolverBudget::unlimited());
        let b = max_independent_set(&g, &SolverBudget::unlimited());
        prop_assert_eq!(&a.members, &b.members);
        let p = max_independent_set_parallel(&g, &SolverBudget::unlimited(), 4);
        prop_assert_eq!(p.size, a.size);
    }

    #[test]
    fn files_round_trip(seed: u64, n in 1usize..=40, density in 0.0f64..1.0, jump: bool) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.col");
        let cg = if jump {
            sample_jump_graph(&JumpParams::new(2, n.max(2), seed).unwrap())
        } else {
            ConstructedGraph::plain(random_graph(seed, n, density))
        };
        serialize(&path, &cg.graph, Some(&cg.meta())).unwrap();
        let (g, meta) = deserialize(&path).unwrap();
        prop_assert!(g == cg.graph);
        let meta = meta.unwrap();
        prop_assert_eq!(&meta, &cg.meta());
        let back = ConstructedGraph::from_meta(g, &meta).unwrap();
        prop_assert_eq!(back.removed_edges, cg.removed_edges);
    }
}

#[test]
fn product_verifies_and_certifies() {
    for seed in 0..3 {
        let spec = MultiJumpSpec::with_base_seed(vec![2, 3], 4, 1.5, seed).unwrap();
        let g = multi_jump_product(&spec, MaterializationCap::DEFAULT).unwrap();
        let checks = verify_constructed(&g, Some(4), MaterializationCap::DEFAULT).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }
}

mod common;

use clawsched_core::clawfree::oracle::{ledger_mismatch, recompute_ledger_naive};
use clawsched_core::clawfree::{init_ledger, ClawFreer, TieBreak};
use clawsched_core::claws::{claw_attribution, list_preclaws};
use clawsched_core::rng::stream_rng;
use clawsched_core::{count_claws, list_claws, Edge, Graph};
use common::*;
use proptest::prelude::*;

const REL: f64 = 1e-12;

fn graph_strategy(max_n: usize, fractional: bool) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        let bits = prop::collection::vec(any::<bool>(), n * (n - 1) / 2);
        let weights = prop::collection::vec(1u32..=4, n);
        (Just(n), bits, weights).prop_map(move |(n, bits, w)| {
            let w = w
                .into_iter()
                .map(|x| if fractional { x as f64 / 3.0 } else { x as f64 })
                .collect();
            graph_from_bits(n, &bits, w)
        })
    })
}

/// Runs claw elimination, checking the ledger against the oracle after every step.
fn check_every_step(g: &Graph, tie: TieBreak) -> Result<(), TestCaseError> {
    let mut freer = ClawFreer::new(g, tie).unwrap();
    let naive = recompute_ledger_naive(g).unwrap();
    prop_assert_eq!(ledger_mismatch(g, freer.ledger(), &naive, REL), None);
    let budget = g.missing_edge_count();
    let mut steps = 0;
    let mut s_total: f64 = (0..g.len()).map(|v| freer.ledger().s(v)).sum();
    while let Some(step) = freer.step().unwrap() {
        steps += 1;
        prop_assert!(!g.has_edge(step.edge.0, step.edge.1));
        let naive = recompute_ledger_naive(freer.graph()).unwrap();
        prop_assert_eq!(ledger_mismatch(freer.graph(), freer.ledger(), &naive, REL), None);
        let s_now: f64 = (0..g.len()).map(|v| freer.ledger().s(v)).sum();
        prop_assert!(s_now <= s_total);
        s_total = s_now;
        prop_assert!(steps <= budget);
    }
    prop_assert_eq!(count_claws(freer.graph()), 0);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ledger_tracks_oracle_integral(g in graph_strategy(12, false), seed in any::<u64>()) {
        check_every_step(&g, TieBreak::Random(seed))?;
    }

    #[test]
    fn ledger_tracks_oracle_fractional(g in graph_strategy(10, true)) {
        check_every_step(&g, TieBreak::Lowest)?;
    }

    #[test]
    fn claw_counts_agree_with_brute_force(g in graph_strategy(12, false)) {
        let claws = list_claws(&g);
        prop_assert_eq!(count_claws(&g), brute_claws(&g));
        prop_assert_eq!(claws.len() as u64, count_claws(&g));
        for c in &claws {
            prop_assert!(c.leaves.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(c.leaves.iter().all(|&l| g.has_edge(c.center, l)));
            prop_assert!(!g.has_edge(c.leaves[0], c.leaves[1]));
            prop_assert!(!g.has_edge(c.leaves[0], c.leaves[2]));
            prop_assert!(!g.has_edge(c.leaves[1], c.leaves[2]));
        }
    }

    #[test]
    fn leaf_edges_destroy_every_listed_claw(g in graph_strategy(11, false)) {
        let claws = list_claws(&g);
        let mut h = g.clone();
        for c in &claws {
            let e = Edge::new(c.leaves[0], c.leaves[1]);
            if !h.has_edge(e.0, e.1) {
                h.try_add_edge(e.0, e.1).unwrap();
            }
        }
        let after = list_claws(&h);
        prop_assert!(claws.iter().all(|c| !after.contains(c)));
    }

    #[test]
    fn preclaws_match_definition(g in graph_strategy(9, false)) {
        let listed = list_preclaws(&g);
        let n = g.len();
        let mut expected = Vec::new();
        for c in 0..n {
            for x in 0..n {
                for y in (x + 1)..n {
                    for z in 0..n {
                        let distinct = c != x && c != y && c != z && x != z && y != z;
                        if distinct
                            && g.has_edge(c, x) && g.has_edge(c, y) && !g.has_edge(x, y)
                            && !g.has_edge(z, c) && !g.has_edge(z, x) && !g.has_edge(z, y)
                        {
                            expected.push((c, [x, y], z));
                        }
                    }
                }
            }
        }
        let mut got: Vec<_> = listed.iter().map(|p| (p.center, p.leaves, p.isolated)).collect();
        got.sort();
        expected.sort();
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn claw_count_matches_brute_force_at_forty_vertices() {
    for s in 0..4 {
        let mut rng = stream_rng(99, s);
        let g = random_graph(&mut rng, 40, 0.15 + 0.1 * s as f64, 1);
        assert_eq!(count_claws(&g), brute_claws(&g));
    }
}

#[test]
fn ledger_oracle_on_directional_conflict_graphs() {
    for trial in 0..20 {
        let (_, cg) = random_directional_graph(7, trial, 10, 20.0, 10.0);
        let mut freer = ClawFreer::new(&cg, TieBreak::Random(trial)).unwrap();
        loop {
            let naive = recompute_ledger_naive(freer.graph()).unwrap();
            assert_eq!(
                ledger_mismatch(freer.graph(), freer.ledger(), &naive, REL),
                None,
                "trial {trial}"
            );
            if freer.step().unwrap().is_none() {
                break;
            }
        }
    }
}

#[test]
fn init_ledger_matches_oracle_on_larger_graphs() {
    for s in 0..10 {
        let mut rng = stream_rng(5, s);
        let g = random_graph(&mut rng, 25, 0.3, 3);
        let a = init_ledger(&g).unwrap();
        let b = recompute_ledger_naive(&g).unwrap();
        assert_eq!(ledger_mismatch(&g, &a, &b, REL), None);
    }
}

#[test]
fn attribution_total_counts_every_participant() {
    for trial in 0..30 {
        let (net, cg) = random_directional_graph(3, trial, 10, 20.0, 12.0);
        let attribution = claw_attribution(&cg, &net);
        let total: u64 = attribution.values().sum();
        let expected: u64 = list_claws(&cg)
            .iter()
            .flat_map(|c| std::iter::once(c.center).chain(c.leaves))
            .map(|v| 1 + cg.transmission(v).receivers.len() as u64)
            .sum();
        assert_eq!(total, expected);
        assert_eq!(attribution.len(), net.len());
    }
}

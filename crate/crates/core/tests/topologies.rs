mod common;

use std::collections::BTreeSet;

use clawsched_core::conflict::enumerate_transmissions;
use clawsched_core::rng::stream_rng;
use clawsched_core::schedule::{exact_mwis, greedy_maximal_is, DEFAULT_BUDGET};
use clawsched_core::topology::*;
use clawsched_core::{build_conflict_graph, caro_wei, count_claws, list_claws, Claw, Edge, Transmission};
use common::exhaustive_mwis;

#[test]
fn five_node_line_golden_graph() {
    let net = line_network(&LineSpec::five_node_line()).unwrap();
    let cg = build_conflict_graph(&net).unwrap();
    let expected = [
        Transmission::new(0, vec![1]),
        Transmission::new(0, vec![2]),
        Transmission::new(0, vec![1, 2]),
        Transmission::new(1, vec![2]),
        Transmission::new(2, vec![3]),
        Transmission::new(3, vec![4]),
    ];
    assert_eq!(cg.transmissions(), &expected);
    assert_eq!(cg.weights(), &[1.0, 1.0, 2.0, 1.0, 1.0, 1.0]);
    assert_eq!(cg.edge_count(), 13);
    assert_eq!(cg.missing_edges().collect::<Vec<_>>(), vec![Edge(0, 5), Edge(3, 5)]);
    assert!(list_claws(&cg).is_empty());

    let exact = exact_mwis(&cg, DEFAULT_BUDGET).unwrap();
    assert_eq!(exact.weight, 2.0);
    assert_eq!(exhaustive_mwis(&cg), 2.0);
    assert!(caro_wei(&cg) <= 2.0);
    let greedy = greedy_maximal_is(&cg);
    assert_eq!(greedy.members, vec![2]);
    assert_eq!(greedy.weight, 2.0);
}

#[test]
fn spine_tree_golden_graph() {
    let net = tree_network(&TreeSpec::spine(&[2, 2, 2], TreeVariant::ScenarioII)).unwrap();
    let cg = build_conflict_graph(&net).unwrap();
    assert_eq!(cg.len(), 9);
    // Three sender cliques of 3, fully joined between parent and child senders.
    assert_eq!(cg.edge_count(), 27);
    let senders: Vec<u32> = cg.transmissions().iter().map(|t| t.sender).collect();
    assert_eq!(senders, vec![0, 0, 0, 1, 1, 1, 3, 3, 3]);
    for u in 0..9 {
        for v in (u + 1)..9 {
            let (a, b) = (senders[u], senders[v]);
            let expect = a == b || (a, b) == (0, 1) || (a, b) == (1, 3);
            assert_eq!(cg.has_edge(u, v), expect, "{u} {v}");
        }
    }
    assert_eq!(count_claws(&cg), 0);
}

#[test]
fn single_root_is_one_clique() {
    for k in 1..=5 {
        let cg = build_conflict_graph(&tree_network(&TreeSpec::spine(&[k], TreeVariant::ScenarioII)).unwrap()).unwrap();
        assert_eq!(cg.len(), (1 << k) - 1);
        assert_eq!(cg.edge_count(), cg.len() * (cg.len() - 1) / 2);
    }
}

#[test]
fn two_node_line_is_a_single_transmission() {
    let cg = build_conflict_graph(&line_network(&LineSpec::from_spacings(vec![1.0], 2.0).unwrap()).unwrap()).unwrap();
    assert_eq!((cg.len(), cg.edge_count()), (1, 0));
}

#[test]
fn single_hop_lines_are_claw_free() {
    for s in 0..500 {
        let spec = random_single_hop_line_spec(&mut stream_rng(1, s), 14, 1.0 + s as f64 % 7.0);
        let cg = build_conflict_graph(&line_network(&spec).unwrap()).unwrap();
        assert_eq!(count_claws(&cg), 0, "{spec:?}");
    }
}

#[test]
fn evenly_spaced_two_hop_line_has_a_claw() {
    // Centre 2->4; leaves 0->1 (jammed by 2), 3->4 (shared receiver), 6->7 (jams 4).
    let spec = LineSpec::from_spacings(vec![0.8; 7], 2.0).unwrap();
    let cg = build_conflict_graph(&line_network(&spec).unwrap()).unwrap();
    let find = |sender: u32, receivers: &[u32]| {
        cg.transmissions()
            .iter()
            .position(|t| t.sender == sender && t.receivers == receivers)
            .unwrap()
    };
    let claw = Claw {
        center: find(2, &[4]),
        leaves: [find(0, &[1]), find(3, &[4]), find(6, &[7])],
    };
    assert!(list_claws(&cg).contains(&claw));
    assert_eq!(count_claws(&cg), 2);
}

#[test]
fn line_reach_configurations_are_distinct() {
    for n in 2..=10 {
        let configs = all_reach_configurations(n);
        assert_eq!(configs.len(), 1 << (n - 2));
        let hypergraphs: BTreeSet<Vec<Transmission>> = configs
            .iter()
            .map(|r| enumerate_transmissions(&line_network(&LineSpec::from_reach(r, 3.0).unwrap()).unwrap()).unwrap())
            .collect();
        assert_eq!(hypergraphs.len(), 1 << (n - 2));
    }
}

#[test]
fn trees_are_claw_free() {
    for s in 0..300 {
        for variant in [TreeVariant::ScenarioII, TreeVariant::FullDuplex] {
            let spec = random_tree_spec(&mut stream_rng(2, s), 5, variant);
            let cg = build_conflict_graph(&tree_network(&spec).unwrap()).unwrap();
            assert_eq!(count_claws(&cg), 0, "{spec:?}");
        }
    }
}

#[test]
fn diamonds_are_claw_free() {
    for widths in [vec![1, 2, 3, 2, 1], vec![1, 1, 1, 1], vec![2, 3, 3, 2], vec![3]] {
        let cg = build_conflict_graph(&diamond_network(&DiamondSpec::regular(&widths).unwrap()).unwrap()).unwrap();
        assert_eq!(count_claws(&cg), 0, "{widths:?}");
    }
    for s in 0..300 {
        let spec = random_diamond_spec(&mut stream_rng(3, s), 6);
        let cg = build_conflict_graph(&diamond_network(&spec).unwrap()).unwrap();
        assert_eq!(count_claws(&cg), 0, "{spec:?}");
    }
}

#[test]
fn full_duplex_tree_splits_into_sender_cliques() {
    let spec = TreeSpec {
        fanout: vec![vec![3], vec![2, 2, 2]],
        variant: TreeVariant::FullDuplex,
    };
    let cg = build_conflict_graph(&tree_network(&spec).unwrap()).unwrap();
    let comps = cg.components();
    assert_eq!(comps.len(), 4);
    assert!(comps.iter().all(|c| c.len() == 7 || c.len() == 3));
}

//! Reference implementations used as oracles. Deliberately naive.
#![allow(dead_code)]

use clawsched_core::net::random_network_with;
use clawsched_core::rng::{stream_rng, SimRng};
use clawsched_core::{build_conflict_graph, ConflictGraph, Error, Graph, Network, RuleSet, ScenarioRules};
use rand::Rng;

/// Graph on `n` vertices; bit `k` of `bits` (row-major over `u < v`) sets edge k.
pub fn graph_from_bits(n: usize, bits: &[bool], weights: Vec<f64>) -> Graph {
    let mut g = Graph::new(weights);
    let mut k = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            if bits[k] {
                g.try_add_edge(u, v).unwrap();
            }
            k += 1;
        }
    }
    g
}

pub fn random_graph(rng: &mut SimRng, n: usize, p: f64, max_weight: u32) -> Graph {
    let weights = (0..n).map(|_| rng.gen_range(1..=max_weight) as f64).collect();
    let mut g = Graph::new(weights);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                g.try_add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Claws by inspecting every 4-subset.
pub fn brute_claws(g: &Graph) -> u64 {
    let n = g.len();
    let mut count = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    let q = [a, b, c, d];
                    let deg = |x: usize| q.iter().filter(|&&y| y != x && g.has_edge(x, y)).count();
                    let degs: Vec<usize> = q.iter().map(|&x| deg(x)).collect();
                    let edges: usize = degs.iter().sum::<usize>() / 2;
                    if edges == 3 && degs.contains(&3) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Maximum independent-set weight over all subsets (`n <= 25`).
pub fn exhaustive_mwis(g: &Graph) -> f64 {
    let n = g.len();
    assert!(n <= 25);
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, u| m | 1 << u)).collect();
    fn rec(v: usize, n: usize, allowed: u32, adj: &[u32], g: &Graph, acc: f64, best: &mut f64) {
        if v == n {
            if acc > *best {
                *best = acc;
            }
            return;
        }
        if allowed >> v & 1 == 1 {
            rec(v + 1, n, allowed & !adj[v], adj, g, acc + g.weight(v), best);
        }
        rec(v + 1, n, allowed, adj, g, acc, best);
    }
    let mut best = 0.0;
    rec(0, n, (1u32 << n) - 1, &adj, g, 0.0, &mut best);
    best
}

/// Seeded random directional-rule conflict graph, resampling cap violations.
pub fn random_directional_graph(seed: u64, stream: u64, n: usize, side: f64, range: f64) -> (Network, ConflictGraph) {
    let mut rng = stream_rng(seed, stream);
    loop {
        let net = random_network_with(&mut rng, n, side, range, ScenarioRules::new(RuleSet::DirectionalProtocol)).unwrap();
        match build_conflict_graph(&net) {
            Ok(cg) => return (net, cg),
            Err(Error::NeighborCapExceeded { .. }) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

//! Induced claws (K1,3) and pre-claws.
//!
//! A claw is identified by its unordered vertex 4-set; the centre is the only
//! member adjacent to the other three, so enumerating per centre counts each
//! claw once.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::conflict::ConflictGraph;
use crate::graph::Graph;
use crate::net::{Network, TransceiverId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Claw {
    pub center: usize,
    /// Ascending.
    pub leaves: [usize; 3],
}

/// Centre with two nonadjacent leaves, plus a fourth vertex adjacent to none of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PreClaw {
    pub center: usize,
    pub leaves: [usize; 2],
    pub isolated: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClawReport {
    pub count: u64,
    pub claws: Vec<Claw>,
    /// Appearances of each transceiver as sender or receiver across all claw vertices.
    pub attribution: BTreeMap<TransceiverId, u64>,
}

impl ClawReport {
    pub fn new(cg: &ConflictGraph, network: &Network) -> Self {
        let claws = list_claws(cg);
        let attribution = attribution_of(cg, network, &claws);
        ClawReport {
            count: claws.len() as u64,
            claws,
            attribution,
        }
    }
}

/// Visits every (centre, u1, u2) with u1 < u2 nonadjacent neighbours of the
/// centre, handing over the set of admissible third leaves (> u2).
fn for_each_open_pair(g: &Graph, mut f: impl FnMut(usize, usize, usize, &BitSet)) {
    let mut scratch = BitSet::new(g.len());
    for v in 0..g.len() {
        let nv = g.neighbors(v);
        for u1 in nv.iter() {
            for u2 in nv.iter_above(u1) {
                if g.has_edge(u1, u2) {
                    continue;
                }
                scratch.clone_from(nv);
                scratch.difference_with(g.neighbors(u1));
                scratch.difference_with(g.neighbors(u2));
                f(v, u1, u2, &scratch);
            }
        }
    }
}

pub fn count_claws(g: &Graph) -> u64 {
    let mut total = 0u64;
    for_each_open_pair(g, |_, _, u2, third| total += third.iter_above(u2).count() as u64);
    total
}

pub fn is_claw_free(g: &Graph) -> bool {
    let mut found = false;
    for_each_open_pair(g, |_, _, u2, third| found |= third.iter_above(u2).next().is_some());
    !found
}

/// Every claw once, ordered by centre then leaves.
pub fn list_claws(g: &Graph) -> Vec<Claw> {
    let mut out = Vec::new();
    for_each_open_pair(g, |v, u1, u2, third| {
        out.extend(third.iter_above(u2).map(|u3| Claw {
            center: v,
            leaves: [u1, u2, u3],
        }))
    });
    out
}

pub fn list_preclaws(g: &Graph) -> Vec<PreClaw> {
    let n = g.len();
    let mut out = Vec::new();
    for v in 0..n {
        let nv = g.neighbors(v);
        for u1 in nv.iter() {
            for u2 in nv.iter_above(u1) {
                if g.has_edge(u1, u2) {
                    continue;
                }
                let mut far = BitSet::full(n);
                far.difference_with(nv);
                far.difference_with(g.neighbors(u1));
                far.difference_with(g.neighbors(u2));
                // v, u1 and u2 are each adjacent to one of the subtracted rows.
                out.extend(far.iter().map(|z| PreClaw {
                    center: v,
                    leaves: [u1, u2],
                    isolated: z,
                }));
            }
        }
    }
    out
}

/// Per-transceiver claw involvement; every network id is present, zero if uninvolved.
pub fn claw_attribution(cg: &ConflictGraph, network: &Network) -> BTreeMap<TransceiverId, u64> {
    attribution_of(cg, network, &list_claws(cg))
}

fn attribution_of(cg: &ConflictGraph, network: &Network, claws: &[Claw]) -> BTreeMap<TransceiverId, u64> {
    let mut map: BTreeMap<TransceiverId, u64> = network.ids().map(|i| (i, 0)).collect();
    for claw in claws {
        for v in core::iter::once(claw.center).chain(claw.leaves) {
            for id in cg.transmission(v).participants() {
                *map.entry(id).or_default() += 1;
            }
        }
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) fn star(leaves: usize) -> Graph {
        Graph::from_edges(vec![1.0; leaves + 1], (1..=leaves).map(|l| (0, l))).unwrap()
    }

    #[test]
    fn single_claw() {
        let g = star(3);
        assert_eq!(count_claws(&g), 1);
        assert_eq!(
            list_claws(&g),
            vec![Claw {
                center: 0,
                leaves: [1, 2, 3]
            }]
        );
        assert!(!is_claw_free(&g));
    }

    #[test]
    fn four_independent_neighbours_give_four_claws() {
        assert_eq!(count_claws(&star(4)), 4);
        assert_eq!(count_claws(&star(6)), 20);
    }

    #[test]
    fn complete_graphs_are_claw_free() {
        for n in 0..8 {
            let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
            let g = Graph::from_edges(vec![1.0; n], edges).unwrap();
            assert_eq!(count_claws(&g), 0);
            assert!(is_claw_free(&g));
        }
    }

    #[test]
    fn disjoint_stars_add_up() {
        let g = Graph::from_edges(vec![1.0; 8], [(0, 1), (0, 2), (0, 3), (4, 5), (4, 6), (4, 7)]).unwrap();
        let claws = list_claws(&g);
        assert_eq!(claws.len(), 2);
        assert_eq!(claws[1].center, 4);
    }

    #[test]
    fn preclaw_cases() {
        let path_plus_isolated = Graph::from_edges(vec![1.0; 4], [(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            list_preclaws(&path_plus_isolated),
            vec![PreClaw {
                center: 1,
                leaves: [0, 2],
                isolated: 3
            }]
        );
        let k3_plus_isolated = Graph::from_edges(vec![1.0; 4], [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(list_preclaws(&k3_plus_isolated).is_empty());
        let p3 = Graph::from_edges(vec![1.0; 3], [(0, 1), (1, 2)]).unwrap();
        assert!(list_preclaws(&p3).is_empty());
    }
}

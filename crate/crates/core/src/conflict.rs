//! Broadcast transmissions and the weighted conflict graph over them.

use alloc::vec::Vec;
use core::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::net::{distance, Network, RuleSet, ScenarioRules, TransceiverId};

/// One sender reaching a nonempty set of its neighbors in a single slot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Transmission {
    pub sender: TransceiverId,
    /// Ascending, nonempty, never containing `sender`.
    pub receivers: Vec<TransceiverId>,
}

impl Transmission {
    pub fn new(sender: TransceiverId, mut receivers: Vec<TransceiverId>) -> Self {
        receivers.sort_unstable();
        receivers.dedup();
        Transmission { sender, receivers }
    }

    pub fn reaches(&self, id: TransceiverId) -> bool {
        self.receivers.binary_search(&id).is_ok()
    }

    /// Sender and receivers.
    pub fn participants(&self) -> impl Iterator<Item = TransceiverId> + '_ {
        core::iter::once(self.sender).chain(self.receivers.iter().copied())
    }

    fn shares_receiver(&self, other: &Transmission) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.receivers.len() && j < other.receivers.len() {
            match self.receivers[i].cmp(&other.receivers[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

/// Vertex weight assignment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFn {
    /// `w(v) = |J|`.
    #[default]
    ReceiverCount,
    Unit,
}

impl WeightFn {
    pub fn weight(self, t: &Transmission) -> f64 {
        match self {
            WeightFn::ReceiverCount => t.receivers.len() as f64,
            WeightFn::Unit => 1.0,
        }
    }
}

/// Conflict graph: vertex `k` is `transmissions[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConflictGraph {
    transmissions: Vec<Transmission>,
    graph: Graph,
}

impl Deref for ConflictGraph {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.graph
    }
}

impl ConflictGraph {
    /// Pairs transmissions with an already-built graph over them.
    pub fn from_parts(transmissions: Vec<Transmission>, graph: Graph) -> Result<Self> {
        if transmissions.len() != graph.len() {
            return Err(Error::InvalidGraph(alloc::format!(
                "{} transmissions for {} vertices",
                transmissions.len(),
                graph.len()
            )));
        }
        Ok(ConflictGraph { transmissions, graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn transmissions(&self) -> &[Transmission] {
        &self.transmissions
    }

    pub fn transmission(&self, v: usize) -> &Transmission {
        &self.transmissions[v]
    }

    /// Vertices grouped by sender, in vertex order. Each group is a clique.
    pub fn sender_groups(&self) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut last = None;
        for (v, t) in self.transmissions.iter().enumerate() {
            if last != Some(t.sender) {
                groups.push(Vec::new());
                last = Some(t.sender);
            }
            groups.last_mut().unwrap().push(v);
        }
        groups
    }

    /// Same transmissions with a different graph over them (e.g. after claw elimination).
    pub fn with_graph(&self, graph: Graph) -> Result<Self> {
        Self::from_parts(self.transmissions.clone(), graph)
    }
}

/// One transmission per nonempty neighbor subset, ordered by sender id then
/// subset bitmask (bit `b` = `b`-th neighbor in ascending id order).
pub fn enumerate_transmissions(network: &Network) -> Result<Vec<Transmission>> {
    let cap = network.rules().neighbor_cap;
    let mut ids: Vec<TransceiverId> = network.ids().collect();
    ids.sort_unstable();
    let mut out = Vec::new();
    for i in ids {
        let nb = network.neighbors(i)?;
        if nb.len() > cap {
            return Err(Error::NeighborCapExceeded {
                id: i,
                count: nb.len(),
                cap,
            });
        }
        for mask in 1u32..(1u32 << nb.len()) {
            let receivers = nb
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &j)| j)
                .collect();
            out.push(Transmission { sender: i, receivers });
        }
    }
    Ok(out)
}

/// Whether `s1` and `s2` cannot share a slot under `rules`. Symmetric.
pub fn conflicts(rules: &ScenarioRules, network: &Network, s1: &Transmission, s2: &Transmission) -> bool {
    let same_sender = s1.sender == s2.sender;
    let half_duplex = || s2.reaches(s1.sender) || s1.reaches(s2.sender);
    let shared_receiver = || s1.shares_receiver(s2);
    match rules.rule_set {
        RuleSet::LineProtocol => {
            same_sender
                || half_duplex()
                || shared_receiver()
                || interferes(rules, network, s1, s2, false)
                || interferes(rules, network, s2, s1, false)
        }
        RuleSet::TreeHop => {
            same_sender
                || half_duplex()
                || shared_receiver()
                || network.is_child_of(s1.sender, s2.sender)
                || network.is_child_of(s2.sender, s1.sender)
        }
        RuleSet::TreeFullDuplex => same_sender || shared_receiver(),
        RuleSet::DirectionalProtocol => {
            same_sender
                || shared_receiver()
                || interferes(rules, network, s1, s2, true)
                || interferes(rules, network, s2, s1, true)
        }
    }
}

/// Sender of `other` is at least as close (guard zone applied) to some receiver
/// of `victim` as the victim's own sender, and, if `aimed`, points at it.
fn interferes(rules: &ScenarioRules, network: &Network, victim: &Transmission, other: &Transmission, aimed: bool) -> bool {
    let own = network.position(victim.sender);
    let intruder = network.get(other.sender).expect("transmission sender belongs to the network");
    let at = intruder.position();
    victim.receivers.iter().any(|&j| {
        let pj = network.position(j);
        distance(at, pj) <= (1.0 + rules.guard_zone) * distance(own, pj) && (!aimed || intruder.antenna.covers(at, pj))
    })
}

pub fn build_conflict_graph(network: &Network) -> Result<ConflictGraph> {
    build_conflict_graph_weighted(network, WeightFn::default())
}

pub fn build_conflict_graph_weighted(network: &Network, weights: WeightFn) -> Result<ConflictGraph> {
    let transmissions = enumerate_transmissions(network)?;
    let rules = network.rules();
    let mut graph = Graph::new(transmissions.iter().map(|t| weights.weight(t)).collect());
    for a in 0..transmissions.len() {
        for b in (a + 1)..transmissions.len() {
            if conflicts(rules, network, &transmissions[a], &transmissions[b]) {
                graph.try_add_edge(a, b)?;
            }
        }
    }
    Ok(ConflictGraph { transmissions, graph })
}

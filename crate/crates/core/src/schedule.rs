//! One-slot schedules: maximal, exact, claw-broken and mixed independent sets.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::clawfree::{make_claw_free, ClawFreeResult};
use crate::claws::{claw_attribution, is_claw_free};
use crate::conflict::ConflictGraph;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::net::{Network, TransceiverId};
use crate::rng::SimRng;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependentSet {
    /// Ascending vertex indices.
    pub members: Vec<usize>,
    pub weight: f64,
}

impl IndependentSet {
    pub fn from_members(g: &Graph, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        let weight = members.iter().map(|&v| g.weight(v)).sum();
        IndependentSet { members, weight }
    }

    pub fn empty() -> Self {
        IndependentSet {
            members: Vec::new(),
            weight: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in range, distinct, pairwise nonadjacent, weight consistent.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        if self.members.iter().any(|&v| v >= g.len()) {
            return Err(Error::InvalidGraph("schedule member out of range".into()));
        }
        if !g.is_independent(&self.members) {
            return Err(Error::InvalidGraph("schedule is not an independent set".into()));
        }
        let w: f64 = self.members.iter().map(|&v| g.weight(v)).sum();
        if (w - self.weight).abs() > 1e-9 * w.abs().max(1.0) {
            return Err(Error::InvalidGraph(alloc::format!(
                "schedule weight {} != {}",
                self.weight,
                w
            )));
        }
        Ok(())
    }

    /// No vertex outside the set can be added.
    pub fn is_maximal(&self, g: &Graph) -> bool {
        let mut blocked = BitSet::new(g.len());
        for &v in &self.members {
            blocked.insert(v);
            blocked.union_with(g.neighbors(v));
        }
        blocked.count() == g.len()
    }
}

fn checked(g: &Graph, set: IndependentSet) -> IndependentSet {
    debug_assert!(set.verify(g).is_ok(), "scheduler returned a dependent set");
    set
}

/// Scans `order`, keeping every vertex with no kept neighbour.
pub fn maximal_is_ordered(g: &Graph, order: &[usize]) -> Result<IndependentSet> {
    let n = g.len();
    if order.len() != n {
        return Err(Error::InvalidPermutation);
    }
    let mut seen = BitSet::new(n);
    for &v in order {
        if v >= n || !seen.insert(v) {
            return Err(Error::InvalidPermutation);
        }
    }
    Ok(checked(g, maximal_unchecked(g, order)))
}

fn maximal_unchecked(g: &Graph, order: &[usize]) -> IndependentSet {
    let mut blocked = BitSet::new(g.len());
    let mut members = Vec::new();
    for &v in order {
        if !blocked.contains(v) {
            members.push(v);
            blocked.insert(v);
            blocked.union_with(g.neighbors(v));
        }
    }
    IndependentSet::from_members(g, members)
}

/// Vertices by weight descending, index ascending.
pub fn greedy_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by(|&a, &b| g.weight(b).total_cmp(&g.weight(a)).then(a.cmp(&b)));
    order
}

pub fn greedy_maximal_is(g: &Graph) -> IndependentSet {
    checked(g, maximal_unchecked(g, &greedy_order(g)))
}

/// Mean and standard error of the maximal-set weight over `trials` uniform orders.
pub fn expected_maximal_is(g: &Graph, trials: usize, rng: &mut SimRng) -> (f64, f64) {
    assert!(trials >= 1, "at least one trial");
    let mut order: Vec<usize> = (0..g.len()).collect();
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..trials {
        order.shuffle(rng);
        let w = maximal_unchecked(g, &order).weight;
        sum += w;
        sum_sq += w * w;
    }
    let t = trials as f64;
    let mean = sum / t;
    if trials == 1 {
        return (mean, 0.0);
    }
    let var = ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0);
    (mean, libm::sqrt(var / t))
}

/// Maximum-weight independent set by branch and bound over clique `groups`
/// (every vertex in at most one group; ungrouped vertices become singletons).
/// At most one vertex per group can be chosen, so the bound is the sum of each
/// remaining group's heaviest unblocked vertex.
pub fn exact_mwis_groups(g: &Graph, groups: &[Vec<usize>], budget: u64) -> Result<IndependentSet> {
    let n = g.len();
    let mut group_of = alloc::vec![usize::MAX; n];
    let mut all: Vec<Vec<usize>> = Vec::new();
    for grp in groups {
        for (i, &u) in grp.iter().enumerate() {
            if u >= n || group_of[u] != usize::MAX || grp[i + 1..].iter().any(|&v| !g.has_edge(u, v)) {
                return Err(Error::InvalidGraph("solver groups must be disjoint cliques".into()));
            }
            group_of[u] = all.len();
        }
        if !grp.is_empty() {
            all.push(grp.clone());
        }
    }
    for (v, g) in group_of.iter_mut().enumerate() {
        if *g == usize::MAX {
            *g = all.len();
            all.push(alloc::vec![v]);
        }
    }

    let mut nodes = 0u64;
    let mut members = Vec::new();
    for comp in g.components() {
        let (sub, map) = g.induced(&comp);
        let mut pos = alloc::collections::BTreeMap::new();
        for (i, &v) in map.iter().enumerate() {
            pos.insert(v, i);
        }
        let mut seen = BTreeSet::new();
        let mut sub_groups: Vec<Vec<usize>> = Vec::new();
        for &v in &comp {
            if seen.insert(group_of[v]) {
                sub_groups.push(all[group_of[v]].iter().filter_map(|u| pos.get(u).copied()).collect());
            }
        }
        let found = Search::new(&sub, sub_groups, budget, &mut nodes).run()?;
        members.extend(found.into_iter().map(|i| map[i]));
    }
    Ok(checked(g, IndependentSet::from_members(g, members)))
}

struct Search<'a> {
    g: &'a Graph,
    groups: Vec<Vec<usize>>,
    budget: u64,
    nodes: &'a mut u64,
    best: f64,
    best_set: Vec<usize>,
    stack: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, mut groups: Vec<Vec<usize>>, budget: u64, nodes: &'a mut u64) -> Self {
        for grp in groups.iter_mut() {
            grp.sort_by(|&a, &b| g.weight(b).total_cmp(&g.weight(a)).then(a.cmp(&b)));
        }
        // Branch order: descending degree sum plus heaviest member.
        let key = |grp: &Vec<usize>| -> f64 { grp.iter().map(|&v| g.degree(v) as f64).sum::<f64>() + g.weight(grp[0]) };
        groups.sort_by(|a, b| key(b).total_cmp(&key(a)));
        Search {
            g,
            groups,
            budget,
            nodes,
            best: -1.0,
            best_set: Vec::new(),
            stack: Vec::new(),
        }
    }

    fn run(mut self) -> Result<Vec<usize>> {
        let blocked = BitSet::new(self.g.len());
        self.dfs(0, &blocked, 0.0)?;
        Ok(self.best_set)
    }

    fn bound(&self, from: usize, blocked: &BitSet) -> f64 {
        self.groups[from..]
            .iter()
            .map(|grp| grp.iter().find(|&&v| !blocked.contains(v)).map_or(0.0, |&v| self.g.weight(v)))
            .sum()
    }

    fn dfs(&mut self, i: usize, blocked: &BitSet, current: f64) -> Result<()> {
        *self.nodes += 1;
        if *self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        if i == self.groups.len() {
            if current > self.best {
                self.best = current;
                self.best_set = self.stack.clone();
            }
            return Ok(());
        }
        if current + self.bound(i, blocked) <= self.best {
            return Ok(());
        }
        let options: Vec<usize> = self.groups[i].iter().copied().filter(|&v| !blocked.contains(v)).collect();
        for v in options {
            let mut next = blocked.clone();
            next.union_with(self.g.neighbors(v));
            self.stack.push(v);
            self.dfs(i + 1, &next, current + self.g.weight(v))?;
            self.stack.pop();
        }
        self.dfs(i + 1, blocked, current)
    }
}

/// Exact MWIS branching over the sender cliques of a conflict graph.
pub fn exact_mwis(cg: &ConflictGraph, budget: u64) -> Result<IndependentSet> {
    exact_mwis_groups(cg, &cg.sender_groups(), budget)
}

/// Exact MWIS on an arbitrary graph, branching over a greedy clique cover.
pub fn exact_mwis_graph(g: &Graph, budget: u64) -> Result<IndependentSet> {
    exact_mwis_groups(g, &greedy_clique_cover(g), budget)
}

fn greedy_clique_cover(g: &Graph) -> Vec<Vec<usize>> {
    let mut left = BitSet::full(g.len());
    let mut out = Vec::new();
    for v in 0..g.len() {
        if !left.remove(v) {
            continue;
        }
        let mut clique = alloc::vec![v];
        let mut cand = left.clone();
        cand.intersect_with(g.neighbors(v));
        while let Some(u) = cand.iter().next() {
            clique.push(u);
            left.remove(u);
            cand.intersect_with(g.neighbors(u));
        }
        out.push(clique);
    }
    out
}

/// Claw-frees a copy of the graph and solves it exactly; the result is
/// independent in the original graph too.
pub fn claw_broken_schedule(cg: &ConflictGraph, seed: u64, budget: u64) -> Result<(IndependentSet, ClawFreeResult)> {
    let freed = make_claw_free(cg, seed)?;
    let set = exact_mwis_groups(&freed.final_graph, &cg.sender_groups(), budget)?;
    Ok((checked(cg, set), freed))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub t1: BTreeSet<TransceiverId>,
    pub t2: BTreeSet<TransceiverId>,
}

impl Partition {
    pub fn new(network: &Network, t1: BTreeSet<TransceiverId>) -> Result<Self> {
        if let Some(&id) = t1.iter().find(|&&id| network.get(id).is_err()) {
            return Err(Error::UnknownTransceiver(id));
        }
        let t2 = network.ids().filter(|id| !t1.contains(id)).collect();
        Ok(Partition { t1, t2 })
    }
}

/// `t1` is every transceiver involved in some claw.
pub fn derive_claw_partition(cg: &ConflictGraph, network: &Network) -> Partition {
    let t1 = claw_attribution(cg, network)
        .into_iter()
        .filter(|&(_, w)| w > 0)
        .map(|(id, _)| id)
        .collect();
    Partition::new(network, t1).expect("attribution keys are network ids")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedOptions {
    pub budget: u64,
    /// Greedily extend the cleaned union to a maximal set.
    pub augment: bool,
}

impl Default for MixedOptions {
    fn default() -> Self {
        MixedOptions {
            budget: DEFAULT_BUDGET,
            augment: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedSchedule {
    pub schedule: IndependentSet,
    pub g1_size: usize,
    pub g2_size: usize,
    pub g2_claw_free: bool,
}

/// Greedy on the claw zone, exact on the rest, then resolve conflicts across
/// the two halves by dropping the lighter vertex of each adjacent pair.
pub fn mixed_schedule(cg: &ConflictGraph, p: &Partition, opts: MixedOptions) -> Result<MixedSchedule> {
    let (mut v1, mut v2) = (Vec::new(), Vec::new());
    for (v, t) in cg.transmissions().iter().enumerate() {
        if t.participants().any(|id| p.t1.contains(&id)) {
            v1.push(v);
        } else {
            v2.push(v);
        }
    }
    let (g1, map1) = cg.induced(&v1);
    let (g2, map2) = cg.induced(&v2);
    let a1 = greedy_maximal_is(&g1);

    let mut pos2 = alloc::vec![usize::MAX; cg.len()];
    for (i, &v) in map2.iter().enumerate() {
        pos2[v] = i;
    }
    let groups2: Vec<Vec<usize>> = cg
        .sender_groups()
        .into_iter()
        .map(|grp| {
            grp.into_iter()
                .filter(|&v| pos2[v] != usize::MAX)
                .map(|v| pos2[v])
                .collect::<Vec<_>>()
        })
        .filter(|grp| !grp.is_empty())
        .collect();
    let g2_claw_free = is_claw_free(&g2);
    let a2 = exact_mwis_groups(&g2, &groups2, opts.budget)?;

    let mut union: Vec<usize> = a1
        .members
        .iter()
        .map(|&i| map1[i])
        .chain(a2.members.iter().map(|&i| map2[i]))
        .collect();
    union.sort_unstable();
    let mut removed = alloc::vec![false; union.len()];
    for k in 0..union.len() {
        for l in (k + 1)..union.len() {
            if removed[k] {
                break;
            }
            if removed[l] || !cg.has_edge(union[k], union[l]) {
                continue;
            }
            // Ties drop the larger index.
            if cg.weight(union[l]) <= cg.weight(union[k]) {
                removed[l] = true;
            } else {
                removed[k] = true;
            }
        }
    }
    let mut members: Vec<usize> = union.iter().zip(&removed).filter(|(_, &r)| !r).map(|(&v, _)| v).collect();
    if opts.augment {
        let mut blocked = BitSet::new(cg.len());
        for &v in &members {
            blocked.insert(v);
            blocked.union_with(cg.neighbors(v));
        }
        for v in greedy_order(cg) {
            if !blocked.contains(v) {
                members.push(v);
                blocked.insert(v);
                blocked.union_with(cg.neighbors(v));
            }
        }
    }
    Ok(MixedSchedule {
        schedule: checked(cg, IndependentSet::from_members(cg, members)),
        g1_size: v1.len(),
        g2_size: v2.len(),
        g2_claw_free,
    })
}

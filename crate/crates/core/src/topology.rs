//! Generators for line, tree and diamond networks whose conflict graphs are claw-free.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{Network, RuleSet, ScenarioRules, Transceiver, TransceiverId};
use crate::rng::SimRng;

/// Nodes on the x axis, each reaching the next one or two nodes downstream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSpec {
    pub n: usize,
    /// `n - 1` gaps between consecutive nodes.
    pub spacings: Vec<f64>,
    pub range: f64,
    /// Per transmitting node `0..n-1`; the last entry is always 1.
    pub reach: Vec<u8>,
}

impl LineSpec {
    /// Spacings `2r/3, r/3, r, r` with `r = 3`, all exactly representable.
    pub fn five_node_line() -> Self {
        Self::from_spacings(alloc::vec![2.0, 1.0, 3.0, 3.0], 3.0).expect("valid line")
    }

    /// Derives `reach` from the geometry.
    pub fn from_spacings(spacings: Vec<f64>, range: f64) -> Result<Self> {
        let reach = (0..spacings.len())
            .map(|i| match spacings.get(i + 1) {
                Some(next) if spacings[i] + next <= range => 2,
                _ => 1,
            })
            .collect();
        let spec = LineSpec {
            n: spacings.len() + 1,
            spacings,
            range,
            reach,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Gaps realising `reach`: `g_i + g_{i+1}` sits just below `r` for reach 2
    /// and just above for reach 1, every gap in `[0.3r, 0.7r]`.
    pub fn from_reach(reach: &[u8], range: f64) -> Result<Self> {
        if reach.is_empty() {
            return Err(Error::SpecViolation("a line needs at least two nodes".into()));
        }
        let eps = 0.2 * range / (reach.len() + 1) as f64;
        let mut d = 0.0;
        let mut spacings = Vec::with_capacity(reach.len());
        for &hop in reach {
            spacings.push(0.5 * range + d);
            let e = if hop == 2 { -eps } else { eps };
            d = e - d;
        }
        let spec = LineSpec {
            n: reach.len() + 1,
            spacings,
            range,
            reach: reach.to_vec(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: alloc::string::String| Err(Error::SpecViolation(m));
        if self.n < 2 || self.spacings.len() != self.n - 1 || self.reach.len() != self.n - 1 {
            return fail(format!(
                "line of {} nodes needs {} spacings and reach entries",
                self.n,
                self.n.saturating_sub(1)
            ));
        }
        if !(self.range.is_finite() && self.range > 0.0) {
            return fail(format!("range {} must be positive", self.range));
        }
        if let Some(g) = self.spacings.iter().find(|&&g| !(g > 0.0 && g <= self.range)) {
            return fail(format!("gap {g} outside (0, {}]", self.range));
        }
        if let Some(w) = self.spacings.windows(3).find(|w| w[0] + w[1] + w[2] <= self.range) {
            return fail(format!(
                "three consecutive gaps {w:?} within range allow a 3-hop transmission"
            ));
        }
        if *self.reach.last().unwrap() != 1 {
            return fail("the second-to-last node can only reach the last".into());
        }
        for (i, &r) in self.reach.iter().enumerate() {
            let geometric = match self.spacings.get(i + 1) {
                Some(next) if self.spacings[i] + next <= self.range => 2,
                _ => 1,
            };
            if r != geometric {
                return fail(format!("node {i} has reach {r} but its gaps give {geometric}"));
            }
        }
        Ok(())
    }

    pub fn positions(&self) -> Vec<f64> {
        let mut x = 0.0;
        let mut out = alloc::vec![0.0];
        for g in &self.spacings {
            x += g;
            out.push(x);
        }
        out
    }
}

pub fn line_network(spec: &LineSpec) -> Result<Network> {
    spec.validate()?;
    let ts = spec
        .positions()
        .into_iter()
        .enumerate()
        .map(|(i, x)| Transceiver::new(i as TransceiverId, x, 0.0, spec.range))
        .collect();
    Network::new(ts, ScenarioRules::new(RuleSet::LineProtocol))
}

/// All `2^(n-2)` reach vectors for an `n`-node line, `n >= 2`.
pub fn all_reach_configurations(n: usize) -> Vec<Vec<u8>> {
    assert!(n >= 2, "a line needs at least two nodes");
    let free = n - 2;
    (0u64..(1 << free))
        .map(|mask| {
            let mut reach: Vec<u8> = (0..free).map(|b| 1 + (mask >> b & 1) as u8).collect();
            reach.push(1);
            reach
        })
        .collect()
}

/// Node count uniform in `[2, max_nodes]`; each gap uniform on
/// `(max(0, r - g_{i-1} - g_{i-2}), r]`, so every valid line has positive density.
pub fn random_line_spec(rng: &mut SimRng, max_nodes: usize, range: f64) -> LineSpec {
    let n = rng.gen_range(2..=max_nodes.max(2));
    let mut gaps: Vec<f64> = Vec::with_capacity(n - 1);
    while gaps.len() < n - 1 {
        let k = gaps.len();
        let lo = if k >= 2 {
            (range - gaps[k - 1] - gaps[k - 2]).max(0.0)
        } else {
            0.0
        };
        let g = lo + (range - lo) * (1.0 - rng.gen::<f64>());
        if g > lo && g <= range {
            gaps.push(g);
        }
    }
    LineSpec::from_spacings(gaps, range).expect("sampled gaps satisfy the line invariants")
}

/// Like [`random_line_spec`] but every gap lies in `(r/2, r]`: single-hop transmissions only.
pub fn random_single_hop_line_spec(rng: &mut SimRng, max_nodes: usize, range: f64) -> LineSpec {
    let n = rng.gen_range(2..=max_nodes.max(2));
    let gaps = (0..n - 1).map(|_| range * (1.0 - 0.5 * rng.gen::<f64>())).collect();
    LineSpec::from_spacings(gaps, range).expect("single-hop gaps are valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TreeVariant {
    /// Hop conflicts, at most one node per level with children.
    ScenarioII,
    FullDuplex,
}

/// Rooted tree by level: `fanout[l][k]` is the child count of the `k`-th node
/// on level `l`. Ids are assigned breadth-first from the root (0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSpec {
    pub fanout: Vec<Vec<usize>>,
    pub variant: TreeVariant,
}

impl TreeSpec {
    /// The first node of every level has `counts[l]` children, the rest none.
    pub fn spine(counts: &[usize], variant: TreeVariant) -> Self {
        let mut fanout = Vec::new();
        let mut width = 1;
        for &c in counts {
            let mut level = alloc::vec![0; width];
            level[0] = c;
            fanout.push(level);
            width = c;
            if c == 0 {
                break;
            }
        }
        TreeSpec { fanout, variant }
    }

    pub fn validate(&self) -> Result<()> {
        let mut width = 1;
        for (l, level) in self.fanout.iter().enumerate() {
            if level.len() != width {
                return Err(Error::SpecViolation(format!(
                    "level {l} has {} nodes, expected {width}",
                    level.len()
                )));
            }
            if self.variant == TreeVariant::ScenarioII && level.iter().filter(|&&c| c > 0).count() > 1 {
                return Err(Error::SpecViolation(format!(
                    "level {l} has more than one node with children"
                )));
            }
            width = level.iter().sum();
            if width == 0 && l + 1 < self.fanout.len() {
                return Err(Error::SpecViolation(format!("level {} is empty", l + 1)));
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        1 + self.fanout.iter().flatten().sum::<usize>()
    }
}

pub fn tree_network(spec: &TreeSpec) -> Result<Network> {
    spec.validate()?;
    let mut parents = BTreeMap::new();
    let mut ts = alloc::vec![Transceiver::new(0, 0.0, 0.0, 1.0)];
    let mut level_ids: Vec<TransceiverId> = alloc::vec![0];
    for (l, level) in spec.fanout.iter().enumerate() {
        let mut next = Vec::new();
        for (k, &c) in level.iter().enumerate() {
            for _ in 0..c {
                let id = ts.len() as TransceiverId;
                ts.push(Transceiver::new(id, (l + 1) as f64, next.len() as f64, 1.0));
                parents.insert(id, alloc::vec![level_ids[k]]);
                next.push(id);
            }
        }
        level_ids = next;
    }
    let rule_set = match spec.variant {
        TreeVariant::ScenarioII => RuleSet::TreeHop,
        TreeVariant::FullDuplex => RuleSet::TreeFullDuplex,
    };
    Network::with_structure(ts, ScenarioRules::new(rule_set), parents)
}

/// Up to `max_levels` levels, child counts in `[1, 3]`.
pub fn random_tree_spec(rng: &mut SimRng, max_levels: usize, variant: TreeVariant) -> TreeSpec {
    let levels = rng.gen_range(1..=max_levels.max(1));
    let mut fanout = Vec::new();
    let mut width = 1;
    for _ in 0..levels {
        let level: Vec<usize> = match variant {
            TreeVariant::ScenarioII => {
                let mut level = alloc::vec![0; width];
                level[rng.gen_range(0..width)] = rng.gen_range(1..=3);
                level
            }
            TreeVariant::FullDuplex => (0..width).map(|_| rng.gen_range(0..=3)).collect(),
        };
        width = level.iter().sum();
        fanout.push(level);
        if width == 0 {
            break;
        }
    }
    TreeSpec { fanout, variant }
}

/// Checkpoints left to right; `links[c]` joins checkpoint `c` to `c + 1`
/// as `(from index, to index)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondSpec {
    pub widths: Vec<usize>,
    pub links: Vec<Vec<(usize, usize)>>,
}

impl DiamondSpec {
    /// Node `k` links to `k` and `k + 1` when widening or keeping width, to
    /// `k - 1` and `k` when narrowing. Adjacent widths differ by at most 1.
    pub fn regular(widths: &[usize]) -> Result<Self> {
        let mut links = Vec::new();
        for w in widths.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a.abs_diff(b) > 1 {
                return Err(Error::SpecViolation(format!("widths {a} -> {b} differ by more than 1")));
            }
            let mut l = Vec::new();
            for k in 0..a {
                let targets: [Option<usize>; 2] = if b >= a {
                    [Some(k), Some(k + 1)]
                } else {
                    [k.checked_sub(1), Some(k)]
                };
                l.extend(targets.into_iter().flatten().filter(|&t| t < b).map(|t| (k, t)));
            }
            links.push(l);
        }
        let spec = DiamondSpec {
            widths: widths.to_vec(),
            links,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.widths.is_empty() || self.widths.contains(&0) {
            return Err(Error::SpecViolation("every checkpoint needs at least one node".into()));
        }
        if self.links.len() + 1 != self.widths.len() {
            return Err(Error::SpecViolation("one link set per pair of adjacent checkpoints".into()));
        }
        for (c, links) in self.links.iter().enumerate() {
            let mut out = alloc::vec![0usize; self.widths[c]];
            let mut inn = alloc::vec![0usize; self.widths[c + 1]];
            for (i, &(a, b)) in links.iter().enumerate() {
                if a >= out.len() || b >= inn.len() {
                    return Err(Error::SpecViolation(format!(
                        "link ({a}, {b}) out of range at checkpoint {c}"
                    )));
                }
                if links[..i].contains(&(a, b)) {
                    return Err(Error::SpecViolation(format!("duplicate link ({a}, {b}) at checkpoint {c}")));
                }
                out[a] += 1;
                inn[b] += 1;
            }
            if out.iter().chain(&inn).any(|&d| d > 2) {
                return Err(Error::SpecViolation(format!(
                    "checkpoint {c}: a node sends or receives more than twice"
                )));
            }
        }
        Ok(())
    }

    /// Id of node `k` in checkpoint `c`.
    pub fn id(&self, c: usize, k: usize) -> TransceiverId {
        (self.widths[..c].iter().sum::<usize>() + k) as TransceiverId
    }
}

pub fn diamond_network(spec: &DiamondSpec) -> Result<Network> {
    spec.validate()?;
    let mut ts = Vec::new();
    for (c, &w) in spec.widths.iter().enumerate() {
        for k in 0..w {
            ts.push(Transceiver::new(
                spec.id(c, k),
                c as f64,
                k as f64 - (w as f64 - 1.0) / 2.0,
                1.0,
            ));
        }
    }
    let mut parents: BTreeMap<TransceiverId, Vec<TransceiverId>> = BTreeMap::new();
    for (c, links) in spec.links.iter().enumerate() {
        for &(a, b) in links {
            parents.entry(spec.id(c + 1, b)).or_default().push(spec.id(c, a));
        }
    }
    Network::with_structure(ts, ScenarioRules::new(RuleSet::TreeFullDuplex), parents)
}

/// Widths in `[1, 3]`; each node gets one or two successors among those with
/// spare in-degree.
pub fn random_diamond_spec(rng: &mut SimRng, max_checkpoints: usize) -> DiamondSpec {
    let count = rng.gen_range(1..=max_checkpoints.max(1));
    let widths: Vec<usize> = (0..count).map(|_| rng.gen_range(1..=3)).collect();
    let mut links = Vec::new();
    for c in 0..count - 1 {
        let mut inn = alloc::vec![0usize; widths[c + 1]];
        let mut l = Vec::new();
        for a in 0..widths[c] {
            let want = rng.gen_range(1..=2);
            for _ in 0..want {
                let open: Vec<usize> = (0..widths[c + 1]).filter(|&b| inn[b] < 2 && !l.contains(&(a, b))).collect();
                if open.is_empty() {
                    break;
                }
                let b = open[rng.gen_range(0..open.len())];
                inn[b] += 1;
                l.push((a, b));
            }
        }
        links.push(l);
    }
    DiamondSpec { widths, links }
}

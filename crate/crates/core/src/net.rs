//! Physical networks of transceivers and the geometric/structural queries the
//! conflict-graph builder needs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, SimRng};

pub type TransceiverId = u32;

/// Half-angle of a directional antenna's cone, centred on the +x axis.
pub const CONE_HALF_ANGLE: f64 = PI / 6.0;

pub const DEFAULT_GUARD_ZONE: f64 = 1e-6;
pub const DEFAULT_NEIGHBOR_CAP: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Antenna {
    #[default]
    Omni,
    /// Cone of half-angle [`CONE_HALF_ANGLE`] facing +x.
    Directional,
}

impl Antenna {
    /// Whether a signal from `from` reaches direction `to` under this antenna pattern.
    pub fn covers(self, from: (f64, f64), to: (f64, f64)) -> bool {
        match self {
            Antenna::Omni => true,
            Antenna::Directional => in_forward_cone(from, to),
        }
    }
}

/// `to` lies strictly inside the +x cone of half-angle pi/6 at `from`.
///
/// Points with `x_to <= x_from` are never inside: the antennas face +x, and a
/// bare arctangent of the slope cannot tell the forward cone from the
/// backward one.
pub fn in_forward_cone(from: (f64, f64), to: (f64, f64)) -> bool {
    let dx = to.0 - from.0;
    if dx <= 0.0 {
        return false;
    }
    let dy = to.1 - from.1;
    libm::fabs(libm::atan(dy / dx)) < CONE_HALF_ANGLE
}

pub fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    libm::hypot(a.0 - b.0, a.1 - b.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transceiver {
    pub id: TransceiverId,
    pub x: f64,
    pub y: f64,
    #[serde(rename = "r")]
    pub range: f64,
    #[serde(default, skip_serializing_if = "is_omni")]
    pub antenna: Antenna,
}

fn is_omni(a: &Antenna) -> bool {
    *a == Antenna::Omni
}

impl Transceiver {
    pub fn new(id: TransceiverId, x: f64, y: f64, range: f64) -> Self {
        Transceiver {
            id,
            x,
            y,
            range,
            antenna: Antenna::Omni,
        }
    }

    pub fn with_antenna(mut self, antenna: Antenna) -> Self {
        self.antenna = antenna;
        self
    }

    pub fn position(&self) -> (f64, f64) {
        (self.x, self.y)
    }
}

/// Interference rule family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuleSet {
    /// Protocol model, time-division duplex, omnidirectional, downstream transmissions on a line.
    LineProtocol,
    /// Hop-based interference on a tree with half-duplex nodes.
    TreeHop,
    /// Full-duplex hop model: only shared senders or shared receivers conflict.
    TreeFullDuplex,
    /// Protocol model, full duplex, transmissions only towards +x, directional antennas.
    DirectionalProtocol,
}

impl RuleSet {
    pub fn is_structural(self) -> bool {
        matches!(self, RuleSet::TreeHop | RuleSet::TreeFullDuplex)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioRules {
    pub rule_set: RuleSet,
    pub guard_zone: f64,
    pub neighbor_cap: usize,
}

impl ScenarioRules {
    pub fn new(rule_set: RuleSet) -> Self {
        ScenarioRules {
            rule_set,
            guard_zone: DEFAULT_GUARD_ZONE,
            neighbor_cap: DEFAULT_NEIGHBOR_CAP,
        }
    }

    pub fn with_neighbor_cap(mut self, cap: usize) -> Self {
        self.neighbor_cap = cap;
        self
    }

    pub fn with_guard_zone(mut self, guard_zone: f64) -> Self {
        self.guard_zone = guard_zone;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.guard_zone.is_finite() && self.guard_zone >= 0.0) {
            return Err(Error::InvalidNetwork(format!("guard zone {} must be >= 0", self.guard_zone)));
        }
        if self.neighbor_cap == 0 {
            return Err(Error::InvalidNetwork("neighbor cap must be >= 1".into()));
        }
        Ok(())
    }
}

/// Which graph [`Network::is_connected`] inspects.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    /// `{i, j}` whenever `|P_i - P_j|` is within either endpoint's range; antennas ignored.
    #[default]
    Range,
    /// Undirected closure of the neighbor relation actually used for transmissions.
    Transmission,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    transceivers: Vec<Transceiver>,
    rules: ScenarioRules,
    /// child -> parents, present only for the structural rule sets.
    parents: Option<BTreeMap<TransceiverId, Vec<TransceiverId>>>,
    children: BTreeMap<TransceiverId, Vec<TransceiverId>>,
    index: BTreeMap<TransceiverId, usize>,
}

impl Network {
    /// Geometric network (line or directional rules).
    pub fn new(transceivers: Vec<Transceiver>, rules: ScenarioRules) -> Result<Self> {
        Self::build(transceivers, rules, None)
    }

    /// Network with an explicit child -> parents hop structure.
    pub fn with_structure(
        transceivers: Vec<Transceiver>,
        rules: ScenarioRules,
        parents: BTreeMap<TransceiverId, Vec<TransceiverId>>,
    ) -> Result<Self> {
        Self::build(transceivers, rules, Some(parents))
    }

    pub fn build(
        transceivers: Vec<Transceiver>,
        rules: ScenarioRules,
        parents: Option<BTreeMap<TransceiverId, Vec<TransceiverId>>>,
    ) -> Result<Self> {
        rules.validate()?;
        let mut index = BTreeMap::new();
        for (i, t) in transceivers.iter().enumerate() {
            if index.insert(t.id, i).is_some() {
                return Err(Error::DuplicateTransceiver(t.id));
            }
            if !(t.x.is_finite() && t.y.is_finite()) {
                return Err(Error::InvalidNetwork(format!(
                    "transceiver {} has a non-finite position",
                    t.id
                )));
            }
            if !(t.range.is_finite() && t.range >= 0.0) {
                return Err(Error::InvalidNetwork(format!(
                    "transceiver {} has invalid range {}",
                    t.id, t.range
                )));
            }
        }
        let structural = rules.rule_set.is_structural();
        let mut children: BTreeMap<TransceiverId, Vec<TransceiverId>> = BTreeMap::new();
        match (&parents, structural) {
            (None, true) => {
                return Err(Error::InvalidNetwork("tree rule sets need a hop structure".into()));
            }
            (Some(_), false) => {
                return Err(Error::InvalidNetwork("hop structure given for a geometric rule set".into()));
            }
            _ => {}
        }
        let mut parents = parents;
        if let Some(p) = parents.as_mut() {
            for (child, ps) in p.iter_mut() {
                if !index.contains_key(child) {
                    return Err(Error::UnknownTransceiver(*child));
                }
                ps.sort_unstable();
                ps.dedup();
                for parent in ps.iter() {
                    if !index.contains_key(parent) {
                        return Err(Error::UnknownTransceiver(*parent));
                    }
                    if parent == child {
                        return Err(Error::InvalidNetwork(format!("transceiver {child} is its own parent")));
                    }
                    children.entry(*parent).or_default().push(*child);
                }
            }
            p.retain(|_, ps| !ps.is_empty());
            for c in children.values_mut() {
                c.sort_unstable();
            }
            check_acyclic(&index, &children)?;
            if rules.rule_set == RuleSet::TreeHop {
                if p.values().any(|ps| ps.len() > 1) {
                    return Err(Error::InvalidNetwork("a tree node has more than one parent".into()));
                }
                let roots = transceivers.len() - p.len();
                if roots != 1 {
                    return Err(Error::InvalidNetwork(format!("tree must have a single root, found {roots}")));
                }
            }
        }
        Ok(Network {
            transceivers,
            rules,
            parents,
            children,
            index,
        })
    }

    pub fn transceivers(&self) -> &[Transceiver] {
        &self.transceivers
    }

    pub fn rules(&self) -> &ScenarioRules {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.transceivers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transceivers.is_empty()
    }

    /// child -> parents map, for tree and diamond networks.
    pub fn structure(&self) -> Option<&BTreeMap<TransceiverId, Vec<TransceiverId>>> {
        self.parents.as_ref()
    }

    pub fn get(&self, id: TransceiverId) -> Result<&Transceiver> {
        self.index
            .get(&id)
            .map(|&i| &self.transceivers[i])
            .ok_or(Error::UnknownTransceiver(id))
    }

    pub fn position(&self, id: TransceiverId) -> (f64, f64) {
        self.transceivers[self.index[&id]].position()
    }

    pub fn ids(&self) -> impl Iterator<Item = TransceiverId> + '_ {
        self.transceivers.iter().map(|t| t.id)
    }

    /// `child` is a direct child of `parent` in the hop structure.
    pub fn is_child_of(&self, child: TransceiverId, parent: TransceiverId) -> bool {
        self.children.get(&parent).is_some_and(|c| c.binary_search(&child).is_ok())
    }

    /// Transceivers `i` can transmit to, ascending by id.
    pub fn neighbors(&self, i: TransceiverId) -> Result<Vec<TransceiverId>> {
        let me = self.get(i)?;
        if self.rules.rule_set.is_structural() {
            return Ok(self.children.get(&i).cloned().unwrap_or_default());
        }
        let from = me.position();
        let mut out: Vec<TransceiverId> = self
            .transceivers
            .iter()
            .filter(|t| t.id != i)
            .filter(|t| distance(from, t.position()) <= me.range)
            .filter(|t| match self.rules.rule_set {
                // Downstream only: transmissions flow from source to sink.
                RuleSet::LineProtocol => t.x > me.x,
                RuleSet::DirectionalProtocol => me.x < t.x && me.antenna.covers(from, t.position()),
                RuleSet::TreeHop | RuleSet::TreeFullDuplex => unreachable!(),
            })
            .map(|t| t.id)
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    pub fn mean_neighbor_count(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let total: usize = self.ids().map(|i| self.neighbors(i).map_or(0, |n| n.len())).sum();
        total as f64 / self.len() as f64
    }

    /// True iff the chosen undirected graph has exactly one component.
    pub fn is_connected(&self, mode: Connectivity) -> bool {
        let n = self.len();
        if n <= 1 {
            return true;
        }
        let mut adj: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
        match mode {
            Connectivity::Range => {
                for a in 0..n {
                    for b in (a + 1)..n {
                        let (ta, tb) = (&self.transceivers[a], &self.transceivers[b]);
                        let d = distance(ta.position(), tb.position());
                        if d <= ta.range || d <= tb.range {
                            adj[a].push(b);
                            adj[b].push(a);
                        }
                    }
                }
            }
            Connectivity::Transmission => {
                for (a, t) in self.transceivers.iter().enumerate() {
                    for j in self.neighbors(t.id).unwrap_or_default() {
                        let b = self.index[&j];
                        adj[a].push(b);
                        adj[b].push(a);
                    }
                }
            }
        }
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        reached == n
    }
}

fn check_acyclic(index: &BTreeMap<TransceiverId, usize>, children: &BTreeMap<TransceiverId, Vec<TransceiverId>>) -> Result<()> {
    // Kahn's algorithm over the parent -> child relation.
    let mut indeg: BTreeMap<TransceiverId, usize> = index.keys().map(|&k| (k, 0)).collect();
    for cs in children.values() {
        for c in cs {
            *indeg.get_mut(c).unwrap() += 1;
        }
    }
    let mut ready: Vec<TransceiverId> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&k, _)| k).collect();
    let mut visited = 0;
    while let Some(v) = ready.pop() {
        visited += 1;
        for c in children.get(&v).into_iter().flatten() {
            let d = indeg.get_mut(c).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.push(*c);
            }
        }
    }
    if visited != index.len() {
        return Err(Error::InvalidNetwork("hop structure contains a cycle".into()));
    }
    Ok(())
}

/// `n` transceivers uniform on `[0, side]^2`, ids `0..n`, all with range `range`.
///
/// Under [`RuleSet::DirectionalProtocol`] every antenna is directional.
pub fn random_network(n: usize, side: f64, range: f64, rules: ScenarioRules, seed: u64) -> Result<Network> {
    random_network_with(&mut rng_from_seed(seed), n, side, range, rules)
}

pub fn random_network_with(rng: &mut SimRng, n: usize, side: f64, range: f64, rules: ScenarioRules) -> Result<Network> {
    if n == 0 {
        return Err(Error::InvalidNetwork("need at least one transceiver".into()));
    }
    if !(side.is_finite() && side > 0.0) {
        return Err(Error::InvalidNetwork(format!("side {side} must be positive")));
    }
    if rules.rule_set.is_structural() {
        return Err(Error::InvalidNetwork("random placement needs a geometric rule set".into()));
    }
    let antenna = match rules.rule_set {
        RuleSet::DirectionalProtocol => Antenna::Directional,
        _ => Antenna::Omni,
    };
    let transceivers = (0..n)
        .map(|i| {
            let x = rng.gen::<f64>() * side;
            let y = rng.gen::<f64>() * side;
            Transceiver::new(i as TransceiverId, x, y, range).with_antenna(antenna)
        })
        .collect();
    Network::new(transceivers, rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// A-B-C-D-E with gaps 2r/3, r/3, r, r and r = 3.
    pub(crate) fn five_node_line() -> Network {
        let xs = [0.0, 2.0, 3.0, 6.0, 9.0];
        let ts = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| Transceiver::new(i as u32, x, 0.0, 3.0))
            .collect();
        Network::new(ts, ScenarioRules::new(RuleSet::LineProtocol)).unwrap()
    }

    #[test]
    fn line_neighbors() {
        let net = five_node_line();
        assert_eq!(net.neighbors(0).unwrap(), vec![1, 2]);
        assert_eq!(net.neighbors(1).unwrap(), vec![2]);
        assert_eq!(net.neighbors(4).unwrap(), Vec::<u32>::new());
        assert_eq!(net.neighbors(9), Err(Error::UnknownTransceiver(9)));
        assert!(net.is_connected(Connectivity::Range));
    }

    #[test]
    fn single_node() {
        let net = Network::new(
            vec![Transceiver::new(1, 0.0, 0.0, 1.0)],
            ScenarioRules::new(RuleSet::LineProtocol),
        )
        .unwrap();
        assert!(net.neighbors(1).unwrap().is_empty());
        assert!(net.is_connected(Connectivity::Range));
    }

    #[test]
    fn boundary_distance_is_in_range() {
        let rules = ScenarioRules::new(RuleSet::DirectionalProtocol);
        let ts = vec![Transceiver::new(0, 0.0, 0.0, 2.5), Transceiver::new(1, 2.5, 0.0, 2.5)];
        let net = Network::new(ts, rules).unwrap();
        assert_eq!(net.neighbors(0).unwrap(), vec![1]);
        let far = vec![Transceiver::new(0, 0.0, 0.0, 2.5), Transceiver::new(1, 2.6, 0.0, 2.5)];
        assert!(!Network::new(far, rules).unwrap().is_connected(Connectivity::Range));
    }

    #[test]
    fn directional_cone_and_ties() {
        let rules = ScenarioRules::new(RuleSet::DirectionalProtocol);
        let d = Antenna::Directional;
        let ts = vec![
            Transceiver::new(0, 0.0, 0.0, 10.0).with_antenna(d),
            Transceiver::new(1, 2.0, 0.5, 10.0).with_antenna(d), // inside the cone
            Transceiver::new(2, 1.0, 1.0, 10.0).with_antenna(d), // 45 degrees: outside
            Transceiver::new(3, 0.0, 3.0, 10.0).with_antenna(d), // same x: never
        ];
        let net = Network::new(ts, rules).unwrap();
        assert_eq!(net.neighbors(0).unwrap(), vec![1]);
        assert!(net.neighbors(3).unwrap().is_empty());
        // Omni antennas under the same rules only keep the x-ordering filter.
        let omni: Vec<_> = net
            .transceivers()
            .iter()
            .map(|t| Transceiver {
                antenna: Antenna::Omni,
                ..*t
            })
            .collect();
        let net = Network::new(omni, rules).unwrap();
        assert_eq!(net.neighbors(0).unwrap(), vec![1, 2]);
    }

    #[test]
    fn random_network_is_seeded_and_bounded() {
        let rules = ScenarioRules::new(RuleSet::DirectionalProtocol);
        let a = random_network(10, 10.0, 7.0, rules, 42).unwrap();
        let b = random_network(10, 10.0, 7.0, rules, 42).unwrap();
        assert_eq!(a, b);
        assert!(a
            .transceivers()
            .iter()
            .all(|t| (0.0..=10.0).contains(&t.x) && (0.0..=10.0).contains(&t.y)));
        let c = random_network(10, 10.0, 7.0, rules, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn structure_validation() {
        let ts: Vec<_> = (0..3).map(|i| Transceiver::new(i, i as f64, 0.0, 1.0)).collect();
        let rules = ScenarioRules::new(RuleSet::TreeHop);
        assert!(Network::new(ts.clone(), rules).is_err());
        let mut p = BTreeMap::new();
        p.insert(1, vec![0]);
        p.insert(2, vec![0]);
        let net = Network::with_structure(ts.clone(), rules, p.clone()).unwrap();
        assert_eq!(net.neighbors(0).unwrap(), vec![1, 2]);
        assert!(net.is_child_of(2, 0));
        let mut cyc = p.clone();
        cyc.insert(0, vec![2]);
        assert!(Network::with_structure(ts.clone(), ScenarioRules::new(RuleSet::TreeFullDuplex), cyc).is_err());
        let mut two_parents = BTreeMap::new();
        two_parents.insert(2, vec![0, 1]);
        two_parents.insert(1, vec![0]);
        assert!(Network::with_structure(ts.clone(), rules, two_parents.clone()).is_err());
        assert!(Network::with_structure(ts, ScenarioRules::new(RuleSet::TreeFullDuplex), two_parents).is_ok());
    }

    #[test]
    fn rejects_duplicates_and_bad_rules() {
        let ts = vec![Transceiver::new(0, 0.0, 0.0, 1.0), Transceiver::new(0, 1.0, 0.0, 1.0)];
        assert_eq!(
            Network::new(ts, ScenarioRules::new(RuleSet::LineProtocol)),
            Err(Error::DuplicateTransceiver(0))
        );
        let bad = ScenarioRules::new(RuleSet::LineProtocol).with_neighbor_cap(0);
        assert!(Network::new(vec![], bad).is_err());
        let bad = ScenarioRules::new(RuleSet::LineProtocol).with_guard_zone(-1.0);
        assert!(Network::new(vec![], bad).is_err());
    }
}

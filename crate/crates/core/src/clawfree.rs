//! Greedy claw elimination by edge insertion.
//!
//! The [`EdgeLedger`] keeps, for every missing edge `e`, the net claw decrease
//! `Δ_e` if `e` were added, the number of existing claws `Δ*_e` it would
//! destroy, and the loss estimate `M_e`. Adding `e = {a, b}` changes the
//! ledger only on 4-sets containing both `a` and `b`, which splits into five
//! cases (pre-edge neighbourhoods, `far = V \ (N_a ∪ N_b ∪ {a, b})`):
//!
//! 1. claw with leaves `a, b, u'` and centre `u ∈ N_a ∩ N_b` is destroyed;
//! 2. claw with centre `x ∈ {a, b}` and leaves `y, u, u'` is created;
//! 3. pre-claw with leaves `a, b`, centre in `N_a ∩ N_b` is destroyed;
//! 4. pre-claw with leaf `x` and isolated vertex `y` is destroyed;
//! 5. pre-claw with centre `x` and leaf `y` is created.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::rng::{rng_from_seed, SimRng};

/// Largest weight for which ratio comparisons are done in exact integer arithmetic.
const EXACT_WEIGHT_LIMIT: f64 = (1u64 << 40) as f64;

/// `Σ_v w(v) / (d_v + 1)`.
pub fn caro_wei(g: &Graph) -> f64 {
    (0..g.len()).map(|v| g.weight(v) / (g.degree(v) + 1) as f64).sum()
}

fn m_term(w: f64, d: usize) -> f64 {
    w / (((d + 1) * (d + 2)) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeLedger {
    n: usize,
    weights: Vec<f64>,
    /// Present iff every weight is a small nonnegative integer.
    int_weights: Option<Vec<u64>>,
    d: Vec<usize>,
    s: Vec<f64>,
    /// Dense upper-triangular tables indexed by `u * n + v`, `u < v`;
    /// only entries of missing edges are meaningful.
    delta: Vec<i64>,
    delta_star: Vec<i64>,
    m: Vec<f64>,
    claws: i64,
}

impl EdgeLedger {
    fn blank(g: &Graph) -> Self {
        let n = g.len();
        let weights = g.weights().to_vec();
        let int_weights = weights
            .iter()
            .all(|&w| libm::trunc(w) == w && w <= EXACT_WEIGHT_LIMIT)
            .then(|| weights.iter().map(|&w| w as u64).collect());
        let d: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let s = (0..n).map(|v| weights[v] / (d[v] + 1) as f64).collect();
        let mut ledger = EdgeLedger {
            n,
            weights,
            int_weights,
            d,
            s,
            delta: alloc::vec![0; n * n],
            delta_star: alloc::vec![0; n * n],
            m: alloc::vec![0.0; n * n],
            claws: 0,
        };
        for e in g.missing_edges() {
            ledger.refresh_m(e.0, e.1);
        }
        ledger
    }

    #[inline]
    fn idx(&self, u: usize, v: usize) -> usize {
        if u < v {
            u * self.n + v
        } else {
            v * self.n + u
        }
    }

    fn refresh_m(&mut self, u: usize, v: usize) {
        let i = self.idx(u, v);
        self.m[i] = m_term(self.weights[u], self.d[u]) + m_term(self.weights[v], self.d[v]);
    }

    #[inline]
    fn bump(&mut self, u: usize, v: usize, by: i64, star: bool) {
        let i = self.idx(u, v);
        self.delta[i] += by;
        if star {
            self.delta_star[i] += by;
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn claw_count(&self) -> i64 {
        self.claws
    }

    pub fn degree(&self, v: usize) -> usize {
        self.d[v]
    }

    pub fn s(&self, v: usize) -> f64 {
        self.s[v]
    }

    pub fn delta(&self, e: Edge) -> i64 {
        self.delta[self.idx(e.0, e.1)]
    }

    pub fn delta_star(&self, e: Edge) -> i64 {
        self.delta_star[self.idx(e.0, e.1)]
    }

    pub fn m(&self, e: Edge) -> f64 {
        self.m[self.idx(e.0, e.1)]
    }

    /// `M_e` as `(numerator, denominator)` over the integers, if weights are integral.
    fn m_exact(&self, e: Edge) -> Option<(i128, i128)> {
        let w = self.int_weights.as_ref()?;
        let q = |v: usize| ((self.d[v] + 1) * (self.d[v] + 2)) as i128;
        let (q0, q1) = (q(e.0), q(e.1));
        Some((w[e.0] as i128 * q1 + w[e.1] as i128 * q0, q0 * q1))
    }

    /// Orders `Δ_a / M_a` against `Δ_b / M_b`.
    fn cmp_ratio(&self, a: Edge, b: Edge) -> core::cmp::Ordering {
        let (da, db) = (self.delta(a) as i128, self.delta(b) as i128);
        match (self.m_exact(a), self.m_exact(b)) {
            (Some((na, qa)), Some((nb, qb))) => (da * qa * nb).cmp(&(db * qb * na)),
            _ => {
                let ra = da as f64 / self.m(a);
                let rb = db as f64 / self.m(b);
                ra.partial_cmp(&rb).unwrap_or(core::cmp::Ordering::Equal)
            }
        }
    }
}

/// Ledger from the graph by the claw / pre-claw sweep.
pub fn init_ledger(g: &Graph) -> Result<EdgeLedger> {
    g.check_positive_weights()?;
    let n = g.len();
    let mut ledger = EdgeLedger::blank(g);
    let mut rest = BitSet::new(n);
    for v in 0..n {
        let nv = g.neighbors(v);
        for u1 in nv.iter() {
            for u2 in nv.iter_above(u1) {
                if g.has_edge(u1, u2) {
                    continue;
                }
                rest.clone_from(nv);
                rest.difference_with(g.neighbors(u1));
                rest.difference_with(g.neighbors(u2));
                for u3 in rest.iter_above(u2) {
                    ledger.bump(u1, u2, 1, true);
                    ledger.bump(u1, u3, 1, true);
                    ledger.bump(u2, u3, 1, true);
                    ledger.claws += 1;
                }
            }
        }
        // Pre-claws centred at v with isolated vertex v2: nonadjacent pairs
        // inside A = N_v \ N_v2, i.e. C(|A|, 2) minus the edges of G[A].
        let mut a = BitSet::new(n);
        for v2 in 0..n {
            if v2 == v || nv.contains(v2) {
                continue;
            }
            a.clone_from(nv);
            a.difference_with(g.neighbors(v2));
            let size = a.count() as i64;
            if size < 2 {
                continue;
            }
            let inner: i64 = a.iter().map(|u| g.neighbors(u).intersection_count(&a) as i64).sum::<i64>() / 2;
            let open = size * (size - 1) / 2 - inner;
            if open > 0 {
                ledger.bump(v, v2, -open, false);
            }
        }
    }
    Ok(ledger)
}

/// Adds `e` to `g` and updates `ledger` incrementally.
pub fn apply_edge(g: &mut Graph, ledger: &mut EdgeLedger, e: Edge) -> Result<()> {
    let Edge(a, b) = Edge::new(e.0, e.1);
    if a >= g.len() || b >= g.len() || a == b {
        return Err(Error::InvalidGraph(alloc::format!("edge ({a}, {b}) not a vertex pair")));
    }
    if g.has_edge(a, b) {
        return Err(Error::EdgeAlreadyPresent(a, b));
    }
    let n = g.len();
    let (na, nb) = (g.neighbors(a).clone(), g.neighbors(b).clone());
    let mut far = BitSet::full(n);
    far.difference_with(&na);
    far.difference_with(&nb);
    far.remove(a);
    far.remove(b);
    let mut common = na.clone();
    common.intersect_with(&nb);

    // Types 1 and 3.
    for u in common.iter() {
        let nu = g.neighbors(u);
        for u2 in far.iter() {
            if nu.contains(u2) {
                ledger.bump(a, u2, -1, true);
                ledger.bump(b, u2, -1, true);
            } else {
                ledger.bump(u, u2, 1, false);
            }
        }
    }

    for (x, y, nx, ny) in [(a, b, &na, &nb), (b, a, &nb, &na)] {
        let mut only = nx.clone();
        only.difference_with(ny);
        // Types 4 and 5.
        for u in only.iter() {
            let nu = g.neighbors(u);
            for u2 in far.iter() {
                if nu.contains(u2) {
                    ledger.bump(u, y, 1, false);
                } else {
                    ledger.bump(x, u2, -1, false);
                }
            }
        }
        // Type 2.
        for u in only.iter() {
            for u2 in only.iter_above(u) {
                if g.has_edge(u, u2) {
                    continue;
                }
                ledger.bump(u, u2, 1, true);
                ledger.bump(y, u, 1, true);
                ledger.bump(y, u2, 1, true);
            }
        }
    }

    let i = ledger.idx(a, b);
    ledger.claws -= ledger.delta[i];
    ledger.delta[i] = 0;
    ledger.delta_star[i] = 0;
    ledger.m[i] = 0.0;

    g.try_add_edge(a, b)?;
    for v in [a, b] {
        ledger.d[v] += 1;
        ledger.s[v] = ledger.weights[v] / (ledger.d[v] + 1) as f64;
    }
    for v in [a, b] {
        for u in 0..n {
            if u != v && !g.has_edge(u, v) {
                ledger.refresh_m(u, v);
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Uniform among tied edges, seeded.
    Random(u64),
    /// Lexicographically smallest tied edge.
    Lowest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Selection {
    pub edge: Edge,
    /// Chosen by `Δ*` because the best `Δ / M` had `Δ ≤ 0`.
    pub escape: bool,
}

/// Best missing edge by `Δ_e / M_e`, or by `Δ*_e` in the escape case.
/// `None` when no edge is missing.
pub fn select_edge(g: &Graph, ledger: &EdgeLedger, rng: Option<&mut SimRng>) -> Option<Selection> {
    let mut tied: Vec<Edge> = Vec::new();
    for e in g.missing_edges() {
        match tied.first() {
            None => tied.push(e),
            Some(&best) => match ledger.cmp_ratio(e, best) {
                core::cmp::Ordering::Greater => {
                    tied.clear();
                    tied.push(e);
                }
                core::cmp::Ordering::Equal => tied.push(e),
                core::cmp::Ordering::Less => {}
            },
        }
    }
    let escape = ledger.delta(*tied.first()?) <= 0;
    if escape {
        let top = g.missing_edges().map(|e| ledger.delta_star(e)).max()?;
        tied.clear();
        tied.extend(g.missing_edges().filter(|&e| ledger.delta_star(e) == top));
    }
    let edge = match rng {
        Some(rng) if tied.len() > 1 => tied[rng.gen_range(0..tied.len())],
        _ => tied[0],
    };
    Some(Selection { edge, escape })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub edge: Edge,
    pub delta: i64,
    pub delta_star: i64,
    pub m: f64,
    pub escape: bool,
    pub claws_after: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClawFreeResult {
    pub final_graph: Graph,
    pub added_edges: Vec<Edge>,
    pub iterations: usize,
    pub escape_count: usize,
    pub trace: Vec<TraceStep>,
}

/// Stepwise claw elimination; exposes the ledger between steps.
#[derive(Clone, Debug)]
pub struct ClawFreer {
    graph: Graph,
    ledger: EdgeLedger,
    rng: Option<SimRng>,
    added: Vec<Edge>,
    escapes: usize,
}

impl ClawFreer {
    pub fn new(g: &Graph, tie: TieBreak) -> Result<Self> {
        Ok(ClawFreer {
            graph: g.clone(),
            ledger: init_ledger(g)?,
            rng: match tie {
                TieBreak::Random(seed) => Some(rng_from_seed(seed)),
                TieBreak::Lowest => None,
            },
            added: Vec::new(),
            escapes: 0,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn ledger(&self) -> &EdgeLedger {
        &self.ledger
    }

    pub fn is_done(&self) -> bool {
        self.ledger.claws == 0
    }

    /// One selection and insertion; `None` once claw-free.
    pub fn step(&mut self) -> Result<Option<TraceStep>> {
        if self.is_done() {
            return Ok(None);
        }
        let sel = select_edge(&self.graph, &self.ledger, self.rng.as_mut())
            .ok_or_else(|| Error::InvalidGraph("claws remain in a complete graph".into()))?;
        let e = sel.edge;
        let (delta, delta_star, m) = (self.ledger.delta(e), self.ledger.delta_star(e), self.ledger.m(e));
        apply_edge(&mut self.graph, &mut self.ledger, e)?;
        self.added.push(e);
        self.escapes += sel.escape as usize;
        Ok(Some(TraceStep {
            edge: e,
            delta,
            delta_star,
            m,
            escape: sel.escape,
            claws_after: self.ledger.claws,
        }))
    }

    pub fn finish(mut self, keep_trace: bool) -> Result<ClawFreeResult> {
        let mut trace = Vec::new();
        while let Some(step) = self.step()? {
            if keep_trace {
                trace.push(step);
            }
        }
        Ok(ClawFreeResult {
            iterations: self.added.len(),
            final_graph: self.graph,
            added_edges: self.added,
            escape_count: self.escapes,
            trace,
        })
    }
}

/// Adds edges until the graph is claw-free, breaking ties with `seed`.
pub fn make_claw_free(g: &Graph, seed: u64) -> Result<ClawFreeResult> {
    ClawFreer::new(g, TieBreak::Random(seed))?.finish(false)
}

pub fn make_claw_free_with(g: &Graph, tie: TieBreak, keep_trace: bool) -> Result<ClawFreeResult> {
    ClawFreer::new(g, tie)?.finish(keep_trace)
}

/// From-definition ledger for testing the incremental one.
pub mod oracle {
    use super::*;
    use crate::claws::{count_claws, list_claws};
    use alloc::format;
    use alloc::string::String;

    /// `Δ_e` by adding `e` and recounting; `Δ*_e` by scanning the claw list.
    pub fn recompute_ledger_naive(g: &Graph) -> Result<EdgeLedger> {
        g.check_positive_weights()?;
        let mut ledger = EdgeLedger::blank(g);
        let before = count_claws(g) as i64;
        ledger.claws = before;
        for e in g.missing_edges() {
            let mut h = g.clone();
            h.try_add_edge(e.0, e.1)?;
            let i = ledger.idx(e.0, e.1);
            ledger.delta[i] = before - count_claws(&h) as i64;
        }
        for claw in list_claws(g) {
            let [x, y, z] = claw.leaves;
            for (p, q) in [(x, y), (x, z), (y, z)] {
                let i = ledger.idx(p, q);
                ledger.delta_star[i] += 1;
            }
        }
        Ok(ledger)
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    /// First difference between two ledgers of `g`, if any. Integers must
    /// match exactly, `S` and `M` within `rel`.
    pub fn ledger_mismatch(g: &Graph, a: &EdgeLedger, b: &EdgeLedger, rel: f64) -> Option<String> {
        if a.n != b.n || a.n != g.len() {
            return Some(format!("sizes {} / {} / graph {}", a.n, b.n, g.len()));
        }
        if a.claws != b.claws {
            return Some(format!("C {} != {}", a.claws, b.claws));
        }
        for v in 0..a.n {
            if a.d[v] != b.d[v] || a.d[v] != g.degree(v) {
                return Some(format!("d[{v}] {} != {}", a.d[v], b.d[v]));
            }
            if !close(a.s[v], b.s[v], rel) {
                return Some(format!("S[{v}] {} != {}", a.s[v], b.s[v]));
            }
        }
        for e in g.missing_edges() {
            if a.delta(e) != b.delta(e) {
                return Some(format!("delta{e:?} {} != {}", a.delta(e), b.delta(e)));
            }
            if a.delta_star(e) != b.delta_star(e) {
                return Some(format!("delta*{e:?} {} != {}", a.delta_star(e), b.delta_star(e)));
            }
            if !close(a.m(e), b.m(e), rel) {
                return Some(format!("M{e:?} {} != {}", a.m(e), b.m(e)));
            }
        }
        None
    }
}

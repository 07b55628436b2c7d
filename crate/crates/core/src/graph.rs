//! Vertex-weighted simple undirected graph with bitset adjacency rows.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    weights: Vec<f64>,
    adj: Vec<BitSet>,
    edge_count: usize,
}

/// Unordered vertex pair, always stored with `0 < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }
}

impl Graph {
    /// Edgeless graph with the given vertex weights.
    pub fn new(weights: Vec<f64>) -> Self {
        let n = weights.len();
        Graph {
            weights,
            adj: (0..n).map(|_| BitSet::new(n)).collect(),
            edge_count: 0,
        }
    }

    pub fn unit(n: usize) -> Self {
        Self::new(alloc::vec![1.0; n])
    }

    pub fn from_edges(weights: Vec<f64>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::new(weights);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Adds `{u, v}`; rejects loops, out-of-range vertices and duplicates.
    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.len();
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for {n} vertices")));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::EdgeAlreadyPresent(u.min(v), u.max(v)));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edge_count += 1;
        Ok(())
    }

    /// Edges as `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.len()).flat_map(move |u| self.adj[u].iter_above(u).map(move |v| Edge(u, v)))
    }

    /// Non-adjacent distinct pairs, lexicographic.
    pub fn missing_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.len();
        (0..n).flat_map(move |u| ((u + 1)..n).filter(move |&v| !self.has_edge(u, v)).map(move |v| Edge(u, v)))
    }

    pub fn missing_edge_count(&self) -> usize {
        let n = self.len();
        n * n.saturating_sub(1) / 2 - self.edge_count
    }

    /// Rejects zero, negative and non-finite weights.
    pub fn check_positive_weights(&self) -> Result<()> {
        match self.weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            Some(v) => Err(Error::NonPositiveWeight(v)),
            None => Ok(()),
        }
    }

    /// Subgraph induced by `keep` (ascending); returns it with the map back to original indices.
    pub fn induced(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut pos = alloc::vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::new(keep.iter().map(|&v| self.weights[v]).collect());
        for (i, &v) in keep.iter().enumerate() {
            for u in self.adj[v].iter_above(v) {
                let j = pos[u];
                if j != usize::MAX {
                    g.adj[i].insert(j);
                    g.adj[j].insert(i);
                    g.edge_count += 1;
                }
            }
        }
        (g, keep.to_vec())
    }

    /// Connected components, each ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = BitSet::new(n);
        let mut out = Vec::new();
        for s in 0..n {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut comp = alloc::vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for u in self.adj[v].iter() {
                    if seen.insert(u) {
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_independent(&self, members: &[usize]) -> bool {
        members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }
}

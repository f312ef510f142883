//! Simple undirected graphs, trees and vertex-set coalitions.
//!
//! Vertices are `0..n-1`. Graphs are immutable after construction and all
//! queries are pure, so they can be shared freely across threads.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A simple undirected graph: no self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    m: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list.
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for (v, nbrs) in adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge at vertex {v}"
                )));
            }
        }
        Ok(Graph {
            adj,
            m: edges.len(),
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` pairs with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .filter(move |&&v| (u as u32) < v)
                .map(move |&v| (u as u32, v))
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0u32]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.m == self.n() - 1 && self.is_connected()
    }

    /// If the graph is a path, returns its vertices in path order.
    pub fn path_order(&self) -> Option<Vec<u32>> {
        let n = self.n();
        if n == 0 || !self.is_tree() {
            return None;
        }
        if n == 1 {
            return Some(vec![0]);
        }
        if self.adj.iter().any(|nbrs| nbrs.len() > 2) {
            return None;
        }
        let start = (0..n as u32).find(|&v| self.degree(v) == 1)?;
        let mut order = Vec::with_capacity(n);
        let mut prev = u32::MAX;
        let mut cur = start;
        loop {
            order.push(cur);
            match self.neighbors(cur).iter().find(|&&w| w != prev) {
                Some(&next) => {
                    prev = cur;
                    cur = next;
                }
                None => break,
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Hop distances from `source` inside the subgraph induced by `within`.
    ///
    /// Vertices of `within` that are unreachable from `source` in the induced
    /// subgraph are absent from the map; callers treat absence as an infinite
    /// distance (zero utility contribution).
    pub fn bfs_distances(&self, source: u32, within: &CoalitionSet) -> Result<HashMap<u32, u32>> {
        if !within.contains(source) {
            return Err(Error::NotInCoalition { vertex: source });
        }
        let mut dist = HashMap::with_capacity(within.len());
        dist.insert(source, 0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            for &w in self.neighbors(u) {
                if within.contains(w) && !dist.contains_key(&w) {
                    dist.insert(w, du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Exact diameter via all-sources BFS. Errors on a disconnected graph.
    pub fn diameter(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let n = self.n();
        let mut best = 0usize;
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n as u32 {
            dist.fill(u32::MAX);
            dist[s as usize] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if dist[w as usize] == u32::MAX {
                        dist[w as usize] = dist[u as usize] + 1;
                        best = best.max(dist[w as usize] as usize);
                        queue.push_back(w);
                    }
                }
            }
        }
        Ok(best)
    }

    /// True iff the subgraph induced by `c` is connected. Errors on an empty set.
    pub fn is_connected_induced(&self, c: &CoalitionSet) -> Result<bool> {
        if c.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        let start = c.iter().next().unwrap();
        let reached = self.bfs_distances(start, c)?;
        Ok(reached.len() == c.len())
    }

    /// Connected components of the subgraph induced by `c`.
    pub fn induced_components(&self, c: &CoalitionSet) -> Vec<CoalitionSet> {
        let mut left: Vec<u32> = c.iter().collect();
        let mut components = Vec::new();
        while let Some(&seed) = left.first() {
            let remaining = CoalitionSet::from_iter(left.iter().copied());
            let reached = self
                .bfs_distances(seed, &remaining)
                .expect("seed drawn from the set");
            let comp = CoalitionSet::from_iter(reached.keys().copied());
            left.retain(|v| !comp.contains(*v));
            components.push(comp);
        }
        components
    }

    /// Parses the edge-list text format.
    ///
    /// Line 1 is `n m`, followed by `m` lines `u v` with 0-based ids.
    /// Lines starting with `#` are comments and blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let mut parts = header.split_whitespace();
        let n: usize = parse_field(parts.next(), "vertex count")?;
        let m: usize = parse_field(parts.next(), "edge count")?;
        if parts.next().is_some() {
            return Err(Error::Parse("header has trailing fields".into()));
        }
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut parts = line.split_whitespace();
            let u: u32 = parse_field(parts.next(), "edge endpoint")?;
            let v: u32 = parse_field(parts.next(), "edge endpoint")?;
            if parts.next().is_some() {
                return Err(Error::Parse(format!("edge line '{line}' has trailing fields")));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "expected {m} edge lines, found {}",
                edges.len()
            )));
        }
        Graph::new(n, &edges)
    }

    /// Renders the graph in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, what: &str) -> Result<T> {
    field
        .ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("invalid {what}")))
}

/// A tree: a connected graph with `m = n - 1`, optionally rooted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    graph: Graph,
    root: Option<u32>,
}

impl Tree {
    pub fn new(graph: Graph) -> Result<Self> {
        if !graph.is_tree() {
            return Err(Error::NotATree);
        }
        Ok(Tree { graph, root: None })
    }

    pub fn with_root(graph: Graph, root: u32) -> Result<Self> {
        if root as usize >= graph.n() {
            return Err(Error::InvalidGraph(format!("root {root} out of range")));
        }
        let mut tree = Tree::new(graph)?;
        tree.root = Some(root);
        Ok(tree)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> Option<u32> {
        self.root
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }
}

/// A set of vertex ids, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct CoalitionSet(Vec<u32>);

impl CoalitionSet {
    pub fn new(mut vertices: Vec<u32>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        CoalitionSet(vertices)
    }

    /// All vertices `0..n`.
    pub fn full(n: usize) -> Self {
        CoalitionSet((0..n as u32).collect())
    }

    /// Decodes a bitmask over vertices `0..64`; the oracle works in masks.
    pub fn from_mask(mask: u64) -> Self {
        CoalitionSet((0..64).filter(|b| mask >> b & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl FromIterator<u32> for CoalitionSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        CoalitionSet::new(iter.into_iter().collect())
    }
}

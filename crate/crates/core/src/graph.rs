//! Immutable undirected simple graphs in compressed sparse row form.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Undirected edge stored canonically with `0 < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    /// Canonical edge between `a` and `b` (endpoints reordered).
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }
}

/// Sorted, deduplicated set of canonical edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    edges: Vec<Edge>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Canonicalizes, sorts and deduplicates. Self-loops are kept out.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges: Vec<Edge> = pairs
            .into_iter()
            .filter(|&(a, b)| a != b)
            .map(|(a, b)| Edge::new(a, b))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Self { edges }
    }

    pub fn from_edges<I: IntoIterator<Item = Edge>>(edges: I) -> Self {
        Self::from_pairs(edges.into_iter().map(|e| (e.0, e.1)))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, edge: Edge) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn as_slice(&self) -> &[Edge] {
        &self.edges
    }

    pub fn insert(&mut self, edge: Edge) -> bool {
        let edge = Edge::new(edge.0, edge.1);
        match self.edges.binary_search(&edge) {
            Ok(_) => false,
            Err(pos) => {
                self.edges.insert(pos, edge);
                true
            }
        }
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut edges = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.edges.len() && j < other.edges.len() {
            let (a, b) = (self.edges[i], other.edges[j]);
            if a < b {
                edges.push(a);
                i += 1;
            } else if b < a {
                edges.push(b);
                j += 1;
            } else {
                edges.push(a);
                i += 1;
                j += 1;
            }
        }
        edges.extend_from_slice(&self.edges[i..]);
        edges.extend_from_slice(&other.edges[j..]);
        EdgeSet { edges }
    }

    /// Edges of `self` not in `other`.
    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet {
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|e| !other.contains(*e))
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.edges.iter().all(|e| other.contains(*e))
    }

    /// Largest endpoint plus one, or 0 for the empty set.
    pub fn min_nodes(&self) -> usize {
        self.edges.iter().map(|e| e.1 + 1).max().unwrap_or(0)
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet::from_edges(iter)
    }
}

/// Per-node class id, contiguous from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelVector {
    labels: Vec<usize>,
    num_classes: usize,
}

impl LabelVector {
    /// Validates that the ids used are exactly `0..k` for some k.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let num_classes = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut seen = vec![false; num_classes];
        for &l in &labels {
            seen[l] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Input(format!(
                "class ids must be contiguous from 0; class {missing} is unused"
            )));
        }
        Ok(Self {
            labels,
            num_classes,
        })
    }

    /// Relabels arbitrary ids to contiguous ones in order of first appearance.
    pub fn compact(raw: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|&r| {
                let next = map.len();
                *map.entry(r).or_insert(next)
            })
            .collect();
        Self {
            labels,
            num_classes: map.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn get(&self, node: usize) -> usize {
        self.labels[node]
    }

    /// Nodes of each class, ascending.
    pub fn class_members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.num_classes];
        for (node, &l) in self.labels.iter().enumerate() {
            members[l].push(node);
        }
        members
    }

    /// Restricts to the given nodes (in order) and compacts the ids.
    pub fn restrict(&self, nodes: &[usize]) -> LabelVector {
        let raw: Vec<usize> = nodes.iter().map(|&v| self.labels[v]).collect();
        LabelVector::compact(&raw)
    }
}

/// Undirected simple graph on nodes `0..n`.
///
/// Neighbor lists are sorted, symmetric and free of self-loops and
/// duplicates. Edge ids follow canonical `(u, v)` order, so `edges()` and
/// [`Graph::edge_id`] agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    slot_edge: Vec<usize>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph, dropping self-loops and merging duplicate or reversed pairs.
    pub fn from_edges(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::Input(format!(
                "edge ({a}, {b}) has an endpoint outside 0..{n}"
            )));
        }
        Ok(Self::build(n, EdgeSet::from_pairs(pairs.iter().copied())))
    }

    pub fn from_edge_set(n: usize, edges: &EdgeSet) -> Result<Self> {
        if edges.min_nodes() > n {
            return Err(Error::Input(format!(
                "edge set references node {} but graph has {n} nodes",
                edges.min_nodes() - 1
            )));
        }
        Ok(Self::build(n, edges.clone()))
    }

    pub fn empty(n: usize) -> Self {
        Self::build(n, EdgeSet::new())
    }

    fn build(n: usize, set: EdgeSet) -> Self {
        let edges = set.edges;
        let mut degree = vec![0usize; n];
        for e in &edges {
            degree[e.0] += 1;
            degree[e.1] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; 2 * edges.len()];
        let mut slot_edge = vec![0usize; 2 * edges.len()];
        // Canonical order visits (u, v) with u ascending and then v ascending,
        // which leaves every neighbor list sorted once both halves are placed.
        let mut lower: Vec<(usize, usize, usize)> = Vec::with_capacity(edges.len());
        for (id, e) in edges.iter().enumerate() {
            lower.push((e.1, e.0, id));
        }
        lower.sort_unstable();
        // Lower neighbors (w < v) come before upper neighbors (w > v) in v's list.
        for &(v, u, id) in &lower {
            neighbors[fill[v]] = u;
            slot_edge[fill[v]] = id;
            fill[v] += 1;
        }
        for (id, e) in edges.iter().enumerate() {
            neighbors[fill[e.0]] = e.1;
            slot_edge[fill[e.0]] = id;
            fill[e.0] += 1;
        }
        Graph {
            offsets,
            neighbors,
            slot_edge,
            edges,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.num_nodes()).map(|v| self.degree(v)).collect()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    /// Edges in canonical order; position equals the edge id.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_set(&self) -> EdgeSet {
        EdgeSet {
            edges: self.edges.clone(),
        }
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.num_nodes() || v >= self.num_nodes() {
            return None;
        }
        let start = self.offsets[u];
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|pos| self.slot_edge[start + pos])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Incident edge ids of `node`, aligned with `neighbors(node)`.
    pub fn incident_edge_ids(&self, node: usize) -> &[usize] {
        &self.slot_edge[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn average_degree(&self) -> f64 {
        if self.num_nodes() == 0 {
            0.0
        } else {
            2.0 * self.num_edges() as f64 / self.num_nodes() as f64
        }
    }

    /// Component id per node (ids in order of smallest member) and the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.num_nodes();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// True for graphs with at most one component (the null graph included).
    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// The largest connected component, relabeled densely, with `mapping[new] = old`.
    /// Ties go to the component containing the smallest node id.
    pub fn largest_component(&self) -> (Graph, Vec<usize>) {
        let (comp, count) = self.components();
        if count <= 1 {
            return (self.clone(), (0..self.num_nodes()).collect());
        }
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        let best = (0..count)
            .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
            .unwrap();
        let mapping: Vec<usize> = (0..self.num_nodes()).filter(|&v| comp[v] == best).collect();
        (self.induced_subgraph(&mapping), mapping)
    }

    /// Subgraph induced by `nodes` (distinct, any order); node `i` of the
    /// result is `nodes[i]`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.num_nodes()];
        for (i, &v) in nodes.iter().enumerate() {
            index[v] = i;
        }
        let pairs = self
            .edges
            .iter()
            .filter(|e| index[e.0] != usize::MAX && index[e.1] != usize::MAX)
            .map(|e| (index[e.0], index[e.1]));
        Graph::build(nodes.len(), EdgeSet::from_pairs(pairs))
    }

    /// Hop distances from `source`; unreachable nodes get `usize::MAX`.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_nodes()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// |N(u) ∩ N(v)| by merging the sorted neighbor lists.
    fn common_neighbors(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.neighbors(u), self.neighbors(v));
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    /// Number of triangles containing the edge `(u, v)`.
    pub fn edge_triangle_count(&self, u: usize, v: usize) -> Result<usize> {
        if !self.has_edge(u, v) {
            return Err(Error::Input(format!("({u}, {v}) is not an edge")));
        }
        Ok(self.common_neighbors(u, v))
    }

    /// Triangles per edge id.
    pub fn triangles_per_edge(&self) -> Vec<usize> {
        self.edges
            .iter()
            .map(|e| self.common_neighbors(e.0, e.1))
            .collect()
    }

    pub fn exact_triangle_count(&self) -> u64 {
        let total: u64 = self.edges.iter().map(|e| self.common_neighbors(e.0, e.1) as u64).sum();
        total / 3
    }

    /// Triangles through each node.
    pub fn triangles_per_node(&self) -> Vec<u64> {
        let mut per_node = vec![0u64; self.num_nodes()];
        for e in &self.edges {
            let t = self.common_neighbors(e.0, e.1) as u64;
            per_node[e.0] += t;
            per_node[e.1] += t;
        }
        // Each triangle at a node is seen from both of its incident edges there.
        per_node.iter_mut().for_each(|t| *t /= 2);
        per_node
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.num_nodes() {
            return Err(Error::Input(format!(
                "vector has length {} but graph has {} nodes",
                x.len(),
                self.num_nodes()
            )));
        }
        Ok(())
    }

    /// y = A x.
    pub fn adjacency_multiply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        let mut y = vec![0.0; x.len()];
        self.adjacency_apply(x, &mut y);
        Ok(y)
    }

    /// y = (D - A) x.
    pub fn laplacian_multiply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        let mut y = vec![0.0; x.len()];
        self.laplacian_apply(x, &mut y);
        Ok(y)
    }

    /// Unchecked `y = A x`; lengths must equal `num_nodes()`.
    pub fn adjacency_apply(&self, x: &[f64], y: &mut [f64]) {
        for (v, out) in y.iter_mut().enumerate() {
            *out = self.neighbors(v).iter().map(|&w| x[w]).sum();
        }
    }

    /// Unchecked `y = L x`; lengths must equal `num_nodes()`.
    pub fn laplacian_apply(&self, x: &[f64], y: &mut [f64]) {
        for (v, out) in y.iter_mut().enumerate() {
            let nb = self.neighbors(v);
            *out = nb.len() as f64 * x[v] - nb.iter().map(|&w| x[w]).sum::<f64>();
        }
    }
}

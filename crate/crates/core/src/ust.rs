//! Uniform spanning trees via Wilson's loop-erased random walk, and uniform
//! edge subset selection.

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeSet, Graph};
use crate::rng::RngState;

/// Draws a spanning tree uniformly from all spanning trees of `graph`.
///
/// The root is chosen uniformly per call; every other node, in id order,
/// runs a random walk until it hits the current tree and the loop-erased
/// path is attached. Fails on disconnected or null graphs.
pub fn sample_spanning_tree(graph: &Graph, rng: &mut RngState) -> Result<EdgeSet> {
    check_sampleable(graph)?;
    let ids = wilson_edge_ids(graph, rng);
    Ok(EdgeSet::from_edges(ids.into_iter().map(|id| graph.edges()[id])))
}

pub(crate) fn check_sampleable(graph: &Graph) -> Result<()> {
    if graph.num_nodes() == 0 {
        return Err(Error::Precondition(
            "spanning trees need at least one node".into(),
        ));
    }
    if !graph.is_connected() {
        return Err(Error::Precondition(
            "graph is disconnected; it has no spanning tree".into(),
        ));
    }
    Ok(())
}

/// Wilson's algorithm on a graph already known to be connected. Returns the
/// ids of the `n - 1` tree edges in discovery order.
pub(crate) fn wilson_edge_ids(graph: &Graph, rng: &mut RngState) -> Vec<usize> {
    let n = graph.num_nodes();
    let mut in_tree = vec![false; n];
    // Edge id of the last exit taken from each node; the loop erasure is
    // implicit because later exits overwrite earlier ones.
    let mut next_edge = vec![usize::MAX; n];
    let mut next_node = vec![usize::MAX; n];
    let mut tree = Vec::with_capacity(n.saturating_sub(1));

    in_tree[rng.index(n)] = true;
    for start in 0..n {
        let mut u = start;
        while !in_tree[u] {
            let nb = graph.neighbors(u);
            let k = rng.index(nb.len());
            next_node[u] = nb[k];
            next_edge[u] = graph.incident_edge_ids(u)[k];
            u = nb[k];
        }
        u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            tree.push(next_edge[u]);
            u = next_node[u];
        }
    }
    debug_assert_eq!(tree.len(), n - 1);
    tree
}

/// Uniform sample of exactly `count` edges from `edges`, without replacement.
pub fn random_select(edges: &EdgeSet, count: usize, rng: &mut RngState) -> Result<EdgeSet> {
    if count > edges.len() {
        return Err(Error::Input(format!(
            "cannot select {count} edges from a set of {}",
            edges.len()
        )));
    }
    let pool = edges.as_slice();
    Ok(rng
        .sample_indices(pool.len(), count)
        .into_iter()
        .map(|i| pool[i])
        .collect::<EdgeSet>())
}

/// Empirical probability of each edge (indexed by edge id) appearing in a
/// uniform spanning tree, over `trials` independent samples.
pub fn edge_inclusion_frequency(graph: &Graph, trials: usize, rng: &mut RngState) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(Error::Input("trials must be at least 1".into()));
    }
    check_sampleable(graph)?;
    let mut hits = vec![0u64; graph.num_edges()];
    for _ in 0..trials {
        for id in wilson_edge_ids(graph, rng) {
            hits[id] += 1;
        }
    }
    Ok(hits.into_iter().map(|h| h as f64 / trials as f64).collect())
}

/// True when `tree` is a spanning tree of the node set `0..n`.
pub fn is_spanning_tree(n: usize, tree: &EdgeSet) -> bool {
    if n == 0 || tree.len() != n - 1 {
        return false;
    }
    let mut dsu = DisjointSets::new(n);
    tree.iter().all(|Edge(a, b)| a < n && b < n && dsu.union(a, b))
}

/// Cap on the number of `(n-1)`-subsets examined by [`enumerate_spanning_trees`].
pub const ENUMERATION_LIMIT: u64 = 5_000_000;

/// Every spanning tree of a small graph, by checking all `(n-1)`-edge subsets.
/// Trees come out in lexicographic order of their edge ids.
pub fn enumerate_spanning_trees(graph: &Graph) -> Result<Vec<EdgeSet>> {
    let n = graph.num_nodes();
    let m = graph.num_edges();
    if n == 0 {
        return Ok(Vec::new());
    }
    let r = n - 1;
    if r > m {
        return Ok(Vec::new());
    }
    let mut subsets: u64 = 1;
    for i in 0..r as u64 {
        subsets = subsets.saturating_mul(m as u64 - i) / (i + 1);
        if subsets > ENUMERATION_LIMIT {
            return Err(Error::Size(format!(
                "more than {ENUMERATION_LIMIT} edge subsets to enumerate"
            )));
        }
    }
    let edges = graph.edges();
    let mut trees = Vec::new();
    let mut pick: Vec<usize> = (0..r).collect();
    loop {
        let mut dsu = DisjointSets::new(n);
        if pick.iter().all(|&id| dsu.union(edges[id].0, edges[id].1)) {
            trees.push(pick.iter().map(|&id| edges[id]).collect());
        }
        // Advance to the next r-combination of 0..m.
        let Some(i) = (0..r).rev().find(|&i| pick[i] < m - r + i) else {
            break;
        };
        pick[i] += 1;
        for j in i + 1..r {
            pick[j] = pick[j - 1] + 1;
        }
    }
    Ok(trees)
}

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

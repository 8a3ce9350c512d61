use std::collections::HashMap;

use crate::graph::Graph;
use crate::rng::RngState;

/// Cluster id per node; ids are contiguous from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    num_clusters: usize,
}

impl Partition {
    /// Relabels arbitrary cluster ids to `0..k` in order of first appearance.
    pub fn from_assignment(raw: &[usize]) -> Self {
        let mut map = HashMap::new();
        let assignment: Vec<usize> = raw
            .iter()
            .map(|&c| {
                let next = map.len();
                *map.entry(c).or_insert(next)
            })
            .collect();
        Self {
            num_clusters: map.len(),
            assignment,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            num_clusters: n,
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

/// `Q = Σ_c (e_c / m - (d_c / 2m)²)`. Zero for an edgeless graph.
pub fn modularity(graph: &Graph, partition: &Partition) -> f64 {
    let m = graph.num_edges() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let k = partition.num_clusters();
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    let a = partition.assignment();
    for e in graph.edges() {
        if a[e.0] == a[e.1] {
            internal[a[e.0]] += 1.0;
        }
    }
    for (v, &c) in a.iter().enumerate() {
        degree[c] += graph.degree(v) as f64;
    }
    internal
        .iter()
        .zip(&degree)
        .map(|(e, d)| e / m - (d / (2.0 * m)).powi(2))
        .sum()
}

/// Weighted multigraph used between aggregation levels. `loops[v]` is the
/// weight of internal edges collapsed into `v`.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    loops: Vec<f64>,
}

impl Level {
    fn from_graph(graph: &Graph) -> Self {
        Self {
            adj: (0..graph.num_nodes())
                .map(|v| graph.neighbors(v).iter().map(|&w| (w, 1.0)).collect())
                .collect(),
            loops: vec![0.0; graph.num_nodes()],
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn strength(&self, v: usize) -> f64 {
        2.0 * self.loops[v] + self.adj[v].iter().map(|&(_, w)| w).sum::<f64>()
    }

    /// Local moving until a full pass changes nothing. Returns the community
    /// of each node and whether any node moved.
    fn local_moves(&self, two_m: f64, order: &[usize]) -> (Vec<usize>, bool) {
        let n = self.len();
        let strength: Vec<f64> = (0..n).map(|v| self.strength(v)).collect();
        let mut community: Vec<usize> = (0..n).collect();
        let mut total = strength.clone();
        let mut links: HashMap<usize, f64> = HashMap::new();
        let mut neighbor_comms: Vec<usize> = Vec::new();
        let mut moved_any = false;
        loop {
            let mut moved = false;
            for &v in order {
                let own = community[v];
                links.clear();
                neighbor_comms.clear();
                for &(w, weight) in &self.adj[v] {
                    let c = community[w];
                    let entry = links.entry(c).or_insert_with(|| {
                        neighbor_comms.push(c);
                        0.0
                    });
                    *entry += weight;
                }
                total[own] -= strength[v];
                let gain = |c: usize, links_to_c: f64| links_to_c - total[c] * strength[v] / two_m;
                let mut best = own;
                let mut best_gain = gain(own, links.get(&own).copied().unwrap_or(0.0));
                for &c in &neighbor_comms {
                    let g = gain(c, links[&c]);
                    if g > best_gain + 1e-12 {
                        best = c;
                        best_gain = g;
                    }
                }
                total[best] += strength[v];
                if best != own {
                    community[v] = best;
                    moved = true;
                    moved_any = true;
                }
            }
            if !moved {
                break;
            }
        }
        (community, moved_any)
    }

    /// Collapses each community into a node; `community` ids must be `0..k`.
    fn aggregate(&self, community: &[usize], k: usize) -> Level {
        let mut loops = vec![0.0; k];
        let mut maps: Vec<HashMap<usize, f64>> = vec![HashMap::new(); k];
        for v in 0..self.len() {
            let cv = community[v];
            loops[cv] += self.loops[v];
            for &(w, weight) in &self.adj[v] {
                let cw = community[w];
                if cv == cw {
                    // Each internal edge is seen from both endpoints.
                    loops[cv] += weight / 2.0;
                } else {
                    *maps[cv].entry(cw).or_insert(0.0) += weight;
                }
            }
        }
        let adj = maps
            .into_iter()
            .map(|m| {
                let mut row: Vec<(usize, f64)> = m.into_iter().collect();
                row.sort_by_key(|&(c, _)| c);
                row
            })
            .collect();
        Level { adj, loops }
    }
}

/// Modularity of the induced partition after each aggregation level.
#[derive(Clone, Debug, PartialEq)]
pub struct LouvainTrace {
    pub initial_modularity: f64,
    pub level_modularity: Vec<f64>,
}

/// Louvain community detection at resolution 1.
pub fn louvain(graph: &Graph, rng: &mut RngState) -> Partition {
    louvain_with_trace(graph, rng).0
}

pub fn louvain_with_trace(graph: &Graph, rng: &mut RngState) -> (Partition, LouvainTrace) {
    let n = graph.num_nodes();
    let mut membership: Vec<usize> = (0..n).collect();
    let initial = Partition::singletons(n);
    let mut trace = LouvainTrace {
        initial_modularity: modularity(graph, &initial),
        level_modularity: Vec::new(),
    };
    if graph.num_edges() == 0 {
        return (initial, trace);
    }
    let two_m = 2.0 * graph.num_edges() as f64;
    let mut level = Level::from_graph(graph);
    loop {
        let mut order: Vec<usize> = (0..level.len()).collect();
        rng.shuffle(&mut order);
        let (community, moved) = level.local_moves(two_m, &order);
        if !moved {
            break;
        }
        let compact = Partition::from_assignment(&community);
        for m in membership.iter_mut() {
            *m = compact.assignment()[*m];
        }
        trace
            .level_modularity
            .push(modularity(graph, &Partition::from_assignment(&membership)));
        level = level.aggregate(compact.assignment(), compact.num_clusters());
    }
    (Partition::from_assignment(&membership), trace)
}

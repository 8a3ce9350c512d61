//! Edge-budgeted sparsifiers.
//!
//! * `ktree`: union of uniform spanning trees, the last one truncated to the budget.
//! * `one_tree`: one uniform spanning tree plus uniformly chosen extra edges.
//! * `random_baseline`: a uniform edge subset (may disconnect the graph).
//! * `weighted_backbone`: an extremal spanning tree under per-edge scores,
//!   topped up greedily in score order. Scores come from
//!   [`spectral_radius_weights`] or [`edge_significance_weights`].
//!
//! Every output is a subgraph on the same node set; no edge is ever added
//! or reweighted.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::rng::RngState;
use crate::spectral;
use crate::ust::{self, DisjointSets};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    KTree,
    OneTree,
    Random,
    SpectralRadius,
    EdgeSignificance,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::KTree,
        Method::OneTree,
        Method::Random,
        Method::SpectralRadius,
        Method::EdgeSignificance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::KTree => "ktree",
            Method::OneTree => "1tree",
            Method::Random => "random",
            Method::SpectralRadius => "spectral_radius",
            Method::EdgeSignificance => "edge_significance",
        }
    }

    /// Whether the output is guaranteed to be connected.
    pub fn preserves_connectivity(self) -> bool {
        self != Method::Random
    }

    pub fn default_keep(self) -> Option<Keep> {
        match self {
            Method::SpectralRadius => Some(Keep::Lowest),
            Method::EdgeSignificance => Some(Keep::Highest),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "ktree" => Ok(Method::KTree),
            "1tree" | "one_tree" | "onetree" => Ok(Method::OneTree),
            "random" => Ok(Method::Random),
            "spectral_radius" => Ok(Method::SpectralRadius),
            "edge_significance" => Ok(Method::EdgeSignificance),
            other => Err(Error::Input(format!("unknown method `{other}`"))),
        }
    }
}

/// Which end of the score order a weighted backbone retains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    Highest,
    Lowest,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    Edges(usize),
    AvgDegree(f64),
}

impl Target {
    /// Edge budget for an `n`-node graph; average degrees map to
    /// `round(d · n / 2)` with halves rounded away from zero.
    pub fn edges_for(self, n: usize) -> Result<usize> {
        match self {
            Target::Edges(m) => Ok(m),
            Target::AvgDegree(d) if d.is_finite() && d >= 0.0 => Ok((d * n as f64 / 2.0).round() as usize),
            Target::AvgDegree(d) => Err(Error::Input(format!("invalid average degree {d}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SparsifyRequest {
    pub method: Method,
    pub target: Target,
    pub seed: u64,
}

/// Scores aligned with the graph's edge ids.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedEdges {
    entries: Vec<(Edge, f64)>,
}

impl WeightedEdges {
    /// Checks that `weights` has one finite score per edge of `graph`.
    pub fn new(graph: &Graph, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != graph.num_edges() {
            return Err(Error::Input(format!(
                "{} weights for {} edges",
                weights.len(),
                graph.num_edges()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::Numerical(format!("non-finite edge weight {w}")));
        }
        Ok(Self {
            entries: graph.edges().iter().copied().zip(weights).collect(),
        })
    }

    pub fn entries(&self) -> &[(Edge, f64)] {
        &self.entries
    }

    pub fn weight(&self, id: usize) -> f64 {
        self.entries[id].1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> WeightedEdges {
        WeightedEdges {
            entries: self.entries.iter().map(|&(e, w)| (e, w * factor)).collect(),
        }
    }
}

fn check_tree_budget(graph: &Graph, budget: usize) -> Result<()> {
    ust::check_sampleable(graph)?;
    let (n, m) = (graph.num_nodes(), graph.num_edges());
    if budget + 1 < n || budget > m {
        return Err(Error::Infeasible(format!(
            "a connected backbone needs between {} and {m} edges, requested {budget}",
            n - 1
        )));
    }
    Ok(())
}

fn subgraph_from_ids(graph: &Graph, ids: impl IntoIterator<Item = usize>) -> Graph {
    let pairs: Vec<(usize, usize)> = ids
        .into_iter()
        .map(|id| {
            let e = graph.edges()[id];
            (e.0, e.1)
        })
        .collect();
    Graph::from_edges(graph.num_nodes(), &pairs).expect("edges come from the same graph")
}

/// Union of uniform spanning trees with exactly `budget` edges.
///
/// Whole trees are merged while another full tree still fits; after that,
/// each fresh tree contributes a uniform sample of its not-yet-included
/// edges until the budget is met.
pub fn ktree(graph: &Graph, budget: usize, rng: &mut RngState) -> Result<Graph> {
    check_tree_budget(graph, budget)?;
    let n = graph.num_nodes();
    let mut included = vec![false; graph.num_edges()];
    let mut count = 0usize;
    while count < budget {
        let tree = ust::wilson_edge_ids(graph, rng);
        if count + (n - 1) <= budget {
            for id in tree {
                if !included[id] {
                    included[id] = true;
                    count += 1;
                }
            }
        } else {
            let mut fresh: Vec<usize> = tree.into_iter().filter(|&id| !included[id]).collect();
            fresh.sort_unstable();
            let take = (budget - count).min(fresh.len());
            for i in rng.sample_indices(fresh.len(), take) {
                included[fresh[i]] = true;
            }
            count += take;
        }
    }
    Ok(subgraph_from_ids(
        graph,
        included.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
    ))
}

/// One uniform spanning tree plus `budget - n + 1` uniformly chosen other edges.
pub fn one_tree(graph: &Graph, budget: usize, rng: &mut RngState) -> Result<Graph> {
    check_tree_budget(graph, budget)?;
    let n = graph.num_nodes();
    let tree = ust::wilson_edge_ids(graph, rng);
    let mut in_tree = vec![false; graph.num_edges()];
    for &id in &tree {
        in_tree[id] = true;
    }
    let rest: Vec<usize> = (0..graph.num_edges()).filter(|&id| !in_tree[id]).collect();
    let extra = rng
        .sample_indices(rest.len(), budget + 1 - n)
        .into_iter()
        .map(|i| rest[i]);
    Ok(subgraph_from_ids(graph, tree.into_iter().chain(extra)))
}

/// Uniform `budget`-subset of the edges.
pub fn random_baseline(graph: &Graph, budget: usize, rng: &mut RngState) -> Result<Graph> {
    if budget > graph.num_edges() {
        return Err(Error::Infeasible(format!(
            "requested {budget} edges from a graph with {}",
            graph.num_edges()
        )));
    }
    Ok(subgraph_from_ids(graph, rng.sample_indices(graph.num_edges(), budget)))
}

/// First-order change of `μ_max` from each edge: `2 x_u x_v` for the unit
/// Perron vector `x`.
pub fn spectral_radius_weights(graph: &Graph) -> Result<WeightedEdges> {
    if !graph.is_connected() {
        return Err(Error::Precondition(
            "spectral radius weights need a connected graph".into(),
        ));
    }
    let pair = spectral::principal_eigenpair(graph)?;
    let x = &pair.vector;
    WeightedEdges::new(graph, graph.edges().iter().map(|e| 2.0 * x[e.0] * x[e.1]).collect())
}

/// Modularity contribution of each existing edge: `1 - d_u d_v / 2m`.
pub fn edge_significance_weights(graph: &Graph) -> Result<WeightedEdges> {
    if graph.num_edges() == 0 {
        return Err(Error::Precondition("edge significance needs at least one edge".into()));
    }
    let two_m = 2.0 * graph.num_edges() as f64;
    WeightedEdges::new(
        graph,
        graph
            .edges()
            .iter()
            .map(|e| 1.0 - (graph.degree(e.0) * graph.degree(e.1)) as f64 / two_m)
            .collect(),
    )
}

/// Extremal spanning tree (Kruskal in `keep` order) plus the best remaining
/// edges in the same order. Ties fall back to canonical edge order.
pub fn weighted_backbone(graph: &Graph, weights: &WeightedEdges, budget: usize, keep: Keep) -> Result<Graph> {
    check_tree_budget(graph, budget)?;
    if weights.len() != graph.num_edges() || weights.entries().iter().zip(graph.edges()).any(|((a, _), b)| a != b) {
        return Err(Error::Input("weights do not belong to this graph".into()));
    }
    let mut order: Vec<usize> = (0..graph.num_edges()).collect();
    order.sort_by(|&a, &b| {
        let (wa, wb) = (weights.weight(a), weights.weight(b));
        let by_weight = match keep {
            Keep::Highest => wb.total_cmp(&wa),
            Keep::Lowest => wa.total_cmp(&wb),
        };
        if by_weight == Ordering::Equal {
            a.cmp(&b)
        } else {
            by_weight
        }
    });
    let n = graph.num_nodes();
    let mut dsu = DisjointSets::new(n);
    let mut chosen = vec![false; graph.num_edges()];
    for &id in &order {
        let e = graph.edges()[id];
        if dsu.union(e.0, e.1) {
            chosen[id] = true;
        }
    }
    let mut extra = budget + 1 - n;
    for &id in &order {
        if extra == 0 {
            break;
        }
        if !chosen[id] {
            chosen[id] = true;
            extra -= 1;
        }
    }
    Ok(subgraph_from_ids(
        graph,
        chosen.iter().enumerate().filter(|(_, &c)| c).map(|(i, _)| i),
    ))
}

/// Precomputed per-graph state so repeated requests skip the weight computation.
pub struct Sparsifier<'g> {
    graph: &'g Graph,
    spectral: Option<WeightedEdges>,
    significance: Option<WeightedEdges>,
}

impl<'g> Sparsifier<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            spectral: None,
            significance: None,
        }
    }

    /// Computes the score vectors for the weighted methods among `methods`.
    pub fn prepare(&mut self, methods: &[Method]) -> Result<()> {
        if methods.contains(&Method::SpectralRadius) && self.spectral.is_none() {
            self.spectral = Some(spectral_radius_weights(self.graph)?);
        }
        if methods.contains(&Method::EdgeSignificance) && self.significance.is_none() {
            self.significance = Some(edge_significance_weights(self.graph)?);
        }
        Ok(())
    }

    pub fn run(&self, method: Method, budget: usize, rng: &mut RngState) -> Result<Graph> {
        match method {
            Method::KTree => ktree(self.graph, budget, rng),
            Method::OneTree => one_tree(self.graph, budget, rng),
            Method::Random => random_baseline(self.graph, budget, rng),
            Method::SpectralRadius | Method::EdgeSignificance => {
                let cached = if method == Method::SpectralRadius {
                    &self.spectral
                } else {
                    &self.significance
                };
                let computed;
                let weights = match cached {
                    Some(w) => w,
                    None => {
                        check_tree_budget(self.graph, budget)?;
                        computed = if method == Method::SpectralRadius {
                            spectral_radius_weights(self.graph)?
                        } else {
                            edge_significance_weights(self.graph)?
                        };
                        &computed
                    }
                };
                weighted_backbone(self.graph, weights, budget, method.default_keep().unwrap())
            }
        }
    }
}

/// Runs one request with a fresh generator seeded from the request.
pub fn sparsify(graph: &Graph, request: &SparsifyRequest) -> Result<Graph> {
    let budget = request.target.edges_for(graph.num_nodes())?;
    let mut rng = RngState::new(request.seed);
    Sparsifier::new(graph).run(request.method, budget, &mut rng)
}

//! Stochastic block models and canonical test graphs.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelVector};
use crate::rng::RngState;

/// Planted-partition model with `k` near-equal classes whose within-class
/// edge probability is `snr` times the between-class one, scaled to an
/// expected average degree `avg_degree`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SbmSpec {
    pub n: usize,
    pub k: usize,
    pub snr: f64,
    pub avg_degree: f64,
    pub seed: u64,
}

impl Default for SbmSpec {
    fn default() -> Self {
        Self {
            n: 1000,
            k: 10,
            snr: 5.0,
            avg_degree: 100.0,
            seed: 0,
        }
    }
}

impl SbmSpec {
    /// `(p_in, p_out)` solving `d̄ = p_in (n/k - 1) + p_out n (k-1)/k` with
    /// `p_in = snr · p_out`.
    pub fn probabilities(&self) -> Result<(f64, f64)> {
        if self.k == 0 || self.k > self.n.max(1) {
            return Err(Error::Input(format!(
                "need 1 <= k <= n, got k={} n={}",
                self.k, self.n
            )));
        }
        if !(self.snr >= 1.0) || !self.snr.is_finite() {
            return Err(Error::Input(format!("snr must be >= 1, got {}", self.snr)));
        }
        if !(self.avg_degree >= 0.0) || !self.avg_degree.is_finite() {
            return Err(Error::Input(format!(
                "average degree must be non-negative, got {}",
                self.avg_degree
            )));
        }
        let n = self.n as f64;
        let k = self.k as f64;
        let within_pairs = n / k - 1.0;
        let between_pairs = n * (k - 1.0) / k;
        let denom = self.snr * within_pairs + between_pairs;
        if denom <= 0.0 {
            return if self.avg_degree == 0.0 {
                Ok((0.0, 0.0))
            } else {
                Err(Error::Input("graph has no node pairs to connect".into()))
            };
        }
        let p_out = self.avg_degree / denom;
        let p_in = self.snr * p_out;
        let used_in = within_pairs > 0.0;
        let used_out = between_pairs > 0.0;
        if (used_in && p_in > 1.0) || (used_out && p_out > 1.0) {
            return Err(Error::Input(format!(
                "average degree {} is infeasible: p_in = {p_in:.4}, p_out = {p_out:.4}",
                self.avg_degree
            )));
        }
        Ok((p_in.min(1.0), p_out.min(1.0)))
    }

    /// Class of each node: contiguous blocks whose sizes differ by at most one.
    pub fn labels(&self) -> Vec<usize> {
        (0..self.n).map(|i| i * self.k / self.n).collect()
    }
}

/// Samples every node pair independently; deterministic per seed.
pub fn generate_sbm(spec: &SbmSpec) -> Result<(Graph, LabelVector)> {
    let (p_in, p_out) = spec.probabilities()?;
    let labels = spec.labels();
    let mut rng = RngState::new(spec.seed);
    let mut pairs = Vec::new();
    for u in 0..spec.n {
        for v in u + 1..spec.n {
            let p = if labels[u] == labels[v] { p_in } else { p_out };
            if rng.bernoulli(p) {
                pairs.push((u, v));
            }
        }
    }
    let graph = Graph::from_edges(spec.n, &pairs)?;
    Ok((graph, LabelVector::new(labels)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedGraph {
    Path(usize),
    Ring(usize),
    Complete(usize),
    /// `n` nodes: center 0 plus `n - 1` leaves.
    Star(usize),
    /// Two copies of `K_n` joined by a single bridge.
    Barbell(usize),
    Karate,
}

impl FromStr for NamedGraph {
    type Err = Error;

    /// `karate`, or `<family>:<n>` / `<family>(<n>)` for the other families.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "karate" {
            return Ok(NamedGraph::Karate);
        }
        let (name, arg) = s
            .split_once(':')
            .or_else(|| s.strip_suffix(')').and_then(|t| t.split_once('(')))
            .ok_or_else(|| Error::Input(format!("unknown graph `{s}`")))?;
        let n: usize = arg
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("bad size in `{s}`")))?;
        match name.trim() {
            "path" => Ok(NamedGraph::Path(n)),
            "ring" => Ok(NamedGraph::Ring(n)),
            "complete" => Ok(NamedGraph::Complete(n)),
            "star" => Ok(NamedGraph::Star(n)),
            "barbell" => Ok(NamedGraph::Barbell(n)),
            other => Err(Error::Input(format!("unknown graph family `{other}`"))),
        }
    }
}

fn complete_pairs(offset: usize, n: usize, out: &mut Vec<(usize, usize)>) {
    for a in 0..n {
        for b in a + 1..n {
            out.push((offset + a, offset + b));
        }
    }
}

pub fn named_graph(name: NamedGraph) -> Result<Graph> {
    let need = |n: usize, min: usize| {
        if n < min {
            Err(Error::Input(format!("{name:?} needs at least {min} nodes")))
        } else {
            Ok(())
        }
    };
    match name {
        NamedGraph::Path(n) => {
            need(n, 1)?;
            let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            Graph::from_edges(n, &pairs)
        }
        NamedGraph::Ring(n) => {
            need(n, 3)?;
            let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Graph::from_edges(n, &pairs)
        }
        NamedGraph::Complete(n) => {
            need(n, 1)?;
            let mut pairs = Vec::new();
            complete_pairs(0, n, &mut pairs);
            Graph::from_edges(n, &pairs)
        }
        NamedGraph::Star(n) => {
            need(n, 1)?;
            let pairs: Vec<_> = (1..n).map(|i| (0, i)).collect();
            Graph::from_edges(n, &pairs)
        }
        NamedGraph::Barbell(n) => {
            need(n, 1)?;
            let mut pairs = Vec::new();
            complete_pairs(0, n, &mut pairs);
            complete_pairs(n, n, &mut pairs);
            pairs.push((n - 1, n));
            Graph::from_edges(2 * n, &pairs)
        }
        NamedGraph::Karate => Graph::from_edges(34, &KARATE_EDGES),
    }
}

/// Zachary's karate club, 0-indexed.
const KARATE_EDGES: [(usize, usize); 78] = [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 10), (0, 11),
    (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31), (1, 2), (1, 3), (1, 7), (1, 13),
    (1, 17), (1, 19), (1, 21), (1, 30), (2, 3), (2, 7), (2, 8), (2, 9), (2, 13), (2, 27),
    (2, 28), (2, 32), (3, 7), (3, 12), (3, 13), (4, 6), (4, 10), (5, 6), (5, 10), (5, 16),
    (6, 16), (8, 30), (8, 32), (8, 33), (9, 33), (13, 33), (14, 32), (14, 33), (15, 32), (15, 33),
    (18, 32), (18, 33), (19, 33), (20, 32), (20, 33), (22, 32), (22, 33), (23, 25), (23, 27), (23, 29),
    (23, 32), (23, 33), (24, 25), (24, 27), (24, 31), (25, 31), (26, 29), (26, 33), (27, 33), (28, 31),
    (28, 33), (29, 32), (29, 33), (30, 32), (30, 33), (31, 32), (31, 33), (32, 33),
];

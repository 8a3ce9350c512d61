//! Edge and node curvature: augmented Forman curvature and link resistance
//! curvature.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{self, format_value, pair_effective_resistance};

pub const DEFAULT_GAMMA: f64 = 1.0;

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Input(format!("gamma must be positive, got {gamma}")));
    }
    Ok(())
}

/// `F#(u, v) = 4 - d_u - d_v + 3γ·#Δ(u, v)`.
pub fn augmented_forman(graph: &Graph, u: usize, v: usize, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let triangles = graph.edge_triangle_count(u, v)?;
    Ok(forman_value(graph.degree(u), graph.degree(v), triangles, gamma))
}

fn forman_value(du: usize, dv: usize, triangles: usize, gamma: f64) -> f64 {
    4.0 - du as f64 - dv as f64 + 3.0 * gamma * triangles as f64
}

/// `ρ_i = 1 - ½ Σ_{j ∈ N(i)} ω(i, j)`.
pub fn link_resistance_curvature(graph: &Graph, node: usize) -> Result<f64> {
    if node >= graph.num_nodes() {
        return Err(Error::Input(format!("node {node} out of range")));
    }
    if !graph.is_connected() {
        return Err(Error::Precondition(
            "link resistance curvature needs a connected graph".into(),
        ));
    }
    let mut sum = 0.0;
    for &j in graph.neighbors(node) {
        sum += pair_effective_resistance(graph, node, j)?;
    }
    Ok(1.0 - 0.5 * sum)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport {
    pub gamma: f64,
    /// Forman curvature per edge id.
    pub forman: Vec<f64>,
    /// Effective resistance per edge id.
    pub edge_resistance: Vec<f64>,
    /// Link resistance curvature per node.
    pub resistance_curvature: Vec<f64>,
}

impl CurvatureReport {
    /// Curvature of every edge and node of a connected graph.
    pub fn compute(graph: &Graph, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        let triangles = graph.triangles_per_edge();
        let forman = graph
            .edges()
            .iter()
            .zip(&triangles)
            .map(|(e, &t)| forman_value(graph.degree(e.0), graph.degree(e.1), t, gamma))
            .collect();
        let edge_resistance = spectral::edge_effective_resistances(graph, spectral::DEFAULT_DENSE_CAP)?;
        let mut resistance_curvature = vec![1.0; graph.num_nodes()];
        for (e, w) in graph.edges().iter().zip(&edge_resistance) {
            resistance_curvature[e.0] -= 0.5 * w;
            resistance_curvature[e.1] -= 0.5 * w;
        }
        Ok(Self {
            gamma,
            forman,
            edge_resistance,
            resistance_curvature,
        })
    }

    pub fn mean_forman(&self) -> f64 {
        mean(&self.forman)
    }

    pub fn mean_resistance_curvature(&self) -> f64 {
        mean(&self.resistance_curvature)
    }

    /// `Σ_{(i,j) ∈ E} ω(i, j)`.
    pub fn edge_resistance_total(&self) -> f64 {
        self.edge_resistance.iter().sum()
    }

    /// Edge rows `u v F#` followed by node rows `i rho`.
    pub fn to_tsv(&self, graph: &Graph) -> String {
        let mut out = String::new();
        for (e, f) in graph.edges().iter().zip(&self.forman) {
            writeln!(out, "{}\t{}\t{}", e.0, e.1, format_value(*f)).unwrap();
        }
        for (i, r) in self.resistance_curvature.iter().enumerate() {
            writeln!(out, "{i}\t{}", format_value(*r)).unwrap();
        }
        out
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

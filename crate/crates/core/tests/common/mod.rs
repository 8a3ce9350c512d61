#![allow(dead_code)]

use glt_core::generators::{generate_sbm, named_graph, NamedGraph, SbmSpec};
use glt_core::ust::sample_spanning_tree;
use glt_core::{Graph, RngState};

pub fn named(spec: &str) -> Graph {
    named_graph(spec.parse::<NamedGraph>().unwrap()).unwrap()
}

pub fn k4_minus_edge() -> Graph {
    Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]).unwrap()
}

pub fn sbm(n: usize, k: usize, snr: f64, avg_degree: f64, seed: u64) -> Graph {
    generate_sbm(&SbmSpec { n, k, snr, avg_degree, seed }).unwrap().0
}

/// A uniform spanning tree of `g` as a graph.
pub fn random_tree(g: &Graph, seed: u64) -> Graph {
    let tree = sample_spanning_tree(g, &mut RngState::new(seed)).unwrap();
    Graph::from_edge_set(g.num_nodes(), &tree).unwrap()
}

/// Connected graphs on at most 8 nodes.
pub fn small_corpus() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = [
        "complete:3", "complete:4", "complete:5", "complete:6", "ring:4", "ring:6", "ring:8",
        "star:5", "star:8", "path:2", "path:5", "barbell:3", "barbell:4",
    ]
    .iter()
    .map(|s| (s.to_string(), named(s)))
    .collect();
    out.push(("k4-minus-edge".into(), k4_minus_edge()));
    let mut seed = 0;
    let mut found = 0;
    while found < 3 {
        let g = sbm(8, 2, 3.0, 4.0, seed);
        if g.is_connected() {
            out.push((format!("sbm8-seed{seed}"), g));
            found += 1;
        }
        seed += 1;
    }
    out
}

/// Connected graphs on up to a few hundred nodes.
pub fn corpus() -> Vec<(String, Graph)> {
    let mut out = small_corpus();
    for s in ["karate", "ring:30", "star:40", "complete:20", "barbell:10", "path:12"] {
        out.push((s.to_string(), named(s)));
    }
    let karate = named("karate");
    for seed in 0..3 {
        out.push((format!("karate-tree{seed}"), random_tree(&karate, seed)));
    }
    for seed in 0..3 {
        let (g, _) = sbm(200, 4, 5.0, 12.0, seed).largest_component();
        out.push((format!("sbm200-seed{seed}"), g));
    }
    out
}

pub fn is_tree(g: &Graph) -> bool {
    g.is_connected() && g.num_edges() + 1 == g.num_nodes()
}

pub fn diameter(g: &Graph) -> usize {
    (0..g.num_nodes())
        .map(|v| g.bfs_distances(v).into_iter().max().unwrap())
        .max()
        .unwrap()
}

//! Text formats: whitespace-separated edge lists and one-label-per-line files.
//!
//! Edge lists hold one `u v` pair per line. Lines starting with `#` are
//! comments, except that a `# nodes=N` comment fixes the node count
//! (otherwise it is one more than the largest id seen).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph, LabelVector};

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn nodes_header(line: &str) -> Option<&str> {
    line.trim_start_matches('#').trim().strip_prefix("nodes=")
}

/// Raw `(u, v)` pairs and the optional declared node count.
fn parse_pairs<T, F>(text: &str, path: &Path, mut parse_id: F) -> Result<(Vec<(T, T)>, Option<usize>)>
where
    F: FnMut(&str) -> Option<T>,
{
    let mut pairs = Vec::new();
    let mut declared = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if let Some(value) = nodes_header(line) {
                let n = value
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| parse_error(path, line_no, format!("bad node count `{value}`")))?;
                declared = Some(n);
            }
            continue;
        }
        let mut fields = line.split_whitespace();
        let (a, b) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(parse_error(
                    path,
                    line_no,
                    format!("expected two node ids, found `{line}`"),
                ))
            }
        };
        let a = parse_id(a).ok_or_else(|| parse_error(path, line_no, format!("bad node id `{a}`")))?;
        let b = parse_id(b).ok_or_else(|| parse_error(path, line_no, format!("bad node id `{b}`")))?;
        pairs.push((a, b));
    }
    Ok((pairs, declared))
}

/// Parses edge-list text; `path` is only used in error messages.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<Graph> {
    let (pairs, declared) = parse_pairs(text, path, |s| s.parse::<usize>().ok())?;
    let max_id = pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < max_id => {
            return Err(parse_error(
                path,
                0,
                format!("header declares {n} nodes but node {} appears", max_id - 1),
            ))
        }
        Some(n) => n,
        None => max_id,
    };
    Graph::from_edges(n, &pairs)
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path)
}

/// Loads an edge list whose ids are arbitrary non-negative integers,
/// relabeling them densely in order of first appearance. Returns the graph
/// and `external[new_id]`.
pub fn load_edge_list_remapped(path: impl AsRef<Path>) -> Result<(Graph, Vec<u64>)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let (raw, _) = parse_pairs(&text, path, |s| s.parse::<u64>().ok())?;
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut external = Vec::new();
    let mut dense = |id: u64| {
        *index.entry(id).or_insert_with(|| {
            external.push(id);
            external.len() - 1
        })
    };
    let pairs: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (dense(a), dense(b))).collect();
    let g = Graph::from_edges(external.len(), &pairs)?;
    Ok((g, external))
}

/// Canonical text: a `# nodes=N` header, then one `u v` line per edge in
/// canonical order.
pub fn format_edge_list(n: usize, edges: &EdgeSet) -> String {
    let mut out = String::with_capacity(16 * edges.len() + 16);
    writeln!(out, "# nodes={n}").unwrap();
    for e in edges.iter() {
        writeln!(out, "{} {}", e.0, e.1).unwrap();
    }
    out
}

pub fn save_edge_list(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_edge_list(graph.num_nodes(), &graph.edge_set()))
        .map_err(|e| Error::io(path, e))
}

pub fn parse_labels(text: &str, path: &Path) -> Result<LabelVector> {
    let mut labels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let l = line
            .parse::<usize>()
            .map_err(|_| parse_error(path, idx + 1, format!("bad label `{line}`")))?;
        labels.push(l);
    }
    LabelVector::new(labels)
}

pub fn load_labels(path: impl AsRef<Path>) -> Result<LabelVector> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text, path)
}

pub fn save_labels(labels: &LabelVector, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(4 * labels.len());
    for l in labels.as_slice() {
        writeln!(out, "{l}").unwrap();
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelVector};
use crate::rng::RngState;
use crate::sparsify::{Method, Sparsifier};
use crate::spectral::{format_value, MetricMode, MetricsReport, SlqConfig};

use super::louvain::louvain;
use super::scoring::nmi;

/// Method name used for the unsparsified reference rows.
pub const FULL_GRAPH: &str = "full";

pub fn default_degree_grid() -> Vec<f64> {
    vec![1.1, 1.5, 2.0, 3.0, 4.0, 5.0, 7.0, 10.0]
}

#[derive(Clone, Debug)]
pub enum SweepTarget {
    /// Structural metrics of each backbone.
    Metrics { mode: MetricMode, slq: SlqConfig },
    /// Louvain NMI against ground-truth labels.
    Clustering { labels: LabelVector },
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub methods: Vec<Method>,
    pub degrees: Vec<f64>,
    /// Seeds `0..seeds` are run for every (method, degree).
    pub seeds: u64,
    pub target: SweepTarget,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub method: String,
    pub degree: f64,
    pub seed: u64,
    pub metric: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Comment lines (clipping, skipped cells), without the leading `#`.
    pub notes: Vec<String>,
}

impl SweepResult {
    pub const HEADER: &'static str = "method\tdegree\tseed\tmetric\tvalue";

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for note in &self.notes {
            writeln!(out, "# {note}").unwrap();
        }
        writeln!(out, "{}", Self::HEADER).unwrap();
        for r in &self.rows {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.method,
                format_value(r.degree),
                r.seed,
                r.metric,
                format_value(r.value)
            )
            .unwrap();
        }
        out
    }

    pub fn values(&self, method: &str, degree: f64, metric: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.method == method && r.degree == degree && r.metric == metric)
            .map(|r| r.value)
            .collect()
    }
}

/// Grid with values above the graph's natural average degree replaced by it.
fn clip_grid(grid: &[f64], natural: f64, notes: &mut Vec<String>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &d in grid {
        let clipped = if d > natural { natural } else { d };
        if clipped != d {
            notes.push(format!(
                "degree {} exceeds the natural average degree {}; clipped",
                format_value(d),
                format_value(natural)
            ));
        }
        if !out.contains(&clipped) {
            out.push(clipped);
        }
    }
    out
}

struct Cell {
    method: Method,
    degree: f64,
    degree_index: usize,
    seed: u64,
}

enum CellOutcome {
    Values(Vec<(String, f64)>),
    /// Output omitted by protocol (e.g. NMI on a disconnected backbone).
    Omitted(String),
    Skipped(String),
}

fn metric_rows(report: &MetricsReport) -> Vec<(String, f64)> {
    MetricsReport::FIELDS
        .iter()
        .zip(report.values())
        .map(|(f, v)| (f.to_string(), v))
        .collect()
}

/// Sparsifies `graph` at every (method, degree, seed) and evaluates each
/// backbone, plus reference rows for the full graph. Rows come out in a
/// canonical order that does not depend on the number of workers.
pub fn degree_sweep(graph: &Graph, config: &SweepConfig) -> Result<SweepResult> {
    if let SweepTarget::Clustering { labels } = &config.target {
        if labels.len() != graph.num_nodes() {
            return Err(Error::Input(format!(
                "{} labels for {} nodes",
                labels.len(),
                graph.num_nodes()
            )));
        }
    }
    if config.degrees.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
        return Err(Error::Input("degrees must be non-negative numbers".into()));
    }
    let mut notes = Vec::new();
    let restricted;
    let (graph, config) = if graph.num_nodes() > 0 && !graph.is_connected() {
        let (component, mapping) = graph.largest_component();
        notes.push(format!(
            "input is disconnected; using its largest component ({} of {} nodes)",
            component.num_nodes(),
            graph.num_nodes()
        ));
        let mut config = config.clone();
        if let SweepTarget::Clustering { labels } = &mut config.target {
            *labels = labels.restrict(&mapping);
        }
        restricted = (component, config);
        (&restricted.0, &restricted.1)
    } else {
        (graph, config)
    };
    let run = || sweep_inner(graph, config, notes);
    match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Input(format!("cannot start worker pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn sweep_inner(graph: &Graph, config: &SweepConfig, mut notes: Vec<String>) -> Result<SweepResult> {
    let natural = graph.average_degree();
    let degrees = clip_grid(&config.degrees, natural, &mut notes);

    let mut sparsifier = Sparsifier::new(graph);
    let weighted: Vec<Method> = config
        .methods
        .iter()
        .copied()
        .filter(|m| matches!(m, Method::SpectralRadius | Method::EdgeSignificance))
        .collect();
    let weights_error = sparsifier.prepare(&weighted).err().map(|e| e.to_string());

    let mut cells = Vec::new();
    for &method in &config.methods {
        for (degree_index, &degree) in degrees.iter().enumerate() {
            for seed in 0..config.seeds {
                cells.push(Cell {
                    method,
                    degree,
                    degree_index,
                    seed,
                });
            }
        }
    }

    let outcomes: Vec<Result<CellOutcome>> = cells
        .par_iter()
        .map(|cell| {
            if weights_error.is_some() && weighted.contains(&cell.method) {
                return Ok(CellOutcome::Skipped(weights_error.clone().unwrap()));
            }
            run_cell(graph, &sparsifier, cell, config)
        })
        .collect();

    let mut rows = reference_rows(graph, config, natural)?;
    for (cell, outcome) in cells.iter().zip(outcomes) {
        let push = |rows: &mut Vec<SweepRow>, metric: &str, value: f64| {
            rows.push(SweepRow {
                method: cell.method.name().to_string(),
                degree: cell.degree,
                seed: cell.seed,
                metric: metric.to_string(),
                value,
            })
        };
        match outcome? {
            CellOutcome::Values(values) => {
                for (metric, value) in values {
                    push(&mut rows, &metric, value);
                }
            }
            CellOutcome::Omitted(reason) => notes.push(format!(
                "omitted {} degree={} seed={}: {reason}",
                cell.method,
                format_value(cell.degree),
                cell.seed
            )),
            CellOutcome::Skipped(reason) => {
                notes.push(format!(
                    "skipped {} degree={} seed={}: {reason}",
                    cell.method,
                    format_value(cell.degree),
                    cell.seed
                ));
                for metric in metric_names(&config.target) {
                    push(&mut rows, metric, f64::NAN);
                }
            }
        }
    }
    Ok(SweepResult { rows, notes })
}

fn metric_names(target: &SweepTarget) -> Vec<&'static str> {
    match target {
        SweepTarget::Metrics { .. } => MetricsReport::FIELDS.to_vec(),
        SweepTarget::Clustering { .. } => vec!["nmi"],
    }
}

fn cell_stream(cell: &Cell) -> u64 {
    ((cell.method as u64) << 32) | cell.degree_index as u64
}

fn run_cell(graph: &Graph, sparsifier: &Sparsifier<'_>, cell: &Cell, config: &SweepConfig) -> Result<CellOutcome> {
    let budget = (cell.degree * graph.num_nodes() as f64 / 2.0).round() as usize;
    let base = RngState::new(cell.seed);
    let mut rng = base.split(cell_stream(cell));
    let backbone = match sparsifier.run(cell.method, budget, &mut rng) {
        Ok(g) => g,
        Err(e @ (Error::Infeasible(_) | Error::Precondition(_) | Error::Input(_) | Error::Numerical(_))) => {
            return Ok(CellOutcome::Skipped(e.to_string()))
        }
        Err(e) => return Err(e),
    };
    match &config.target {
        SweepTarget::Metrics { mode, slq } => {
            let slq = SlqConfig { seed: cell.seed, ..*slq };
            match MetricsReport::compute(&backbone, *mode, &slq) {
                Ok(report) => Ok(CellOutcome::Values(metric_rows(&report))),
                Err(e @ (Error::Numerical(_) | Error::Size(_))) => Ok(CellOutcome::Skipped(e.to_string())),
                Err(e) => Err(e),
            }
        }
        SweepTarget::Clustering { labels } => {
            if !backbone.is_connected() {
                return Ok(CellOutcome::Omitted(
                    "backbone is disconnected; NMI is not reported".into(),
                ));
            }
            let mut louvain_rng = base.split(cell_stream(cell) | (1 << 63));
            let partition = louvain(&backbone, &mut louvain_rng);
            let score = nmi(partition.assignment(), labels.as_slice())?;
            Ok(CellOutcome::Values(vec![("nmi".to_string(), score)]))
        }
    }
}

fn reference_rows(graph: &Graph, config: &SweepConfig, natural: f64) -> Result<Vec<SweepRow>> {
    let row = |seed: u64, metric: &str, value: f64| SweepRow {
        method: FULL_GRAPH.to_string(),
        degree: natural,
        seed,
        metric: metric.to_string(),
        value,
    };
    match &config.target {
        SweepTarget::Metrics { mode, slq } => {
            let report = MetricsReport::compute(graph, *mode, slq)?;
            Ok(metric_rows(&report)
                .into_iter()
                .map(|(m, v)| row(slq.seed, &m, v))
                .collect())
        }
        SweepTarget::Clustering { labels } => (0..config.seeds.max(1))
            .into_par_iter()
            .map(|seed| {
                let mut rng = RngState::new(seed).split(u64::MAX);
                let partition = louvain(graph, &mut rng);
                Ok(row(seed, "nmi", nmi(partition.assignment(), labels.as_slice())?))
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{named_graph, NamedGraph};
    use crate::spectral::MetricMode;

    fn metrics_config(methods: Vec<Method>, degrees: Vec<f64>, seeds: u64) -> SweepConfig {
        SweepConfig {
            methods,
            degrees,
            seeds,
            target: SweepTarget::Metrics {
                mode: MetricMode::Exact,
                slq: SlqConfig::default(),
            },
            jobs: Some(2),
        }
    }

    #[test]
    fn single_tree_cell_has_no_triangles() {
        let g = named_graph(NamedGraph::Karate).unwrap();
        let d = 2.0 * 33.0 / 34.0;
        let result = degree_sweep(&g, &metrics_config(vec![Method::KTree], vec![d], 3)).unwrap();
        let tri = result.values("ktree", d, "num_triangles");
        assert_eq!(tri, vec![0.0; 3]);
        // A tree has exactly one spanning tree, so the log count is log n.
        for v in result.values("ktree", d, "log_num_trees") {
            assert!((v - 34f64.ln()).abs() < 1e-8);
        }
    }

    #[test]
    fn row_counts_and_reference_rows() {
        let g = named_graph(NamedGraph::Karate).unwrap();
        let cfg = metrics_config(vec![Method::KTree, Method::OneTree], vec![2.0, 3.0], 5);
        let result = degree_sweep(&g, &cfg).unwrap();
        let full: Vec<_> = result.rows.iter().filter(|r| r.method == FULL_GRAPH).collect();
        assert_eq!(full.len(), 8);
        assert_eq!(result.rows.len() - full.len(), 2 * 2 * 5 * 8);
        let direct = MetricsReport::compute(&g, MetricMode::Exact, &SlqConfig::default()).unwrap();
        for r in full {
            assert_eq!(r.value.to_bits(), direct.get(&r.metric).unwrap().to_bits());
        }
    }

    #[test]
    fn infeasible_degrees_are_skipped_not_fatal() {
        let g = named_graph(NamedGraph::Karate).unwrap();
        let result = degree_sweep(&g, &metrics_config(vec![Method::KTree], vec![1.1], 1)).unwrap();
        assert!(result.notes.iter().any(|n| n.starts_with("skipped ktree")));
        assert!(result.values("ktree", 1.1, "spectral_radius")[0].is_nan());
    }

    #[test]
    fn degrees_above_natural_are_clipped() {
        let g = named_graph(NamedGraph::Karate).unwrap();
        let result = degree_sweep(&g, &metrics_config(vec![Method::OneTree], vec![2.0, 10.0], 1)).unwrap();
        assert!(result.notes.iter().any(|n| n.contains("clipped")));
        assert_eq!(result.values("1tree", g.average_degree(), "spectral_radius").len(), 1);
    }

    #[test]
    fn clustering_on_bridged_triangles() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
        let labels = LabelVector::new(vec![0, 0, 0, 1, 1, 1]).unwrap();
        let cfg = SweepConfig {
            methods: vec![Method::KTree, Method::Random],
            degrees: vec![2.0],
            seeds: 4,
            target: SweepTarget::Clustering { labels },
            jobs: Some(1),
        };
        let result = degree_sweep(&g, &cfg).unwrap();
        let full = result.values(FULL_GRAPH, g.average_degree(), "nmi");
        assert_eq!(full, vec![1.0; 4]);
        assert!(result.rows.iter().all(|r| r.metric == "nmi"));
    }

    #[test]
    fn disconnected_input_uses_largest_component() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 2), (2, 3), (5, 6)]).unwrap();
        let cfg = metrics_config(vec![Method::KTree], vec![2.0], 1);
        let result = degree_sweep(&g, &cfg).unwrap();
        assert!(result.notes[0].contains("largest component (4 of 7 nodes)"));
        assert_eq!(result.values("ktree", 2.0, "num_triangles"), vec![1.0]);
    }

    #[test]
    fn output_does_not_depend_on_worker_count() {
        let g = named_graph(NamedGraph::Karate).unwrap();
        let mut cfg = SweepConfig {
            methods: Method::ALL.to_vec(),
            degrees: vec![2.0, 3.0],
            seeds: 3,
            target: SweepTarget::Metrics { mode: MetricMode::Slq, slq: SlqConfig::default() },
            jobs: Some(1),
        };
        let one = degree_sweep(&g, &cfg).unwrap().to_tsv();
        cfg.jobs = Some(4);
        assert_eq!(one, degree_sweep(&g, &cfg).unwrap().to_tsv());
    }
}

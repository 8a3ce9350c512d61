use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use glt_core::curvature::CurvatureReport;
use glt_core::eval::{default_degree_grid, degree_sweep, SweepConfig, SweepTarget};
use glt_core::generators::{generate_sbm, named_graph, NamedGraph, SbmSpec};
use glt_core::io;
use glt_core::sparsify::{sparsify as run_sparsify, Method, SparsifyRequest, Target};
use glt_core::spectral::{format_value, MetricMode, MetricsReport, SlqConfig};
use glt_core::{Error, Graph, Result};

use crate::{ExportDotArgs, GenSbmArgs, MetricsArgs, ModeArg, SlqArgs, SparsifyArgs, SweepArgs, WhatArg};

const BUILTIN_PREFIX: &str = "builtin:";

fn load_graph(input: &str) -> Result<Graph> {
    match input.strip_prefix(BUILTIN_PREFIX) {
        Some(name) => named_graph(name.parse::<NamedGraph>()?),
        None => io::load_edge_list(input),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn slq_settings(args: &SlqArgs, seed: u64) -> Result<(MetricMode, SlqConfig)> {
    let mode = match args.mode {
        ModeArg::Exact => MetricMode::Exact,
        ModeArg::Slq => MetricMode::Slq,
    };
    let cfg = SlqConfig {
        num_probes: args.probes,
        lanczos_steps: args.steps,
        seed,
    };
    cfg.validate()?;
    Ok((mode, cfg))
}

pub fn sparsify(args: SparsifyArgs) -> Result<()> {
    let graph = load_graph(&args.input)?;
    let method: Method = args.method.parse()?;
    let target = match (args.avg_degree, args.edges) {
        (Some(d), None) => Target::AvgDegree(d),
        (None, Some(m)) => Target::Edges(m),
        _ => return Err(Error::Input("give exactly one of --avg-degree and --edges".into())),
    };
    let backbone = run_sparsify(
        &graph,
        &SparsifyRequest {
            method,
            target,
            seed: args.seed,
        },
    )?;
    io::save_edge_list(&backbone, &args.output)?;
    println!(
        "method={} edges={} connected={}",
        method,
        backbone.num_edges(),
        backbone.num_nodes() > 0 && backbone.is_connected()
    );
    Ok(())
}

pub fn metrics(args: MetricsArgs) -> Result<()> {
    let graph = load_graph(&args.input)?;
    let (mode, cfg) = slq_settings(&args.slq, args.seed)?;
    let report = MetricsReport::compute(&graph, mode, &cfg)?;

    let mut out = String::from("metric\tvalue\tnote\n");
    for (name, value) in MetricsReport::FIELDS.iter().zip(report.values()) {
        let note = if report.undefined.contains(name) { "undefined" } else { "" };
        writeln!(out, "{name}\t{}\t{note}", format_value(value)).unwrap();
    }
    let (forman, rho, note) = if graph.num_nodes() > 0 && graph.is_connected() {
        let curvature = CurvatureReport::compute(&graph, args.gamma)?;
        (curvature.mean_forman(), curvature.mean_resistance_curvature(), String::new())
    } else {
        (f64::NAN, f64::NAN, "undefined".to_string())
    };
    let forman_note = if note.is_empty() && graph.num_edges() == 0 { "undefined" } else { &note };
    writeln!(out, "mean_forman\t{}\t{forman_note}", format_value(forman)).unwrap();
    writeln!(out, "mean_resistance_curvature\t{}\t{note}", format_value(rho)).unwrap();
    write_output(args.output.as_deref(), &out)
}

pub fn gen_sbm(args: GenSbmArgs) -> Result<()> {
    let spec = SbmSpec {
        n: args.n,
        k: args.k,
        snr: args.snr,
        avg_degree: args.avg_degree,
        seed: args.seed,
    };
    let (graph, labels) = generate_sbm(&spec)?;
    let prefix = args.output.as_os_str().to_string_lossy().into_owned();
    io::save_edge_list(&graph, format!("{prefix}.edges"))?;
    io::save_labels(&labels, format!("{prefix}.labels"))?;
    println!(
        "nodes={} edges={} avg_degree={}",
        graph.num_nodes(),
        graph.num_edges(),
        format_value(graph.average_degree())
    );
    Ok(())
}

pub fn sweep(args: SweepArgs) -> Result<()> {
    let graph = load_graph(&args.input)?;
    let methods = if args.methods.is_empty() {
        Method::ALL.to_vec()
    } else {
        args.methods
            .iter()
            .map(|m| m.parse())
            .collect::<Result<Vec<Method>>>()?
    };
    let degrees = if args.degrees.is_empty() {
        default_degree_grid()
    } else {
        args.degrees.clone()
    };
    let target = match args.what {
        WhatArg::Metrics => {
            let (mode, slq) = slq_settings(&args.slq, 0)?;
            SweepTarget::Metrics { mode, slq }
        }
        WhatArg::Clustering => {
            let path = args
                .labels
                .as_ref()
                .ok_or_else(|| Error::Input("--what clustering needs --labels".into()))?;
            SweepTarget::Clustering {
                labels: io::load_labels(path)?,
            }
        }
    };
    let result = degree_sweep(
        &graph,
        &SweepConfig {
            methods,
            degrees,
            seeds: args.seeds,
            target,
            jobs: args.jobs,
        },
    )?;
    write_file(&args.output, &result.to_tsv())
}

/// DOT text for `graph`; edges in `highlight` are drawn bold.
pub fn dot(graph: &Graph, highlight: Option<&Graph>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..graph.num_nodes() {
        writeln!(out, "  {v};").unwrap();
    }
    for e in graph.edges() {
        let bold = highlight.is_some_and(|h| h.has_edge(e.0, e.1));
        if bold {
            writeln!(out, "  {} -- {} [style=bold, penwidth=3];", e.0, e.1).unwrap();
        } else {
            writeln!(out, "  {} -- {};", e.0, e.1).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn export_dot(args: ExportDotArgs) -> Result<()> {
    let graph = load_graph(&args.input)?;
    let highlight = match &args.highlight {
        Some(path) => {
            let h = io::load_edge_list(path)?;
            if let Some(e) = h.edges().iter().find(|e| !graph.has_edge(e.0, e.1)) {
                return Err(Error::Input(format!(
                    "highlighted edge {} {} is not in the graph",
                    e.0, e.1
                )));
            }
            Some(h)
        }
        None => None,
    };
    write_output(args.output.as_deref(), &dot(&graph, highlight.as_ref()))
}

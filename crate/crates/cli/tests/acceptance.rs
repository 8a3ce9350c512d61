//! End-to-end acceptance checks. Run with
//! `cargo test -p glt-cli --test acceptance`; prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use glt_core::curvature::CurvatureReport;
use glt_core::eval::louvain;
use glt_core::eval::nmi;
use glt_core::generators::{generate_sbm, named_graph, NamedGraph, SbmSpec};
use glt_core::sparsify::{Method, Sparsifier};
use glt_core::spectral::{
    log_num_spanning_trees, pair_effective_resistance, total_effective_resistance, triangle_count, MetricMode,
    MetricsReport, SlqConfig,
};
use glt_core::ust::{edge_inclusion_frequency, enumerate_spanning_trees, sample_spanning_tree};
use glt_core::{EdgeSet, Graph, RngState};
use statrs::distribution::{ChiSquared, ContinuousCDF};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn named(spec: &str) -> Graph {
    named_graph(spec.parse::<NamedGraph>().unwrap()).unwrap()
}

fn sbm(spec: SbmSpec) -> (Graph, glt_core::LabelVector) {
    generate_sbm(&spec).unwrap()
}

fn default_sbm(seed: u64) -> Graph {
    sbm(SbmSpec { seed, ..SbmSpec::default() }).0
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn std_err(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (var / xs.len() as f64).sqrt()
}

/// Test corpus: named families, Karate, uniform trees, and SBM samples.
fn corpus() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = [
        "complete:3", "complete:4", "complete:5", "complete:6", "ring:4", "ring:5", "ring:8", "star:5",
        "star:8", "path:4", "path:8", "barbell:3", "barbell:4", "karate", "ring:40", "star:60",
        "complete:25", "barbell:10",
    ]
    .iter()
    .map(|s| (s.to_string(), named(s)))
    .collect();
    out.push(("k4-minus-edge".into(), Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]).unwrap()));
    let karate = named("karate");
    for seed in 0..3 {
        let t = sample_spanning_tree(&karate, &mut RngState::new(seed)).unwrap();
        out.push((format!("karate-tree{seed}"), Graph::from_edge_set(34, &t).unwrap()));
    }
    let mut found = 0;
    for seed in 0.. {
        let (g, _) = sbm(SbmSpec { n: 8, k: 2, snr: 3.0, avg_degree: 4.0, seed });
        if g.is_connected() {
            out.push((format!("sbm8-seed{seed}"), g));
            found += 1;
            if found == 3 {
                break;
            }
        }
    }
    for seed in 0..3 {
        let (g, _) = sbm(SbmSpec { n: 300, k: 3, snr: 5.0, avg_degree: 15.0, seed });
        out.push((format!("sbm300-seed{seed}"), g.largest_component().0));
    }
    out
}

fn ust_uniformity() -> Outcome {
    let mut worst = (String::new(), 1.0f64);
    let mut checked = 0;
    for (name, g) in corpus().into_iter().filter(|(_, g)| g.num_nodes() <= 8 && g.is_connected()) {
        let trees = enumerate_spanning_trees(&g).unwrap();
        if trees.len() < 2 {
            continue;
        }
        checked += 1;
        let index: HashMap<&EdgeSet, usize> = trees.iter().zip(0..).collect();
        let mut counts = vec![0u64; trees.len()];
        let mut rng = RngState::new(2024);
        for _ in 0..1000 * trees.len() {
            let t = sample_spanning_tree(&g, &mut rng).unwrap();
            match index.get(&t) {
                Some(&i) => counts[i] += 1,
                None => return outcome(false, format!("{name}: sampled a non-tree")),
            }
        }
        let stat: f64 = counts.iter().map(|&c| (c as f64 - 1000.0).powi(2) / 1000.0).sum();
        let p = ChiSquared::new((trees.len() - 1) as f64).unwrap().sf(stat);
        if p < worst.1 {
            worst = (name, p);
        }
    }
    let k4 = named("complete:4");
    let mut rng = RngState::new(7);
    let distinct: std::collections::HashSet<EdgeSet> =
        (0..16_000).map(|_| sample_spanning_tree(&k4, &mut rng).unwrap()).collect();
    outcome(
        worst.1 > 1e-3 && distinct.len() == 16,
        format!(
            "{checked} graphs, min p = {:.4} ({}); K4 distinct trees = {}",
            worst.1,
            worst.0,
            distinct.len()
        ),
    )
}

fn resistance_identity() -> Outcome {
    let g = named("karate");
    let freq = edge_inclusion_frequency(&g, 50_000, &mut RngState::new(99)).unwrap();
    let mut worst = 0.0f64;
    for (e, f) in g.edges().iter().zip(&freq) {
        let omega = pair_effective_resistance(&g, e.0, e.1).unwrap();
        worst = worst.max((f - omega).abs());
    }
    outcome(worst <= 0.02, format!("max |freq - ω| = {worst:.4} over {} edges", g.num_edges()))
}

fn sparsifier_contracts() -> Outcome {
    let graphs = [
        ("karate", named("karate")),
        ("barbell(10)", named("barbell:10")),
        ("sbm(1000,10,5,100)", default_sbm(0)),
    ];
    let mut runs = 0;
    for (name, g) in &graphs {
        if !g.is_connected() {
            return outcome(false, format!("{name} is disconnected"));
        }
        let methods = [Method::KTree, Method::OneTree, Method::SpectralRadius, Method::EdgeSignificance];
        let mut sparsifier = Sparsifier::new(g);
        sparsifier.prepare(&methods).unwrap();
        let input = g.edge_set();
        let (lo, hi) = (g.num_nodes() - 1, g.num_edges());
        for method in methods {
            for i in 0..10 {
                let budget = lo + (hi - lo) * i / 9;
                for seed in 0..20 {
                    let out = match sparsifier.run(method, budget, &mut RngState::new(seed)) {
                        Ok(out) => out,
                        Err(e) => return outcome(false, format!("{name} {method} m̄={budget}: {e}")),
                    };
                    runs += 1;
                    let ok = out.num_edges() == budget && out.edge_set().is_subset(&input) && out.is_connected();
                    if !ok {
                        return outcome(false, format!("{name} {method} m̄={budget} seed={seed} violates contract"));
                    }
                }
            }
        }
    }
    outcome(true, format!("{runs} backbones checked"))
}

fn slq_fidelity() -> Outcome {
    let mut worst = [0.0f64; 3];
    let mut worst_radius = 0.0f64;
    for graph_seed in 0..10 {
        let (g, _) = sbm(SbmSpec { n: 500, seed: 100 + graph_seed, ..SbmSpec::default() });
        let exact = MetricsReport::compute(&g, MetricMode::Exact, &SlqConfig::default()).unwrap();
        let mut err = [0.0; 3];
        for seed in 0..10 {
            let cfg = SlqConfig { seed, ..SlqConfig::default() };
            let values = [
                log_num_spanning_trees(&g, MetricMode::Slq, &cfg).unwrap(),
                total_effective_resistance(&g, MetricMode::Slq, &cfg).unwrap(),
                triangle_count(&g, MetricMode::Slq, &cfg).unwrap(),
            ];
            let oracle = [exact.log_num_trees, exact.effective_resistance, exact.num_triangles];
            for k in 0..3 {
                err[k] += ((values[k] - oracle[k]) / oracle[k]).abs() / 10.0;
            }
            let slq = MetricsReport::compute(&g, MetricMode::Slq, &cfg).unwrap();
            let dense_radius = glt_core::spectral::dense_spectrum(&g, 2000)
                .map(|s| s.adjacency.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
                .unwrap_or(f64::NAN);
            if seed == 0 {
                worst_radius = worst_radius.max((slq.spectral_radius - dense_radius).abs());
            }
        }
        for k in 0..3 {
            worst[k] = worst[k].max(err[k]);
        }
    }
    outcome(
        worst.iter().all(|&e| e <= 0.05) && worst_radius <= 1e-6,
        format!(
            "worst mean rel. error: log trees {:.2e}, R {:.2e}, triangles {:.2e}; spectral radius abs. error {:.1e}",
            worst[0], worst[1], worst[2], worst_radius
        ),
    )
}

/// `(mean, standard error)` of each metric per method at average degree 2.
fn degree_two_table() -> HashMap<(Method, &'static str), (f64, f64)> {
    let methods = [Method::KTree, Method::OneTree, Method::SpectralRadius, Method::EdgeSignificance];
    let metrics = ["algebraic_connectivity", "num_triangles", "global_cc", "log_num_trees"];
    let mut samples: HashMap<(Method, &'static str), Vec<f64>> = HashMap::new();
    for graph_seed in 0..20 {
        let g = default_sbm(1000 + graph_seed).largest_component().0;
        let budget = (2.0 * g.num_nodes() as f64 / 2.0).round() as usize;
        let mut sparsifier = Sparsifier::new(&g);
        sparsifier.prepare(&methods).unwrap();
        for method in methods {
            let out = sparsifier.run(method, budget, &mut RngState::new(graph_seed)).unwrap();
            let report = MetricsReport::compute(&out, MetricMode::Exact, &SlqConfig::default()).unwrap();
            for metric in metrics {
                samples.entry((method, metric)).or_default().push(report.get(metric).unwrap());
            }
        }
    }
    samples.into_iter().map(|(k, v)| (k, (mean(&v), std_err(&v)))).collect()
}

fn degree_two_orderings() -> Outcome {
    let table = degree_two_table();
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    // `a` must exceed `b` by more than the standard error of the difference.
    let mut check = |metric: &'static str, a: Method, b: Method| {
        let (ma, sa) = table[&(a, metric)];
        let (mb, sb) = table[&(b, metric)];
        let margin = ma - mb;
        let se = (sa * sa + sb * sb).sqrt();
        let label = format!("{metric}: {a} {ma:.4e} > {b} {mb:.4e}");
        if margin <= se {
            failures.push(format!("{label} (margin {margin:.2e}, se {se:.2e})"));
        } else {
            summary.push(label);
        }
    };
    let weighted = [Method::SpectralRadius, Method::EdgeSignificance];
    let trees = [Method::KTree, Method::OneTree];
    check("algebraic_connectivity", Method::KTree, Method::OneTree);
    for w in weighted {
        check("algebraic_connectivity", Method::OneTree, w);
        for t in trees {
            check("num_triangles", w, t);
            check("global_cc", w, t);
            check("log_num_trees", t, w);
        }
    }
    if failures.is_empty() {
        outcome(true, format!("{} orderings hold", summary.len()))
    } else {
        outcome(false, format!("{} of {} orderings fail: {}", failures.len(), failures.len() + summary.len(), failures.join("; ")))
    }
}

fn degree_five_nmi() -> Outcome {
    let (g, labels) = sbm(SbmSpec::default());
    let g_conn = g.is_connected();
    let budget = (5.0 * g.num_nodes() as f64 / 2.0).round() as usize;
    let sparsifier = Sparsifier::new(&g);
    let mut full = Vec::new();
    let mut backbone = Vec::new();
    for seed in 0..10 {
        let p = louvain(&g, &mut RngState::new(seed).split(1));
        full.push(nmi(p.assignment(), labels.as_slice()).unwrap());
        let out = sparsifier.run(Method::KTree, budget, &mut RngState::new(seed)).unwrap();
        let p = louvain(&out, &mut RngState::new(seed).split(1));
        backbone.push(nmi(p.assignment(), labels.as_slice()).unwrap());
    }
    let (f, b) = (mean(&full), mean(&backbone));
    outcome(
        g_conn && b >= 0.95 * f,
        format!("mean NMI: full graph {f:.4}, kTree at d=5 {b:.4} (ratio {:.3})", b / f),
    )
}

fn curvature_bound() -> Outcome {
    let mut edges = 0;
    let mut tree_nodes = 0;
    for (name, g) in corpus() {
        let report = CurvatureReport::compute(&g, 1.0).unwrap();
        for ((e, omega), t) in g.edges().iter().zip(&report.edge_resistance).zip(g.triangles_per_edge()) {
            edges += 1;
            if *omega > 2.0 / (t as f64 + 2.0) + 1e-9 {
                return outcome(false, format!("{name} edge {e:?}: ω = {omega} with {t} triangles"));
            }
        }
        if g.is_connected() && g.num_edges() + 1 == g.num_nodes() {
            for (v, rho) in report.resistance_curvature.iter().enumerate() {
                tree_nodes += 1;
                let expected = 1.0 - g.degree(v) as f64 / 2.0;
                if (rho - expected).abs() > 1e-9 {
                    return outcome(false, format!("{name} node {v}: ρ = {rho}, expected {expected}"));
                }
            }
        }
    }
    outcome(true, format!("{edges} edges and {tree_nodes} tree nodes checked"))
}

fn spot_checks() -> Outcome {
    let report = |s: &str| MetricsReport::compute(&named(s), MetricMode::Exact, &SlqConfig::default()).unwrap();
    let (k3, k4, p3) = (report("complete:3"), report("complete:4"), report("path:3"));
    let checks = [
        ("K3 R", k3.effective_resistance, 2.0),
        ("K3 trees", (k3.log_num_trees - 3f64.ln()).exp(), 3.0),
        ("K3 triangles", k3.num_triangles, 1.0),
        ("K3 global_cc", k3.global_cc, 1.0),
        ("K3 λ₂", k3.algebraic_connectivity, 3.0),
        ("K4 R", k4.effective_resistance, 3.0),
        ("K4 trees", (k4.log_num_trees - 4f64.ln()).exp(), 16.0),
        ("K4 triangles", k4.num_triangles, 4.0),
        ("K4 spectral radius", k4.spectral_radius, 3.0),
        ("P3 λ₂", p3.algebraic_connectivity, 1.0),
        ("P3 R", p3.effective_resistance, 4.0),
    ];
    let bad: Vec<String> = checks
        .iter()
        .filter(|(_, got, want)| !((got - want).abs() <= 1e-9))
        .map(|(name, got, want)| format!("{name} = {got} (want {want})"))
        .collect();
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} values within 1e-9", checks.len()) } else { bad.join("; ") })
}

fn glt(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_glt")).args(args).output().expect("failed to run glt")
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let read = |path: &str| std::fs::read(path).unwrap_or_default();
    let sbm_prefix = p("sbm");
    let edges = format!("{sbm_prefix}.edges");
    let labels = format!("{sbm_prefix}.labels");
    let gen: Vec<&str> = vec!["gen-sbm", "--n", "300", "--k", "3", "--snr", "5", "--avg-degree", "20", "--seed", "3", "--output"];
    let _ = glt(&[&gen[..], &[sbm_prefix.as_str()]].concat());
    let first = [read(&edges), read(&labels)];
    let _ = glt(&[&gen[..], &[sbm_prefix.as_str()]].concat());
    if first != [read(&edges), read(&labels)] || first[0].is_empty() {
        return outcome(false, "gen-sbm output differs between runs");
    }

    let cases: Vec<(&str, Vec<String>, Vec<String>)> = vec![
        (
            "sparsify",
            ["sparsify", "--input", edges.as_str(), "--method", "ktree", "--avg-degree", "3", "--seed", "5", "--output"]
                .map(String::from)
                .to_vec(),
            vec![],
        ),
        (
            "metrics",
            ["metrics", "--input", edges.as_str(), "--mode", "slq", "--seed", "5", "--output"]
                .map(String::from)
                .to_vec(),
            vec![],
        ),
        (
            "export-dot",
            ["export-dot", "--input", "builtin:karate", "--output"].map(String::from).to_vec(),
            vec![],
        ),
        (
            "sweep metrics",
            ["sweep", "--input", edges.as_str(), "--methods", "ktree,1tree,random,spectral_radius,edge_significance", "--degrees", "1.5,3,50", "--seeds", "3", "--what", "metrics", "--mode", "slq", "--output"]
                .map(String::from)
                .to_vec(),
            vec!["--jobs".into()],
        ),
        (
            "sweep clustering",
            ["sweep", "--input", edges.as_str(), "--labels", labels.as_str(), "--methods", "ktree,1tree,random", "--degrees", "2,5", "--seeds", "3", "--what", "clustering", "--output"]
                .map(String::from)
                .to_vec(),
            vec!["--jobs".into()],
        ),
    ];
    let mut checked = 1;
    for (name, base, jobs_flag) in cases {
        let out_path = p(&format!("{}.out", name.replace(' ', "_")));
        let mut outputs = Vec::new();
        let job_variants: Vec<Option<&str>> = if jobs_flag.is_empty() { vec![None, None] } else { vec![Some("1"), Some("4"), Some("2")] };
        for jobs in job_variants {
            let mut args: Vec<String> = base.clone();
            args.push(out_path.clone());
            if let Some(j) = jobs {
                args.push("--jobs".into());
                args.push(j.into());
            }
            let refs: Vec<&str> = args.iter().map(String::as_str).collect();
            let result = glt(&refs);
            if !result.status.success() {
                return outcome(false, format!("{name} failed: {}", String::from_utf8_lossy(&result.stderr)));
            }
            outputs.push((read(&out_path), result.stdout));
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) || outputs[0].0.is_empty() {
            return outcome(false, format!("{name} output differs between runs"));
        }
        checked += 1;
    }
    outcome(true, format!("{checked} commands byte-identical across repeats and --jobs 1/2/4"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("1 UST uniformity", ust_uniformity, Duration::from_secs(60)),
        ("2 resistance identity", resistance_identity, Duration::from_secs(120)),
        ("3 sparsifier contracts", sparsifier_contracts, Duration::from_secs(u64::MAX / 4)),
        ("4 SLQ fidelity", slq_fidelity, Duration::from_secs(300)),
        ("5 metric orderings at d=2", degree_two_orderings, Duration::from_secs(600)),
        ("6 clustering NMI at d=5", degree_five_nmi, Duration::from_secs(u64::MAX / 4)),
        ("7 curvature bound", curvature_bound, Duration::from_secs(u64::MAX / 4)),
        ("8 exact spot checks", spot_checks, Duration::from_secs(u64::MAX / 4)),
        ("9 CLI determinism", cli_determinism, Duration::from_secs(u64::MAX / 4)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let mut result = run();
        let elapsed = start.elapsed();
        if elapsed > limit {
            result.pass = false;
            result.detail.push_str(&format!("; exceeded time limit of {}s", limit.as_secs()));
        }
        if !result.pass {
            failed += 1;
        }
        println!(
            "criterion {name}: {} [{:.1}s] {}",
            if result.pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            result.detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

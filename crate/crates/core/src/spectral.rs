//! Spectral and clustering metrics.
//!
//! Exact values come from a dense eigendecomposition (small graphs) or from
//! counting; large graphs use stochastic Lanczos quadrature (SLQ) for the
//! trace functionals and restarted Lanczos for extreme eigenvalues.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{
    self, default_start, gauss_quadrature, largest_eigenpair, projected_cg, Adjacency, EigenPair,
    Laplacian, LaplacianPseudoInverse, LinearOperator,
};
use crate::rng::RngState;

pub const DEFAULT_DENSE_CAP: usize = 2000;

/// Relative residual for eigenpairs of extreme eigenvalues.
const EIGEN_TOL: f64 = 1e-11;
const CG_TOL: f64 = 1e-12;
const MAX_BASIS: usize = 60;
const MAX_RESTARTS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricMode {
    Exact,
    Slq,
}

impl std::str::FromStr for MetricMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(MetricMode::Exact),
            "slq" => Ok(MetricMode::Slq),
            other => Err(Error::Input(format!("unknown metric mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlqConfig {
    pub num_probes: usize,
    pub lanczos_steps: usize,
    pub seed: u64,
}

impl Default for SlqConfig {
    fn default() -> Self {
        Self {
            num_probes: 100,
            lanczos_steps: 10,
            seed: 0,
        }
    }
}

impl SlqConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_probes == 0 || self.lanczos_steps == 0 {
            return Err(Error::Input(
                "SLQ needs at least one probe and one Lanczos step".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
}

/// Spectral function whose trace is estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceFn {
    Identity,
    Inverse,
    Log,
    Cube,
}

impl TraceFn {
    fn eval(self, x: f64) -> f64 {
        match self {
            TraceFn::Identity => x,
            TraceFn::Inverse => 1.0 / x,
            TraceFn::Log => x.ln(),
            TraceFn::Cube => x * x * x,
        }
    }

    fn needs_positive(self) -> bool {
        matches!(self, TraceFn::Inverse | TraceFn::Log)
    }
}

/// Ascending Laplacian and adjacency spectra.
#[derive(Clone, Debug)]
pub struct DenseSpectrum {
    pub laplacian: Vec<f64>,
    pub adjacency: Vec<f64>,
}

fn check_dense_cap(graph: &Graph, cap: usize) -> Result<()> {
    if graph.num_nodes() > cap {
        return Err(Error::Size(format!(
            "{} nodes exceeds the dense eigensolver cap of {cap}",
            graph.num_nodes()
        )));
    }
    Ok(())
}

fn dense_matrix(graph: &Graph, kind: MatrixKind) -> DMatrix<f64> {
    let n = graph.num_nodes();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for e in graph.edges() {
        let off = match kind {
            MatrixKind::Adjacency => 1.0,
            MatrixKind::Laplacian => -1.0,
        };
        m[(e.0, e.1)] = off;
        m[(e.1, e.0)] = off;
    }
    if kind == MatrixKind::Laplacian {
        for v in 0..n {
            m[(v, v)] = graph.degree(v) as f64;
        }
    }
    m
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

pub fn dense_spectrum(graph: &Graph, cap: usize) -> Result<DenseSpectrum> {
    check_dense_cap(graph, cap)?;
    Ok(DenseSpectrum {
        laplacian: dense_laplacian_spectrum(graph, cap)?,
        adjacency: sorted_eigenvalues(dense_matrix(graph, MatrixKind::Adjacency)),
    })
}

pub fn dense_laplacian_spectrum(graph: &Graph, cap: usize) -> Result<Vec<f64>> {
    check_dense_cap(graph, cap)?;
    Ok(sorted_eigenvalues(dense_matrix(graph, MatrixKind::Laplacian)))
}

fn require_connected(graph: &Graph, what: &str) -> Result<()> {
    if graph.num_nodes() == 0 || !graph.is_connected() {
        return Err(Error::Precondition(format!(
            "{what} is undefined on a disconnected or empty graph"
        )));
    }
    Ok(())
}

fn require_edges(graph: &Graph, what: &str) -> Result<()> {
    if graph.num_edges() == 0 {
        return Err(Error::Precondition(format!("{what} needs at least one edge")));
    }
    Ok(())
}

/// Unit principal eigenvector of `A` (nonnegative orientation) and `μ_max`.
pub fn principal_eigenpair(graph: &Graph) -> Result<EigenPair> {
    require_edges(graph, "the principal eigenvector")?;
    let n = graph.num_nodes();
    let mut pair = largest_eigenpair(
        &Adjacency(graph),
        &default_start(n),
        &[],
        EIGEN_TOL,
        MAX_BASIS.min(n),
        MAX_RESTARTS,
    )?;
    if pair.vector.iter().sum::<f64>() < 0.0 {
        pair.vector.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(pair)
}

/// Largest adjacency eigenvalue.
pub fn spectral_radius(graph: &Graph) -> Result<f64> {
    Ok(principal_eigenpair(graph)?.value)
}

/// Largest Laplacian eigenvalue `λ_n`.
pub fn largest_laplacian_eigenvalue(graph: &Graph) -> Result<f64> {
    let n = graph.num_nodes();
    if graph.num_edges() == 0 {
        return Ok(0.0);
    }
    Ok(largest_eigenpair(
        &Laplacian(graph),
        &default_start(n),
        &[],
        EIGEN_TOL,
        MAX_BASIS.min(n),
        MAX_RESTARTS,
    )?
    .value)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicConnectivity {
    /// `λ₂`, or 0 when the graph is disconnected.
    pub value: f64,
    pub connected: bool,
    /// Eigen-residual of the shift-inverted problem, relative to `1/λ₂`.
    pub relative_residual: f64,
}

/// Second-smallest Laplacian eigenvalue by Lanczos on `L†` (applied through
/// projected CG) with the constant vector deflated.
pub fn algebraic_connectivity(graph: &Graph) -> Result<AlgebraicConnectivity> {
    let n = graph.num_nodes();
    if n < 2 || !graph.is_connected() {
        return Ok(AlgebraicConnectivity {
            value: 0.0,
            connected: n == 1,
            relative_residual: 0.0,
        });
    }
    let op = LaplacianPseudoInverse { graph, tol: CG_TOL };
    let pair = largest_eigenpair(
        &op,
        &default_start(n),
        &[linalg::unit_constant(n)],
        1e-10,
        MAX_BASIS.min(n - 1).max(1),
        MAX_RESTARTS,
    )?;
    Ok(AlgebraicConnectivity {
        value: 1.0 / pair.value,
        connected: true,
        relative_residual: pair.residual / pair.value,
    })
}

/// `ω(u, v) = (e_u - e_v)ᵀ L† (e_u - e_v)` by one projected CG solve.
pub fn pair_effective_resistance(graph: &Graph, u: usize, v: usize) -> Result<f64> {
    let n = graph.num_nodes();
    if u >= n || v >= n {
        return Err(Error::Input(format!("node out of range for {n}-node graph")));
    }
    if u == v {
        return Ok(0.0);
    }
    let (comp, _) = graph.components();
    if comp[u] != comp[v] {
        return Err(Error::Precondition(format!(
            "nodes {u} and {v} are in different components; resistance is infinite"
        )));
    }
    // Solve on the component so the system is nonsingular.
    let members: Vec<usize> = (0..n).filter(|&w| comp[w] == comp[u]).collect();
    let sub = graph.induced_subgraph(&members);
    let pos = |w: usize| members.binary_search(&w).unwrap();
    let (a, b) = (pos(u), pos(v));
    let mut rhs = vec![0.0; members.len()];
    rhs[a] = 1.0;
    rhs[b] = -1.0;
    let sol = projected_cg(&sub, &rhs, CG_TOL, linalg::default_cg_iterations(&sub))?;
    Ok(sol.x[a] - sol.x[b])
}

/// Effective resistance of every edge, indexed by edge id. Uses the dense
/// pseudo-inverse up to `dense_cap` nodes, otherwise one CG solve per edge.
pub fn edge_effective_resistances(graph: &Graph, dense_cap: usize) -> Result<Vec<f64>> {
    require_connected(graph, "effective resistance")?;
    let n = graph.num_nodes();
    if n <= dense_cap {
        let eig = SymmetricEigen::new(dense_matrix(graph, MatrixKind::Laplacian));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let pairs: Vec<(f64, usize)> = order[1..].iter().map(|&i| (eig.eigenvalues[i], i)).collect();
        Ok(graph
            .edges()
            .par_iter()
            .map(|e| {
                pairs
                    .iter()
                    .map(|&(lambda, i)| {
                        let d = eig.eigenvectors[(e.0, i)] - eig.eigenvectors[(e.1, i)];
                        d * d / lambda
                    })
                    .sum()
            })
            .collect())
    } else {
        graph
            .edges()
            .par_iter()
            .map(|e| {
                let mut rhs = vec![0.0; n];
                rhs[e.0] = 1.0;
                rhs[e.1] = -1.0;
                let sol = projected_cg(graph, &rhs, CG_TOL, linalg::default_cg_iterations(graph))?;
                Ok(sol.x[e.0] - sol.x[e.1])
            })
            .collect()
    }
}

/// Estimates `tr f(M)` by stochastic Lanczos quadrature.
///
/// Each probe is a Rademacher vector `z` projected off the deflated subspace
/// and expanded by `lanczos_steps` Lanczos iterations; the probe contributes
/// `‖Pz‖² · e₁ᵀ f(T) e₁ ≈ zᵀ P f(M) P z`, whose mean is the trace over the
/// complement of the deflated subspace. Contributions are averaged in probe
/// order. On the Laplacian the constant vector is deflated and its zero
/// eigenvalue is excluded from the trace. On the adjacency matrix the Perron
/// eigenpair is deflated and `f(μ_max)` is added exactly, which removes the
/// dominant variance term of the estimator.
pub fn slq_trace(graph: &Graph, matrix: MatrixKind, f: TraceFn, cfg: &SlqConfig) -> Result<f64> {
    cfg.validate()?;
    let n = graph.num_nodes();
    if n == 0 {
        return Ok(0.0);
    }
    let (deflate, exact_part): (Vec<Vec<f64>>, f64) = match matrix {
        MatrixKind::Laplacian => {
            if f.needs_positive() {
                require_connected(graph, "this Laplacian trace function")?;
            }
            (vec![linalg::unit_constant(n)], 0.0)
        }
        MatrixKind::Adjacency => {
            if f.needs_positive() {
                return Err(Error::Input(
                    "1/x and log x traces are only defined on the Laplacian".into(),
                ));
            }
            if graph.num_edges() == 0 {
                return Ok(0.0);
            }
            let pair = principal_eigenpair(graph)?;
            (vec![pair.vector], f.eval(pair.value))
        }
    };
    if n == deflate.len() {
        return Ok(exact_part);
    }
    let op: Box<dyn LinearOperator> = match matrix {
        MatrixKind::Adjacency => Box::new(Adjacency(graph)),
        MatrixKind::Laplacian => Box::new(Laplacian(graph)),
    };
    let root = RngState::new(cfg.seed);
    let per_probe: Vec<f64> = (0..cfg.num_probes)
        .into_par_iter()
        .map(|i| slq_probe(op.as_ref(), &deflate, f, cfg.lanczos_steps, root.split(i as u64)))
        .collect::<Result<_>>()?;
    // Sequential reduction in probe order keeps the sum bit-stable.
    let mean = per_probe.iter().sum::<f64>() / per_probe.len() as f64;
    Ok(exact_part + mean)
}

const PROBE_ATTEMPTS: usize = 16;

/// `‖Pz‖² e₁ᵀ f(T) e₁` for one probe. A probe that vanishes after deflation
/// contributes zero; one whose quadrature breaks down or is non-finite is
/// redrawn from the same stream.
fn slq_probe(
    op: &dyn LinearOperator,
    deflate: &[Vec<f64>],
    f: TraceFn,
    steps: usize,
    mut rng: RngState,
) -> Result<f64> {
    let n = op.dim();
    for _ in 0..PROBE_ATTEMPTS {
        let mut v: Vec<f64> = (0..n).map(|_| rng.rademacher()).collect();
        linalg::orthogonalize(&mut v, deflate);
        let norm_sq = linalg::dot(&v, &v);
        if norm_sq < 1e-16 * n as f64 {
            return Ok(0.0);
        }
        let run = match linalg::lanczos(op, &v, steps, deflate) {
            Ok(run) => run,
            Err(Error::Numerical(_)) => continue,
            Err(e) => return Err(e),
        };
        let nodes = gauss_quadrature(&run);
        if f.needs_positive() && nodes.iter().any(|&(theta, _)| theta <= 0.0) {
            continue;
        }
        let value = norm_sq * nodes.iter().map(|&(theta, w)| w * f.eval(theta)).sum::<f64>();
        if value.is_finite() {
            return Ok(value);
        }
    }
    Err(Error::Numerical(format!(
        "SLQ probe broke down {PROBE_ATTEMPTS} times in a row"
    )))
}

/// `R = n · Σ_{i≥2} 1/λ_i`.
pub fn total_effective_resistance(graph: &Graph, mode: MetricMode, cfg: &SlqConfig) -> Result<f64> {
    require_connected(graph, "total effective resistance")?;
    let n = graph.num_nodes() as f64;
    match mode {
        MetricMode::Exact => {
            let spectrum = dense_laplacian_spectrum(graph, DEFAULT_DENSE_CAP)?;
            Ok(resistance_from_spectrum(&spectrum))
        }
        MetricMode::Slq => Ok(n * slq_trace(graph, MatrixKind::Laplacian, TraceFn::Inverse, cfg)?),
    }
}

fn resistance_from_spectrum(laplacian: &[f64]) -> f64 {
    laplacian.len() as f64 * laplacian.iter().skip(1).map(|l| 1.0 / l).sum::<f64>()
}

fn log_trees_from_spectrum(laplacian: &[f64]) -> f64 {
    laplacian.iter().skip(1).map(|l| l.ln()).sum()
}

/// `Σ_{i≥2} log λ_i`, i.e. the log spanning-tree count plus `log n`.
pub fn log_num_spanning_trees(graph: &Graph, mode: MetricMode, cfg: &SlqConfig) -> Result<f64> {
    require_connected(graph, "the spanning-tree count")?;
    match mode {
        MetricMode::Exact => Ok(log_trees_from_spectrum(&dense_laplacian_spectrum(
            graph,
            DEFAULT_DENSE_CAP,
        )?)),
        MetricMode::Slq => slq_trace(graph, MatrixKind::Laplacian, TraceFn::Log, cfg),
    }
}

/// `tr(A³)/6`: exact by wedge closure, or SLQ of `μ³`.
pub fn triangle_count(graph: &Graph, mode: MetricMode, cfg: &SlqConfig) -> Result<f64> {
    match mode {
        MetricMode::Exact => Ok(graph.exact_triangle_count() as f64),
        MetricMode::Slq => Ok(slq_trace(graph, MatrixKind::Adjacency, TraceFn::Cube, cfg)? / 6.0),
    }
}

/// A value that may be undefined on degenerate inputs; `defined == false`
/// carries the conventional fallback in `value`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flagged {
    pub value: f64,
    pub defined: bool,
}

fn wedge_count(graph: &Graph) -> u64 {
    graph
        .degrees()
        .iter()
        .map(|&d| (d as u64) * (d as u64).saturating_sub(1) / 2)
        .sum()
}

/// `3 · triangles / wedges`; 0 and undefined when there are no wedges.
pub fn global_clustering_coefficient(graph: &Graph) -> Flagged {
    let wedges = wedge_count(graph);
    if wedges == 0 {
        return Flagged {
            value: 0.0,
            defined: false,
        };
    }
    Flagged {
        value: 3.0 * graph.exact_triangle_count() as f64 / wedges as f64,
        defined: true,
    }
}

/// Mean over nodes of `2 t_i / (d_i (d_i - 1))`, with 0 for degree < 2.
pub fn avg_local_clustering(graph: &Graph) -> f64 {
    let n = graph.num_nodes();
    if n == 0 {
        return 0.0;
    }
    let tri = graph.triangles_per_node();
    let total: f64 = (0..n)
        .map(|v| {
            let d = graph.degree(v) as f64;
            if d < 2.0 {
                0.0
            } else {
                2.0 * tri[v] as f64 / (d * (d - 1.0))
            }
        })
        .sum();
    total / n as f64
}

/// One graph's structural metrics. Undefined entries are NaN and named in `undefined`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub algebraic_connectivity: f64,
    pub spectral_radius: f64,
    pub effective_resistance: f64,
    pub log_num_trees: f64,
    pub num_triangles: f64,
    pub global_cc: f64,
    pub avg_local_cc: f64,
    pub finite_condition_number: f64,
    pub undefined: Vec<&'static str>,
}

impl MetricsReport {
    pub const FIELDS: [&'static str; 8] = [
        "algebraic_connectivity",
        "spectral_radius",
        "effective_resistance",
        "log_num_trees",
        "num_triangles",
        "global_cc",
        "avg_local_cc",
        "finite_condition_number",
    ];

    pub fn values(&self) -> [f64; 8] {
        [
            self.algebraic_connectivity,
            self.spectral_radius,
            self.effective_resistance,
            self.log_num_trees,
            self.num_triangles,
            self.global_cc,
            self.avg_local_cc,
            self.finite_condition_number,
        ]
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        Self::FIELDS
            .iter()
            .position(|f| *f == name)
            .map(|i| self.values()[i])
    }

    /// Computes every metric. Exact mode needs `n ≤ DEFAULT_DENSE_CAP`.
    pub fn compute(graph: &Graph, mode: MetricMode, cfg: &SlqConfig) -> Result<Self> {
        let mut undefined = Vec::new();
        let connected = graph.num_nodes() > 0 && graph.is_connected();

        let lambda2 = algebraic_connectivity(graph)?;
        let (algebraic_connectivity, finite_condition_number) = if connected && graph.num_nodes() > 1 {
            let lambda_n = largest_laplacian_eigenvalue(graph)?;
            (lambda2.value, lambda_n / lambda2.value)
        } else {
            undefined.push("algebraic_connectivity");
            undefined.push("finite_condition_number");
            (0.0, f64::NAN)
        };

        let spectral_radius = if graph.num_edges() > 0 {
            self::spectral_radius(graph)?
        } else {
            0.0
        };

        let (effective_resistance, log_num_trees) = if !connected {
            undefined.push("effective_resistance");
            undefined.push("log_num_trees");
            (f64::NAN, f64::NAN)
        } else {
            match mode {
                MetricMode::Exact => {
                    let spectrum = dense_laplacian_spectrum(graph, DEFAULT_DENSE_CAP)?;
                    (resistance_from_spectrum(&spectrum), log_trees_from_spectrum(&spectrum))
                }
                MetricMode::Slq => (
                    total_effective_resistance(graph, mode, cfg)?,
                    log_num_spanning_trees(graph, mode, cfg)?,
                ),
            }
        };

        let num_triangles = triangle_count(graph, mode, cfg)?;
        let gcc = global_clustering_coefficient(graph);
        if !gcc.defined {
            undefined.push("global_cc");
        }

        Ok(MetricsReport {
            algebraic_connectivity,
            spectral_radius,
            effective_resistance,
            log_num_trees,
            num_triangles,
            global_cc: gcc.value,
            avg_local_cc: avg_local_clustering(graph),
            finite_condition_number,
            undefined,
        })
    }

    pub fn tsv_header() -> String {
        Self::FIELDS.join("\t")
    }

    pub fn to_tsv_row(&self) -> String {
        let mut row = String::new();
        for (i, v) in self.values().iter().enumerate() {
            if i > 0 {
                row.push('\t');
            }
            write!(row, "{}", format_value(*v)).unwrap();
        }
        row
    }
}

/// Shortest round-trip decimal, with `nan`/`inf` spelled in lower case.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

//! Matrix-free symmetric eigensolvers and Laplacian solves.
//!
//! Everything here works on [`LinearOperator`]s so the same Lanczos code
//! drives the adjacency matrix, the Laplacian and the Laplacian
//! pseudo-inverse (through [`projected_cg`]).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    /// `y = Op x`.
    fn apply(&self, x: &[f64], y: &mut [f64]) -> Result<()>;
}

pub struct Adjacency<'a>(pub &'a Graph);
pub struct Laplacian<'a>(pub &'a Graph);

impl LinearOperator for Adjacency<'_> {
    fn dim(&self) -> usize {
        self.0.num_nodes()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.0.adjacency_apply(x, y);
        Ok(())
    }
}

impl LinearOperator for Laplacian<'_> {
    fn dim(&self) -> usize {
        self.0.num_nodes()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.0.laplacian_apply(x, y);
        Ok(())
    }
}

/// `L†` of a connected graph, applied by a projected CG solve.
pub struct LaplacianPseudoInverse<'a> {
    pub graph: &'a Graph,
    pub tol: f64,
}

impl LinearOperator for LaplacianPseudoInverse<'_> {
    fn dim(&self) -> usize {
        self.graph.num_nodes()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        let sol = projected_cg(self.graph, x, self.tol, default_cg_iterations(self.graph))?;
        y.copy_from_slice(&sol.x);
        Ok(())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// y += alpha * x
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn scale(v: &mut [f64], s: f64) {
    v.iter_mut().for_each(|x| *x *= s);
}

/// Removes the components of `v` along each (orthonormal) vector in `basis`.
pub fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        axpy(-c, b, v);
    }
}

fn remove_mean(v: &mut [f64]) {
    if v.is_empty() {
        return;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

pub fn unit_constant(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}

#[derive(Clone, Debug)]
pub struct CgSolution {
    pub x: Vec<f64>,
    /// Final residual norm relative to `‖b‖` (after projection).
    pub relative_residual: f64,
    pub iterations: usize,
}

pub fn default_cg_iterations(graph: &Graph) -> usize {
    (20 * graph.num_nodes()).max(1000)
}

/// Solves `L x = b` on the complement of the constant vector with
/// Jacobi-preconditioned conjugate gradients. `b` is projected to zero mean
/// first and the returned `x` has zero mean. The graph must be connected.
pub fn projected_cg(graph: &Graph, b: &[f64], tol: f64, max_iter: usize) -> Result<CgSolution> {
    let n = graph.num_nodes();
    if b.len() != n {
        return Err(Error::Input(format!(
            "right-hand side has length {} but graph has {n} nodes",
            b.len()
        )));
    }
    let mut r = b.to_vec();
    remove_mean(&mut r);
    let b_norm = norm(&r);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok(CgSolution {
            x,
            relative_residual: 0.0,
            iterations: 0,
        });
    }
    let inv_deg: Vec<f64> = graph
        .degrees()
        .into_iter()
        .map(|d| if d > 0 { 1.0 / d as f64 } else { 0.0 })
        .collect();
    let precondition = |r: &[f64], z: &mut Vec<f64>| {
        z.iter_mut()
            .zip(r.iter().zip(&inv_deg))
            .for_each(|(zi, (ri, di))| *zi = ri * di);
        remove_mean(z);
    };
    let mut z = vec![0.0; n];
    precondition(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut lp = vec![0.0; n];
    for it in 1..=max_iter {
        graph.laplacian_apply(&p, &mut lp);
        let curvature = dot(&p, &lp);
        if !(curvature > 0.0) {
            return Err(Error::Numerical(
                "conjugate gradient lost positive definiteness (is the graph connected?)".into(),
            ));
        }
        let alpha = rz / curvature;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &lp, &mut r);
        let rel = norm(&r) / b_norm;
        if rel <= tol {
            remove_mean(&mut x);
            return Ok(CgSolution {
                x,
                relative_residual: rel,
                iterations: it,
            });
        }
        precondition(&r, &mut z);
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        p.iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
    }
    Err(Error::Numerical(format!(
        "conjugate gradient did not reach relative residual {tol:e} in {max_iter} iterations"
    )))
}

/// Lanczos recurrence coefficients and, optionally, the basis.
#[derive(Clone, Debug)]
pub struct LanczosRun {
    pub alpha: Vec<f64>,
    /// Off-diagonal entries; `beta.len() == alpha.len() - 1`.
    pub beta: Vec<f64>,
    /// Norm of the residual after the last step (0 on breakdown).
    pub last_beta: f64,
    pub basis: Vec<Vec<f64>>,
    pub broke_down: bool,
}

/// Runs up to `steps` Lanczos iterations from `start` with full
/// reorthogonalization, keeping the Krylov space orthogonal to `deflate`
/// (orthonormal vectors). Terminates early when the Krylov space becomes
/// invariant. `start` must be nonzero after deflation.
pub fn lanczos<Op: LinearOperator + ?Sized>(
    op: &Op,
    start: &[f64],
    steps: usize,
    deflate: &[Vec<f64>],
) -> Result<LanczosRun> {
    let n = op.dim();
    let mut v = start.to_vec();
    orthogonalize(&mut v, deflate);
    let v_norm = norm(&v);
    if !(v_norm > 0.0) || !v_norm.is_finite() {
        return Err(Error::Numerical("Lanczos start vector vanished after deflation".into()));
    }
    scale(&mut v, 1.0 / v_norm);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut alpha = Vec::with_capacity(steps);
    let mut beta = Vec::<f64>::with_capacity(steps);
    let mut w = vec![0.0; n];
    let mut magnitude = 0.0f64;
    let mut last_beta = 0.0;
    let mut broke_down = false;
    for k in 0..steps.min(n) {
        op.apply(&v, &mut w)?;
        let a = dot(&w, &v);
        axpy(-a, &v, &mut w);
        if let Some(prev) = basis.last() {
            axpy(-beta[k - 1], prev, &mut w);
        }
        basis.push(v.clone());
        // Two passes of classical Gram-Schmidt keep the basis orthogonal to
        // working precision.
        for _ in 0..2 {
            orthogonalize(&mut w, deflate);
            orthogonalize(&mut w, &basis);
        }
        alpha.push(a);
        let b = norm(&w);
        magnitude = magnitude.max(a.abs() + b);
        if !b.is_finite() || !a.is_finite() {
            return Err(Error::Numerical("Lanczos produced non-finite coefficients".into()));
        }
        if b <= 1e-12 * magnitude.max(f64::MIN_POSITIVE) {
            broke_down = true;
            last_beta = 0.0;
            break;
        }
        last_beta = b;
        if k + 1 < steps.min(n) {
            beta.push(b);
            v.copy_from_slice(&w);
            scale(&mut v, 1.0 / b);
        }
    }
    if basis.len() == n {
        broke_down = true;
        last_beta = 0.0;
    }
    Ok(LanczosRun {
        alpha,
        beta,
        last_beta,
        basis,
        broke_down,
    })
}

/// Eigenvalues (ascending) and eigenvectors of the symmetric tridiagonal
/// matrix with diagonal `alpha` and off-diagonal `beta`.
pub fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(k, k, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Gauss quadrature nodes and weights (`τ_j² = (first component)²`) of the
/// Lanczos tridiagonal matrix.
pub fn gauss_quadrature(run: &LanczosRun) -> Vec<(f64, f64)> {
    let (values, vectors) = tridiagonal_eigen(&run.alpha, &run.beta);
    values
        .into_iter()
        .enumerate()
        .map(|(j, theta)| (theta, vectors[(0, j)].powi(2)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖Op x - θ x‖` for the returned unit vector.
    pub residual: f64,
}

/// Largest algebraic eigenpair of `op` restricted to the orthogonal
/// complement of `deflate`, by restarted Lanczos with full
/// reorthogonalization. Converged when `residual ≤ tol · max(|θ|, 1e-300)`.
pub fn largest_eigenpair<Op: LinearOperator + ?Sized>(
    op: &Op,
    start: &[f64],
    deflate: &[Vec<f64>],
    tol: f64,
    max_basis: usize,
    max_restarts: usize,
) -> Result<EigenPair> {
    let n = op.dim();
    let mut start = start.to_vec();
    let mut best: Option<EigenPair> = None;
    let mut y = vec![0.0; n];
    for _ in 0..=max_restarts {
        let run = lanczos(op, &start, max_basis.max(2), deflate)?;
        let (values, vectors) = tridiagonal_eigen(&run.alpha, &run.beta);
        let top = values.len() - 1;
        let theta = values[top];
        let mut x = vec![0.0; n];
        for (j, b) in run.basis.iter().enumerate() {
            axpy(vectors[(j, top)], b, &mut x);
        }
        orthogonalize(&mut x, deflate);
        let xn = norm(&x);
        scale(&mut x, 1.0 / xn);
        op.apply(&x, &mut y)?;
        orthogonalize(&mut y, deflate);
        axpy(-theta, &x, &mut y);
        let residual = norm(&y);
        let pair = EigenPair {
            value: theta,
            vector: x,
            residual,
        };
        if residual <= tol * theta.abs().max(1e-300) || (run.broke_down && residual <= 1e-8 * theta.abs().max(1e-300)) {
            return Ok(pair);
        }
        start = pair.vector.clone();
        if best.as_ref().is_none_or(|b| residual < b.residual) {
            best = Some(pair);
        }
    }
    let best = best.unwrap();
    Err(Error::Numerical(format!(
        "Lanczos did not converge: best residual {:e} for eigenvalue {}",
        best.residual, best.value
    )))
}

/// Deterministic, generic start vector: entries in (0.5, 1.5) from a fixed
/// low-discrepancy sequence, so no eigenvector is accidentally orthogonal to it.
pub fn default_start(n: usize) -> Vec<f64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    (0..n)
        .map(|i| 0.5 + ((i as f64 + 1.0) * GOLDEN).fract())
        .collect()
}

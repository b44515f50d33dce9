use std::collections::VecDeque;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::netcore::{Graph, ProbMatrix};
use crate::spectral::full_eigenpairs;

/// Optimizer settings for the latent distance fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatentSettings {
    pub max_iter: usize,
    /// Stop once the Euclidean norm of the full gradient drops below this.
    pub grad_tol: f64,
    /// Also stop once one step raises the log-likelihood by less than
    /// `rel_tol * max(1, |ll|)`. Separable graphs have no finite maximizer and
    /// otherwise creep towards it until `max_iter`.
    pub rel_tol: f64,
    /// Number of curvature pairs kept by the quasi-Newton direction.
    pub memory: usize,
    /// Standard deviation of the jitter added to the MDS start.
    pub init_jitter: f64,
}

impl Default for LatentSettings {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            grad_tol: 1e-5,
            rel_tol: 1e-10,
            memory: 10,
            init_jitter: 1e-2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LatentFit {
    pub alpha_hat: f64,
    pub z_hat: DMatrix<f64>,
    /// Log-likelihood at the start and after every accepted step.
    pub loglik_trace: Vec<f64>,
    pub converged: bool,
}

impl LatentFit {
    pub fn prob_matrix(&self) -> ProbMatrix {
        latent_probabilities(self.alpha_hat, &self.z_hat)
    }

    pub fn log_likelihood(&self) -> f64 {
        *self
            .loglik_trace
            .last()
            .expect("trace starts with the initial value")
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `P(i, j) = sigmoid(alpha - |z_i - z_j|)`.
pub fn latent_probabilities(alpha: f64, z: &DMatrix<f64>) -> ProbMatrix {
    ProbMatrix::from_pair_fn(z.nrows(), |i, j| {
        sigmoid(alpha - (z.row(i) - z.row(j)).norm())
    })
}

/// Parameter vector layout: `[alpha, z_00, z_01, .., z_{n-1,d-1}]`.
struct Objective {
    n: usize,
    d: usize,
    /// Dense adjacency, row-major.
    adj: Vec<f64>,
}

impl Objective {
    fn new(g: &Graph, d: usize) -> Self {
        let adj = g.to_dense().transpose().as_slice().to_vec();
        Objective { n: g.n(), d, adj }
    }

    /// Log-likelihood and its gradient.
    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let (n, d) = (self.n, self.d);
        let alpha = x[0];
        let z = &x[1..];
        grad.iter_mut().for_each(|v| *v = 0.0);
        let mut ll = 0.0;
        let mut diff = vec![0.0; d];
        for i in 0..n {
            for j in (i + 1)..n {
                let mut sq = 0.0;
                for c in 0..d {
                    diff[c] = z[i * d + c] - z[j * d + c];
                    sq += diff[c] * diff[c];
                }
                let dist = sq.sqrt();
                let eta = alpha - dist;
                let a = self.adj[i * n + j];
                // One exp serves both the softplus and the sigmoid.
                let e = (-eta.abs()).exp();
                ll += a * eta - (eta.max(0.0) + e.ln_1p());
                let p = if eta >= 0.0 {
                    1.0 / (1.0 + e)
                } else {
                    e / (1.0 + e)
                };
                let resid = a - p;
                grad[0] += resid;
                // |z_i - z_j| is not differentiable at coincident points; use
                // the zero subgradient there.
                if dist > 1e-12 {
                    let w = resid / dist;
                    for c in 0..d {
                        grad[1 + i * d + c] -= w * diff[c];
                        grad[1 + j * d + c] += w * diff[c];
                    }
                }
            }
        }
        ll
    }
}

fn pack(alpha: f64, z: &DMatrix<f64>) -> Vec<f64> {
    let mut x = Vec::with_capacity(1 + z.len());
    x.push(alpha);
    for i in 0..z.nrows() {
        x.extend(z.row(i).iter());
    }
    x
}

fn unpack(x: &[f64], n: usize, d: usize) -> (f64, DMatrix<f64>) {
    (x[0], DMatrix::from_row_slice(n, d, &x[1..]))
}

pub fn log_likelihood(g: &Graph, alpha: f64, z: &DMatrix<f64>) -> f64 {
    let x = pack(alpha, z);
    let mut grad = vec![0.0; x.len()];
    Objective::new(g, z.ncols()).eval(&x, &mut grad)
}

/// Gradient of [`log_likelihood`] with respect to `alpha` and `z`.
pub fn log_likelihood_gradient(g: &Graph, alpha: f64, z: &DMatrix<f64>) -> (f64, DMatrix<f64>) {
    let x = pack(alpha, z);
    let mut grad = vec![0.0; x.len()];
    Objective::new(g, z.ncols()).eval(&x, &mut grad);
    unpack(&grad, z.nrows(), z.ncols())
}

/// Shortest-path lengths; unreachable pairs get `max + 1`.
fn geodesics(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut dist = DMatrix::from_element(n, n, f64::INFINITY);
    let mut queue = VecDeque::new();
    for s in 0..n {
        dist[(s, s)] = 0.0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = dist[(s, u)];
            for v in g.neighbors(u) {
                if dist[(s, v)].is_infinite() {
                    dist[(s, v)] = du + 1.0;
                    queue.push_back(v);
                }
            }
        }
    }
    let max = dist
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    dist.apply(|v| {
        if v.is_infinite() {
            *v = max + 1.0
        }
    });
    dist
}

/// Classical multidimensional scaling into `d` dimensions.
fn classical_mds(dist: &DMatrix<f64>, d: usize) -> Result<DMatrix<f64>> {
    let n = dist.nrows();
    let sq = dist.map(|v| v * v);
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).mean()).collect();
    let grand = sq.mean();
    let b = DMatrix::from_fn(n, n, |i, j| {
        -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand)
    });
    let eig = full_eigenpairs(&b)?;
    // full_eigenpairs orders by magnitude; MDS wants the largest positive values.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &c| eig.values[c].total_cmp(&eig.values[a]));
    Ok(DMatrix::from_fn(n, d, |i, c| match order.get(c) {
        Some(&k) => eig.vectors[(i, k)] * eig.values[k].max(0.0).sqrt(),
        None => 0.0,
    }))
}

fn initial_point<R: Rng + ?Sized>(
    g: &Graph,
    d: usize,
    settings: &LatentSettings,
    rng: &mut R,
) -> Result<(f64, DMatrix<f64>)> {
    let n = g.n();
    let mut z = classical_mds(&geodesics(g), d)?;
    for v in z.iter_mut() {
        *v += settings.init_jitter * rng.sample::<f64, _>(StandardNormal);
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let density = (g.edge_count() as f64 / pairs).clamp(0.5 / pairs, 1.0 - 0.5 / pairs);
    let mut mean_dist = 0.0;
    for j in 0..n {
        for i in 0..j {
            mean_dist += (z.row(i) - z.row(j)).norm();
        }
    }
    mean_dist /= pairs;
    Ok(((density / (1.0 - density)).ln() + mean_dist, z))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Maximum likelihood fit of `logit P(i, j) = alpha - |z_i - z_j|`.
///
/// Starts from classical MDS of graph geodesics and climbs with limited-memory
/// quasi-Newton steps under an Armijo backtracking line search.
pub fn estimate_latent_distance<R: Rng + ?Sized>(
    g: &Graph,
    d: usize,
    settings: &LatentSettings,
    rng: &mut R,
) -> Result<LatentFit> {
    let n = g.n();
    if d == 0 {
        return Err(Error::InvalidParameter(
            "latent dimension must be at least 1".into(),
        ));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "latent fit needs at least 2 nodes, got {n}"
        )));
    }
    let (alpha0, z0) = initial_point(g, d, settings, rng)?;
    let objective = Objective::new(g, d);
    let mut x = pack(alpha0, &z0);
    let dim = x.len();
    let mut grad = vec![0.0; dim];
    let mut ll = objective.eval(&x, &mut grad);
    if !ll.is_finite() {
        return Err(Error::Optimizer(
            "non-finite log-likelihood at the starting point".into(),
        ));
    }
    let mut trace = vec![ll];
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut converged = false;
    let mut trial = vec![0.0; dim];
    let mut trial_grad = vec![0.0; dim];

    for _ in 0..settings.max_iter {
        if dot(&grad, &grad).sqrt() <= settings.grad_tol {
            converged = true;
            break;
        }
        // Two-loop recursion on the negated objective, whose gradient is -grad.
        let mut q: Vec<f64> = grad.iter().map(|v| -v).collect();
        let mut coeffs = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &q);
            q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
            coeffs.push(a);
        }
        if let Some((s, y, _)) = history.back() {
            let gamma = dot(s, y) / dot(y, y);
            q.iter_mut().for_each(|qi| *qi *= gamma);
        }
        for ((s, y, rho), a) in history.iter().zip(coeffs.iter().rev()) {
            let b = rho * dot(y, &q);
            q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
        }
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut slope = dot(&grad, &dir);
        if history.is_empty() || slope <= 0.0 || !slope.is_finite() {
            history.clear();
            let scale = 1.0 / dot(&grad, &grad).sqrt().max(1.0);
            dir = grad.iter().map(|v| v * scale).collect();
            slope = dot(&grad, &dir);
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            for k in 0..dim {
                trial[k] = x[k] + step * dir[k];
            }
            let value = objective.eval(&trial, &mut trial_grad);
            if !value.is_finite() {
                return Err(Error::Optimizer(
                    "non-finite log-likelihood during line search".into(),
                ));
            }
            if value >= ll + 1e-4 * step * slope {
                accepted = Some(value);
                break;
            }
            step *= 0.5;
        }
        let Some(value) = accepted else {
            // No ascent possible along the best direction: numerically at the top.
            converged = true;
            break;
        };
        let s: Vec<f64> = (0..dim).map(|k| trial[k] - x[k]).collect();
        // Curvature pair for the negated objective.
        let y: Vec<f64> = (0..dim).map(|k| grad[k] - trial_grad[k]).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 {
            if history.len() == settings.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        std::mem::swap(&mut x, &mut trial);
        std::mem::swap(&mut grad, &mut trial_grad);
        let gain = value - ll;
        ll = value;
        trace.push(ll);
        if gain <= settings.rel_tol * ll.abs().max(1.0) {
            converged = true;
            break;
        }
    }

    let (alpha_hat, z_hat) = unpack(&x, n, d);
    Ok(LatentFit {
        alpha_hat,
        z_hat,
        loglik_trace: trace,
        converged,
    })
}

pub fn fit_latent_distance<R: Rng + ?Sized>(
    g: &Graph,
    d: usize,
    settings: &LatentSettings,
    rng: &mut R,
) -> Result<ProbMatrix> {
    Ok(estimate_latent_distance(g, d, settings, rng)?.prob_matrix())
}

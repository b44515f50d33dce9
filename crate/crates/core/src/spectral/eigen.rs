use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenpairs of a symmetric matrix, ordered by decreasing `|value|`.
///
/// Column `i` of `vectors` belongs to `values[i]`. Each vector is unit
/// length and oriented so that its first nonzero coordinate is positive.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigenPairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }
}

/// Below this size the dense solver is used unconditionally.
const DENSE_CUTOFF: usize = 64;
const RITZ_TOL: f64 = 1e-10;
const SIGN_TOL: f64 = 1e-9;

fn orient(v: &mut DVector<f64>) {
    if let Some(first) = v.iter().find(|x| x.abs() > SIGN_TOL) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
}

fn by_magnitude(a: f64, b: f64) -> std::cmp::Ordering {
    b.abs().total_cmp(&a.abs()).then_with(|| b.total_cmp(&a))
}

fn check_square(m: &DMatrix<f64>, k: usize) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            left: m.nrows(),
            right: m.ncols(),
        });
    }
    if k == 0 || k > m.nrows() {
        return Err(Error::InvalidParameter(format!(
            "requested {k} eigenpairs of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Complete decomposition via the dense symmetric QR algorithm.
pub fn full_eigenpairs(m: &DMatrix<f64>) -> Result<EigenPairs> {
    check_square(m, m.nrows().max(1))?;
    dense_top(m, m.nrows())
}

fn dense_top(m: &DMatrix<f64>, k: usize) -> Result<EigenPairs> {
    let n = m.nrows();
    let max_iter = 1000 * n.max(1);
    let eig =
        SymmetricEigen::try_new(m.clone(), f64::EPSILON, max_iter).ok_or(Error::NoConvergence {
            iterations: max_iter,
        })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| by_magnitude(eig.eigenvalues[a], eig.eigenvalues[b]));
    let mut vectors = DMatrix::zeros(n, k);
    let mut values = Vec::with_capacity(k);
    for (c, &idx) in order.iter().take(k).enumerate() {
        let mut v = eig.eigenvectors.column(idx).into_owned();
        orient(&mut v);
        vectors.set_column(c, &v);
        values.push(eig.eigenvalues[idx]);
    }
    Ok(EigenPairs { values, vectors })
}

/// The `k` eigenpairs of largest magnitude.
///
/// Small problems, or requests for a large share of the spectrum, go straight
/// to the dense solver. Otherwise a Lanczos iteration with full
/// reorthogonalization is used; its result is accepted only when every
/// returned pair has a small explicit residual and a deflated Lanczos run
/// orthogonal to the returned vectors finds nothing larger in magnitude than
/// the k-th value. Anything else falls back to the dense solver.
pub fn top_eigenpairs(m: &DMatrix<f64>, k: usize) -> Result<EigenPairs> {
    check_square(m, k)?;
    let n = m.nrows();
    if n <= DENSE_CUTOFF || 4 * k > n {
        return dense_top(m, k);
    }
    let mut steps = (2 * k + 30).min(n);
    while 2 * steps <= n {
        if let Some(pairs) = lanczos_top(m, k, steps) {
            return Ok(pairs);
        }
        steps *= 2;
    }
    dense_top(m, k)
}

/// Largest singular value of a symmetric matrix.
pub fn spectral_norm(m: &DMatrix<f64>) -> Result<f64> {
    Ok(top_eigenpairs(m, 1)?.values[0].abs())
}

// Deterministic, generic start vectors.
fn start_vector(n: usize, salt: u64) -> DVector<f64> {
    let mut state = salt.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03;
    DVector::from_fn(n, |_, _| {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    })
}

fn orthogonalize(w: &mut DVector<f64>, basis: &[DVector<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = q.dot(w);
            w.axpy(-c, q, 1.0);
        }
    }
}

struct KrylovRun {
    ritz_values: Vec<f64>,
    ritz_vectors: Vec<DVector<f64>>,
}

/// Lanczos with full reorthogonalization against `locked` and the Krylov
/// basis itself. Returns Ritz pairs sorted by decreasing magnitude, with
/// vectors for the leading `want` of them.
fn lanczos_run(
    m: &DMatrix<f64>,
    steps: usize,
    want: usize,
    locked: &[DVector<f64>],
    salt: u64,
) -> KrylovRun {
    let n = m.nrows();
    let scale = m.amax().max(f64::MIN_POSITIVE) * n as f64;
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(steps);
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut restarts = 0u64;

    let fresh = |basis: &[DVector<f64>], restarts: &mut u64| -> Option<DVector<f64>> {
        for _ in 0..4 {
            let mut v = start_vector(n, salt + *restarts);
            *restarts += 1;
            orthogonalize(&mut v, locked);
            orthogonalize(&mut v, basis);
            let norm = v.norm();
            if norm > 1e-8 {
                return Some(v / norm);
            }
        }
        None
    };

    let mut q = match fresh(&basis, &mut restarts) {
        Some(q) => q,
        None => {
            return KrylovRun {
                ritz_values: Vec::new(),
                ritz_vectors: Vec::new(),
            }
        }
    };
    let mut w = DVector::zeros(n);
    for j in 0..steps {
        w.gemv(1.0, m, &q, 0.0);
        let a = q.dot(&w);
        alpha.push(a);
        w.axpy(-a, &q, 1.0);
        if let (Some(&b), Some(prev)) = (beta.last(), basis.last()) {
            w.axpy(-b, prev, 1.0);
        }
        basis.push(q.clone());
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &basis);
        if j + 1 == steps {
            break;
        }
        let b = w.norm();
        if b > 1e-12 * scale {
            beta.push(b);
            q = &w / b;
        } else {
            // Invariant subspace found; continue in a fresh orthogonal direction.
            match fresh(&basis, &mut restarts) {
                Some(v) => {
                    beta.push(0.0);
                    q = v;
                }
                None => break,
            }
        }
    }

    let size = basis.len();
    let mut t = DMatrix::zeros(size, size);
    for i in 0..size {
        t[(i, i)] = alpha[i];
        if i + 1 < size {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| by_magnitude(eig.eigenvalues[a], eig.eigenvalues[b]));
    let ritz_values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let ritz_vectors = order
        .iter()
        .take(want)
        .map(|&i| {
            let s = eig.eigenvectors.column(i);
            let mut y = DVector::zeros(n);
            for (c, q) in basis.iter().enumerate() {
                y.axpy(s[c], q, 1.0);
            }
            let norm = y.norm();
            y / norm
        })
        .collect();
    KrylovRun {
        ritz_values,
        ritz_vectors,
    }
}

fn lanczos_top(m: &DMatrix<f64>, k: usize, steps: usize) -> Option<EigenPairs> {
    let n = m.nrows();
    let run = lanczos_run(m, steps, k, &[], 0);
    if run.ritz_vectors.len() < k {
        return None;
    }
    let lead = run.ritz_values[0].abs().max(1.0);
    let mut w = DVector::zeros(n);
    let mut vectors = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for (theta, y) in run.ritz_values.iter().zip(run.ritz_vectors.iter()).take(k) {
        // Rayleigh quotient refines the value; the residual certifies the pair.
        w.gemv(1.0, m, y, 0.0);
        let rq = y.dot(&w);
        w.axpy(-rq, y, 1.0);
        if w.norm() > RITZ_TOL * lead || (rq - theta).abs() > 1e-6 * lead {
            return None;
        }
        values.push(rq);
        vectors.push(y.clone());
    }
    // Anything missed (multiplicity, slow convergence) shows up here.
    let kth = values[k - 1].abs();
    let check = lanczos_run(m, steps.min(n - k), 1, &vectors, 0x5eed);
    if let Some(&top) = check.ritz_values.first() {
        if top.abs() > kth * (1.0 - 1e-8) - RITZ_TOL * lead {
            return None;
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| by_magnitude(values[a], values[b]));
    let mut out = DMatrix::zeros(n, k);
    let mut sorted_values = Vec::with_capacity(k);
    for (c, &i) in order.iter().enumerate() {
        let mut v = vectors[i].clone();
        orient(&mut v);
        out.set_column(c, &v);
        sorted_values.push(values[i]);
    }
    Some(EigenPairs {
        values: sorted_values,
        vectors: out,
    })
}

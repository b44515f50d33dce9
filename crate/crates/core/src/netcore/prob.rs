use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Symmetric matrix of edge probabilities with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbMatrix {
    p: DMatrix<f64>,
}

const SYMMETRY_TOL: f64 = 1e-12;

impl ProbMatrix {
    /// Validate and wrap a dense matrix.
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::InvalidProbMatrix(format!(
                "matrix is {}x{}",
                p.nrows(),
                p.ncols()
            )));
        }
        let n = p.nrows();
        for j in 0..n {
            if p[(j, j)] != 0.0 {
                return Err(Error::InvalidProbMatrix(format!("nonzero diagonal at {j}")));
            }
            for i in 0..n {
                let v = p[(i, j)];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidProbMatrix(format!(
                        "entry ({i},{j}) = {v} outside [0,1]"
                    )));
                }
                if (v - p[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidProbMatrix(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self { p })
    }

    /// Project an arbitrary square matrix onto the valid set: symmetrize from
    /// the upper triangle, clip into `[0, 1]` (NaN maps to 0), zero the diagonal.
    pub fn clipped(m: DMatrix<f64>) -> Self {
        let (p, _) = Self::clipped_counting(m);
        p
    }

    /// Like [`ProbMatrix::clipped`], also reporting how many upper-triangle
    /// entries were actually truncated.
    pub fn clipped_counting(mut m: DMatrix<f64>) -> (Self, usize) {
        assert!(m.is_square(), "clipped: matrix must be square");
        let n = m.nrows();
        let mut truncated = 0;
        for j in 0..n {
            m[(j, j)] = 0.0;
            for i in 0..j {
                let v = m[(i, j)];
                let c = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
                if c != v {
                    truncated += 1;
                }
                m[(i, j)] = c;
                m[(j, i)] = c;
            }
        }
        (Self { p: m }, truncated)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            p: DMatrix::zeros(n, n),
        }
    }

    /// Build from a function of the unordered pair `i < j`.
    pub fn from_pair_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..j {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self::clipped(m)
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.p
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_norm(&self.p)
    }

    /// Multiply every entry by `c` and clip back into range.
    pub fn scaled(&self, c: f64) -> Self {
        Self::clipped(&self.p * c)
    }

    /// Mean of the off-diagonal entries, i.e. the expected edge density.
    pub fn density(&self) -> f64 {
        let n = self.n();
        if n < 2 {
            return 0.0;
        }
        self.p.sum() / (n * (n - 1)) as f64
    }

    /// Apply a node permutation: entry `(perm[i], perm[j])` of the result is
    /// entry `(i, j)` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n();
        assert_eq!(perm.len(), n);
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                m[(perm[i], perm[j])] = self.p[(i, j)];
            }
        }
        Self { p: m }
    }
}

/// Square root of the sum of squares over every entry.
pub fn frobenius_norm(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Frobenius norm of `a - b`, summed over all `n^2` entries (both triangles).
pub fn frobenius_distance(a: &ProbMatrix, b: &ProbMatrix) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(a.p
        .iter()
        .zip(b.p.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

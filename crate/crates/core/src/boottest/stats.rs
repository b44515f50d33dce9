use nalgebra::DMatrix;

use super::engine::NullPair;
use crate::error::{Error, Result};
use crate::netcore::{frobenius_norm, ProbMatrix};

fn check_dims(a: &ProbMatrix, b: &ProbMatrix) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

/// Euclidean distance between two feature vectors (or flattened matrices).
pub fn feature_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// `||P1 - P2||_F`.
pub fn t_frob(p1: &ProbMatrix, p2: &ProbMatrix) -> Result<f64> {
    check_dims(p1, p2)?;
    feature_distance(p1.matrix().as_slice(), p2.matrix().as_slice())
}

fn positive_norm(p: &ProbMatrix, which: &str) -> Result<f64> {
    let rho = p.frobenius_norm();
    if rho > 0.0 {
        Ok(rho)
    } else {
        Err(Error::Degenerate(format!(
            "{which} fitted matrix has zero Frobenius norm"
        )))
    }
}

/// `||P1 / rho1 - P2 / rho2||_F` together with `rho1 = ||P1||_F` and
/// `rho2 = ||P2||_F`.
pub fn t_scale(p1: &ProbMatrix, p2: &ProbMatrix) -> Result<(f64, f64, f64)> {
    check_dims(p1, p2)?;
    let rho1 = positive_norm(p1, "first")?;
    let rho2 = positive_norm(p2, "second")?;
    let t = p1
        .matrix()
        .iter()
        .zip(p2.matrix().iter())
        .map(|(a, b)| {
            let d = a / rho1 - b / rho2;
            d * d
        })
        .sum::<f64>()
        .sqrt();
    Ok((t, rho1, rho2))
}

/// The pooled equality null `(P1 + P2) / 2`.
pub fn pooled_equality(p1: &ProbMatrix, p2: &ProbMatrix) -> Result<ProbMatrix> {
    check_dims(p1, p2)?;
    ProbMatrix::new((p1.matrix() + p2.matrix()) * 0.5)
}

/// Scaling null: the pooled shape `H` and the two rescaled copies.
#[derive(Debug, Clone)]
pub struct ScalingNull {
    pub h_hat: DMatrix<f64>,
    pub p1_null: ProbMatrix,
    pub p2_null: ProbMatrix,
    /// Number of entries (both triangles, both matrices) moved by clipping.
    pub clipped: usize,
}

/// `H = (P1 / rho1 + P2 / rho2) / 2` and the unclipped pair `rho_k H`.
pub fn scaling_null_pair(p1: &ProbMatrix, p2: &ProbMatrix) -> Result<(DMatrix<f64>, NullPair)> {
    check_dims(p1, p2)?;
    let rho1 = positive_norm(p1, "first")?;
    let rho2 = positive_norm(p2, "second")?;
    let h = (p1.matrix() / rho1 + p2.matrix() / rho2) * 0.5;
    let pair = NullPair {
        p1: &h * rho1,
        p2: &h * rho2,
    };
    Ok((h, pair))
}

/// `P1_null = clip(rho1 H)`, `P2_null = clip(rho2 H)`.
pub fn pooled_scaling(p1: &ProbMatrix, p2: &ProbMatrix) -> Result<ScalingNull> {
    let (h_hat, pair) = scaling_null_pair(p1, p2)?;
    let (p1_null, c1) = ProbMatrix::clipped_counting(pair.p1);
    let (p2_null, c2) = ProbMatrix::clipped_counting(pair.p2);
    Ok(ScalingNull {
        h_hat,
        p1_null,
        p2_null,
        clipped: c1 + c2,
    })
}

/// Flattened `P / ||P||_F`.
pub(crate) fn normalized_features(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let rho = frobenius_norm(m);
    if rho > 0.0 {
        Ok(m.iter().map(|v| v / rho).collect())
    } else {
        Err(Error::Degenerate(
            "fitted matrix has zero Frobenius norm".into(),
        ))
    }
}

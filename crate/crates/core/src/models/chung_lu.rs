use crate::error::{Error, Result};
use crate::netcore::{Graph, ProbMatrix};

/// Degree parameters `theta_i = d_i / sqrt(2m)`.
#[derive(Debug, Clone)]
pub struct ChungLuFit {
    pub theta_hat: Vec<f64>,
}

impl ChungLuFit {
    pub fn estimate(g: &Graph) -> Result<Self> {
        let degrees = g.degrees();
        let two_m: usize = degrees.iter().sum();
        if two_m == 0 {
            return Err(Error::Degenerate(
                "Chung-Lu fit of a graph with no edges".into(),
            ));
        }
        let norm = (two_m as f64).sqrt();
        Ok(Self {
            theta_hat: degrees.iter().map(|&d| d as f64 / norm).collect(),
        })
    }

    /// `P(i, j) = d_i d_j / 2m`, clipped to 1, zero diagonal.
    pub fn prob_matrix(&self) -> ProbMatrix {
        let t = &self.theta_hat;
        ProbMatrix::from_pair_fn(t.len(), |i, j| t[i] * t[j])
    }
}

pub fn fit_chung_lu(g: &Graph) -> Result<ProbMatrix> {
    Ok(ChungLuFit::estimate(g)?.prob_matrix())
}

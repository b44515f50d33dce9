use nalgebra::DMatrix;

use super::eigen::top_eigenpairs;
use crate::error::{Error, Result};
use crate::netcore::Graph;

/// Latent positions, one row per node.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentEmbedding {
    pub coords: DMatrix<f64>,
}

impl LatentEmbedding {
    pub fn n(&self) -> usize {
        self.coords.nrows()
    }

    pub fn d(&self) -> usize {
        self.coords.ncols()
    }

    /// `X X^T`.
    pub fn gram(&self) -> DMatrix<f64> {
        &self.coords * self.coords.transpose()
    }
}

/// Adjacency spectral embedding of a graph: `X = U |S|^{1/2}` over the `d`
/// eigenpairs of largest magnitude.
pub fn ase(g: &Graph, d: usize) -> Result<LatentEmbedding> {
    if g.n() == 0 {
        return Err(Error::Degenerate("embedding an empty node set".into()));
    }
    ase_matrix(&g.to_dense(), d)
}

/// Spectral embedding of any symmetric matrix.
pub fn ase_matrix(m: &DMatrix<f64>, d: usize) -> Result<LatentEmbedding> {
    if d == 0 || d > m.nrows() {
        return Err(Error::InvalidParameter(format!(
            "embedding dimension {d} not in 1..={}",
            m.nrows()
        )));
    }
    let eig = top_eigenpairs(m, d)?;
    let lead = eig.values[0].abs();
    let last = eig.values[d - 1].abs();
    if last <= 1e-10 * lead.max(1.0) {
        return Err(Error::RankDeficient {
            index: d,
            value: last,
        });
    }
    let mut coords = eig.vectors;
    for (c, v) in eig.values.iter().enumerate() {
        coords.column_mut(c).scale_mut(v.abs().sqrt());
    }
    Ok(LatentEmbedding { coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::{sample_graph, ProbMatrix, RngStream};
    use crate::spectral::full_eigenpairs;

    #[test]
    fn complete_graph_one_dimensional() {
        let g = Graph::from_edges(4, (0..4).flat_map(|i| (0..i).map(move |j| (i, j))));
        let x = ase(&g, 1).unwrap();
        for i in 0..4 {
            assert!((x.coords[(i, 0)] - 3f64.sqrt() / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_graph_is_rank_deficient() {
        assert!(matches!(
            ase(&Graph::empty(5), 1),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn full_dimension_error_comes_from_negative_part() {
        let p = ProbMatrix::from_pair_fn(12, |i, j| 0.2 + 0.05 * ((i + j) % 4) as f64);
        let g = sample_graph(&p, &mut RngStream::new(7, 0).rng());
        let a = g.to_dense();
        let x = ase(&g, 12).unwrap();
        let err = (x.gram() - &a).norm();
        // X X^T = U |S| U^T, so A - X X^T = 2 * sum over negative pairs.
        let eig = full_eigenpairs(&a).unwrap();
        let negative: f64 = eig
            .values
            .iter()
            .filter(|v| **v < 0.0)
            .map(|v| 4.0 * v * v)
            .sum();
        assert!((err - negative.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn recovers_noise_free_low_rank() {
        let x = DMatrix::from_fn(90, 2, |i, c| {
            if c == 0 {
                0.5 + 0.002 * i as f64
            } else {
                0.3 - 0.004 * i as f64
            }
        });
        let p = &x * x.transpose();
        let xh = ase_matrix(&p, 2).unwrap();
        assert!((xh.gram() - p).norm() < 1e-8);
    }
}

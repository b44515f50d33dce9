use nalgebra::DMatrix;
use rand::Rng;

use super::block::{block_edge_counts, resolve_communities};
use crate::error::{Error, Result};
use crate::netcore::{Graph, ProbMatrix};
use crate::spectral::CommunityAssignment;

/// Popularity-adjusted blockmodel fit; `lambda_hat[(i, r)]` is node `i`'s
/// popularity towards community `r`.
#[derive(Debug, Clone)]
pub struct PabmFit {
    pub communities: CommunityAssignment,
    pub lambda_hat: DMatrix<f64>,
}

impl PabmFit {
    /// `P(i, j) = lambda[i, c_j] * lambda[j, c_i]`.
    pub fn prob_matrix(&self) -> ProbMatrix {
        let c = &self.communities.labels;
        let l = &self.lambda_hat;
        ProbMatrix::from_pair_fn(c.len(), |i, j| l[(i, c[j])] * l[(j, c[i])])
    }
}

/// `lambda_ir = (edges from i into r) / sqrt(edge mass of block (c_i, r))`.
///
/// A block with zero mass has only zero numerators, and those popularities
/// are set to zero. Communities come from row-normalized spectral clustering
/// unless `fixed` is given.
pub fn estimate_pabm<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    fixed: Option<&CommunityAssignment>,
    rng: &mut R,
) -> Result<PabmFit> {
    if g.edge_count() == 0 {
        return Err(Error::Degenerate(
            "PABM fit of a graph with no edges".into(),
        ));
    }
    let communities = resolve_communities(g, k, fixed, true, rng)?;
    let mass = block_edge_counts(g, &communities);
    let n = g.n();
    let labels = &communities.labels;
    let mut into = DMatrix::<f64>::zeros(n, k);
    for (u, v) in g.edges() {
        into[(u, labels[v])] += 1.0;
        into[(v, labels[u])] += 1.0;
    }
    let lambda_hat = DMatrix::from_fn(n, k, |i, r| {
        let m = mass[(labels[i], r)];
        if m > 0.0 {
            into[(i, r)] / m.sqrt()
        } else {
            0.0
        }
    });
    Ok(PabmFit {
        communities,
        lambda_hat,
    })
}

pub fn fit_pabm<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    fixed: Option<&CommunityAssignment>,
    rng: &mut R,
) -> Result<ProbMatrix> {
    Ok(estimate_pabm(g, k, fixed, rng)?.prob_matrix())
}

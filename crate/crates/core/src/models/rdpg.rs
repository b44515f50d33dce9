use crate::error::Result;
use crate::netcore::{Graph, ProbMatrix};
use crate::spectral::ase;

/// `P = X X^T` from the `d`-dimensional adjacency spectral embedding, clipped.
pub fn fit_rdpg(g: &Graph, d: usize) -> Result<ProbMatrix> {
    Ok(ProbMatrix::clipped(ase(g, d)?.gram()))
}

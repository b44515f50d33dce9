use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::netcore::{Graph, ProbMatrix};
use crate::spectral::{spectral_cluster, CommunityAssignment};

/// Fitted stochastic blockmodel or degree-corrected blockmodel.
#[derive(Debug, Clone)]
pub struct BlockFit {
    pub communities: CommunityAssignment,
    /// Block probabilities (SBM) or block edge-endpoint counts (DCBM).
    pub omega_hat: DMatrix<f64>,
    /// Degree parameters, DCBM only; they sum to one within each community.
    pub theta_hat: Option<Vec<f64>>,
}

impl BlockFit {
    pub fn prob_matrix(&self) -> ProbMatrix {
        let c = &self.communities.labels;
        let omega = &self.omega_hat;
        match &self.theta_hat {
            None => ProbMatrix::from_pair_fn(c.len(), |i, j| omega[(c[i], c[j])]),
            Some(t) => ProbMatrix::from_pair_fn(c.len(), |i, j| t[i] * omega[(c[i], c[j])] * t[j]),
        }
    }
}

/// `O[r][s] = sum over i in r, j in s of A(i, j)`, over ordered pairs, so
/// within-block entries count each edge twice.
pub fn block_edge_counts(g: &Graph, c: &CommunityAssignment) -> DMatrix<f64> {
    let mut counts = DMatrix::zeros(c.k, c.k);
    for (u, v) in g.edges() {
        let (r, s) = (c.labels[u], c.labels[v]);
        counts[(r, s)] += 1.0;
        counts[(s, r)] += 1.0;
    }
    counts
}

/// Block densities: within-block over `n_r (n_r - 1)` ordered pairs,
/// between-block over `n_r n_s`. A singleton block gets density 0.
pub fn sbm_block_probabilities(g: &Graph, c: &CommunityAssignment) -> DMatrix<f64> {
    let counts = block_edge_counts(g, c);
    let sizes = c.sizes();
    DMatrix::from_fn(c.k, c.k, |r, s| {
        let pairs = if r == s {
            sizes[r] * sizes[r].saturating_sub(1)
        } else {
            sizes[r] * sizes[s]
        };
        if pairs == 0 {
            if r == s && sizes[r] == 1 {
                log::warn!("community {r} is a singleton; within-block probability set to 0");
            }
            0.0
        } else {
            counts[(r, s)] / pairs as f64
        }
    })
}

pub(crate) fn resolve_communities<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    fixed: Option<&CommunityAssignment>,
    row_normalize: bool,
    rng: &mut R,
) -> Result<CommunityAssignment> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "block models need k >= 2, got {k}"
        )));
    }
    match fixed {
        Some(c) => {
            if c.n() != g.n() {
                return Err(Error::DimensionMismatch {
                    left: c.n(),
                    right: g.n(),
                });
            }
            if c.k != k {
                return Err(Error::InvalidParameter(format!(
                    "fixed communities have k = {}, estimator has k = {k}",
                    c.k
                )));
            }
            Ok(c.clone())
        }
        None => spectral_cluster(g, k, row_normalize, rng),
    }
}

pub fn estimate_sbm<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    fixed: Option<&CommunityAssignment>,
    rng: &mut R,
) -> Result<BlockFit> {
    let communities = resolve_communities(g, k, fixed, false, rng)?;
    let omega_hat = sbm_block_probabilities(g, &communities);
    Ok(BlockFit {
        communities,
        omega_hat,
        theta_hat: None,
    })
}

pub fn fit_sbm<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    fixed: Option<&CommunityAssignment>,
    rng: &mut R,
) -> Result<ProbMatrix> {
    Ok(estimate_sbm(g, k, fixed, rng)?.prob_matrix())
}

/// Degree-corrected blockmodel: `omega_rs` is the block edge-endpoint count,
/// `theta_i = d_i / delta_r` with `delta_r` the total degree of community `r`,
/// so `theta_i omega_rs theta_j = d_i d_j O_rs / (delta_r delta_s)`.
pub fn estimate_dcbm<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    fixed: Option<&CommunityAssignment>,
    rng: &mut R,
) -> Result<BlockFit> {
    let communities = resolve_communities(g, k, fixed, true, rng)?;
    let omega_hat = block_edge_counts(g, &communities);
    let degrees = g.degrees();
    let mut delta = vec![0.0; k];
    for (i, &d) in degrees.iter().enumerate() {
        delta[communities.labels[i]] += d as f64;
    }
    if let Some(r) = delta.iter().position(|&x| x == 0.0) {
        return Err(Error::Degenerate(format!(
            "community {r} has total degree zero"
        )));
    }
    let theta_hat = degrees
        .iter()
        .zip(&communities.labels)
        .map(|(&d, &r)| d as f64 / delta[r])
        .collect();
    Ok(BlockFit {
        communities,
        omega_hat,
        theta_hat: Some(theta_hat),
    })
}

pub fn fit_dcbm<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    fixed: Option<&CommunityAssignment>,
    rng: &mut R,
) -> Result<ProbMatrix> {
    Ok(estimate_dcbm(g, k, fixed, rng)?.prob_matrix())
}

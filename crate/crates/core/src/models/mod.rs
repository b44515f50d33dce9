//! Model-family estimators. Each maps an observed graph to a fitted
//! edge-probability matrix; [`Estimator`] is the uniform entry point used by
//! the bootstrap engine.

mod block;
mod chung_lu;
mod estimator;
mod latent;
mod pabm;
mod rdpg;

pub use block::{
    block_edge_counts, estimate_dcbm, estimate_sbm, fit_dcbm, fit_sbm, sbm_block_probabilities,
    BlockFit,
};
pub use chung_lu::{fit_chung_lu, ChungLuFit};
pub use estimator::{Estimator, Family};
pub use latent::{
    estimate_latent_distance, fit_latent_distance, latent_probabilities, log_likelihood,
    log_likelihood_gradient, LatentFit, LatentSettings,
};
pub use pabm::{estimate_pabm, fit_pabm, PabmFit};
pub use rdpg::fit_rdpg;

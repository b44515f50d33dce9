//! Two-sample tests for paired, node-aligned networks.
//!
//! Given two graphs on the same node set, `pairnet` tests whether they were
//! drawn from the same edge-probability matrix (`P1 = P2`) or from scaled
//! versions of one another (`P1 = c * P2`). Both tests compare fitted models
//! in Frobenius norm and calibrate the statistic with a parametric bootstrap
//! from a null-restricted fit. Six model families are supported as plug-in
//! estimators, and two spectral baselines (a Procrustes/ASE test and a
//! Tracy-Widom spectral-norm test) are included for comparison.
//!
//! The crate is organised bottom-up:
//!
//! * [`netcore`]: graphs, probability matrices, seeded RNG streams, edge-list I/O.
//! * [`spectral`]: eigenpairs, k-means, regularized spectral clustering, ASE.
//! * [`models`]: the six estimators behind one [`models::Estimator`] interface.
//! * [`boottest`]: the statistics, null restrictions and the bootstrap engine.
//! * [`baselines`]: the ASE/Procrustes and Tracy-Widom comparison tests.
//! * [`harness`]: simulation scenarios, Monte Carlo experiments, null-distribution studies.
//! * [`cli`]: the `pairnet` command-line front end.

pub mod baselines;
pub mod boottest;
pub mod cli;
pub mod error;
pub mod harness;
pub mod models;
pub mod netcore;
pub mod spectral;

pub use error::{Error, Result};

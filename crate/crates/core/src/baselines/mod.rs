//! The two published comparison tests: a Procrustes distance between
//! adjacency spectral embeddings calibrated by two bootstrap sets, and a
//! spectral-norm statistic compared against a Tracy-Widom cutoff.

mod eig_test;
mod procrustes;
mod tracy_widom;

pub use ase_test::{run_ase_test, t_ase, AseConfig};
pub use eig_test::{block_approximation, run_eig_test, scaled_difference_matrix, t_eig, EigConfig};
pub use procrustes::{procrustes_alignment, procrustes_distance};
pub use tracy_widom::{ThresholdReading, TracyWidomTable};

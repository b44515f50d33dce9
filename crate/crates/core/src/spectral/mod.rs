//! Dense spectral primitives shared by the estimators and baselines.

mod cluster;
mod eigen;
mod embed;
mod kmeans;

pub use cluster::{label_agreement, spectral_cluster, CommunityAssignment};
pub use eigen::{full_eigenpairs, spectral_norm, top_eigenpairs, EigenPairs};
pub use embed::{ase, ase_matrix, LatentEmbedding};
pub use kmeans::{kmeans, kmeans_detailed, lloyd, KMeansConfig, KMeansFit, LloydRun};

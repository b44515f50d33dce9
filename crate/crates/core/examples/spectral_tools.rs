//! Spectral building blocks: leading eigenpairs, adjacency spectral embedding,
//! regularized spectral clustering and Procrustes alignment.
//!
//! cargo run --release --example spectral_tools

use pairnet::baselines::{procrustes_alignment, procrustes_distance};
use pairnet::netcore::{sample_graph, ProbMatrix, RngStream};
use pairnet::spectral::{ase, label_agreement, spectral_cluster, top_eigenpairs};

fn main() -> pairnet::Result<()> {
    let n = 150;
    let truth: Vec<usize> = (0..n).map(|i| usize::from(i >= 60)).collect();
    let p = ProbMatrix::from_pair_fn(n, |i, j| if truth[i] == truth[j] { 0.3 } else { 0.05 });
    let mut rng = RngStream::new(21, 0).rng();
    let g1 = sample_graph(&p, &mut rng);
    let g2 = sample_graph(&p, &mut rng);

    let eig = top_eigenpairs(&g1.to_dense(), 3)?;
    println!(
        "top eigenvalues: {:?}",
        eig.values
            .iter()
            .map(|v| (v * 100.0).round() / 100.0)
            .collect::<Vec<_>>()
    );

    let found = spectral_cluster(&g1, 2, false, &mut rng)?;
    println!(
        "spectral clustering agreement with planted blocks: {:.3}",
        label_agreement(&found.labels, &truth, 2)
    );

    let (x1, x2) = (ase(&g1, 2)?, ase(&g2, 2)?);
    let w = procrustes_alignment(&x1.coords, &x2.coords)?;
    println!("aligning rotation:\n{w:.3}");
    println!(
        "embedding gap: raw {:.3}, after alignment {:.3}",
        (&x1.coords - &x2.coords).norm(),
        procrustes_distance(&x1, &x2)?
    );
    Ok(())
}

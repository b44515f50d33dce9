//! Fit each model family to one graph and compare with the generating matrix.
//!
//! cargo run --release --example model_fitting

use pairnet::models::{estimate_latent_distance, Estimator, Family, LatentSettings};
use pairnet::netcore::{frobenius_distance, sample_graph, ProbMatrix, RngStream};

fn main() -> pairnet::Result<()> {
    let n = 120;
    let mut rng = RngStream::new(3, 0).rng();
    let truth = ProbMatrix::from_pair_fn(n, |i, j| {
        let (a, b) = (i * 3 / n, j * 3 / n);
        if a == b {
            0.35
        } else {
            0.08
        }
    });
    let g = sample_graph(&truth, &mut rng);
    println!("{} nodes, {} edges", g.n(), g.edge_count());

    for family in Family::ALL {
        let est = Estimator::from_family(
            family,
            family.needs_k().then_some(3),
            family.needs_d().then_some(3),
        )?;
        let fit = est.fit(&g, &mut rng)?;
        println!(
            "{:<16} ||P_hat - P||_F / n = {:.4}",
            est.describe(),
            frobenius_distance(&fit, &truth)? / n as f64
        );
    }

    let latent = estimate_latent_distance(&g, 2, &LatentSettings::default(), &mut rng)?;
    println!(
        "latent fit: alpha = {:.3}, {} iterations, converged = {}, log-likelihood = {:.2}",
        latent.alpha_hat,
        latent.loglik_trace.len(),
        latent.converged,
        latent.log_likelihood()
    );
    Ok(())
}

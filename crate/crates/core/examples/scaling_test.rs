//! Test `P1 = c * P2` for an unknown `c` on Chung-Lu graphs.
//!
//! cargo run --release --example scaling_test

use pairnet::boottest::{run_test, TestKind};
use pairnet::models::Estimator;
use pairnet::netcore::{sample_graph, ProbMatrix, RngStream};
use rand::Rng;
use rand_distr::Beta;

fn main() -> pairnet::Result<()> {
    let n = 150;
    let mut rng = RngStream::new(11, 0).rng();
    let beta = Beta::new(1.0, 5.0).unwrap();
    let theta: Vec<f64> = (0..n).map(|_| rng.sample(beta)).collect();
    let eta: Vec<f64> = (0..n).map(|_| rng.sample(beta)).collect();
    let chung_lu = |w: &[f64]| {
        let s: f64 = w.iter().sum();
        ProbMatrix::from_pair_fn(n, |i, j| w[i] * w[j] * n as f64 / s)
    };
    let p = chung_lu(&theta);

    let a1 = sample_graph(&p, &mut rng);
    let scaled = sample_graph(&p.scaled(0.6), &mut rng);
    let unrelated = sample_graph(&chung_lu(&eta), &mut rng);

    for (label, a2) in [("0.6 * P1", &scaled), ("fresh degrees", &unrelated)] {
        let r = run_test(
            TestKind::Scaling,
            &Estimator::ChungLu,
            &a1,
            a2,
            200,
            0.05,
            3,
        )?;
        let ratio = r.rho2.unwrap() / r.rho1.unwrap();
        println!(
            "{label:<14} T_scale = {:.4}  rho2/rho1 = {ratio:.3}  p = {:.3}  {}",
            r.statistic,
            r.p_value,
            r.decision()
        );
    }
    Ok(())
}

//! The general bootstrap engine with a user-supplied feature map: here the
//! expected degree sequence, with a null that pools the two fits.
//!
//! cargo run --release --example custom_statistic

use nalgebra::DMatrix;
use pairnet::boottest::{pooled_equality, run_general_test, NullPair, TestKind};
use pairnet::models::{Estimator, Family};
use pairnet::netcore::{sample_graph, ProbMatrix, RngStream};

fn expected_degrees(p: &DMatrix<f64>) -> pairnet::Result<Vec<f64>> {
    Ok(p.row_iter().map(|r| r.sum()).collect())
}

fn pooled(p1: &ProbMatrix, p2: &ProbMatrix) -> pairnet::Result<NullPair> {
    let m = pooled_equality(p1, p2)?.into_matrix();
    Ok(NullPair {
        p1: m.clone(),
        p2: m,
    })
}

fn main() -> pairnet::Result<()> {
    let n = 120;
    let mut rng = RngStream::new(8, 0).rng();
    let p = ProbMatrix::from_pair_fn(n, |i, j| if (i < 60) == (j < 60) { 0.3 } else { 0.1 });
    // Same degrees in expectation, different block structure.
    let q = ProbMatrix::from_pair_fn(n, |i, j| if (i % 2) == (j % 2) { 0.3 } else { 0.1 });
    let a1 = sample_graph(&p, &mut rng);
    let a2 = sample_graph(&q, &mut rng);
    let est = Estimator::from_family(Family::Sbm, Some(2), None)?;

    let by_degree = run_general_test(
        expected_degrees,
        pooled,
        TestKind::Equality,
        &est,
        &a1,
        &a2,
        200,
        0.05,
        4,
    )?;
    println!(
        "degree features: T = {:.3}, p = {:.3}, {}",
        by_degree.statistic,
        by_degree.p_value,
        by_degree.decision()
    );
    let full = pairnet::boottest::run_test(TestKind::Equality, &est, &a1, &a2, 200, 0.05, 4)?;
    println!(
        "full matrix:     T = {:.3}, p = {:.3}, {}",
        full.statistic,
        full.p_value,
        full.decision()
    );
    Ok(())
}

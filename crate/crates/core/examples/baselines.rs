//! The two spectral baselines next to the bootstrap test on one pair of
//! graphs: the Procrustes/ASE test and the Tracy-Widom spectral-norm test.
//!
//! cargo run --release --example baselines

use pairnet::baselines::{
    run_ase_test, run_eig_test, AseConfig, EigConfig, ThresholdReading, TracyWidomTable,
};
use pairnet::boottest::{run_test, TestKind};
use pairnet::models::{Estimator, Family};
use pairnet::netcore::{sample_graph, ProbMatrix, RngStream};

fn main() -> pairnet::Result<()> {
    let n = 200;
    let mut rng = RngStream::new(5, 0).rng();
    let block = |within: f64| {
        ProbMatrix::from_pair_fn(
            n,
            move |i, j| if (i < 80) == (j < 80) { within } else { 0.2 },
        )
    };
    let a1 = sample_graph(&block(0.5), &mut rng);
    let a2 = sample_graph(&block(0.55), &mut rng);

    let frob = run_test(
        TestKind::Equality,
        &Estimator::from_family(Family::Rdpg, None, Some(2))?,
        &a1,
        &a2,
        200,
        0.05,
        1,
    )?;
    let ase = run_ase_test(
        TestKind::Equality,
        &a1,
        &a2,
        AseConfig { d: 2, b: 200 },
        0.05,
        1,
    )?;
    let mut cfg = EigConfig::new(2);
    for reading in [ThresholdReading::HalfAlpha, ThresholdReading::ColumnAsTail] {
        cfg.reading = reading;
        let eig = run_eig_test(&a1, &a2, &cfg, 0.05)?;
        println!(
            "T_eig  = {:7.3}  threshold {} ({reading})  {}",
            eig.statistic,
            eig.detail("threshold").unwrap_or("?"),
            eig.decision()
        );
    }
    println!(
        "T_frob = {:7.3}  p = {:.3}  {}",
        frob.statistic,
        frob.p_value,
        frob.decision()
    );
    println!(
        "T_ase  = {:7.3}  p = max({}, {}) = {:.3}  {}",
        ase.statistic,
        ase.detail("p1").unwrap_or("?"),
        ase.detail("p2").unwrap_or("?"),
        ase.p_value,
        ase.decision()
    );

    let tw = TracyWidomTable::tw1();
    println!("TW1 upper quantiles:");
    for q in [0.05, 0.025, 0.01] {
        println!("  {q:<6} {:.4}", tw.upper_quantile(q)?);
    }
    Ok(())
}

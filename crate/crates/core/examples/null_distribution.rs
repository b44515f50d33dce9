//! Raw statistic samples under the null and an alternative: upper quantiles,
//! a histogram and the AUC separating the two.
//!
//! cargo run --release --example null_distribution

use pairnet::baselines::ThresholdReading;
use pairnet::harness::{
    auc, histogram, quantile_report, sample_statistic_distribution, Relation, Scenario, TestSpec,
};

fn main() -> pairnet::Result<()> {
    let test = TestSpec::Eig {
        blocks: 2,
        reading: ThresholdReading::HalfAlpha,
    };
    let f0 = sample_statistic_distribution(
        &Scenario::sbm_epsilon(100, 0.1, Relation::Equal),
        &test,
        2000,
        1,
    )?;
    let f1 = sample_statistic_distribution(
        &Scenario::sbm_epsilon(100, 0.1, Relation::Alternative),
        &test,
        2000,
        2,
    )?;

    println!("upper quantiles of T_eig under the null:");
    for (q, v) in quantile_report(&f0.values, &[0.05, 0.04, 0.03, 0.02, 0.01])? {
        println!("  {q:.2}  {v:.3}");
    }
    println!("null histogram:");
    for (lo, hi, count) in histogram(&f0.values)? {
        println!("  [{lo:6.2}, {hi:6.2})  {}", "#".repeat(count / 10));
    }
    println!(
        "AUC(null vs eps = 0.1) = {:.3}",
        auc(&f0.values, &f1.values)?
    );
    Ok(())
}

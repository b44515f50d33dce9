//! Rejection rates over repeated draws, for a null and an alternative.
//! Runs are spread over the rayon pool; results do not depend on thread count.
//!
//! cargo run --release --example monte_carlo [mc_runs]

use pairnet::boottest::TestKind;
use pairnet::harness::{
    run_experiment, ExperimentReport, ExperimentSpec, Relation, Scenario, TestSpec,
};
use pairnet::models::Estimator;

fn main() -> pairnet::Result<()> {
    let mc_runs = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let test = TestSpec::Boot {
        kind: TestKind::Equality,
        estimator: Estimator::ChungLu,
        fixed_communities: false,
    };
    println!("{}", ExperimentReport::CSV_HEADER);
    for relation in [Relation::Equal, Relation::Alternative] {
        let spec = ExperimentSpec {
            scenario: Scenario::chung_lu(100, relation),
            test: test.clone(),
            mc_runs,
            b: 200,
            alpha: 0.05,
            seed: 42,
        };
        let report = run_experiment(&spec)?;
        println!("{}", report.csv_row());
        eprintln!("  {:.1}s", report.wall_time.as_secs_f64());
    }
    Ok(())
}

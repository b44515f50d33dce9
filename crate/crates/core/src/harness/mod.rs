//! Simulation designs, Monte Carlo rejection-rate experiments and
//! null-distribution studies.

mod config;
mod experiment;
mod scenario;
mod summary;

pub use config::{ExperimentConfig, RunSection, ScenarioSection, TestSection};
pub use experiment::{
    run_experiment, sample_statistic_distribution, ExperimentReport, ExperimentSpec, RunOutcome,
    StatisticSamples, TestSpec,
};
pub use scenario::{Generated, Relation, Scenario, ScenarioModel, SCENARIO_NAMES};
pub use summary::{auc, histogram, histogram_csv, quantile_csv, quantile_report};

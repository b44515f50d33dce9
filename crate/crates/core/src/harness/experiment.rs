use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::RngCore;
use rayon::prelude::*;

use super::scenario::Scenario;
use crate::baselines::{
    run_ase_test, run_eig_test, t_ase, t_eig, AseConfig, EigConfig, ThresholdReading,
};
use crate::boottest::{run_test, t_frob, t_scale, TestKind, TestResult};
use crate::error::{Error, Result};
use crate::models::Estimator;
use crate::netcore::{sample_graph, Graph, RngStream};
use crate::spectral::CommunityAssignment;

/// Which test (or statistic) an experiment evaluates.
#[derive(Debug, Clone, PartialEq)]
pub enum TestSpec {
    /// `T_frob` / `T_scale` with parametric bootstrap. With
    /// `fixed_communities` the scenario's planted communities are handed to
    /// block-type estimators.
    Boot {
        kind: TestKind,
        estimator: Estimator,
        fixed_communities: bool,
    },
    Ase {
        kind: TestKind,
        d: usize,
    },
    Eig {
        blocks: usize,
        reading: ThresholdReading,
    },
}

impl TestSpec {
    pub fn method_name(&self) -> &'static str {
        match self {
            TestSpec::Boot {
                kind: TestKind::Equality,
                ..
            } => "t_frob",
            TestSpec::Boot {
                kind: TestKind::Scaling,
                ..
            } => "t_scale",
            TestSpec::Ase { .. } => "t_ase",
            TestSpec::Eig { .. } => "t_eig",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            TestSpec::Boot {
                estimator,
                fixed_communities,
                ..
            } => {
                let mut s = estimator.describe();
                if *fixed_communities {
                    s.push_str("+truth");
                }
                format!("{}[{s}]", self.method_name())
            }
            TestSpec::Ase { kind, d } => format!("t_ase[{kind},d={d}]"),
            TestSpec::Eig { blocks, reading } => format!("t_eig[r={blocks},{reading}]"),
        }
    }

    fn estimator_for(&self, communities: Option<&CommunityAssignment>) -> Option<Estimator> {
        match self {
            TestSpec::Boot {
                estimator,
                fixed_communities,
                ..
            } => Some(match (fixed_communities, communities) {
                (true, Some(c)) => estimator.clone().with_communities(c.clone()),
                _ => estimator.clone(),
            }),
            _ => None,
        }
    }

    /// Run the full test on one pair of graphs.
    pub fn run(
        &self,
        a1: &Graph,
        a2: &Graph,
        communities: Option<&CommunityAssignment>,
        b: usize,
        alpha: f64,
        seed: u64,
    ) -> Result<TestResult> {
        match self {
            TestSpec::Boot { kind, .. } => {
                let est = self
                    .estimator_for(communities)
                    .expect("boot spec has an estimator");
                run_test(*kind, &est, a1, a2, b, alpha, seed)
            }
            TestSpec::Ase { kind, d } => {
                run_ase_test(*kind, a1, a2, AseConfig { d: *d, b }, alpha, seed)
            }
            TestSpec::Eig { blocks, reading } => {
                let cfg = EigConfig {
                    blocks: *blocks,
                    reading: *reading,
                    seed,
                    communities: None,
                };
                run_eig_test(a1, a2, &cfg, alpha)
            }
        }
    }

    /// The observed statistic alone, without calibration.
    pub fn statistic(
        &self,
        a1: &Graph,
        a2: &Graph,
        communities: Option<&CommunityAssignment>,
        seed: u64,
    ) -> Result<f64> {
        let mut rng = RngStream::new(seed, 0).rng();
        match self {
            TestSpec::Boot { kind, .. } => {
                let est = self
                    .estimator_for(communities)
                    .expect("boot spec has an estimator");
                let p1 = est.fit(a1, &mut rng)?;
                let p2 = est.fit(a2, &mut rng)?;
                match kind {
                    TestKind::Equality => t_frob(&p1, &p2),
                    TestKind::Scaling => Ok(t_scale(&p1, &p2)?.0),
                }
            }
            TestSpec::Ase { kind, d } => t_ase(*kind, a1, a2, *d),
            TestSpec::Eig { blocks, .. } => t_eig(a1, a2, *blocks, None, &mut rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub scenario: Scenario,
    pub test: TestSpec,
    pub mc_runs: usize,
    pub b: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.mc_runs == 0 {
            return Err(Error::InvalidParameter("mc_runs must be positive".into()));
        }
        // The spectral-norm test has no bootstrap; B is ignored there.
        if self.b == 0 && !matches!(self.test, TestSpec::Eig { .. }) {
            return Err(Error::InvalidParameter("B must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Outcome of one Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub enum RunOutcome {
    Completed { p_value: f64, statistic: f64 },
    Aborted(String),
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub runs: Vec<RunOutcome>,
    pub wall_time: Duration,
}

impl ExperimentReport {
    pub fn p_values(&self) -> Vec<Option<f64>> {
        self.runs
            .iter()
            .map(|r| match r {
                RunOutcome::Completed { p_value, .. } => Some(*p_value),
                RunOutcome::Aborted(_) => None,
            })
            .collect()
    }

    pub fn aborted(&self) -> usize {
        self.runs
            .iter()
            .filter(|r| matches!(r, RunOutcome::Aborted(_)))
            .count()
    }

    /// A report is valid only when every run completed.
    pub fn is_valid(&self) -> bool {
        self.aborted() == 0
    }

    /// `#{p < alpha} / mc_runs`.
    pub fn rejection_rate(&self) -> f64 {
        let hits = self
            .p_values()
            .into_iter()
            .flatten()
            .filter(|&p| p < self.spec.alpha)
            .count();
        hits as f64 / self.runs.len() as f64
    }

    pub const CSV_HEADER: &'static str =
        "scenario,n,relation,test,b,alpha,mc_runs,aborted,rejection_rate";

    pub fn csv_row(&self) -> String {
        let s = &self.spec;
        format!(
            "{},{},{},{},{},{},{},{},{}",
            s.scenario.name,
            s.scenario.n,
            s.scenario.relation,
            s.test.describe(),
            s.b,
            s.alpha,
            s.mc_runs,
            self.aborted(),
            self.rejection_rate()
        )
    }

    /// One row per run: `run,p_value,statistic,status`.
    pub fn runs_csv(&self) -> String {
        let mut out = String::from("run,p_value,statistic,status\n");
        for (j, r) in self.runs.iter().enumerate() {
            let _ = match r {
                RunOutcome::Completed { p_value, statistic } => {
                    writeln!(out, "{j},{p_value},{statistic},ok")
                }
                RunOutcome::Aborted(msg) => {
                    writeln!(out, "{j},,,\"aborted: {}\"", msg.replace('"', "'"))
                }
            };
        }
        out
    }
}

/// Draw run `j`'s graphs: scenario, then `A1`, then `A2`, then the seed for
/// whatever the run does next, all from stream `j` of `seed`.
fn draw_run(
    scenario: &Scenario,
    seed: u64,
    j: usize,
) -> Result<(Graph, Graph, Option<CommunityAssignment>, u64)> {
    let mut rng = RngStream::new(seed, j as u64).rng();
    let generated = scenario.generate(&mut rng)?;
    let a1 = sample_graph(&generated.p1, &mut rng);
    let a2 = sample_graph(&generated.p2, &mut rng);
    Ok((a1, a2, generated.communities, rng.next_u64()))
}

/// Monte Carlo rejection-rate experiment. Runs are independent and
/// scheduled in parallel; results are stored by run index.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let start = Instant::now();
    let runs = (0..spec.mc_runs)
        .into_par_iter()
        .map(|j| {
            let outcome =
                draw_run(&spec.scenario, spec.seed, j).and_then(|(a1, a2, c, test_seed)| {
                    spec.test
                        .run(&a1, &a2, c.as_ref(), spec.b, spec.alpha, test_seed)
                });
            match outcome {
                Ok(r) => RunOutcome::Completed {
                    p_value: r.p_value,
                    statistic: r.statistic,
                },
                Err(e) => {
                    log::warn!("run {j} aborted: {e}");
                    RunOutcome::Aborted(e.to_string())
                }
            }
        })
        .collect();
    Ok(ExperimentReport {
        spec: spec.clone(),
        runs,
        wall_time: start.elapsed(),
    })
}

/// Raw statistic values over Monte Carlo draws of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct StatisticSamples {
    /// Values of completed runs, in run order.
    pub values: Vec<f64>,
    /// `(run, message)` of runs that failed.
    pub aborted: Vec<(usize, String)>,
}

/// Sample the uncalibrated statistic `mc_runs` times; no bootstrap.
pub fn sample_statistic_distribution(
    scenario: &Scenario,
    test: &TestSpec,
    mc_runs: usize,
    seed: u64,
) -> Result<StatisticSamples> {
    scenario.validate()?;
    if mc_runs == 0 {
        return Err(Error::InvalidParameter("mc_runs must be positive".into()));
    }
    let results: Vec<Result<f64>> = (0..mc_runs)
        .into_par_iter()
        .map(|j| {
            let (a1, a2, c, stat_seed) = draw_run(scenario, seed, j)?;
            test.statistic(&a1, &a2, c.as_ref(), stat_seed)
        })
        .collect();
    let mut out = StatisticSamples {
        values: Vec::with_capacity(mc_runs),
        aborted: Vec::new(),
    };
    for (j, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => out.values.push(v),
            Err(e) => out.aborted.push((j, e.to_string())),
        }
    }
    Ok(out)
}

use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::result::{bootstrap_p_value, Method, TestKind, TestResult};
use super::stats::{feature_distance, normalized_features, pooled_equality, scaling_null_pair};
use crate::error::{Error, Result};
use crate::models::Estimator;
use crate::netcore::{sample_graph, Graph, ProbMatrix, RngStream};

/// Extra attempts granted to a bootstrap replicate whose refit fails on
/// degenerate data.
pub const MAX_RETRIES: usize = 5;
const CONTRACT_TOL: f64 = 1e-10;
/// Stream offset between retry attempts of one replicate.
const RETRY_STRIDE: u64 = 1 << 40;

/// Null-restricted generator pair, before clipping into `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullPair {
    pub p1: DMatrix<f64>,
    pub p2: DMatrix<f64>,
}

/// Evaluate `f` for replicates `1..=b`, replicate `i` on stream
/// `offset + i` of `seed`. Replicates that fail on degenerate data are rerun
/// on a fresh stream up to [`MAX_RETRIES`] times. Output is in replicate
/// order regardless of scheduling.
pub(crate) fn run_replicates<F>(b: usize, seed: u64, offset: u64, f: F) -> Result<Vec<f64>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    (1..=b)
        .into_par_iter()
        .map(|i| {
            let mut last = None;
            for attempt in 0..=MAX_RETRIES {
                let stream = offset + i as u64 + attempt as u64 * RETRY_STRIDE;
                match f(&mut RngStream::new(seed, stream).rng()) {
                    Ok(t) => return Ok(t),
                    Err(e) if e.is_degenerate_data() => {
                        log::debug!("replicate {i} attempt {attempt} failed: {e}");
                        last = Some(e);
                    }
                    Err(e) => return Err(e),
                }
            }
            Err(Error::ReplicateFailed {
                replicate: i,
                attempts: MAX_RETRIES + 1,
                source: Box::new(last.expect("at least one attempt ran")),
            })
        })
        .collect()
}

pub(crate) fn check_inputs(a1: &Graph, a2: &Graph, b: usize, alpha: f64) -> Result<()> {
    if a1.n() != a2.n() {
        return Err(Error::DimensionMismatch {
            left: a1.n(),
            right: a2.n(),
        });
    }
    if b == 0 {
        return Err(Error::InvalidParameter(
            "bootstrap count B must be at least 1".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

/// Bootstrap test of `tau(P1) = tau(P2)`.
///
/// Fits both graphs (stream 0 of `seed`), computes
/// `T = ||tau(P1) - tau(P2)||`, asks `null_restrict` for a generator pair with
/// equal features, then for replicate `i` draws both graphs from the clipped
/// pair on stream `i`, refits with the same estimator and recomputes the
/// statistic. `kind` labels the result; for [`TestKind::Scaling`] the fitted
/// norms are reported as well.
#[allow(clippy::too_many_arguments)]
pub fn run_general_test<T, N>(
    tau: T,
    null_restrict: N,
    kind: TestKind,
    est: &Estimator,
    a1: &Graph,
    a2: &Graph,
    b: usize,
    alpha: f64,
    seed: u64,
) -> Result<TestResult>
where
    T: Fn(&DMatrix<f64>) -> Result<Vec<f64>> + Sync,
    N: Fn(&ProbMatrix, &ProbMatrix) -> Result<NullPair>,
{
    check_inputs(a1, a2, b, alpha)?;
    est.validate()?;
    let mut rng = RngStream::new(seed, 0).rng();
    let p1 = est.fit(a1, &mut rng)?;
    let p2 = est.fit(a2, &mut rng)?;
    let statistic = feature_distance(&tau(p1.matrix())?, &tau(p2.matrix())?)?;

    let pair = null_restrict(&p1, &p2)?;
    let gap = feature_distance(&tau(&pair.p1)?, &tau(&pair.p2)?)?;
    if gap > CONTRACT_TOL {
        return Err(Error::ContractViolation(gap));
    }
    let (null1, c1) = ProbMatrix::clipped_counting(pair.p1);
    let (null2, c2) = ProbMatrix::clipped_counting(pair.p2);
    if c1 + c2 > 0 {
        log::info!(
            "clipping moved {} entries of the null generators into [0, 1]",
            c1 + c2
        );
    }

    let replicates = run_replicates(b, seed, 0, |rng| {
        let g1 = sample_graph(&null1, rng);
        let g2 = sample_graph(&null2, rng);
        let f1 = est.fit(&g1, rng)?;
        let f2 = est.fit(&g2, rng)?;
        feature_distance(&tau(f1.matrix())?, &tau(f2.matrix())?)
    })?;

    let p_value = bootstrap_p_value(statistic, &replicates);
    let (rho1, rho2) = match kind {
        TestKind::Scaling => (Some(p1.frobenius_norm()), Some(p2.frobenius_norm())),
        TestKind::Equality => (None, None),
    };
    Ok(TestResult {
        method: Method::Boot,
        kind,
        estimator: est.describe(),
        statistic,
        replicates,
        secondary_replicates: None,
        b,
        p_value,
        alpha,
        reject: p_value < alpha,
        rho1,
        rho2,
        seed,
        details: vec![("null_clipped".into(), (c1 + c2).to_string())],
    })
}

fn identity_features(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    Ok(m.as_slice().to_vec())
}

fn equality_null(p1: &ProbMatrix, p2: &ProbMatrix) -> Result<NullPair> {
    let pooled = pooled_equality(p1, p2)?.into_matrix();
    Ok(NullPair {
        p1: pooled.clone(),
        p2: pooled,
    })
}

fn scaling_null(p1: &ProbMatrix, p2: &ProbMatrix) -> Result<NullPair> {
    Ok(scaling_null_pair(p1, p2)?.1)
}

/// Equality test (`T_frob`, pooled null) or scaling test (`T_scale`,
/// rescaled pooled shape) with `b` bootstrap replicates.
pub fn run_test(
    kind: TestKind,
    est: &Estimator,
    a1: &Graph,
    a2: &Graph,
    b: usize,
    alpha: f64,
    seed: u64,
) -> Result<TestResult> {
    match kind {
        TestKind::Equality => run_general_test(
            identity_features,
            equality_null,
            kind,
            est,
            a1,
            a2,
            b,
            alpha,
            seed,
        ),
        TestKind::Scaling => run_general_test(
            normalized_features,
            scaling_null,
            kind,
            est,
            a1,
            a2,
            b,
            alpha,
            seed,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boottest::{t_frob, t_scale};
    use crate::models::Family;

    fn chung_lu_pair(n: usize, seed: u64, scale: f64) -> (Graph, Graph) {
        let p =
            ProbMatrix::from_pair_fn(n, |i, j| 0.1 + 0.5 * ((i * 7 + j * 3) % 10) as f64 / 10.0);
        let mut rng = RngStream::new(seed, 99).rng();
        (
            sample_graph(&p, &mut rng),
            sample_graph(&p.scaled(scale), &mut rng),
        )
    }

    #[test]
    fn identical_graphs_give_p_one() {
        let (g, _) = chung_lu_pair(30, 1, 1.0);
        let r = run_test(TestKind::Equality, &Estimator::ChungLu, &g, &g, 50, 0.05, 7).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert!(!r.reject);
        assert_eq!(r.replicates.len(), 50);
    }

    #[test]
    fn statistic_matches_direct_computation() {
        let (g1, g2) = chung_lu_pair(25, 2, 0.7);
        let est = Estimator::ChungLu;
        let p1 = est.fit(&g1, &mut RngStream::new(0, 0).rng()).unwrap();
        let p2 = est.fit(&g2, &mut RngStream::new(0, 0).rng()).unwrap();
        let eq = run_test(TestKind::Equality, &est, &g1, &g2, 10, 0.05, 3).unwrap();
        assert_eq!(eq.statistic, t_frob(&p1, &p2).unwrap());
        let sc = run_test(TestKind::Scaling, &est, &g1, &g2, 10, 0.05, 3).unwrap();
        let (t, r1, r2) = t_scale(&p1, &p2).unwrap();
        assert_eq!(sc.statistic, t);
        assert_eq!((sc.rho1, sc.rho2), (Some(r1), Some(r2)));
    }

    #[test]
    fn p_value_on_grid_and_decision_consistent() {
        let (g1, g2) = chung_lu_pair(30, 3, 1.0);
        let r = run_test(
            TestKind::Equality,
            &Estimator::ChungLu,
            &g1,
            &g2,
            40,
            0.1,
            5,
        )
        .unwrap();
        let k = (r.p_value * 40.0).round();
        assert_eq!(k / 40.0, r.p_value);
        assert_eq!(r.reject, r.p_value < 0.1);
        assert_eq!(r.p_value, bootstrap_p_value(r.statistic, &r.replicates));
    }

    #[test]
    fn deterministic_given_seed() {
        let (g1, g2) = chung_lu_pair(30, 4, 0.8);
        let est = Estimator::from_family(Family::Sbm, Some(2), None).unwrap();
        let a = run_test(TestKind::Scaling, &est, &g1, &g2, 20, 0.05, 11).unwrap();
        let b = run_test(TestKind::Scaling, &est, &g1, &g2, 20, 0.05, 11).unwrap();
        assert_eq!(a, b);
        let c = run_test(TestKind::Scaling, &est, &g1, &g2, 20, 0.05, 12).unwrap();
        assert_ne!(a.replicates, c.replicates);
    }

    #[test]
    fn general_engine_reproduces_instances() {
        let (g1, g2) = chung_lu_pair(20, 5, 0.9);
        let est = Estimator::ChungLu;
        let direct = run_test(TestKind::Equality, &est, &g1, &g2, 15, 0.05, 2).unwrap();
        let general = run_general_test(
            |m: &DMatrix<f64>| Ok(m.as_slice().to_vec()),
            |p1: &ProbMatrix, p2: &ProbMatrix| {
                let p = pooled_equality(p1, p2)?.into_matrix();
                Ok(NullPair {
                    p1: p.clone(),
                    p2: p,
                })
            },
            TestKind::Equality,
            &est,
            &g1,
            &g2,
            15,
            0.05,
            2,
        )
        .unwrap();
        assert_eq!(direct, general);
    }

    #[test]
    fn row_sum_feature() {
        let g1 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let g2 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2)]);
        let rows = |m: &DMatrix<f64>| Ok(m.row_sum().iter().copied().collect::<Vec<f64>>());
        let r = run_general_test(
            rows,
            equality_null,
            TestKind::Equality,
            &Estimator::ChungLu,
            &g1,
            &g2,
            5,
            0.05,
            1,
        )
        .unwrap();
        // Chung-Lu row sums are d_i (sum_j d_j - d_i) / 2m, clipped entries aside.
        let expect = |d: [f64; 4]| {
            let two_m: f64 = d.iter().sum();
            d.map(|di| {
                d.iter().map(|dj| (di * dj / two_m).min(1.0)).sum::<f64>()
                    - (di * di / two_m).min(1.0)
            })
        };
        let (s1, s2) = (expect([1.0, 2.0, 2.0, 1.0]), expect([3.0, 2.0, 2.0, 1.0]));
        let t = s1
            .iter()
            .zip(&s2)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!((r.statistic - t).abs() < 1e-12);
    }

    #[test]
    fn contract_violation_detected() {
        let (g1, g2) = chung_lu_pair(15, 6, 0.5);
        let bad = |p1: &ProbMatrix, p2: &ProbMatrix| {
            Ok(NullPair {
                p1: p1.matrix().clone(),
                p2: p2.matrix().clone(),
            })
        };
        let r = run_general_test(
            identity_features,
            bad,
            TestKind::Equality,
            &Estimator::ChungLu,
            &g1,
            &g2,
            5,
            0.05,
            1,
        );
        assert!(matches!(r, Err(Error::ContractViolation(_))));
    }

    #[test]
    fn replicate_failures_retry_then_abort() {
        use std::sync::atomic::{AtomicUsize, Ordering};
        let calls = AtomicUsize::new(0);
        let out = run_replicates(3, 1, 0, |_| {
            if calls.fetch_add(1, Ordering::SeqCst).is_multiple_of(2) {
                Err(Error::Degenerate("flaky".into()))
            } else {
                Ok(1.0)
            }
        });
        assert_eq!(out.unwrap().len(), 3);
        let err = run_replicates(2, 1, 0, |_| Err(Error::EmptyCluster)).unwrap_err();
        assert!(
            matches!(err, Error::ReplicateFailed { attempts, .. } if attempts == MAX_RETRIES + 1)
        );
        let hard = run_replicates(2, 1, 0, |_| Err(Error::InvalidParameter("x".into())));
        assert!(matches!(hard, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn rejects_bad_arguments() {
        let (g1, _) = chung_lu_pair(10, 7, 1.0);
        let g3 = Graph::from_edges(5, [(0, 1)]);
        let est = Estimator::ChungLu;
        assert!(run_test(TestKind::Equality, &est, &g1, &g3, 5, 0.05, 1).is_err());
        assert!(run_test(TestKind::Equality, &est, &g1, &g1, 0, 0.05, 1).is_err());
        assert!(run_test(TestKind::Equality, &est, &g1, &g1, 5, 1.0, 1).is_err());
    }
}

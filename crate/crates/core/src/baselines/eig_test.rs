use nalgebra::DMatrix;
use rand::Rng;

use super::tracy_widom::ThresholdReading;
use crate::boottest::{check_inputs, Method, TestKind, TestResult};
use crate::error::{Error, Result};
use crate::models::sbm_block_probabilities;
use crate::netcore::{Graph, ProbMatrix, RngStream};
use crate::spectral::{spectral_cluster, spectral_norm, CommunityAssignment};

/// Settings of the spectral-norm test.
#[derive(Debug, Clone, PartialEq)]
pub struct EigConfig {
    /// Number of blocks `r` of the blockmodel approximation.
    pub blocks: usize,
    pub reading: ThresholdReading,
    /// Seeds the k-means step of the clustering.
    pub seed: u64,
    /// Use these communities for both graphs instead of clustering.
    pub communities: Option<CommunityAssignment>,
}

impl EigConfig {
    pub fn new(blocks: usize) -> Self {
        Self {
            blocks,
            reading: ThresholdReading::default(),
            seed: 0,
            communities: None,
        }
    }
}

/// `r`-block blockmodel approximation: normalized spectral clustering with
/// unit-length rows, then block densities.
pub fn block_approximation<R: Rng + ?Sized>(
    g: &Graph,
    blocks: usize,
    fixed: Option<&CommunityAssignment>,
    rng: &mut R,
) -> Result<ProbMatrix> {
    if blocks == 0 {
        return Err(Error::InvalidParameter(
            "block count r must be at least 1".into(),
        ));
    }
    let c = match fixed {
        Some(c) if c.n() != g.n() => {
            return Err(Error::DimensionMismatch {
                left: c.n(),
                right: g.n(),
            })
        }
        Some(c) => c.clone(),
        None if blocks == 1 => CommunityAssignment::single(g.n()),
        None => spectral_cluster(g, blocks, true, rng)?,
    };
    let omega = sbm_block_probabilities(g, &c);
    Ok(ProbMatrix::from_pair_fn(g.n(), |i, j| {
        omega[(c.labels[i], c.labels[j])]
    }))
}

/// `C(i, j) = (A1 - A2) / sqrt((n - 1) (P1 (1 - P1) + P2 (1 - P2)))`, with
/// zero wherever the denominator vanishes.
pub fn scaled_difference_matrix(
    a1: &Graph,
    a2: &Graph,
    p1: &ProbMatrix,
    p2: &ProbMatrix,
) -> Result<DMatrix<f64>> {
    let n = a1.n();
    for m in [a2.n(), p1.n(), p2.n()] {
        if m != n {
            return Err(Error::DimensionMismatch { left: n, right: m });
        }
    }
    let scale = (n as f64 - 1.0).max(0.0);
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let diff = a1.entry(i, j) - a2.entry(i, j);
        let (x, y) = (p1.get(i, j), p2.get(i, j));
        let denom = (scale * (x * (1.0 - x) + y * (1.0 - y))).sqrt();
        if diff == 0.0 || denom == 0.0 {
            0.0
        } else {
            diff / denom
        }
    }))
}

/// `n^{2/3} (||C||_2 - 2)` for the scaled difference of two graphs.
pub fn t_eig<R: Rng + ?Sized>(
    a1: &Graph,
    a2: &Graph,
    blocks: usize,
    fixed: Option<&CommunityAssignment>,
    rng: &mut R,
) -> Result<f64> {
    let p1 = block_approximation(a1, blocks, fixed, rng)?;
    let p2 = block_approximation(a2, blocks, fixed, rng)?;
    let c = scaled_difference_matrix(a1, a2, &p1, &p2)?;
    let n = a1.n() as f64;
    Ok(n.powf(2.0 / 3.0) * (spectral_norm(&c)? - 2.0))
}

/// Spectral-norm equality test: reject when `T_eig` exceeds the
/// Tracy-Widom threshold for `alpha` under the configured reading.
///
/// The reported p-value is twice the tabulated tail probability of the
/// statistic, clamped to the table, so `p < alpha` matches the decision
/// whenever `alpha / 2` lies inside the table.
pub fn run_eig_test(a1: &Graph, a2: &Graph, cfg: &EigConfig, alpha: f64) -> Result<TestResult> {
    check_inputs(a1, a2, 1, alpha)?;
    let table = cfg.reading.table();
    let threshold = table.threshold(alpha)?;
    let mut rng = RngStream::new(cfg.seed, 0).rng();
    let t = t_eig(a1, a2, cfg.blocks, cfg.communities.as_ref(), &mut rng)?;
    let p_value = (2.0 * table.upper_tail(t)).min(1.0);
    Ok(TestResult {
        method: Method::Eig,
        kind: TestKind::Equality,
        estimator: format!("sbm-approx(r={})", cfg.blocks),
        statistic: t,
        replicates: Vec::new(),
        secondary_replicates: None,
        b: 0,
        p_value,
        alpha,
        reject: t > threshold,
        rho1: None,
        rho2: None,
        seed: cfg.seed,
        details: vec![
            ("blocks".into(), cfg.blocks.to_string()),
            ("threshold".into(), threshold.to_string()),
            ("threshold_reading".into(), cfg.reading.to_string()),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::sample_graph;

    fn two_block(n: usize, seed: u64) -> Graph {
        let p =
            ProbMatrix::from_pair_fn(n, |i, j| if (i < n / 2) == (j < n / 2) { 0.5 } else { 0.2 });
        sample_graph(&p, &mut RngStream::new(seed, 0).rng())
    }

    #[test]
    fn identical_graphs_never_reject() {
        let g = two_block(50, 1);
        let r = run_eig_test(&g, &g, &EigConfig::new(2), 0.05).unwrap();
        assert!((r.statistic + 2.0 * 50f64.powf(2.0 / 3.0)).abs() < 1e-9);
        assert!(!r.reject);
        assert_eq!(r.detail("threshold_reading"), Some("half-alpha"));
    }

    #[test]
    fn single_differing_dyad() {
        let n = 101;
        let a1 = Graph::from_edges(n, [(3, 7)]);
        let a2 = Graph::empty(n);
        let half = ProbMatrix::from_pair_fn(n, |_, _| 0.5);
        let c = scaled_difference_matrix(&a1, &a2, &half, &half).unwrap();
        assert!((c[(3, 7)] - 1.0 / 50f64.sqrt()).abs() < 1e-15);
        assert!((c[(7, 3)] - 0.1414213562373095).abs() < 1e-15);
        assert_eq!(c[(0, 1)], 0.0);
    }

    #[test]
    fn zero_denominator_gives_zero() {
        let a1 = Graph::from_edges(3, [(0, 1)]);
        let a2 = Graph::empty(3);
        let ones = ProbMatrix::from_pair_fn(3, |_, _| 1.0);
        let c = scaled_difference_matrix(&a1, &a2, &ones, &ones).unwrap();
        assert!(c.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn relabeling_with_fixed_communities() {
        let (g1, g2) = (two_block(40, 2), two_block(40, 3));
        let c =
            CommunityAssignment::new((0..40).map(|i| usize::from(i >= 20)).collect(), 2).unwrap();
        let perm: Vec<usize> = (0..40).map(|i| (i * 17 + 5) % 40).collect();
        let rng = &mut RngStream::new(0, 0).rng();
        let t = t_eig(&g1, &g2, 2, Some(&c), rng).unwrap();
        let tp = t_eig(
            &g1.permuted(&perm),
            &g2.permuted(&perm),
            2,
            Some(&c.permuted(&perm)),
            rng,
        )
        .unwrap();
        assert!((t - tp).abs() < 1e-9);
    }

    #[test]
    fn decision_uses_reading() {
        let (g1, g2) = (two_block(60, 4), two_block(60, 5));
        let mut cfg = EigConfig::new(2);
        let half = run_eig_test(&g1, &g2, &cfg, 0.05).unwrap();
        cfg.reading = ThresholdReading::ColumnAsTail;
        let column = run_eig_test(&g1, &g2, &cfg, 0.05).unwrap();
        assert_eq!(half.statistic, column.statistic);
        assert_eq!(
            half.detail("threshold").unwrap().parse::<f64>().unwrap(),
            1.453771
        );
        assert!((column.detail("threshold").unwrap().parse::<f64>().unwrap() - 1.9).abs() < 1e-12);
        assert_eq!(half.reject, half.statistic > 1.453771);
    }
}

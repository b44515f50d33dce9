use nalgebra::DMatrix;
use proptest::prelude::*;

use pairnet::baselines::{procrustes_distance, TracyWidomTable};
use pairnet::boottest::{pooled_equality, pooled_scaling, run_test, t_frob, t_scale, TestKind};
use pairnet::harness::{auc, histogram, quantile_report};
use pairnet::models::{fit_chung_lu, Estimator, Family};
use pairnet::netcore::{sample_graph, Graph, ProbMatrix, RngStream};
use pairnet::spectral::LatentEmbedding;

fn prob_matrix(n: usize) -> impl Strategy<Value = ProbMatrix> {
    prop::collection::vec(0.0..1.0f64, n * n)
        .prop_map(move |v| ProbMatrix::from_pair_fn(n, |i, j| v[i * n + j]))
}

fn graph() -> impl Strategy<Value = Graph> {
    (8usize..24, 0.1..0.7f64, any::<u64>()).prop_map(|(n, p, seed)| {
        let mut rng = RngStream::new(seed, 0).rng();
        sample_graph(&ProbMatrix::from_pair_fn(n, |_, _| p), &mut rng)
    })
}

fn points(n: usize, d: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-3.0..3.0f64, n * d).prop_map(move |v| DMatrix::from_row_slice(n, d, &v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_graphs_are_simple(p in prob_matrix(12), seed in any::<u64>()) {
        let g = sample_graph(&p, &mut RngStream::new(seed, 3).rng());
        prop_assert!(g.is_valid());
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn sampling_is_reproducible(p in prob_matrix(10), seed in any::<u64>(), stream in any::<u64>()) {
        let a = sample_graph(&p, &mut RngStream::new(seed, stream).rng());
        let b = sample_graph(&p, &mut RngStream::new(seed, stream).rng());
        prop_assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
    }

    #[test]
    fn estimators_return_valid_matrices(g in graph(), seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 0).rng();
        for family in [Family::ChungLu, Family::Sbm, Family::Dcbm, Family::Rdpg, Family::Pabm] {
            let est = Estimator::from_family(family, family.needs_k().then_some(2), family.needs_d().then_some(2)).unwrap();
            match est.fit(&g, &mut rng) {
                Ok(p) => prop_assert!(ProbMatrix::new(p.into_matrix()).is_ok()),
                Err(e) => prop_assert!(e.is_degenerate_data(), "{family}: {e}"),
            }
        }
    }

    #[test]
    fn chung_lu_commutes_with_relabelling(g in graph(), shift in 1usize..7) {
        let n = g.n();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let direct = fit_chung_lu(&g.permuted(&perm)).unwrap();
        let moved = fit_chung_lu(&g).unwrap().permuted(&perm);
        prop_assert!((direct.matrix() - moved.matrix()).amax() < 1e-12);
    }

    #[test]
    fn frobenius_statistic_is_a_metric(a in prob_matrix(8), b in prob_matrix(8), c in prob_matrix(8)) {
        let ab = t_frob(&a, &b).unwrap();
        prop_assert_eq!(ab, t_frob(&b, &a).unwrap());
        prop_assert_eq!(t_frob(&a, &a).unwrap(), 0.0);
        prop_assert!(ab <= t_frob(&a, &c).unwrap() + t_frob(&c, &b).unwrap() + 1e-12);
    }

    #[test]
    fn scaling_statistic_ignores_scale(m in prob_matrix(9), c in 0.05..1.0f64) {
        prop_assume!(m.frobenius_norm() > 1e-3);
        let (t, rho1, rho2) = t_scale(&m.scaled(c), &m).unwrap();
        prop_assert!(t < 1e-12);
        prop_assert!((rho1 / rho2 - c).abs() < 1e-12);
    }

    #[test]
    fn pooled_nulls(a in prob_matrix(7), b in prob_matrix(7)) {
        prop_assert_eq!(pooled_equality(&a, &a).unwrap(), a.clone());
        let pooled = pooled_equality(&a, &b).unwrap();
        prop_assert!((t_frob(&a, &pooled).unwrap() - t_frob(&b, &pooled).unwrap()).abs() < 1e-12);
        prop_assume!(a.frobenius_norm() > 1e-3 && b.frobenius_norm() > 1e-3);
        let s = pooled_scaling(&a, &b).unwrap();
        if s.clipped == 0 {
            // Both null matrices share one shape.
            prop_assert!(t_scale(&s.p1_null, &s.p2_null).unwrap().0 < 1e-12);
        }
    }

    #[test]
    fn procrustes_ignores_rotation(x in points(15, 2), t in 0.0..std::f64::consts::TAU, flip in any::<bool>()) {
        let (c, s) = (t.cos(), t.sin());
        let w = if flip {
            DMatrix::from_row_slice(2, 2, &[c, s, s, -c])
        } else {
            DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
        };
        let a = LatentEmbedding { coords: x.clone() };
        let b = LatentEmbedding { coords: &x * w };
        prop_assert!(procrustes_distance(&a, &b).unwrap() < 1e-9);
    }

    #[test]
    fn procrustes_is_symmetric(x in points(12, 3), y in points(12, 3)) {
        let a = LatentEmbedding { coords: x };
        let b = LatentEmbedding { coords: y };
        let (ab, ba) = (procrustes_distance(&a, &b).unwrap(), procrustes_distance(&b, &a).unwrap());
        prop_assert!((ab - ba).abs() < 1e-9);
        prop_assert!(ab <= (&a.coords - &b.coords).norm() + 1e-9);
    }

    #[test]
    fn upper_quantiles_fall_as_tail_shrinks(v in prop::collection::vec(-5.0..5.0f64, 1..200)) {
        let q = quantile_report(&v, &[0.5, 0.1, 0.05, 0.01]).unwrap();
        prop_assert!(q.windows(2).all(|w| w[0].1 <= w[1].1));
        let max = v.iter().cloned().fold(f64::MIN, f64::max);
        prop_assert!(q[3].1 <= max);
    }

    #[test]
    fn auc_is_antisymmetric(a in prop::collection::vec(0.0..1.0f64, 1..50), b in prop::collection::vec(0.0..1.0f64, 1..50)) {
        let s = auc(&a, &b).unwrap() + auc(&b, &a).unwrap();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn histogram_conserves_counts(v in prop::collection::vec(-10.0..10.0f64, 1..300)) {
        let h = histogram(&v).unwrap();
        prop_assert_eq!(h.iter().map(|b| b.2).sum::<usize>(), v.len());
        prop_assert!(h.windows(2).all(|w| w[0].1 == w[1].0));
    }

    #[test]
    fn tracy_widom_tail_is_monotone(s in -2.0..6.0f64, t in -2.0..6.0f64) {
        let tw = TracyWidomTable::tw1();
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        prop_assert!(tw.upper_tail(lo) >= tw.upper_tail(hi));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn bootstrap_p_values_are_valid(g1 in graph(), seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 1).rng();
        let p = ProbMatrix::from_pair_fn(g1.n(), |_, _| 0.3);
        let g2 = sample_graph(&p, &mut rng);
        for kind in [TestKind::Equality, TestKind::Scaling] {
            let r = run_test(kind, &Estimator::ChungLu, &g1, &g2, 25, 0.05, seed).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.p_value));
            prop_assert_eq!(r.reject, r.p_value < 0.05);
            let hits = r.replicates.iter().filter(|&&x| r.statistic <= x).count();
            prop_assert_eq!(r.p_value, hits as f64 / 25.0);
        }
    }
}

#[test]
fn thresholds_fall_as_alpha_grows() {
    let tw = TracyWidomTable::tw1();
    let levels = [0.01, 0.02, 0.05, 0.1];
    let t: Vec<f64> = levels.iter().map(|&a| tw.threshold(a).unwrap()).collect();
    assert!(t.windows(2).all(|w| w[0] > w[1]));
}

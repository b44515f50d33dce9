use nalgebra::DMatrix;
use rand::Rng;

use super::cluster::CommunityAssignment;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct KMeansConfig {
    pub restarts: usize,
    pub max_iter: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        Self {
            restarts: 10,
            max_iter: 100,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub assignment: CommunityAssignment,
    /// One centroid per row.
    pub centroids: DMatrix<f64>,
    pub wcss: f64,
}

/// One Lloyd run from fixed initial centroids.
#[derive(Debug, Clone)]
pub struct LloydRun {
    pub labels: Vec<usize>,
    pub centroids: DMatrix<f64>,
    /// Within-cluster sum of squares after each iteration.
    pub wcss_trace: Vec<f64>,
    /// False when some cluster lost all of its points.
    pub complete: bool,
}

fn sq_dist(points: &DMatrix<f64>, i: usize, centroids: &DMatrix<f64>, c: usize) -> f64 {
    (0..points.ncols())
        .map(|d| {
            let diff = points[(i, d)] - centroids[(c, d)];
            diff * diff
        })
        .sum()
}

fn nearest(points: &DMatrix<f64>, i: usize, centroids: &DMatrix<f64>) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for c in 0..centroids.nrows() {
        let d = sq_dist(points, i, centroids, c);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// Lloyd's algorithm: alternate nearest-centroid assignment and centroid
/// update until the assignment stops changing or `max_iter` is reached.
pub fn lloyd(points: &DMatrix<f64>, init: DMatrix<f64>, max_iter: usize) -> LloydRun {
    let n = points.nrows();
    let k = init.nrows();
    let dim = points.ncols();
    let mut centroids = init;
    let mut labels = vec![usize::MAX; n];
    let mut wcss_trace = Vec::new();
    let mut complete = true;
    for _ in 0..max_iter {
        let mut changed = false;
        for (i, label) in labels.iter_mut().enumerate() {
            let (c, _) = nearest(points, i, &centroids);
            if *label != c {
                *label = c;
                changed = true;
            }
        }
        let mut sums = DMatrix::<f64>::zeros(k, dim);
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            for d in 0..dim {
                sums[(labels[i], d)] += points[(i, d)];
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                complete = false;
                continue;
            }
            for d in 0..dim {
                centroids[(c, d)] = sums[(c, d)] / counts[c] as f64;
            }
        }
        let wcss = (0..n)
            .map(|i| sq_dist(points, i, &centroids, labels[i]))
            .sum();
        wcss_trace.push(wcss);
        if !complete || !changed {
            break;
        }
    }
    LloydRun {
        labels,
        centroids,
        wcss_trace,
        complete,
    }
}

/// k-means++ seeding; `None` when fewer than `k` distinct points exist.
fn seed_plus_plus<R: Rng + ?Sized>(
    points: &DMatrix<f64>,
    k: usize,
    rng: &mut R,
) -> Option<DMatrix<f64>> {
    let n = points.nrows();
    let dim = points.ncols();
    let mut centroids = DMatrix::zeros(k, dim);
    let first = rng.random_range(0..n);
    centroids.row_mut(0).copy_from(&points.row(first));
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(points, i, &centroids, 0)).collect();
    for c in 1..k {
        let total: f64 = d2.iter().sum();
        if total <= 0.0 {
            return None;
        }
        let mut target = rng.random::<f64>() * total;
        let mut pick = None;
        for (i, &w) in d2.iter().enumerate() {
            if w > 0.0 {
                pick = Some(i);
                if target < w {
                    break;
                }
                target -= w;
            }
        }
        let pick = pick?;
        centroids.row_mut(c).copy_from(&points.row(pick));
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(points, i, &centroids, c));
        }
    }
    Some(centroids)
}

/// Best of `config.restarts` k-means++ / Lloyd runs by within-cluster sum of squares.
pub fn kmeans_detailed<R: Rng + ?Sized>(
    points: &DMatrix<f64>,
    k: usize,
    config: KMeansConfig,
    rng: &mut R,
) -> Result<KMeansFit> {
    let n = points.nrows();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "cannot form {k} clusters from {n} points"
        )));
    }
    let mut best: Option<LloydRun> = None;
    for _ in 0..config.restarts.max(1) {
        let Some(init) = seed_plus_plus(points, k, rng) else {
            continue;
        };
        let run = lloyd(points, init, config.max_iter);
        if !run.complete {
            continue;
        }
        let wcss = *run.wcss_trace.last().unwrap_or(&f64::INFINITY);
        let better = best
            .as_ref()
            .is_none_or(|b| wcss < *b.wcss_trace.last().unwrap_or(&f64::INFINITY));
        if better {
            best = Some(run);
        }
    }
    let run = best.ok_or(Error::EmptyCluster)?;
    let wcss = *run.wcss_trace.last().unwrap_or(&0.0);
    let assignment = CommunityAssignment::canonical(&run.labels, k)?;
    Ok(KMeansFit {
        assignment,
        centroids: run.centroids,
        wcss,
    })
}

/// Cluster the rows of `points` into `k` groups.
pub fn kmeans<R: Rng + ?Sized>(
    points: &DMatrix<f64>,
    k: usize,
    rng: &mut R,
) -> Result<CommunityAssignment> {
    Ok(kmeans_detailed(points, k, KMeansConfig::default(), rng)?.assignment)
}

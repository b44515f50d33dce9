use nalgebra::DMatrix;
use rand::Rng;

use super::eigen::top_eigenpairs;
use super::kmeans::kmeans;
use crate::error::{Error, Result};
use crate::netcore::Graph;

/// Community labels `0..k` for each node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityAssignment {
    pub labels: Vec<usize>,
    pub k: usize,
}

impl CommunityAssignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::InvalidParameter(format!(
                "community label {bad} out of range for k = {k}"
            )));
        }
        Ok(Self { labels, k })
    }

    /// Relabel so that communities are numbered in order of first appearance.
    /// Fails if some community is empty.
    pub fn canonical(labels: &[usize], k: usize) -> Result<Self> {
        let mut remap = vec![usize::MAX; k.max(labels.iter().max().map_or(0, |m| m + 1))];
        let mut next = 0;
        let mut out = Vec::with_capacity(labels.len());
        for &l in labels {
            if remap[l] == usize::MAX {
                remap[l] = next;
                next += 1;
            }
            out.push(remap[l]);
        }
        if next != k {
            return Err(Error::EmptyCluster);
        }
        Ok(Self { labels: out, k })
    }

    /// Everyone in one block.
    pub fn single(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            k: 1,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn members(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(move |(i, &l)| (l == r).then_some(i))
    }

    /// Labels after moving node `i` to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut labels = vec![0; self.labels.len()];
        for (i, &l) in self.labels.iter().enumerate() {
            labels[perm[i]] = l;
        }
        Self { labels, k: self.k }
    }
}

/// Fraction of nodes on which two labelings agree under the best matching
/// of label values. Exhaustive over permutations, so meant for small `k`.
pub fn label_agreement(a: &[usize], b: &[usize], k: usize) -> f64 {
    assert_eq!(a.len(), b.len());
    if a.is_empty() {
        return 1.0;
    }
    let mut confusion = vec![vec![0usize; k]; k];
    for (&x, &y) in a.iter().zip(b) {
        confusion[x][y] += 1;
    }
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = 0;
    permute(&mut perm, 0, &mut |p| {
        let hits = (0..k).map(|r| confusion[r][p[r]]).sum::<usize>();
        best = best.max(hits);
    });
    best as f64 / a.len() as f64
}

fn permute(perm: &mut Vec<usize>, start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == perm.len() {
        visit(perm);
        return;
    }
    for i in start..perm.len() {
        perm.swap(start, i);
        permute(perm, start + 1, visit);
        perm.swap(start, i);
    }
}

/// Regularized spectral clustering.
///
/// Uses `L = D_t^{-1/2} A D_t^{-1/2}` with `D_t = D + t I` and `t` the mean
/// degree, takes the `k` leading eigenvectors, optionally scales each nonzero
/// row to unit length, and runs k-means on the rows.
pub fn spectral_cluster<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    row_normalize: bool,
    rng: &mut R,
) -> Result<CommunityAssignment> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "spectral clustering needs k >= 2, got {k}"
        )));
    }
    let n = g.n();
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "cannot form {k} communities from {n} nodes"
        )));
    }
    let degrees = g.degrees();
    let tau = degrees.iter().sum::<usize>() as f64 / n as f64;
    if tau == 0.0 {
        return Err(Error::Degenerate(
            "spectral clustering of a graph with no edges".into(),
        ));
    }
    let inv_sqrt: Vec<f64> = degrees
        .iter()
        .map(|&d| 1.0 / (d as f64 + tau).sqrt())
        .collect();
    let laplacian = DMatrix::from_fn(n, n, |i, j| g.entry(i, j) * inv_sqrt[i] * inv_sqrt[j]);
    let eig = top_eigenpairs(&laplacian, k)?;
    let mut rows = eig.vectors;
    if row_normalize {
        for i in 0..n {
            let norm = rows.row(i).norm();
            if norm > 1e-12 {
                rows.row_mut(i).unscale_mut(norm);
            }
        }
    }
    kmeans(&rows, k, rng)
}

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::spectral::LatentEmbedding;

/// The orthogonal `W` minimizing `||X1 - X2 W||_F`: with
/// `X2^T X1 = U S V^T`, `W = U V^T`.
pub fn procrustes_alignment(x1: &DMatrix<f64>, x2: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if x1.shape() != x2.shape() {
        return Err(Error::DimensionMismatch {
            left: x1.len(),
            right: x2.len(),
        });
    }
    let svd = (x2.transpose() * x1).svd(true, true);
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(Error::NoConvergence { iterations: 0 });
    };
    Ok(u * v_t)
}

/// `min over orthogonal W of ||X1 - X2 W||_F`.
///
/// Evaluated as the residual at the optimal `W` rather than through
/// `||X1||^2 + ||X2||^2 - 2 sum(s)`, which cancels badly near zero.
pub fn procrustes_distance(x1: &LatentEmbedding, x2: &LatentEmbedding) -> Result<f64> {
    let w = procrustes_alignment(&x1.coords, &x2.coords)?;
    Ok((&x1.coords - &x2.coords * w).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::RngStream;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn random(n: usize, d: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = RngStream::new(seed, 0).rng();
        DMatrix::from_fn(n, d, |_, _| rng.sample(StandardNormal))
    }

    fn emb(coords: DMatrix<f64>) -> LatentEmbedding {
        LatentEmbedding { coords }
    }

    #[test]
    fn rotated_copy_has_zero_distance() {
        let x = random(8, 2, 1);
        let (c, s) = (0.7f64.cos(), 0.7f64.sin());
        let w = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        assert!(procrustes_distance(&emb(x.clone()), &emb(&x * w)).unwrap() < 1e-12);
        assert!(procrustes_distance(&emb(x.clone()), &emb(-x)).unwrap() < 1e-12);
    }

    #[test]
    fn at_most_unaligned_distance() {
        for seed in 0..10 {
            let (a, b) = (random(7, 3, seed), random(7, 3, seed + 50));
            let d = procrustes_distance(&emb(a.clone()), &emb(b.clone())).unwrap();
            assert!(d <= (&a - &b).norm() + 1e-12);
        }
    }

    #[test]
    fn shape_mismatch() {
        assert!(procrustes_distance(&emb(random(4, 2, 0)), &emb(random(5, 2, 0))).is_err());
    }
}

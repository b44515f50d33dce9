use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::models::latent_probabilities;
use crate::netcore::{frobenius_norm, ProbMatrix};
use crate::spectral::CommunityAssignment;

/// How the second matrix relates to the first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relation {
    /// `P2 = P1`.
    Equal,
    /// `P2 = c * P1`.
    Scaled(f64),
    /// `P2` drawn from the scenario's alternative configuration.
    Alternative,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Equal => f.write_str("equal"),
            Relation::Scaled(c) => write!(f, "scaled({c})"),
            Relation::Alternative => f.write_str("alternative"),
        }
    }
}

/// Model family and parameters of a simulation design.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioModel {
    /// Blockmodel with memberships drawn from `pi`; the alternative swaps
    /// `block` for `alt_block` on the same memberships.
    Sbm {
        pi: Vec<f64>,
        block: DMatrix<f64>,
        alt_block: DMatrix<f64>,
    },
    /// `P(i, j) = theta_i theta_j` with Beta-distributed `theta`; the
    /// alternative redraws from `alt_beta`.
    ChungLu {
        beta: (f64, f64),
        alt_beta: (f64, f64),
    },
    /// Degree-corrected blockmodel rescaled to a target mean density; the
    /// alternative redraws `theta` from `alt_beta` on the same memberships.
    Dcbm {
        pi: Vec<f64>,
        omega: DMatrix<f64>,
        density: f64,
        beta: (f64, f64),
        alt_beta: (f64, f64),
    },
    /// Two equal communities, each split into two popularity categories
    /// `(alpha, beta)`; homophily `h` for the first matrix, `alt_h` for the
    /// alternative.
    Pabm {
        h: f64,
        alt_h: f64,
        categories: [(f64, f64); 2],
    },
    /// `logit P = alpha - |z_i - z_j|` with standard normal `z`; the
    /// alternative redraws `z`.
    Latent { d: usize, alpha: f64 },
}

/// Scenario names accepted in configs.
pub const SCENARIO_NAMES: [&str; 6] = [
    "sbm-epsilon",
    "rdpg-scaling",
    "chung-lu",
    "dcbm",
    "pabm",
    "latent",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub n: usize,
    pub model: ScenarioModel,
    pub relation: Relation,
}

/// One draw of a scenario.
#[derive(Debug, Clone)]
pub struct Generated {
    pub p1: ProbMatrix,
    pub p2: ProbMatrix,
    /// Planted communities, for block-type designs.
    pub communities: Option<CommunityAssignment>,
}

fn two_block(diag: f64, off: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[diag, off, off, diag])
}

fn draw_memberships<R: Rng + ?Sized>(
    n: usize,
    pi: &[f64],
    rng: &mut R,
) -> Result<CommunityAssignment> {
    let total: f64 = pi.iter().sum();
    let labels = (0..n)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            let mut acc = 0.0;
            for (r, &w) in pi.iter().enumerate() {
                acc += w;
                if u < acc {
                    return r;
                }
            }
            pi.len() - 1
        })
        .collect();
    CommunityAssignment::new(labels, pi.len())
}

fn beta_draws<R: Rng + ?Sized>(n: usize, (a, b): (f64, f64), rng: &mut R) -> Result<Vec<f64>> {
    let dist =
        Beta::new(a, b).map_err(|e| Error::InvalidParameter(format!("Beta({a}, {b}): {e}")))?;
    Ok((0..n).map(|_| dist.sample(rng)).collect())
}

fn normal_matrix<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> DMatrix<f64> {
    // Fill row by row so that the draw order does not depend on storage order.
    let mut z = DMatrix::zeros(n, d);
    for i in 0..n {
        for c in 0..d {
            z[(i, c)] = rng.sample(StandardNormal);
        }
    }
    z
}

/// `theta_i omega_{c_i c_j} theta_j` scaled so its off-diagonal mean is
/// `density`, then clipped.
fn dcbm_matrix(
    theta: &[f64],
    c: &CommunityAssignment,
    omega: &DMatrix<f64>,
    density: f64,
) -> Result<ProbMatrix> {
    let n = theta.len();
    let raw = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            theta[i] * omega[(c.labels[i], c.labels[j])] * theta[j]
        }
    });
    let mean = raw.sum() / (n * (n - 1)) as f64;
    if mean <= 0.0 {
        return Err(Error::Degenerate(
            "DCBM design has zero expected density".into(),
        ));
    }
    Ok(ProbMatrix::clipped(raw * (density / mean)))
}

fn pabm_matrix(n: usize, h: f64, categories: &[(f64, f64); 2]) -> ProbMatrix {
    let half = n / 2;
    let community = |i: usize| usize::from(i >= half);
    // First half of each community is category 1.
    let category = |i: usize| {
        let (start, size) = if i < half {
            (0, half)
        } else {
            (half, n - half)
        };
        usize::from(i - start >= size / 2)
    };
    let lambda = |i: usize, r: usize| {
        let (a, b) = categories[category(i)];
        if r == community(i) {
            a * (h / (1.0 + h)).sqrt()
        } else {
            b * (1.0 / (1.0 + h)).sqrt()
        }
    };
    ProbMatrix::from_pair_fn(n, |i, j| lambda(i, community(j)) * lambda(j, community(i)))
}

impl Scenario {
    /// Two-block design with `B = [[0.5, 0.2], [0.2, 0.5]]`, memberships from
    /// `(0.4, 0.6)`; the alternative adds `epsilon` to the diagonal.
    pub fn sbm_epsilon(n: usize, epsilon: f64, relation: Relation) -> Self {
        Self {
            name: "sbm-epsilon".into(),
            n,
            model: ScenarioModel::Sbm {
                pi: vec![0.4, 0.6],
                block: two_block(0.5, 0.2),
                alt_block: two_block(0.5 + epsilon, 0.2),
            },
            relation,
        }
    }

    /// Same two-block design; the alternative uses `D = [[0.4, 0.25], [0.25, 0.4]]`.
    pub fn rdpg_scaling(n: usize, relation: Relation) -> Self {
        Self {
            name: "rdpg-scaling".into(),
            n,
            model: ScenarioModel::Sbm {
                pi: vec![0.4, 0.6],
                block: two_block(0.5, 0.2),
                alt_block: two_block(0.4, 0.25),
            },
            relation,
        }
    }

    /// `theta ~ Beta(1, 5)`, alternative `eta ~ Beta(4, 3)`.
    pub fn chung_lu(n: usize, relation: Relation) -> Self {
        Self {
            name: "chung-lu".into(),
            n,
            model: ScenarioModel::ChungLu {
                beta: (1.0, 5.0),
                alt_beta: (4.0, 3.0),
            },
            relation,
        }
    }

    /// Three blocks with `pi = (0.25, 0.25, 0.5)`, `omega ~ [[4,2,1],[2,4,1],[1,1,4]]`,
    /// density 0.1, `theta ~ Beta(1, 5)`, alternative `Beta(4, 3)`.
    pub fn dcbm(n: usize, relation: Relation) -> Self {
        Self {
            name: "dcbm".into(),
            n,
            model: ScenarioModel::Dcbm {
                pi: vec![0.25, 0.25, 0.5],
                omega: DMatrix::from_row_slice(
                    3,
                    3,
                    &[4.0, 2.0, 1.0, 2.0, 4.0, 1.0, 1.0, 1.0, 4.0],
                ),
                density: 0.1,
                beta: (1.0, 5.0),
                alt_beta: (4.0, 3.0),
            },
            relation,
        }
    }

    /// `h = 4`, alternative `h = 2`; categories `(0.8, 0.2)` and `(0.2, 0.8)`.
    pub fn pabm(n: usize, relation: Relation) -> Self {
        Self {
            name: "pabm".into(),
            n,
            model: ScenarioModel::Pabm {
                h: 4.0,
                alt_h: 2.0,
                categories: [(0.8, 0.2), (0.2, 0.8)],
            },
            relation,
        }
    }

    /// `d = 3`, `alpha = 3`.
    pub fn latent(n: usize, relation: Relation) -> Self {
        Self {
            name: "latent".into(),
            n,
            model: ScenarioModel::Latent { d: 3, alpha: 3.0 },
            relation,
        }
    }

    /// Build a named scenario. `epsilon` is used by `sbm-epsilon` only.
    pub fn from_name(name: &str, n: usize, relation: Relation, epsilon: f64) -> Result<Self> {
        Ok(match name {
            "sbm-epsilon" => Self::sbm_epsilon(n, epsilon, relation),
            "rdpg-scaling" => Self::rdpg_scaling(n, relation),
            "chung-lu" => Self::chung_lu(n, relation),
            "dcbm" => Self::dcbm(n, relation),
            "pabm" => Self::pabm(n, relation),
            "latent" => Self::latent(n, relation),
            _ => {
                return Err(Error::Config(format!(
                    "unknown scenario {name:?}; valid scenarios: {}",
                    SCENARIO_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!(
                "scenario needs n >= 2, got {}",
                self.n
            )));
        }
        if let Relation::Scaled(c) = self.relation {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "scale factor must be positive, got {c}"
                )));
            }
        }
        match &self.model {
            ScenarioModel::Sbm {
                pi,
                block,
                alt_block,
            } => {
                let k = pi.len();
                if k == 0 || block.shape() != (k, k) || alt_block.shape() != (k, k) {
                    return Err(Error::InvalidParameter(
                        "block matrices must be K x K with K = len(pi)".into(),
                    ));
                }
            }
            ScenarioModel::Dcbm {
                pi, omega, density, ..
            } => {
                if pi.is_empty()
                    || omega.shape() != (pi.len(), pi.len())
                    || !(*density > 0.0 && *density <= 1.0)
                {
                    return Err(Error::InvalidParameter("invalid DCBM design".into()));
                }
            }
            ScenarioModel::Latent { d, .. } if *d == 0 => {
                return Err(Error::InvalidParameter(
                    "latent dimension must be at least 1".into(),
                ));
            }
            _ => {}
        }
        Ok(())
    }

    /// Whether the equality null (`P1 = P2`) holds by construction.
    pub fn equality_null(&self) -> bool {
        match self.relation {
            Relation::Equal => true,
            Relation::Scaled(c) => c == 1.0,
            Relation::Alternative => {
                matches!(&self.model, ScenarioModel::Sbm { block, alt_block, .. } if block == alt_block)
            }
        }
    }

    /// Whether the scaling null (`P1 = c P2`) holds by construction.
    pub fn scaling_null(&self) -> bool {
        !matches!(self.relation, Relation::Alternative) || self.equality_null()
    }

    /// Draw `(P1, P2)` and any planted communities.
    ///
    /// Designs declared null are checked numerically: `P2` must equal `P1`,
    /// or `c P1`, to within 1e-12 before clipping.
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Generated> {
        self.validate()?;
        let n = self.n;
        let alternative = self.relation == Relation::Alternative;
        let (p1, alt, communities) = match &self.model {
            ScenarioModel::Sbm {
                pi,
                block,
                alt_block,
            } => {
                let c = draw_memberships(n, pi, rng)?;
                let p = |b: &DMatrix<f64>| {
                    ProbMatrix::from_pair_fn(n, |i, j| b[(c.labels[i], c.labels[j])])
                };
                let alt = alternative.then(|| p(alt_block));
                (p(block), alt, Some(c))
            }
            ScenarioModel::ChungLu { beta, alt_beta } => {
                let theta = beta_draws(n, *beta, rng)?;
                let p1 = ProbMatrix::from_pair_fn(n, |i, j| theta[i] * theta[j]);
                let alt = if alternative {
                    let eta = beta_draws(n, *alt_beta, rng)?;
                    Some(ProbMatrix::from_pair_fn(n, |i, j| eta[i] * eta[j]))
                } else {
                    None
                };
                (p1, alt, None)
            }
            ScenarioModel::Dcbm {
                pi,
                omega,
                density,
                beta,
                alt_beta,
            } => {
                let c = draw_memberships(n, pi, rng)?;
                let theta = beta_draws(n, *beta, rng)?;
                let p1 = dcbm_matrix(&theta, &c, omega, *density)?;
                let alt = if alternative {
                    let eta = beta_draws(n, *alt_beta, rng)?;
                    Some(dcbm_matrix(&eta, &c, omega, *density)?)
                } else {
                    None
                };
                (p1, alt, Some(c))
            }
            ScenarioModel::Pabm {
                h,
                alt_h,
                categories,
            } => {
                let c =
                    CommunityAssignment::new((0..n).map(|i| usize::from(i >= n / 2)).collect(), 2)?;
                let alt = alternative.then(|| pabm_matrix(n, *alt_h, categories));
                (pabm_matrix(n, *h, categories), alt, Some(c))
            }
            ScenarioModel::Latent { d, alpha } => {
                let z = normal_matrix(n, *d, rng);
                let alt =
                    alternative.then(|| latent_probabilities(*alpha, &normal_matrix(n, *d, rng)));
                (latent_probabilities(*alpha, &z), alt, None)
            }
        };
        let p2 = match self.relation {
            Relation::Equal => p1.clone(),
            Relation::Scaled(c) => {
                let raw = p1.matrix() * c;
                if raw.amax() > 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "scale factor {c} pushes probabilities above 1"
                    )));
                }
                let scaled = ProbMatrix::clipped(raw.clone());
                let gap = frobenius_norm(&(scaled.matrix() - raw));
                if gap > 1e-12 {
                    return Err(Error::InvalidParameter(
                        "scaled design does not hold exactly".into(),
                    ));
                }
                scaled
            }
            Relation::Alternative => alt.expect("alternative matrix drawn above"),
        };
        if self.relation == Relation::Equal && (p1.matrix() - p2.matrix()).amax() > 1e-12 {
            return Err(Error::InvalidParameter(
                "equality design does not hold exactly".into(),
            ));
        }
        Ok(Generated {
            p1,
            p2,
            communities,
        })
    }
}

impl FromStr for Relation {
    type Err = Error;

    /// `equal`, `alternative`, or `scaled:<c>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal" => Ok(Relation::Equal),
            "alternative" => Ok(Relation::Alternative),
            _ => s
                .strip_prefix("scaled:")
                .and_then(|c| c.parse().ok())
                .map(Relation::Scaled)
                .ok_or_else(|| {
                    Error::Config(format!(
                        "unknown relation {s:?}; expected equal, alternative or scaled:<c>"
                    ))
                }),
        }
    }
}

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{
    fit_chung_lu, fit_dcbm, fit_latent_distance, fit_pabm, fit_rdpg, fit_sbm, LatentSettings,
};
use crate::error::{Error, Result};
use crate::netcore::{Graph, ProbMatrix};
use crate::spectral::CommunityAssignment;

/// Model family names as used on the command line and in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    ChungLu,
    Sbm,
    Dcbm,
    Rdpg,
    Pabm,
    LatentDistance,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::ChungLu,
        Family::Sbm,
        Family::Dcbm,
        Family::Rdpg,
        Family::Pabm,
        Family::LatentDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::ChungLu => "chung-lu",
            Family::Sbm => "sbm",
            Family::Dcbm => "dcbm",
            Family::Rdpg => "rdpg",
            Family::Pabm => "pabm",
            Family::LatentDistance => "latent",
        }
    }

    pub fn needs_k(self) -> bool {
        matches!(self, Family::Sbm | Family::Dcbm | Family::Pabm)
    }

    pub fn needs_d(self) -> bool {
        matches!(self, Family::Rdpg | Family::LatentDistance)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown model {s:?}; expected one of chung-lu, sbm, dcbm, rdpg, pabm, latent"
                ))
            })
    }
}

/// A model family together with its hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Estimator {
    ChungLu,
    Sbm {
        k: usize,
        communities: Option<CommunityAssignment>,
    },
    Dcbm {
        k: usize,
        communities: Option<CommunityAssignment>,
    },
    Rdpg {
        d: usize,
    },
    Pabm {
        k: usize,
        communities: Option<CommunityAssignment>,
    },
    LatentDistance {
        d: usize,
        settings: LatentSettings,
    },
}

impl Estimator {
    /// Build from a family name and the hyperparameters it needs. Unused
    /// hyperparameters are ignored.
    pub fn from_family(family: Family, k: Option<usize>, d: Option<usize>) -> Result<Self> {
        let need = |v: Option<usize>, what: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("model {family} requires {what}")))
        };
        let est = match family {
            Family::ChungLu => Estimator::ChungLu,
            Family::Sbm => Estimator::Sbm {
                k: need(k, "k")?,
                communities: None,
            },
            Family::Dcbm => Estimator::Dcbm {
                k: need(k, "k")?,
                communities: None,
            },
            Family::Pabm => Estimator::Pabm {
                k: need(k, "k")?,
                communities: None,
            },
            Family::Rdpg => Estimator::Rdpg { d: need(d, "d")? },
            Family::LatentDistance => Estimator::LatentDistance {
                d: need(d, "d")?,
                settings: LatentSettings::default(),
            },
        };
        est.validate()?;
        Ok(est)
    }

    /// Fix the community assignment for block-type families. Other families
    /// are returned unchanged.
    pub fn with_communities(mut self, fixed: CommunityAssignment) -> Self {
        match &mut self {
            Estimator::Sbm { communities, .. }
            | Estimator::Dcbm { communities, .. }
            | Estimator::Pabm { communities, .. } => *communities = Some(fixed),
            _ => {}
        }
        self
    }

    pub fn family(&self) -> Family {
        match self {
            Estimator::ChungLu => Family::ChungLu,
            Estimator::Sbm { .. } => Family::Sbm,
            Estimator::Dcbm { .. } => Family::Dcbm,
            Estimator::Rdpg { .. } => Family::Rdpg,
            Estimator::Pabm { .. } => Family::Pabm,
            Estimator::LatentDistance { .. } => Family::LatentDistance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Estimator::Sbm { k, communities }
            | Estimator::Dcbm { k, communities }
            | Estimator::Pabm { k, communities } => {
                if *k < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "k must be at least 2, got {k}"
                    )));
                }
                if let Some(c) = communities {
                    if c.k != *k {
                        return Err(Error::InvalidParameter(format!(
                            "fixed communities have k = {}, estimator has k = {k}",
                            c.k
                        )));
                    }
                }
            }
            Estimator::Rdpg { d } | Estimator::LatentDistance { d, .. } => {
                if *d < 1 {
                    return Err(Error::InvalidParameter("d must be at least 1".into()));
                }
            }
            Estimator::ChungLu => {}
        }
        Ok(())
    }

    /// Short human-readable description, e.g. `sbm(k=2)`.
    pub fn describe(&self) -> String {
        match self {
            Estimator::ChungLu => "chung-lu".into(),
            Estimator::Sbm { k, communities }
            | Estimator::Dcbm { k, communities }
            | Estimator::Pabm { k, communities } => {
                let fixed = if communities.is_some() { ",fixed" } else { "" };
                format!("{}(k={k}{fixed})", self.family())
            }
            Estimator::Rdpg { d } | Estimator::LatentDistance { d, .. } => {
                format!("{}(d={d})", self.family())
            }
        }
    }

    /// Fit the model to `g`. The output is clipped into `[0, 1]` with a zero
    /// diagonal.
    pub fn fit<R: Rng + ?Sized>(&self, g: &Graph, rng: &mut R) -> Result<ProbMatrix> {
        match self {
            Estimator::ChungLu => fit_chung_lu(g),
            Estimator::Sbm { k, communities } => fit_sbm(g, *k, communities.as_ref(), rng),
            Estimator::Dcbm { k, communities } => fit_dcbm(g, *k, communities.as_ref(), rng),
            Estimator::Pabm { k, communities } => fit_pabm(g, *k, communities.as_ref(), rng),
            Estimator::Rdpg { d } => fit_rdpg(g, *d),
            Estimator::LatentDistance { d, settings } => fit_latent_distance(g, *d, settings, rng),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::RngStream;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("blockmodel".parse::<Family>().is_err());
    }

    #[test]
    fn hyperparameters_required() {
        assert!(Estimator::from_family(Family::Sbm, None, Some(2)).is_err());
        assert!(Estimator::from_family(Family::Rdpg, Some(2), None).is_err());
        assert!(Estimator::from_family(Family::Pabm, Some(1), None).is_err());
        assert!(Estimator::from_family(Family::Rdpg, None, Some(0)).is_err());
        assert_eq!(
            Estimator::from_family(Family::ChungLu, None, None).unwrap(),
            Estimator::ChungLu
        );
    }

    #[test]
    fn dispatch_matches_direct_fit() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let p = Estimator::ChungLu
            .fit(&g, &mut RngStream::new(0, 0).rng())
            .unwrap();
        assert!((p.get(0, 1) - 2.0 / 3.0).abs() < 1e-15);
        let est = Estimator::from_family(Family::Sbm, Some(2), None)
            .unwrap()
            .with_communities(CommunityAssignment::new(vec![0, 0, 1], 2).unwrap());
        assert_eq!(est.describe(), "sbm(k=2,fixed)");
        let p = est.fit(&g, &mut RngStream::new(0, 0).rng()).unwrap();
        assert_eq!(p.get(0, 1), 1.0);
    }

    #[test]
    fn mismatched_fixed_communities_rejected() {
        let est = Estimator::Dcbm {
            k: 3,
            communities: Some(CommunityAssignment::new(vec![0, 1], 2).unwrap()),
        };
        assert!(est.validate().is_err());
    }
}

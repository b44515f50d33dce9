use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which null hypothesis is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestKind {
    /// `P1 = P2`.
    Equality,
    /// `P1 = c * P2` for some `c > 0`.
    Scaling,
}

impl TestKind {
    pub fn name(self) -> &'static str {
        match self {
            TestKind::Equality => "equality",
            TestKind::Scaling => "scaling",
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equality" => Ok(TestKind::Equality),
            "scaling" => Ok(TestKind::Scaling),
            _ => Err(Error::InvalidParameter(format!(
                "unknown test kind {s:?}; expected equality or scaling"
            ))),
        }
    }
}

/// Testing procedure that produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Frobenius statistic with parametric bootstrap.
    Boot,
    /// Procrustes distance of spectral embeddings, two bootstrap sets.
    Ase,
    /// Spectral norm of the scaled difference with a Tracy-Widom cutoff.
    Eig,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Boot => "boot",
            Method::Ase => "ase",
            Method::Eig => "eig",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boot" => Ok(Method::Boot),
            "ase" => Ok(Method::Ase),
            "eig" => Ok(Method::Eig),
            _ => Err(Error::InvalidParameter(format!(
                "unknown method {s:?}; expected boot, ase or eig"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub method: Method,
    pub kind: TestKind,
    /// Estimator description, e.g. `rdpg(d=2)`.
    pub estimator: String,
    pub statistic: f64,
    /// Bootstrap statistics. For the ASE test these come from the first fit.
    pub replicates: Vec<f64>,
    /// Second bootstrap set of the ASE test.
    pub secondary_replicates: Option<Vec<f64>>,
    pub b: usize,
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
    pub rho1: Option<f64>,
    pub rho2: Option<f64>,
    pub seed: u64,
    /// Method-specific extras, in insertion order.
    pub details: Vec<(String, String)>,
}

impl TestResult {
    pub fn detail(&self, key: &str) -> Option<&str> {
        self.details
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn decision(&self) -> &'static str {
        if self.reject {
            "reject"
        } else {
            "fail to reject"
        }
    }

    /// `key=value` lines covering every field. Replicate vectors are
    /// written only when `verbose` is set.
    pub fn to_record(&self, verbose: bool) -> String {
        let mut out = String::new();
        let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
        let _ = writeln!(out, "method={}", self.method);
        let _ = writeln!(out, "kind={}", self.kind);
        let _ = writeln!(out, "estimator={}", self.estimator);
        let _ = writeln!(out, "statistic={}", self.statistic);
        let _ = writeln!(out, "b={}", self.b);
        let _ = writeln!(out, "p_value={}", self.p_value);
        let _ = writeln!(out, "alpha={}", self.alpha);
        let _ = writeln!(out, "reject={}", self.reject);
        let _ = writeln!(out, "rho1_hat={}", opt(self.rho1));
        let _ = writeln!(out, "rho2_hat={}", opt(self.rho2));
        let _ = writeln!(out, "seed={}", self.seed);
        for (k, v) in &self.details {
            let _ = writeln!(out, "{k}={v}");
        }
        if verbose {
            let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
            let _ = writeln!(out, "replicates={}", join(&self.replicates));
            if let Some(s) = &self.secondary_replicates {
                let _ = writeln!(out, "secondary_replicates={}", join(s));
            }
        }
        out
    }
}

/// `(1/B) #{i : T <= T*_i}`.
pub(crate) fn bootstrap_p_value(statistic: f64, replicates: &[f64]) -> f64 {
    let hits = replicates.iter().filter(|&&r| statistic <= r).count();
    hits as f64 / replicates.len() as f64
}

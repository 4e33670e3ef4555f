//! The JSON problem file.

use ccindex_core::{Configuration, ExampleParams, Masses, PairPotential, Points, SolverConfig};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialSpec {
    Newtonian,
    Charged { gamma: Vec<f64> },
    Explicit { kappa: Vec<Vec<f64>> },
}

/// Which rigid rotation `dynamics` compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationMode {
    /// Circular motion of a central configuration in its own plane.
    #[default]
    Central,
    /// Rotation about the vertical axis (spatial relative equilibria).
    Vertical,
    /// No rotation; a negative control.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsParams {
    pub rotation: RotationMode,
    /// Integration horizon in periods of the reference rotation.
    pub periods: f64,
    /// Absolute horizon; required for `rotation = "none"`.
    pub t_end: Option<f64>,
    pub steps: usize,
    pub tol: f64,
}

impl Default for DynamicsParams {
    fn default() -> Self {
        Self { rotation: RotationMode::Central, periods: 1.0, t_end: None, steps: 20_000, tol: 1e-5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExampleSpec {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub max_iter: usize,
}

impl Default for ExampleSpec {
    fn default() -> Self {
        Self { c1: 20.0, c2: -2.0, c3: -2.0, max_iter: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub d: usize,
    pub masses: Vec<f64>,
    pub potential: PotentialSpec,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default)]
    pub solver: SolverConfig,
    /// Rows of an `n x d` configuration: the seed of `find-cc` and `find-re`,
    /// the point examined by `index`, `verify-identity`, `property-check`
    /// and `dynamics`.
    #[serde(default)]
    pub configuration: Option<Vec<Vec<f64>>>,
    /// Level `c` of the cylinder for `find-re`; defaults to the seed's level.
    #[serde(default)]
    pub cylinder: Option<f64>,
    /// Number of random (configuration, plane) draws for `property-check`.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Acceptance threshold of `verify-identity`.
    #[serde(default = "default_identity_tol")]
    pub identity_tol: f64,
    #[serde(default)]
    pub dynamics: DynamicsParams,
    #[serde(default)]
    pub example: ExampleSpec,
}

fn one() -> f64 {
    1.0
}

fn default_samples() -> usize {
    1000
}

fn default_identity_tol() -> f64 {
    1e-8
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let p: ProblemFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), String> {
        if self.n < 2 {
            return Err(format!("n = {} must be at least 2", self.n));
        }
        if !(2..=3).contains(&self.d) {
            return Err(format!("d = {} must be 2 or 3", self.d));
        }
        if self.masses.len() != self.n {
            return Err(format!("{} masses given for n = {}", self.masses.len(), self.n));
        }
        match &self.potential {
            PotentialSpec::Newtonian => {}
            PotentialSpec::Charged { gamma } if gamma.len() != self.n => {
                return Err(format!("{} charges given for n = {}", gamma.len(), self.n));
            }
            PotentialSpec::Charged { .. } => {}
            PotentialSpec::Explicit { kappa } => {
                if kappa.len() != self.n || kappa.iter().any(|r| r.len() != self.n) {
                    return Err(format!("kappa must be {0}x{0}", self.n));
                }
            }
        }
        if let Some(rows) = &self.configuration {
            if rows.len() != self.n || rows.iter().any(|r| r.len() != self.d) {
                return Err(format!("configuration must be {}x{}", self.n, self.d));
            }
        }
        self.potential().map_err(|e| e.to_string())?;
        self.solver.validate().map_err(|e| e.to_string())?;
        Ok(())
    }

    pub fn masses(&self) -> ccindex_core::Result<Masses> {
        Masses::new(self.masses.clone())
    }

    pub fn potential(&self) -> ccindex_core::Result<PairPotential> {
        let m = self.masses()?;
        match &self.potential {
            PotentialSpec::Newtonian => PairPotential::newtonian(m, self.alpha),
            PotentialSpec::Charged { gamma } => PairPotential::charged(m, gamma, self.alpha),
            PotentialSpec::Explicit { kappa } => {
                let n = self.n;
                let k = DMatrix::from_fn(n, n, |i, j| kappa[i][j]);
                PairPotential::new(m, k, self.alpha)
            }
        }
    }

    pub fn configuration(&self) -> Option<ccindex_core::Result<Configuration>> {
        self.configuration.as_ref().map(|rows| Points::from_rows(rows).and_then(Configuration::new))
    }

    pub fn example_params(&self) -> ccindex_core::Result<ExampleParams> {
        ExampleParams::new(self.example.c1, self.example.c2, self.example.c3)
    }
}

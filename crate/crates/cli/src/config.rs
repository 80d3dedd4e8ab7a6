//! Run settings: built-in defaults, overridden by a JSON file, overridden by flags.

use std::path::{Path, PathBuf};

use bosegas::scattering::RadialPotential;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// "barrier" or "file"
    pub potential: String,
    pub v0: f64,
    pub range: f64,
    pub potential_file: Option<PathBuf>,
    pub rho: f64,
    /// overrides the computed scattering length where one is needed
    pub a: Option<f64>,
    pub temp: f64,
    pub ell: f64,
    pub lambda: f64,
    pub n: f64,
    pub cutoff: u32,
    pub n_max: usize,
    pub tol: f64,
    pub modes: Vec<[u32; 3]>,
    /// "bog" or "full"
    pub hamiltonian: String,
    pub particles: usize,
    pub sweep: String,
    pub values: Vec<f64>,
    pub q: f64,
    pub criteria: Vec<u8>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            potential: "barrier".into(),
            v0: 2.0,
            range: 1.0,
            potential_file: None,
            rho: 1e-3,
            a: None,
            temp: 0.0,
            ell: 50.0,
            lambda: 0.1,
            n: 10.0,
            cutoff: 3,
            n_max: 40,
            tol: 1e-9,
            modes: vec![[1, 0, 0], [1, 1, 0]],
            hamiltonian: "bog".into(),
            particles: 2,
            sweep: "dispersion-lambda".into(),
            values: Vec::new(),
            q: 0.0,
            criteria: Vec::new(),
        }
    }
}

pub fn load(path: Option<&Path>) -> Result<Settings, String> {
    match path {
        None => Ok(Settings::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", p.display()))
        }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<(), String> {
        match (self.potential.as_str(), &self.potential_file) {
            ("barrier", None) => {}
            ("barrier", Some(_)) => return Err("potential_file given with potential=barrier; choose one source".into()),
            ("file", Some(_)) => {}
            ("file", None) => return Err("potential=file needs potential_file".into()),
            (other, _) => return Err(format!("unknown potential kind '{other}'")),
        }
        let positive = [("range", self.range), ("ell", self.ell), ("lambda", self.lambda), ("tol", self.tol)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be > 0, got {v}"));
            }
        }
        let non_negative = [("v0", self.v0), ("rho", self.rho), ("temp", self.temp), ("n", self.n), ("q", self.q)];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(format!("{name} must be >= 0, got {v}"));
            }
        }
        if let Some(a) = self.a {
            if !(a > 0.0 && a.is_finite()) {
                return Err(format!("a must be > 0, got {a}"));
            }
        }
        if !matches!(self.hamiltonian.as_str(), "bog" | "full") {
            return Err(format!("unknown hamiltonian '{}'", self.hamiltonian));
        }
        Ok(())
    }

    pub fn radial_potential(&self) -> bosegas::Result<RadialPotential> {
        match &self.potential_file {
            Some(p) => RadialPotential::from_file(p),
            None => RadialPotential::barrier(self.v0, self.range),
        }
    }
}

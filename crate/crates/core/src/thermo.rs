//! LHY free energy in the thermodynamic limit, the box parameter schedule and
//! the localization lower-bound assembly.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::bogoliubov::lhy_coefficient;
use crate::error::{Error, Result};
use crate::quadrature::adaptive_pieces;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThermoParams {
    pub rho: f64,
    pub a: f64,
    pub temperature: f64,
}

impl ThermoParams {
    pub fn new(rho: f64, a: f64, temperature: f64) -> Result<Self> {
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::InvalidParameters(format!("density {rho} must be >= 0")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameters(format!("scattering length {a} must be > 0")));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::InvalidParameters(format!("temperature {temperature} must be >= 0")));
        }
        Ok(Self { rho, a, temperature })
    }

    /// ρ𝔞³
    pub fn y(&self) -> f64 {
        self.rho * self.a.powi(3)
    }

    /// T𝔞²
    pub fn ta2(&self) -> f64 {
        self.temperature * self.a * self.a
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LhyReport {
    pub leading: f64,
    pub lhy_correction: f64,
    pub thermal: f64,
    pub total: f64,
    pub thermal_tail: f64,
}

/// ∫₀^∞ u² log(1 − e^{−√(u⁴+q u²)}) du and a bound on the part beyond u = 40.
pub fn thermal_radial_integral(q: f64) -> (f64, f64) {
    let f = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let u2 = u * u;
        let x = (u2 * u2 + q * u2).sqrt();
        u2 * (-(-x).exp()).ln_1p()
    };
    let v = adaptive_pieces(f, &[0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 40.0], 0.0, 1e-14).value;
    // |log(1−e^{−x})| ≤ 2e^{−u²} beyond u = 1, and ∫_U^∞ u²e^{−u²} ≤ U e^{−U²}
    let tail = 2.0 * 40.0 * (-1600.0f64).exp();
    (v, tail)
}

/// 4π𝔞ρ²(1 + (128/(15√π))√(ρ𝔞³)) + T^{5/2}(2π)⁻³∫ log(1 − e^{−√(p⁴+16πρ𝔞p²/T)}) dp
pub fn lhy_free_energy(tp: &ThermoParams) -> LhyReport {
    let leading = 4.0 * PI * tp.a * tp.rho * tp.rho;
    let lhy_correction = leading * lhy_coefficient() * tp.y().sqrt();
    let (thermal, thermal_tail) = if tp.temperature == 0.0 {
        (0.0, 0.0)
    } else {
        let t = tp.temperature;
        let q = 16.0 * PI * tp.rho * tp.a / t;
        let (i, tail) = thermal_radial_integral(q);
        let pre = t.powf(2.5) / (2.0 * PI).powi(3) * 4.0 * PI;
        (pre * i, pre * tail)
    };
    LhyReport {
        leading,
        lhy_correction,
        thermal,
        total: leading + lhy_correction + thermal,
        thermal_tail,
    }
}

/// Ground-state energy density 4π𝔞ρ² + (512√π/15)(𝔞ρ)^{5/2}.
pub fn ground_state_density(rho: f64, a: f64) -> f64 {
    4.0 * PI * a * rho * rho + 512.0 * PI.sqrt() / 15.0 * (a * rho).powf(2.5)
}

/// |lhy_free_energy at T = 0 − ground-state density|, relative.
pub fn consistency_zero_t(tp: &ThermoParams) -> f64 {
    let zero = ThermoParams { temperature: 0.0, ..*tp };
    let f = lhy_free_energy(&zero).total;
    let e = ground_state_density(tp.rho, tp.a);
    if e == 0.0 {
        f.abs()
    } else {
        (f - e).abs() / e.abs()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Constraint {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParameterSchedule {
    pub kappa: f64,
    pub nu: f64,
    pub ell: f64,
    pub lambda: f64,
    pub delta: f64,
    /// typical particle number ρℓ³
    pub n_typical: f64,
    pub m_cut: f64,
    pub m0: f64,
    pub mu: f64,
    pub n0: usize,
    pub constraints: Vec<Constraint>,
}

pub const KAPPA: f64 = 1.0 / 1000.0;

pub fn schedule(tp: &ThermoParams, range: f64) -> Result<ParameterSchedule> {
    let y = tp.y();
    if !(y > 0.0) {
        return Err(Error::InvalidParameters("schedule needs ρ𝔞³ > 0".into()));
    }
    let k = KAPPA;
    let ell = tp.a * y.powf(-0.5 - k);
    let lambda = y.powf(10.0 * k);
    let delta = y.powf(3.0 * k);
    let n = tp.rho * ell.powi(3);
    let n0 = (20.0 * n).floor() as usize;
    let constraints = vec![
        Constraint {
            name: "2R/ell < lambda",
            value: 2.0 * range / ell,
            bound: lambda,
            holds: 2.0 * range / ell < lambda,
        },
        Constraint {
            name: "lambda < 1/4",
            value: lambda,
            bound: 0.25,
            holds: lambda < 0.25,
        },
        Constraint {
            name: "lambda (n0/ell)^2 <= 1",
            value: lambda * (n0 as f64 / ell).powi(2),
            bound: 1.0,
            holds: lambda * (n0 as f64 / ell).powi(2) <= 1.0,
        },
    ];
    Ok(ParameterSchedule {
        kappa: k,
        nu: k / 5.0,
        ell,
        lambda,
        delta,
        n_typical: n,
        m_cut: n.powf(1.0 - 68.0 * k),
        m0: n.powf(1.0 - 80.0 * k),
        mu: 8.0 * PI * tp.a * tp.rho,
        n0,
        constraints,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GeometricTail {
    pub theta: f64,
    pub sum: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinearGrowth {
    pub min_increment: f64,
    pub required: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssemblyReport {
    pub bound: f64,
    pub n_cap: usize,
    pub minimizer: usize,
    /// the bound restricted to n ≤ n₀
    pub small_n_branch: f64,
    /// the bound restricted to n > n₀ (+∞ if empty)
    pub large_n_branch: f64,
    pub geometric_tail: Option<GeometricTail>,
    pub linear_growth: Option<LinearGrowth>,
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

pub const N_GRID_CAP: usize = 1_000_000;

/// −(T/ℓ³) log Σ_n e^{−(F(n)−μn)/T} + μρ over n = 0..min(40ρℓ³, 10⁶); the
/// minimum over n at T = 0.
pub fn box_assembly<F>(tp: &ThermoParams, ell: f64, mu: f64, n0: usize, provider: F) -> Result<AssemblyReport>
where
    F: Fn(usize) -> f64 + Sync,
{
    let vol = ell.powi(3);
    let n_max = 40.0 * tp.rho * vol;
    if !(n_max >= 1.0) {
        return Err(Error::InvalidParameters("empty particle-number range (40ρℓ³ < 1)".into()));
    }
    let n_cap = (n_max.ceil() as usize).min(N_GRID_CAP);
    let g: Vec<f64> = (0..=n_cap).into_par_iter().map(|n| provider(n) - mu * n as f64).collect();
    let minimizer = (0..=n_cap).min_by(|&i, &j| g[i].total_cmp(&g[j])).unwrap();
    let split = (n0 + 1).min(g.len());
    let (small, large) = g.split_at(split);
    let branch = |xs: &[f64]| -> f64 {
        if xs.is_empty() {
            return f64::INFINITY;
        }
        if tp.temperature == 0.0 {
            xs.iter().cloned().fold(f64::INFINITY, f64::min) / vol + mu * tp.rho
        } else {
            let e: Vec<f64> = xs.iter().map(|x| -x / tp.temperature).collect();
            -tp.temperature / vol * log_sum_exp(&e) + mu * tp.rho
        }
    };
    let bound = branch(&g);
    let geometric_tail = (tp.temperature > 0.0 && tp.rho > 0.0).then(|| {
        let theta = PI / 20.0 * tp.rho * tp.a / tp.temperature;
        let sum: f64 = ((n0 + 1)..=n_cap).map(|n| (-theta * n as f64).exp()).sum();
        let bound = (-theta * n0 as f64).exp() / theta;
        GeometricTail {
            theta,
            sum,
            bound,
            holds: sum <= bound,
        }
    });
    let linear_growth = (n0 < n_cap).then(|| {
        let required = PI / 20.0 * tp.rho * tp.a;
        let min_increment = ((n0 + 1)..=n_cap).map(|n| g[n] - g[n - 1]).fold(f64::INFINITY, f64::min);
        LinearGrowth {
            min_increment,
            required,
            holds: min_increment >= required,
        }
    });
    Ok(AssemblyReport {
        bound,
        n_cap,
        minimizer,
        small_n_branch: branch(small),
        large_n_branch: branch(large),
        geometric_tail,
        linear_growth,
    })
}

/// `box_assembly` with ℓ, μ and n₀ taken from a schedule.
pub fn assemble<F>(tp: &ThermoParams, s: &ParameterSchedule, provider: F) -> Result<AssemblyReport>
where
    F: Fn(usize) -> f64 + Sync,
{
    box_assembly(tp, s.ell, s.mu, s.n0, provider)
}

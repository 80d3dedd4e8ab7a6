//! Zero-energy s-wave scattering, the truncated solution ω_{ℓ,λ} and the
//! renormalized potential ε_{ℓ,λ}.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PotentialKind {
    Barrier { v0: f64, radius: f64 },
    Tabulated { samples: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialPotential {
    pub kind: PotentialKind,
    pub range: f64,
    pub l1_norm: f64,
}

impl RadialPotential {
    pub fn barrier(v0: f64, radius: f64) -> Result<Self> {
        if !(v0.is_finite() && v0 >= 0.0) {
            return Err(Error::InvalidPotential(format!("barrier height {v0} must be finite and non-negative")));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidPotential(format!("barrier radius {radius} must be positive")));
        }
        Ok(Self {
            kind: PotentialKind::Barrier { v0, radius },
            range: radius,
            l1_norm: 4.0 * PI * v0 * radius.powi(3) / 3.0,
        })
    }

    /// Piecewise-linear potential through `samples` (r, V). Negative values are
    /// clamped to zero.
    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidPotential("need at least two samples".into()));
        }
        if samples[0].0 < 0.0 {
            return Err(Error::InvalidPotential("first radius must be >= 0".into()));
        }
        if samples.iter().any(|(r, v)| !r.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidPotential("non-finite sample".into()));
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidPotential("radii must be strictly increasing".into()));
        }
        let mut samples = samples;
        let mut clamped = 0;
        for s in samples.iter_mut() {
            if s.1 < 0.0 {
                s.1 = 0.0;
                clamped += 1;
            }
        }
        if clamped > 0 {
            warn!("tabulated potential: {clamped} negative samples clamped to 0");
        }
        if samples.last().unwrap().1 != 0.0 {
            return Err(Error::InvalidPotential("last sample value must be 0".into()));
        }
        if samples.windows(2).any(|w| w[1].1 > w[0].1) {
            warn!("tabulated potential is not non-increasing");
        }
        let mut k = samples.len() - 1;
        while k > 0 && samples[k - 1].1 == 0.0 {
            k -= 1;
        }
        let range = samples[k].0;
        let mut pot = Self {
            kind: PotentialKind::Tabulated { samples },
            range,
            l1_norm: 0.0,
        };
        let gl = GaussLegendre::new(4);
        let brk = pot.breakpoints();
        let mut l1 = 0.0;
        for (i, w) in brk.windows(2).enumerate() {
            l1 += gl.integrate(w[0], w[1], |r| pot.value_in_piece(i, r) * r * r);
        }
        pot.l1_norm = 4.0 * PI * l1;
        Ok(pot)
    }

    /// Two-column text table; '#' starts a comment, columns split on
    /// whitespace or commas.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if cols.len() != 2 {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected 2 columns, found {}", cols.len()),
                });
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: format!("{s:?}: {e}"),
                })
            };
            samples.push((parse(cols[0])?, parse(cols[1])?));
        }
        Self::tabulated(samples)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_table(&std::fs::read_to_string(path)?)
    }

    /// V_ℓ(r) = ℓ² V(ℓ r).
    pub fn scaled(&self, ell: f64) -> Result<Self> {
        match &self.kind {
            PotentialKind::Barrier { v0, radius } => Self::barrier(v0 * ell * ell, radius / ell),
            PotentialKind::Tabulated { samples } => {
                Self::tabulated(samples.iter().map(|&(r, v)| (r / ell, v * ell * ell)).collect())
            }
        }
    }

    /// Radii in [0, R] between which V is a polynomial.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            PotentialKind::Barrier { radius, .. } => vec![0.0, *radius],
            PotentialKind::Tabulated { samples } => {
                let mut b = Vec::new();
                if samples[0].0 > 0.0 {
                    b.push(0.0);
                }
                b.extend(samples.iter().map(|s| s.0).take_while(|&r| r <= self.range));
                if b.len() < 2 {
                    b = vec![0.0, self.range];
                }
                b
            }
        }
    }

    /// V on piece `i` of `breakpoints()`, extended polynomially to the piece
    /// endpoints (left/right limits at jumps).
    pub fn value_in_piece(&self, i: usize, r: f64) -> f64 {
        match &self.kind {
            PotentialKind::Barrier { v0, .. } => *v0,
            PotentialKind::Tabulated { samples } => {
                let offset = usize::from(samples[0].0 > 0.0);
                if i < offset {
                    return samples[0].1;
                }
                let j = i - offset;
                let (r0, v0) = samples[j];
                let (r1, v1) = samples[(j + 1).min(samples.len() - 1)];
                if r1 <= r0 {
                    return v0;
                }
                v0 + (v1 - v0) * (r - r0) / (r1 - r0)
            }
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        if r > self.range {
            return 0.0;
        }
        let b = self.breakpoints();
        let i = b.partition_point(|&x| x <= r).saturating_sub(1).min(b.len() - 2);
        self.value_in_piece(i, r).max(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.l1_norm == 0.0
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub step: f64,
    pub max_radius: f64,
}

impl GridSpec {
    pub fn default_for(v: &RadialPotential) -> Self {
        Self {
            step: v.range / 64.0,
            max_radius: 3.0 * v.range,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScatteringSolution {
    pub grid: Vec<f64>,
    pub g: Vec<f64>,
    #[serde(skip)]
    pub dg: Vec<f64>,
    pub a: f64,
    pub slope_alpha: f64,
    pub residual: f64,
    pub range: f64,
    /// Final step size after refinement.
    pub step: f64,
    #[serde(skip)]
    free: bool,
}

const A_TOL: f64 = 1e-10;

pub fn solve_zero_energy(v: &RadialPotential, spec: GridSpec) -> Result<ScatteringSolution> {
    if !(spec.step > 0.0 && spec.max_radius > v.range) {
        return Err(Error::InvalidParameters(format!(
            "grid needs step > 0 and max radius {} > range {}",
            spec.max_radius, v.range
        )));
    }
    if v.is_zero() {
        let n = (spec.max_radius / spec.step).ceil() as usize;
        let grid: Vec<f64> = (0..=n).map(|i| spec.max_radius * i as f64 / n as f64).collect();
        return Ok(ScatteringSolution {
            g: grid.clone(),
            dg: vec![1.0; grid.len()],
            grid,
            a: 0.0,
            slope_alpha: 1.0,
            residual: 0.0,
            range: v.range,
            step: spec.step,
            free: true,
        });
    }
    let mut h = spec.step;
    let mut prev: Option<f64> = None;
    let mut last_diff = f64::INFINITY;
    for _ in 0..22 {
        let sol = integrate(v, h, spec.max_radius);
        if let Some(p) = prev {
            last_diff = (sol.a - p).abs();
            if last_diff < A_TOL {
                return Ok(sol);
            }
        }
        prev = Some(sol.a);
        h *= 0.5;
    }
    Err(Error::NonConvergence {
        what: "scattering step refinement",
        achieved: last_diff,
        target: A_TOL,
    })
}

fn integrate(v: &RadialPotential, h: f64, max_radius: f64) -> ScatteringSolution {
    let mut brk = v.breakpoints();
    brk.push(max_radius);
    let npieces = brk.len() - 2;
    let mut grid = vec![0.0];
    let mut g = vec![0.0];
    let mut dg = vec![1.0];
    let (mut y, mut dy) = (0.0, 1.0);
    for (i, w) in brk.windows(2).enumerate() {
        let len = w[1] - w[0];
        if len <= 0.0 {
            continue;
        }
        let n = (len / h).ceil().max(1.0) as usize;
        let s = len / n as f64;
        let pot = |r: f64| if i < npieces { 0.5 * v.value_in_piece(i, r) } else { 0.0 };
        for k in 0..n {
            let r = w[0] + k as f64 * s;
            let (q0, q1, q2) = (pot(r), pot(r + 0.5 * s), pot(r + s));
            let k1y = dy;
            let k1d = q0 * y;
            let k2y = dy + 0.5 * s * k1d;
            let k2d = q1 * (y + 0.5 * s * k1y);
            let k3y = dy + 0.5 * s * k2d;
            let k3d = q1 * (y + 0.5 * s * k2y);
            let k4y = dy + s * k3d;
            let k4d = q2 * (y + s * k3y);
            y += s / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            dy += s / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
            grid.push(if k + 1 == n { w[1] } else { w[0] + (k + 1) as f64 * s });
            g.push(y);
            dg.push(dy);
        }
    }
    // exterior least squares on [R + δ, 3R]
    let r_hi = (3.0 * v.range).min(max_radius);
    let mut idx: Vec<usize> = (0..grid.len())
        .filter(|&i| grid[i] >= v.range + h * (1.0 - 1e-9) && grid[i] <= r_hi * (1.0 + 1e-12))
        .collect();
    if idx.len() < 2 {
        idx = (0..grid.len()).filter(|&i| grid[i] >= v.range).collect();
    }
    let m = idx.len() as f64;
    let mx = idx.iter().map(|&i| grid[i]).sum::<f64>() / m;
    let my = idx.iter().map(|&i| g[i]).sum::<f64>() / m;
    let sxy: f64 = idx.iter().map(|&i| (grid[i] - mx) * (g[i] - my)).sum();
    let sxx: f64 = idx.iter().map(|&i| (grid[i] - mx).powi(2)).sum();
    let alpha = sxy / sxx;
    let beta = my - alpha * mx;
    let a = -beta / alpha;
    for x in g.iter_mut() {
        *x /= alpha;
    }
    for x in dg.iter_mut() {
        *x /= alpha;
    }
    let residual = idx
        .iter()
        .map(|&i| (g[i] - (grid[i] - a)).abs())
        .fold(0.0, f64::max)
        / v.range;
    ScatteringSolution {
        grid,
        g,
        dg,
        a,
        slope_alpha: alpha,
        residual,
        range: v.range,
        step: h,
        free: false,
    }
}

impl ScatteringSolution {
    fn cell(&self, r: f64) -> usize {
        self.grid
            .partition_point(|&x| x <= r)
            .saturating_sub(1)
            .min(self.grid.len() - 2)
    }

    /// Cubic Hermite interpolant of g.
    pub fn g_at(&self, r: f64) -> f64 {
        if r >= self.range && self.range > 0.0 {
            return r - self.a;
        }
        let i = self.cell(r);
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.g[i]
            + (t3 - 2.0 * t2 + t) * h * self.dg[i]
            + (-2.0 * t3 + 3.0 * t2) * self.g[i + 1]
            + (t3 - t2) * h * self.dg[i + 1]
    }

    pub fn omega(&self, r: f64) -> f64 {
        if self.free {
            return 0.0;
        }
        if r >= self.range {
            return if r > 0.0 { self.a / r } else { 0.0 };
        }
        if r <= 0.0 {
            return 1.0 - self.dg[0];
        }
        1.0 - self.g_at(r) / r
    }

    /// (8π)⁻¹ ∫ V(1−ω) dx, integrated cell by cell on the solver grid.
    pub fn quadrature_scattering_length(&self, v: &RadialPotential) -> f64 {
        if v.is_zero() {
            return 0.0;
        }
        let gl = GaussLegendre::new(5);
        let brk = v.breakpoints();
        let mut total = 0.0;
        for i in 0..self.grid.len() - 1 {
            let (lo, hi) = (self.grid[i], self.grid[i + 1]);
            if lo >= v.range {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let piece = brk.partition_point(|&x| x <= mid).saturating_sub(1).min(brk.len() - 2);
            total += gl.integrate(lo, hi, |r| v.value_in_piece(piece, r) * self.g_at(r) * r);
        }
        // ∫V(1−ω)dx = 4π∫V g r dr
        4.0 * PI * total / (8.0 * PI)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScatteringLength {
    pub a: f64,
    pub a_quadrature: f64,
}

pub fn scattering_length(v: &RadialPotential) -> Result<ScatteringLength> {
    let sol = solve_zero_energy(v, GridSpec::default_for(v))?;
    Ok(ScatteringLength {
        a: sol.a,
        a_quadrature: sol.quadrature_scattering_length(v),
    })
}

/// Barrier closed form R − tanh(κR)/κ, κ = √(V₀/2).
pub fn barrier_scattering_length(v0: f64, radius: f64) -> f64 {
    if v0 == 0.0 {
        return 0.0;
    }
    let k = (0.5 * v0).sqrt();
    radius - (k * radius).tanh() / k
}

/// C² cutoff χ: 1 on [0, ½], quintic smoothstep down to 0 on [½, 1].
#[derive(Debug, Clone, Serialize)]
pub struct CutoffProfile {
    /// Coefficients of S(t) = Σ c_k t^k with t = 2s − 1, χ = 1 − S.
    pub coeffs: [f64; 6],
}

impl Default for CutoffProfile {
    fn default() -> Self {
        Self {
            coeffs: [0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
        }
    }
}

impl CutoffProfile {
    fn poly(&self, t: f64, deriv: usize) -> f64 {
        let mut acc = 0.0;
        for k in (deriv..6).rev() {
            let mut c = self.coeffs[k];
            for j in 0..deriv {
                c *= (k - j) as f64;
            }
            acc = acc * t + c;
        }
        acc
    }

    pub fn value(&self, s: f64) -> f64 {
        if s <= 0.5 {
            1.0
        } else if s >= 1.0 {
            0.0
        } else {
            1.0 - self.poly(2.0 * s - 1.0, 0)
        }
    }

    pub fn d1(&self, s: f64) -> f64 {
        if s <= 0.5 || s >= 1.0 {
            0.0
        } else {
            -2.0 * self.poly(2.0 * s - 1.0, 1)
        }
    }

    pub fn d2(&self, s: f64) -> f64 {
        if s <= 0.5 || s >= 1.0 {
            0.0
        } else {
            -4.0 * self.poly(2.0 * s - 1.0, 2)
        }
    }

    /// ∫₀¹ χ″(s) s ds, equal to 1.
    pub fn normalization(&self) -> f64 {
        GaussLegendre::new(8).integrate(0.5, 1.0, |s| self.d2(s) * s)
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// ω_ℓ truncated at radius λ together with ε_{ℓ,λ}.
#[derive(Debug, Clone, Serialize)]
pub struct ModifiedScattering {
    pub a: f64,
    pub ell: f64,
    pub lambda: f64,
    pub range: f64,
    pub profile: CutoffProfile,
    #[serde(skip)]
    pub solution: Arc<ScatteringSolution>,
    #[serde(skip)]
    breaks: Vec<f64>,
}

impl ModifiedScattering {
    pub fn new(v: &RadialPotential, solution: Arc<ScatteringSolution>, ell: f64, lambda: f64) -> Result<Self> {
        let r = v.range;
        if !(ell > 0.0 && 2.0 * r / ell < lambda && lambda < 0.25) {
            return Err(Error::InvalidParameters(format!(
                "need 2R/ℓ < λ < 1/4, got 2R/ℓ = {}, λ = {lambda}",
                2.0 * r / ell
            )));
        }
        let mut breaks: Vec<f64> = v.breakpoints().iter().map(|b| b / ell).collect();
        breaks.extend([0.5 * lambda, lambda]);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
        Ok(Self {
            a: solution.a,
            ell,
            lambda,
            range: r,
            profile: CutoffProfile::default(),
            solution,
            breaks,
        })
    }

    /// Solve the scattering problem for `v` with the default grid.
    pub fn from_potential(v: &RadialPotential, ell: f64, lambda: f64) -> Result<Self> {
        let sol = solve_zero_energy(v, GridSpec::default_for(v))?;
        Self::new(v, Arc::new(sol), ell, lambda)
    }

    /// ω(ℓ r)
    pub fn omega_ell(&self, r: f64) -> f64 {
        self.solution.omega(self.ell * r)
    }

    /// ω_{ℓ,λ}(r) = ω(ℓ r) χ(r/λ)
    pub fn omega_ell_lambda(&self, r: f64) -> f64 {
        if r >= self.lambda {
            return 0.0;
        }
        self.omega_ell(r) * self.profile.value(r / self.lambda)
    }

    /// Radii where ω_{ℓ,λ} is not smooth, from 0 to λ.
    pub fn radial_breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn epsilon(&self, r: f64) -> f64 {
        let s = r / self.lambda;
        if !(0.5..=1.0).contains(&s) {
            return 0.0;
        }
        2.0 * self.a / self.ell * self.lambda.powi(-3) * self.profile.d2(s) / s
    }

    /// ∫ε dx by radial quadrature of ε itself.
    pub fn epsilon_integral(&self) -> f64 {
        let gl = GaussLegendre::new(12);
        4.0 * PI * gl.composite(&[0.5 * self.lambda, self.lambda], 4, |r| self.epsilon(r) * r * r)
    }

    pub fn epsilon_hat(&self, p: f64) -> f64 {
        // 4π∫ε r sin(pr)/p dr, written in s = r/λ
        let u = self.lambda * p;
        let gl = GaussLegendre::new(16);
        let panels = (u / 4.0).ceil().max(1.0) as usize;
        let integral = gl.composite(&[0.5, 1.0], panels, |s| self.profile.d2(s) * s * sinc(u * s));
        8.0 * PI * self.a / self.ell * integral
    }

    pub fn omega_hat(&self, p: f64) -> f64 {
        let gl = GaussLegendre::new(20);
        let mut total = 0.0;
        for w in self.breaks.windows(2) {
            let len = w[1] - w[0];
            if len <= 0.0 {
                continue;
            }
            let panels = (p * len / 2.0).ceil().max(2.0) as usize;
            total += gl.composite(&[w[0], w[1]], panels, |r| self.omega_ell_lambda(r) * r * r * sinc(p * r));
        }
        4.0 * PI * total
    }

    /// (p, ε̂(p), ω̂(p)) on a momentum grid.
    pub fn tabulate(&self, ps: &[f64]) -> Vec<(f64, f64, f64)> {
        ps.iter().map(|&p| (p, self.epsilon_hat(p), self.omega_hat(p))).collect()
    }
}

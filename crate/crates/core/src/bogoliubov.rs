//! Bogoliubov coefficients and dispersion, the lattice ground-state energy
//! E_{n,ℓ}, the thermal box sum and the box free energy f_Bog.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::neumann_box::{ModeLattice, NeumannMode};
use crate::quadrature::{adaptive, adaptive_pieces, GaussLegendre};
use crate::scattering::{ModifiedScattering, RadialPotential};

/// 128/(15√π)
pub fn lhy_coefficient() -> f64 {
    128.0 / (15.0 * PI.sqrt())
}

/// Largest exponent kept in e^{−x} before it underflows.
pub const UNDERFLOW_EXPONENT: f64 = 746.0;

/// Number of m ∈ ℕ₀³ with |m|² = k, for k ≤ k_max.
#[derive(Debug)]
pub struct ShellCounts {
    counts: Vec<u32>,
}

impl ShellCounts {
    pub fn new(k_max: usize) -> Self {
        let mut counts = vec![0u32; k_max + 1];
        let mut a = 0usize;
        while a * a <= k_max {
            let mut b = 0usize;
            while a * a + b * b <= k_max {
                let rest = k_max - a * a - b * b;
                let base = a * a + b * b;
                let mut c = 0usize;
                while c * c <= rest {
                    counts[base + c * c] += 1;
                    c += 1;
                }
                b += 1;
            }
            a += 1;
        }
        Self { counts }
    }

    pub fn k_max(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, k: usize) -> u32 {
        self.counts[k]
    }

    /// Σ_{1 ≤ k ≤ k_hi} count(k)·f(k), summed in blocks of fixed size so the
    /// result does not depend on the thread count.
    pub fn sum<F: Fn(usize) -> f64 + Sync>(&self, k_hi: usize, f: F) -> f64 {
        let k_hi = k_hi.min(self.k_max());
        const BLOCK: usize = 4096;
        let nblocks = k_hi.div_ceil(BLOCK);
        let partial: Vec<f64> = (0..nblocks)
            .into_par_iter()
            .map(|b| {
                let lo = 1 + b * BLOCK;
                let hi = (lo + BLOCK - 1).min(k_hi);
                let mut s = 0.0;
                for k in lo..=hi {
                    let c = self.counts[k];
                    if c != 0 {
                        s += c as f64 * f(k);
                    }
                }
                s
            })
            .collect();
        partial.iter().sum()
    }
}

const SHELL_LIMIT: usize = 50_000_000;

/// Shared shell-count table covering at least `k_max`.
pub fn shell_counts(k_max: usize) -> Result<Arc<ShellCounts>> {
    if k_max > SHELL_LIMIT {
        return Err(Error::InvalidParameters(format!(
            "lattice sum needs |m|² up to {k_max}, above the limit {SHELL_LIMIT}"
        )));
    }
    static CACHE: OnceLock<RwLock<Arc<ShellCounts>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(Arc::new(ShellCounts::new(4096))));
    {
        let c = cache.read().unwrap();
        if c.k_max() >= k_max {
            return Ok(c.clone());
        }
    }
    let mut c = cache.write().unwrap();
    if c.k_max() < k_max {
        let target = k_max.max(2 * c.k_max()).min(SHELL_LIMIT);
        *c = Arc::new(ShellCounts::new(target));
    }
    Ok(c.clone())
}

#[derive(Debug, Clone)]
pub struct BogParams {
    pub n: f64,
    pub ell: f64,
    pub a: f64,
    pub lambda: f64,
    pub temperature: f64,
    pub density_ratio: f64,
    pub ms: Arc<ModifiedScattering>,
}

impl BogParams {
    pub fn new(n: f64, temperature: f64, ms: Arc<ModifiedScattering>) -> Result<Self> {
        if !(n >= 0.0 && n.is_finite()) {
            return Err(Error::InvalidParameters(format!("particle number {n} must be >= 0")));
        }
        if !(temperature >= 0.0) {
            return Err(Error::InvalidParameters(format!("temperature {temperature} must be >= 0")));
        }
        let (ell, lambda) = (ms.ell, ms.lambda);
        if lambda * (n / ell).powi(2) > 1.0 {
            return Err(Error::InvalidParameters(format!(
                "λ(n/ℓ)² = {} exceeds 1",
                lambda * (n / ell).powi(2)
            )));
        }
        Ok(Self {
            n,
            ell,
            a: ms.a,
            lambda,
            temperature,
            density_ratio: n * ms.a / ell,
            ms,
        })
    }

    pub fn from_potential(v: &RadialPotential, n: f64, ell: f64, lambda: f64, temperature: f64) -> Result<Self> {
        let ms = ModifiedScattering::from_potential(v, ell, lambda)?;
        Self::new(n, temperature, Arc::new(ms))
    }

    /// 8π𝔞n/ℓ
    pub fn b0(&self) -> f64 {
        8.0 * PI * self.density_ratio
    }

    pub fn coefficients(&self, p: f64) -> (f64, f64) {
        (p * p + self.b0(), self.n * self.ms.epsilon_hat(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rotation {
    pub nu: f64,
    pub phi: f64,
    pub e: f64,
}

/// ν = −√(½(A/e − 1)), φ = asinh ν, e = √(A² − B²).
pub fn rotation(a: f64, b: f64) -> Result<Rotation> {
    if !(a > b.abs()) {
        return Err(Error::DegenerateMode {
            mode: "?".into(),
            a,
            b,
        });
    }
    let e = ((a - b) * (a + b)).sqrt();
    let nu = -(0.5 * (a / e - 1.0)).max(0.0).sqrt();
    Ok(Rotation {
        nu,
        phi: nu.asinh(),
        e,
    })
}

/// √(p⁴ + 16π𝔞(n/ℓ)p²)
pub fn e_approx(p: f64, density_ratio: f64) -> f64 {
    let p2 = p * p;
    (p2 * p2 + 16.0 * PI * density_ratio * p2).sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct DispersionEntry {
    pub mode: NeumannMode,
    pub p: f64,
    pub a_p: f64,
    pub b_p: f64,
    pub nu: f64,
    pub phi: f64,
    pub e: f64,
    pub e_approx: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DispersionTable {
    pub entries: Vec<DispersionEntry>,
}

impl DispersionTable {
    pub fn new(params: &BogParams, lattice: &ModeLattice) -> Result<Self> {
        let entries = lattice
            .modes
            .par_iter()
            .filter(|m| !m.is_zero())
            .map(|m| {
                let p = m.p_norm();
                let (a, b) = params.coefficients(p);
                let r = rotation(a, b).map_err(|_| Error::DegenerateMode {
                    mode: m.to_string(),
                    a,
                    b,
                })?;
                Ok(DispersionEntry {
                    mode: *m,
                    p,
                    a_p: a,
                    b_p: b,
                    nu: r.nu,
                    phi: r.phi,
                    e: r.e,
                    e_approx: e_approx(p, params.density_ratio),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeviationReport {
    pub sup: f64,
    pub argmax_p: f64,
    /// sup / (λ²(n/ℓ)²)
    pub prefactor: f64,
}

pub fn dispersion_deviation(params: &BogParams, p_grid: &[f64]) -> Result<DeviationReport> {
    let devs: Vec<(f64, f64)> = p_grid
        .par_iter()
        .map(|&p| {
            let (a, b) = params.coefficients(p);
            let e = rotation(a, b)?.e;
            Ok((p, (e - e_approx(p, params.density_ratio)).abs()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (argmax_p, sup) = devs.iter().fold((0.0, 0.0), |acc, &(p, d)| if d > acc.1 { (p, d) } else { acc });
    let scale = params.lambda.powi(2) * (params.n / params.ell).powi(2);
    Ok(DeviationReport {
        sup,
        argmax_p,
        prefactor: if scale > 0.0 { sup / scale } else { 0.0 },
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LatticeSum {
    pub value: f64,
    pub tail_estimate: f64,
    pub cutoff: usize,
}

/// √(p⁴+2bp²) − p² − b + b²/(2p²) in a cancellation-free form.
pub fn bracket(p2: f64, b: f64) -> f64 {
    if b == 0.0 {
        return 0.0;
    }
    let s = (1.0 + 2.0 * b / p2).sqrt();
    b * b * b * (s + 3.0) / (p2 * p2 * (1.0 + s).powi(3))
}

/// C^∞ step: 1 for t ≤ ½, 0 for t ≥ 1.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.5 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let u = 2.0 * t - 1.0;
    let f = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let (a, b) = (f(1.0 - u), f(u));
    a / (a + b)
}

/// Smallest spherical mode cutoff accepted for E_{n,ℓ}.
pub fn required_cutoff(density_ratio: f64) -> usize {
    let b = 8.0 * PI * density_ratio;
    (6.0 * (2.0 * b).sqrt() / PI).ceil().max(32.0) as usize
}

fn smooth_octant_sum<G: Fn(f64) -> f64 + Sync>(g: &G, cutoff: usize) -> Result<f64> {
    let mm = cutoff as f64;
    let pc = PI * mm;
    let k_hi = cutoff * cutoff;
    let counts = shell_counts(k_hi)?;
    let direct = counts.sum(k_hi, |k| {
        let kf = k as f64;
        g(PI * PI * kf) * smooth_step(kf.sqrt() / mm)
    });
    // remainder Σ g(1−w) over ℕ₀³ by inclusion-exclusion of ℤ^d sums,
    // each replaced by its integral (the summand is smooth)
    let rem = |r: f64| g(r * r) * (1.0 - smooth_step(r / pc));
    let radial = |j: i32| {
        let inner = adaptive(|r| rem(r) * r.powi(j), 0.5 * pc, pc, 0.0, 1e-14).value;
        let outer = adaptive(
            |t| {
                if t <= 0.0 {
                    return 0.0;
                }
                let r = pc / t;
                g(r * r) * r.powi(j) * pc / (t * t)
            },
            0.0,
            1.0,
            0.0,
            1e-14,
        )
        .value;
        inner + outer
    };
    let vol = 4.0 * PI * radial(2) / PI.powi(3);
    let planes = 3.0 * 2.0 * PI * radial(1) / PI.powi(2);
    let axes = 3.0 * 2.0 * radial(0) / PI;
    Ok(direct + (vol + planes + axes) / 8.0)
}

/// E_{n,ℓ} = 4π𝔞n²/ℓ + ½Σ_{p∈πℕ₀³∖0} bracket(p², 8π𝔞n/ℓ).
pub fn ground_energy(n: f64, ell: f64, a: f64, cutoff: Option<usize>) -> Result<LatticeSum> {
    let c = a * n / ell;
    let required = required_cutoff(c);
    let cutoff = cutoff.unwrap_or(required.max(40));
    if cutoff < required {
        return Err(Error::CutoffTooSmall { given: cutoff, required });
    }
    let b = 8.0 * PI * c;
    let lead = 4.0 * PI * a * n * n / ell;
    if b == 0.0 {
        return Ok(LatticeSum {
            value: lead,
            tail_estimate: 0.0,
            cutoff,
        });
    }
    let g = |p2: f64| bracket(p2, b);
    let s = smooth_octant_sum(&g, cutoff)?;
    let s_half = smooth_octant_sum(&g, (cutoff / 2).max(1))?;
    Ok(LatticeSum {
        value: lead + 0.5 * s,
        tail_estimate: 0.5 * (s - s_half).abs() + 1e-13 * s.abs(),
        cutoff,
    })
}

pub fn lhy_closed(n: f64, ell: f64, a: f64) -> f64 {
    let c = a * n / ell;
    4.0 * PI * a * n * n / ell + 4.0 * PI * lhy_coefficient() * c.powf(2.5)
}

/// ½∫_{ℝ³_{≥0}} g with g(p) = √(p⁴+16p²) − 8 − p² + 32/p².
pub fn lhy_half_space_integral() -> f64 {
    let g = |r: f64| if r == 0.0 { 32.0 } else { bracket(r * r, 8.0) * r * r };
    let inner = adaptive_pieces(g, &[0.0, 1.0, 5.0, 50.0], 0.0, 1e-14).value;
    let outer = adaptive(
        |t| if t <= 0.0 { 0.0 } else { g(50.0 / t) * 50.0 / (t * t) },
        0.0,
        1.0,
        0.0,
        1e-14,
    )
    .value;
    // octant = 1/8 of 4π∫ r² dr
    0.5 * 0.5 * PI * (inner + outer)
}

fn thermal_k_max(b: f64, t_ell2: f64) -> usize {
    let x = UNDERFLOW_EXPONENT * t_ell2;
    let p2 = -b + (b * b + x * x).sqrt();
    (p2 / (PI * PI)).floor() as usize
}

/// f^th = T Σ_{p≠0} log(1 − e^{−√(p⁴+16π𝔞(n/ℓ)p²)/(Tℓ²)}).
pub fn thermal_free_energy(n: f64, ell: f64, a: f64, temperature: f64) -> Result<LatticeSum> {
    if temperature == 0.0 {
        return Ok(LatticeSum {
            value: 0.0,
            tail_estimate: 0.0,
            cutoff: 0,
        });
    }
    let b = 8.0 * PI * a * n / ell;
    let t_ell2 = temperature * ell * ell;
    let k_hi = thermal_k_max(b, t_ell2);
    let counts = shell_counts(k_hi)?;
    let s = counts.sum(k_hi, |k| {
        let p2 = PI * PI * k as f64;
        let x = (p2 * p2 + 2.0 * b * p2).sqrt() / t_ell2;
        (-(-x).exp()).ln_1p()
    });
    Ok(LatticeSum {
        value: temperature * s,
        tail_estimate: 0.0,
        cutoff: (k_hi as f64).sqrt() as usize,
    })
}

/// 8π(𝔞/ℓ³)|n − n_ref| Σ_{p≠0} (e^{p²/(Tℓ²)} − 1)⁻¹, a majorant for
/// |f^th(n) − f^th(n_ref)|.
pub fn thermal_taylor_majorant(n: f64, n_ref: f64, ell: f64, a: f64, temperature: f64) -> Result<f64> {
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let t_ell2 = temperature * ell * ell;
    let k_hi = thermal_k_max(0.0, t_ell2);
    let counts = shell_counts(k_hi)?;
    let s = counts.sum(k_hi, |k| 1.0 / (PI * PI * k as f64 / t_ell2).exp_m1());
    Ok(8.0 * PI * a / ell.powi(3) * (n - n_ref).abs() * s)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoxFreeEnergy {
    /// 4π(𝔞/ℓ³)n²(1 + (128/(15√π))√(n𝔞³/ℓ³)), the closed LHY form.
    pub ground: f64,
    /// E_{n,ℓ}/ℓ² from the lattice sum, when requested.
    pub ground_lattice: Option<f64>,
    pub thermal: f64,
    pub total: f64,
    pub tail_estimate: f64,
}

/// f_Bog(n, ℓ) in physical units (box energies divided by ℓ²).
pub fn f_bog(n: f64, ell: f64, a: f64, temperature: f64, with_lattice: bool) -> Result<BoxFreeEnergy> {
    let ground = lhy_closed(n, ell, a) / (ell * ell);
    let th = thermal_free_energy(n, ell, a, temperature)?;
    let (ground_lattice, tail) = if with_lattice {
        let e = ground_energy(n, ell, a, None)?;
        (Some(e.value / (ell * ell)), e.tail_estimate / (ell * ell))
    } else {
        (None, 0.0)
    };
    Ok(BoxFreeEnergy {
        ground,
        ground_lattice,
        thermal: th.value,
        total: ground + th.value,
        tail_estimate: tail + th.tail_estimate,
    })
}

fn exact_summand(params: &BogParams, p: f64) -> f64 {
    // ½[e − A + B²/(2p²)] = ½B²[1/(2p²) − 1/(A+e)]
    let (a, b) = params.coefficients(p);
    let p2 = p * p;
    let e = ((a - b) * (a + b)).sqrt();
    let e_minus_p2 = (params.b0() * (a + p2) - b * b) / (e + p2);
    let num = params.b0() + e_minus_p2;
    0.5 * b * b * num / (2.0 * p2 * (a + e))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EBogDeviation {
    pub e_bog: f64,
    pub bracket_sum: f64,
    pub deviation: f64,
    pub tail_estimate: f64,
}

/// e_Bog = ½Σ[e_p − A_p + B_p²/(2p²)] with the exact B_p, against the same
/// sum with B_p replaced by 8π𝔞n/ℓ.
pub fn e_bog_deviation(params: &BogParams) -> Result<EBogDeviation> {
    let c = params.density_ratio;
    if params.n == 0.0 {
        return Ok(EBogDeviation {
            e_bog: 0.0,
            bracket_sum: 0.0,
            deviation: 0.0,
            tail_estimate: 0.0,
        });
    }
    // exact summand decays like (λp)^{-6} p^{-4}; go well past p ~ 1/λ
    let cutoff = required_cutoff(c).max((40.0 / (PI * params.lambda)).ceil() as usize);
    let k_hi = cutoff * cutoff;
    let counts = shell_counts(k_hi)?;
    for k in 1..=k_hi.min(64) {
        if counts.count(k) > 0 {
            let p = PI * (k as f64).sqrt();
            let (a, b) = params.coefficients(p);
            if a <= b.abs() {
                return Err(Error::DegenerateMode {
                    mode: format!("|m|²={k}"),
                    a,
                    b,
                });
            }
        }
    }
    let e_bog = counts.sum(k_hi, |k| exact_summand(params, PI * (k as f64).sqrt()));
    let pc = PI * cutoff as f64;
    let gl = GaussLegendre::new(24);
    let tail = gl.composite(&[pc, 8.0 * pc], 8, |p| exact_summand(params, p) * p * p) / (2.0 * PI * PI);
    let ge = ground_energy(params.n, params.ell, params.a, None)?;
    let bracket_sum = ge.value - 4.0 * PI * params.a * params.n * params.n / params.ell;
    Ok(EBogDeviation {
        e_bog,
        bracket_sum,
        deviation: (e_bog - bracket_sum).abs(),
        tail_estimate: tail + ge.tail_estimate,
    })
}

/// g(p, q) = log(1 − e^{−√(p⁴+qp²)})
pub fn riemann_g(p: f64, q: f64) -> f64 {
    let p2 = p * p;
    let x = (p2 * p2 + q * p2).sqrt();
    (-(-x).exp()).ln_1p()
}

/// ∂_q g(p, q) = p²/(2x(e^x − 1)), x = √(p⁴+qp²)
pub fn riemann_g_dq(p: f64, q: f64) -> f64 {
    let p2 = p * p;
    let x = (p2 * p2 + q * p2).sqrt();
    p2 / (2.0 * x * x.exp_m1())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RiemannGap {
    pub hbar: f64,
    pub q: f64,
    pub sum: f64,
    pub integral: f64,
    pub gap: f64,
}

/// |ħ³Σ_{p∈πℕ₀³∖0} g(ħp, q) − π⁻³∫_{ℝ³_{≥0}} g(z, q) dz|
pub fn riemann_gap(hbar: f64, q: f64) -> Result<RiemannGap> {
    if !(hbar > 0.0 && q >= 0.0) {
        return Err(Error::InvalidParameters(format!("need ħ > 0 and q >= 0, got {hbar}, {q}")));
    }
    let x = UNDERFLOW_EXPONENT;
    let z2 = 0.5 * (-q + (q * q + 4.0 * x * x).sqrt());
    let k_hi = (z2 / (PI * hbar).powi(2)).floor() as usize;
    let counts = shell_counts(k_hi)?;
    let sum = hbar.powi(3) * counts.sum(k_hi, |k| riemann_g(hbar * PI * (k as f64).sqrt(), q));
    let zmax = z2.sqrt();
    let integral = adaptive_pieces(
        |r| if r == 0.0 { 0.0 } else { riemann_g(r, q) * r * r },
        &[0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, zmax.max(16.0)],
        0.0,
        1e-14,
    )
    .value
        * 0.5
        * PI
        / PI.powi(3);
    Ok(RiemannGap {
        hbar,
        q,
        sum,
        integral,
        gap: (sum - integral).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn shell_counts_small() {
        let c = ShellCounts::new(5);
        assert_eq!((0..=5).map(|k| c.count(k)).collect::<Vec<_>>(), vec![1, 3, 3, 1, 3, 6]);
    }

    #[test]
    fn rotation_examples() {
        let r = rotation(5.0, 3.0).unwrap();
        assert_eq!(r.e, 4.0);
        assert!((r.nu + (1.0f64 / 8.0).sqrt()).abs() < 1e-15);
        let r = rotation(2.0, 0.0).unwrap();
        assert_eq!((r.nu, r.phi, r.e), (0.0, 0.0, 2.0));
        assert!(rotation(1.0, 1.0).is_err());
        assert!(rotation(1.0, -2.0).is_err());
    }

    proptest! {
        #[test]
        fn rotation_signs(a in 0.1f64..100.0, frac in -0.99f64..0.99) {
            let r = rotation(a, frac * a).unwrap();
            prop_assert!(r.nu <= 0.0 && r.phi <= 0.0 && r.e > 0.0);
            // cosh²φ − sinh²φ = 1 and A·cosh 2φ relation: e = A/ cosh(2φ)·...
            prop_assert!((r.e * (1.0 + 2.0 * r.nu * r.nu) - a).abs() < 1e-10 * a);
        }

        #[test]
        fn bracket_matches_naive(p in 1.0f64..20.0, b in 0.01f64..10.0) {
            let p2 = p * p;
            let naive = (p2 * p2 + 2.0 * b * p2).sqrt() - p2 - b + b * b / (2.0 * p2);
            prop_assert!((bracket(p2, b) - naive).abs() < 1e-9 * (1.0 + naive.abs()));
        }
    }

    #[test]
    fn lhy_constant() {
        let v = lhy_half_space_integral();
        assert!((v / (512.0 * PI / 15.0) - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn ground_energy_basics() {
        assert_eq!(ground_energy(0.0, 10.0, 1.0, None).unwrap().value, 0.0);
        assert!(matches!(
            ground_energy(100.0, 1.0, 1.0, Some(10)),
            Err(Error::CutoffTooSmall { .. })
        ));
        let e = ground_energy(10.0, 10.0, 1.0, None).unwrap();
        let e2 = ground_energy(10.0, 10.0, 1.0, Some(2 * e.cutoff)).unwrap();
        assert!((e.value - e2.value).abs() <= e.tail_estimate, "{} {}", e.value - e2.value, e.tail_estimate);
    }

    #[test]
    fn thermal_signs_and_monotone() {
        assert_eq!(thermal_free_energy(5.0, 10.0, 0.1, 0.0).unwrap().value, 0.0);
        let mut prev = 0.0;
        for t in [0.001, 0.01, 0.05, 0.1, 0.5] {
            let f = thermal_free_energy(5.0, 10.0, 0.1, t).unwrap().value;
            assert!(f < 0.0 && f <= prev);
            prev = f;
        }
    }

    #[test]
    fn taylor_majorant_holds() {
        let (ell, a, t) = (10.0, 0.2, 0.05);
        let f0 = thermal_free_energy(50.0, ell, a, t).unwrap().value;
        for n in [0.0, 20.0, 49.0, 80.0, 200.0] {
            let f = thermal_free_energy(n, ell, a, t).unwrap().value;
            let bound = thermal_taylor_majorant(n, 50.0, ell, a, t).unwrap();
            assert!((f - f0).abs() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn g_derivative_bound() {
        for p in [0.1f64, 0.5, 1.0, 2.0, 4.0] {
            let bound = 0.5 / (p * p).exp_m1();
            for q in [0.0, 0.5, 3.0, 16.0, 100.0] {
                let d = riemann_g_dq(p, q);
                assert!(d >= 0.0 && d <= bound * (1.0 + 1e-14));
                if q > 0.0 {
                    let h = 1e-6 * q;
                    let fd = (riemann_g(p, q + h) - riemann_g(p, q - h)) / (2.0 * h);
                    assert!((fd - d).abs() < 1e-5 * (1.0 + d), "{p} {q}: {fd} {d}");
                }
            }
        }
    }

    #[test]
    fn riemann_integral_closed_form_at_zero_q() {
        // ∫₀^∞ r² log(1 − e^{−r²}) dr = −(√π/4) ζ(5/2)
        let zeta52 = 1.341_487_257_250_917_2;
        let exact = -(PI.sqrt() / 4.0) * zeta52 * 0.5 * PI / PI.powi(3);
        let g = riemann_gap(0.3, 0.0).unwrap();
        assert!((g.integral - exact).abs() < 1e-12, "{} {exact}", g.integral);
    }

    #[test]
    fn f_bog_zero() {
        let f = f_bog(0.0, 10.0, 1.0, 0.0, true).unwrap();
        assert_eq!(f.total, 0.0);
        assert_eq!(f.ground_lattice, Some(0.0));
        let f = f_bog(4.0, 10.0, 0.3, 0.0, false).unwrap();
        let y: f64 = 4.0 * 0.3f64.powi(3) / 1000.0;
        let expect = 4.0 * PI * 0.3 / 1000.0 * 16.0 * (1.0 + lhy_coefficient() * y.sqrt());
        assert!((f.total - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn coefficients_and_table() {
        let v = RadialPotential::barrier(2.0, 1.0).unwrap();
        let p = BogParams::from_potential(&v, 0.0, 50.0, 0.1, 0.0).unwrap();
        assert_eq!(p.coefficients(PI), (PI * PI, 0.0));
        let p = BogParams::from_potential(&v, 20.0, 50.0, 0.1, 0.0).unwrap();
        let (_, b) = p.coefficients(1e-6);
        assert!((b - p.b0()).abs() < 1e-12 * p.b0());
        let t = DispersionTable::new(&p, &ModeLattice::new(2, true)).unwrap();
        assert_eq!(t.entries.len(), 26);
        for e in &t.entries {
            assert!(e.a_p > e.b_p.abs() && e.e > 0.0 && e.e_approx >= e.p * e.p);
        }
        assert!(BogParams::from_potential(&v, 200.0, 50.0, 0.1, 0.0).is_err());
    }
}

//! Truncated Fock-space oracle: occupation bases, ladder operators,
//! Bogoliubov and full Hamiltonians, exact spectra and Gibbs free energies.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::bogoliubov::{rotation, BogParams};
use crate::error::{Error, Result};
use crate::neumann_box::{mode_1d, NeumannMode};
use crate::quadrature::GaussLegendre;
use crate::scattering::RadialPotential;

pub const DEFAULT_DIM_LIMIT: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sector {
    /// total occupation ≤ n
    AtMost(usize),
    /// total occupation = n
    Exactly(usize),
}

#[derive(Debug, Clone)]
pub struct TruncatedFockSpace {
    pub num_modes: usize,
    pub sector: Sector,
    pub basis: Vec<Vec<u16>>,
    index: HashMap<Vec<u16>, usize>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn build_basis(num_modes: usize, sector: Sector, limit: usize) -> Result<TruncatedFockSpace> {
    if num_modes == 0 {
        return Err(Error::InvalidParameters("need at least one mode".into()));
    }
    let expected = match sector {
        Sector::AtMost(n) => binomial(n + num_modes, num_modes),
        Sector::Exactly(n) => binomial(n + num_modes - 1, num_modes - 1),
    };
    if expected > limit as f64 {
        return Err(Error::DimensionLimit {
            dim: expected.round() as usize,
            limit,
        });
    }
    let (total, exact) = match sector {
        Sector::AtMost(n) => (n, false),
        Sector::Exactly(n) => (n, true),
    };
    let mut basis = Vec::new();
    let mut cur = vec![0u16; num_modes];
    fn rec(i: usize, left: usize, exact: bool, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i + 1 == cur.len() {
            let lo = if exact { left } else { 0 };
            for k in lo..=left {
                cur[i] = k as u16;
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=left {
            cur[i] = k as u16;
            rec(i + 1, left - k, exact, cur, out);
        }
    }
    rec(0, total, exact, &mut cur, &mut basis);
    let index = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
    Ok(TruncatedFockSpace {
        num_modes,
        sector,
        basis,
        index,
    })
}

impl TruncatedFockSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, occ: &[u16]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    pub fn n_max(&self) -> usize {
        match self.sector {
            Sector::AtMost(n) | Sector::Exactly(n) => n,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub label: String,
    pub matrix: DMatrix<f64>,
    pub hermiticity_defect: f64,
}

impl OperatorMatrix {
    pub fn new(label: impl Into<String>, matrix: DMatrix<f64>) -> Self {
        let n = matrix.nrows();
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                defect = defect.max((matrix[(i, j)] - matrix[(j, i)]).abs());
            }
        }
        Self {
            label: label.into(),
            matrix,
            hermiticity_defect: defect,
        }
    }
}

fn annihilate(occ: &mut [u16], p: usize) -> Option<f64> {
    if occ[p] == 0 {
        return None;
    }
    let amp = (occ[p] as f64).sqrt();
    occ[p] -= 1;
    Some(amp)
}

fn create(occ: &mut [u16], p: usize) -> f64 {
    occ[p] += 1;
    (occ[p] as f64).sqrt()
}

pub fn ladder_matrices(space: &TruncatedFockSpace, p: usize) -> (OperatorMatrix, OperatorMatrix) {
    let d = space.dim();
    let mut a = DMatrix::zeros(d, d);
    for (j, occ) in space.basis.iter().enumerate() {
        let mut o = occ.clone();
        if let Some(amp) = annihilate(&mut o, p) {
            if let Some(i) = space.index_of(&o) {
                a[(i, j)] = amp;
            }
        }
    }
    let ad = a.transpose();
    (OperatorMatrix::new(format!("a_{p}"), a), OperatorMatrix::new(format!("a_{p}^+"), ad))
}

/// One mode of a quadratic Hamiltonian A a†a + ½B(a†a† + aa) + constant.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadraticMode {
    pub a: f64,
    pub b: f64,
    pub constant: f64,
}

pub fn build_quadratic(modes: &[QuadraticMode], space: &TruncatedFockSpace) -> Result<OperatorMatrix> {
    if modes.len() != space.num_modes {
        return Err(Error::InvalidParameters("mode count does not match the Fock space".into()));
    }
    let d = space.dim();
    let constant: f64 = modes.iter().map(|m| m.constant).sum();
    let cols: Vec<Vec<(usize, f64)>> = space
        .basis
        .par_iter()
        .map(|occ| {
            let mut col = Vec::new();
            let diag: f64 = modes.iter().zip(occ).map(|(m, &k)| m.a * k as f64).sum();
            col.push((space.index_of(occ).unwrap(), diag + constant));
            for (p, m) in modes.iter().enumerate() {
                if m.b == 0.0 {
                    continue;
                }
                let mut up = occ.clone();
                let amp = create(&mut up, p) * create(&mut up, p);
                if let Some(i) = space.index_of(&up) {
                    col.push((i, 0.5 * m.b * amp));
                }
                let mut down = occ.clone();
                if let Some(a1) = annihilate(&mut down, p) {
                    if let Some(a2) = annihilate(&mut down, p) {
                        if let Some(i) = space.index_of(&down) {
                            col.push((i, 0.5 * m.b * a1 * a2));
                        }
                    }
                }
            }
            col
        })
        .collect();
    let mut h = DMatrix::zeros(d, d);
    for (j, col) in cols.into_iter().enumerate() {
        for (i, v) in col {
            h[(i, j)] += v;
        }
    }
    Ok(OperatorMatrix::new("H_quadratic", h))
}

/// Σ_p (p² + 8π𝔞n/ℓ)a†a + ½Σ_p nε̂(p)(a†a† + aa) + ½Σ_p (nε̂(p))²/(2p²).
pub fn bog_modes(params: &BogParams, modes: &[NeumannMode]) -> Result<Vec<QuadraticMode>> {
    modes
        .iter()
        .map(|m| {
            if m.is_zero() {
                return Err(Error::InvalidParameters("the condensate mode is not a Bogoliubov mode".into()));
            }
            let p = m.p_norm();
            let (a, b) = params.coefficients(p);
            Ok(QuadraticMode {
                a,
                b,
                constant: 0.5 * b * b / (2.0 * p * p),
            })
        })
        .collect()
}

pub fn build_h_bog(params: &BogParams, modes: &[NeumannMode], space: &TruncatedFockSpace) -> Result<OperatorMatrix> {
    let mut op = build_quadratic(&bog_modes(params, modes)?, space)?;
    op.label = "H_Bog".into();
    Ok(op)
}

/// Lowest `count` levels Σ constant + Σ(e−A)/2 + Σ m_p e_p of the exactly
/// diagonalized quadratic Hamiltonian.
pub fn quadratic_levels(modes: &[QuadraticMode], count: usize) -> Result<Vec<f64>> {
    let mut shift = 0.0;
    let mut es = Vec::new();
    for m in modes {
        let r = rotation(m.a, m.b)?;
        shift += m.constant + 0.5 * (r.e - m.a);
        es.push(r.e);
    }
    // all occupation vectors with energy below the count-th single-mode ladder
    let emin = es.iter().cloned().fold(f64::INFINITY, f64::min);
    let cap = shift + emin * count as f64;
    let mut levels = Vec::new();
    fn rec(i: usize, acc: f64, cap: f64, es: &[f64], out: &mut Vec<f64>) {
        if i == es.len() {
            out.push(acc);
            return;
        }
        let mut e = acc;
        while e <= cap + 1e-12 {
            rec(i + 1, e, cap, es, out);
            e += es[i];
        }
    }
    rec(0, shift, cap, &es, &mut levels);
    levels.sort_by(f64::total_cmp);
    levels.truncate(count);
    Ok(levels)
}

/// ∫_{−½}^{½} over y with y, y+d both in the box of u_a(y+d)u_c(y+d)u_b(y)u_e(y).
fn pair_overlap(gl: &GaussLegendre, a: u32, c: u32, b: u32, e: u32, d: f64) -> f64 {
    let lo = (-0.5f64).max(-0.5 - d);
    let hi = 0.5f64.min(0.5 - d);
    if hi <= lo {
        return 0.0;
    }
    gl.integrate(lo, hi, |y| {
        mode_1d(a, y + d) * mode_1d(c, y + d) * mode_1d(b, y) * mode_1d(e, y)
    })
}

fn interaction_at_order(v: &RadialPotential, ell: f64, m: [&NeumannMode; 4], order: usize) -> f64 {
    let [p, q, r, s] = m;
    let breaks: Vec<f64> = v.breakpoints().iter().map(|b| b / ell).collect();
    let gr = GaussLegendre::new(order);
    let ga = GaussLegendre::new(order);
    let inner = GaussLegendre::new((2 * order).max(24));
    // one octant of directions; the other seven are sign flips so the rule is
    // symmetric under d → −d
    let mut dirs = Vec::new();
    for (th, wt) in ga.mapped(0.0, 0.5 * PI) {
        let (st, ct) = th.sin_cos();
        for (ph, wp) in ga.mapped(0.0, 0.5 * PI) {
            dirs.push(([st * ph.cos(), st * ph.sin(), ct], wt * st * wp));
        }
    }
    let mut total = 0.0;
    for (piece, w) in breaks.windows(2).enumerate() {
        if w[1] <= w[0] {
            continue;
        }
        for (rad, wr) in gr.mapped(w[0], w[1]) {
            let vl = ell * ell * v.value_in_piece(piece, ell * rad);
            if vl == 0.0 {
                continue;
            }
            let mut ang = 0.0;
            for oct in 0..8 {
                let sign = [
                    if oct & 1 == 0 { 1.0 } else { -1.0 },
                    if oct & 2 == 0 { 1.0 } else { -1.0 },
                    if oct & 4 == 0 { 1.0 } else { -1.0 },
                ];
                for (dir, wd) in &dirs {
                    let mut prod = *wd;
                    for i in 0..3 {
                        let d = sign[i] * rad * dir[i];
                        prod *= pair_overlap(&inner, p.m[i], r.m[i], q.m[i], s.m[i], d);
                    }
                    ang += prod;
                }
            }
            total += wr * rad * rad * vl * ang;
        }
    }
    total
}

/// V_ℓ^{pqrs} = ∫∫ u_p(x)u_q(y)V_ℓ(x−y)u_r(x)u_s(y) dx dy, in the relative
/// coordinate d = x − y, with the quadrature order doubled until the value is
/// stable to `tol`·‖V_ℓ‖₁.
pub fn interaction_coefficient(
    v: &RadialPotential,
    ell: f64,
    p: &NeumannMode,
    q: &NeumannMode,
    r: &NeumannMode,
    s: &NeumannMode,
    tol: f64,
) -> Result<f64> {
    if v.is_zero() {
        return Ok(0.0);
    }
    let scale = v.l1_norm / ell;
    let mut order = 8;
    let mut prev = interaction_at_order(v, ell, [p, q, r, s], order);
    let mut achieved = f64::INFINITY;
    for _ in 0..3 {
        order *= 2;
        let next = interaction_at_order(v, ell, [p, q, r, s], order);
        achieved = (next - prev).abs() / scale;
        if achieved <= tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        what: "interaction quadrature",
        achieved,
        target: tol,
    })
}

/// All V^{pqrs} over `modes`, indexed [p][q][r][s] flattened.
pub fn interaction_tensor(v: &RadialPotential, ell: f64, modes: &[NeumannMode], tol: f64) -> Result<Vec<f64>> {
    let k = modes.len();
    (0..k.pow(4))
        .into_par_iter()
        .map(|i| {
            let (p, q, r, s) = (i / (k * k * k), (i / (k * k)) % k, (i / k) % k, i % k);
            interaction_coefficient(v, ell, &modes[p], &modes[q], &modes[r], &modes[s], tol)
        })
        .collect()
}

/// Σ p² a†a + ½Σ V^{pqrs} a_p†a_q†a_r a_s on a fixed-particle sector.
pub fn build_full_h(
    v: &RadialPotential,
    ell: f64,
    modes: &[NeumannMode],
    space: &TruncatedFockSpace,
    tol: f64,
) -> Result<OperatorMatrix> {
    if !matches!(space.sector, Sector::Exactly(_)) {
        return Err(Error::InvalidParameters("full Hamiltonian needs a fixed-n sector".into()));
    }
    if modes.len() != space.num_modes {
        return Err(Error::InvalidParameters("mode count does not match the Fock space".into()));
    }
    let k = modes.len();
    let vt = interaction_tensor(v, ell, modes, tol)?;
    let d = space.dim();
    let cols: Vec<Vec<(usize, f64)>> = space
        .basis
        .par_iter()
        .map(|occ| {
            let mut col = Vec::new();
            let kin: f64 = modes.iter().zip(occ).map(|(m, &c)| m.energy() * c as f64).sum();
            col.push((space.index_of(occ).unwrap(), kin));
            for r in 0..k {
                for s in 0..k {
                    let mut o = occ.clone();
                    let Some(a1) = annihilate(&mut o, s) else { continue };
                    let Some(a2) = annihilate(&mut o, r) else { continue };
                    for p in 0..k {
                        for q in 0..k {
                            let coef = vt[((p * k + q) * k + r) * k + s];
                            if coef == 0.0 {
                                continue;
                            }
                            let mut t = o.clone();
                            let c1 = create(&mut t, q);
                            let c2 = create(&mut t, p);
                            if let Some(i) = space.index_of(&t) {
                                col.push((i, 0.5 * coef * a1 * a2 * c1 * c2));
                            }
                        }
                    }
                }
            }
            col
        })
        .collect();
    let mut h = DMatrix::zeros(d, d);
    for (j, col) in cols.into_iter().enumerate() {
        for (i, x) in col {
            h[(i, j)] += x;
        }
    }
    Ok(OperatorMatrix::new("H_full", h))
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub cutoff: usize,
    /// Shift of the lowest eigenvalues between this cutoff and half of it.
    pub shift_vs_half_cutoff: Option<Vec<f64>>,
    pub converged: bool,
}

pub fn eigenvalues(op: &OperatorMatrix) -> Vec<f64> {
    let mut e: Vec<f64> = SymmetricEigen::new(op.matrix.clone()).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

pub fn spectrum(op: &OperatorMatrix, cutoff: usize) -> SpectralResult {
    SpectralResult {
        eigenvalues: eigenvalues(op),
        cutoff,
        shift_vs_half_cutoff: None,
        converged: false,
    }
}

/// Spectrum at `cutoff`, compared on its lowest 5 levels against `cutoff/2`.
pub fn spectrum_with_convergence<F>(build: F, cutoff: usize, tol: f64) -> Result<SpectralResult>
where
    F: Fn(usize) -> Result<OperatorMatrix>,
{
    let full = eigenvalues(&build(cutoff)?);
    let half = eigenvalues(&build(cutoff / 2)?);
    let k = 5.min(full.len()).min(half.len());
    let shifts: Vec<f64> = (0..k).map(|i| (full[i] - half[i]).abs()).collect();
    let converged = shifts.iter().all(|&s| s < tol);
    Ok(SpectralResult {
        eigenvalues: full,
        cutoff,
        shift_vs_half_cutoff: Some(shifts),
        converged,
    })
}

/// F = −T log Σ_k e^{−E_k/(Tℓ²)}, anchored at E₀; E₀/ℓ² at T = 0.
pub fn gibbs_free_energy(eigenvalues: &[f64], temperature: f64, ell: f64) -> f64 {
    let e0 = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if temperature == 0.0 {
        return e0 / (ell * ell);
    }
    let beta = 1.0 / (temperature * ell * ell);
    let z: f64 = eigenvalues.iter().map(|e| (-(e - e0) * beta).exp()).sum();
    e0 / (ell * ell) - temperature * z.ln()
}

/// e^{−H/(Tℓ²)}/Z
pub fn gibbs_state(h: &OperatorMatrix, temperature: f64, ell: f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(h.matrix.clone());
    let e0 = eig.eigenvalues.min();
    let w: Vec<f64> = if temperature == 0.0 {
        let mut w = vec![0.0; eig.eigenvalues.len()];
        w[eig.eigenvalues.imin()] = 1.0;
        w
    } else {
        eig.eigenvalues.iter().map(|e| (-(e - e0) / (temperature * ell * ell)).exp()).collect()
    };
    let z: f64 = w.iter().sum();
    let d = nalgebra::DVector::from_iterator(w.len(), w.iter().map(|x| x / z));
    &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose()
}

/// tr(HΓ) − Tℓ²S(Γ) − ℓ²F, non-negative by the Gibbs variational principle.
pub fn gibbs_variational_check(h: &OperatorMatrix, trial: &DMatrix<f64>, temperature: f64, ell: f64) -> Result<f64> {
    let d = h.matrix.nrows();
    if trial.nrows() != d || trial.ncols() != d {
        return Err(Error::InvalidState(format!("trial is {}x{}, H is {d}x{d}", trial.nrows(), trial.ncols())));
    }
    let asym = (trial - trial.transpose()).amax();
    if asym > 1e-10 {
        return Err(Error::InvalidState(format!("trial not symmetric (defect {asym:.3e})")));
    }
    let tr = trial.trace();
    if (tr - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("trace {tr} != 1")));
    }
    let w = SymmetricEigen::new(trial.clone()).eigenvalues;
    if w.min() < -1e-12 {
        return Err(Error::InvalidState(format!("negative eigenvalue {:.3e}", w.min())));
    }
    let entropy: f64 = w.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum();
    let energy = (&h.matrix * trial).trace();
    let f = gibbs_free_energy(&eigenvalues(h), temperature, ell);
    Ok(energy - temperature * ell * ell * entropy - ell * ell * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_counts() {
        let s = build_basis(1, Sector::AtMost(3), 100).unwrap();
        assert_eq!(s.basis, vec![vec![0], vec![1], vec![2], vec![3]]);
        let s = build_basis(2, Sector::Exactly(2), 100).unwrap();
        assert_eq!(s.dim(), 3);
        assert!(s.basis.contains(&vec![2, 0]) && s.basis.contains(&vec![1, 1]) && s.basis.contains(&vec![0, 2]));
        assert_eq!(build_basis(3, Sector::AtMost(10), 5000).unwrap().dim(), 286);
        assert!(matches!(
            build_basis(10, Sector::AtMost(10), 5000),
            Err(Error::DimensionLimit { dim: 184756, .. })
        ));
        for (i, b) in s.basis.iter().enumerate() {
            assert_eq!(s.index_of(b), Some(i));
        }
    }

    #[test]
    fn ladder_elements() {
        let s = build_basis(1, Sector::AtMost(2), 10).unwrap();
        let (a, ad) = ladder_matrices(&s, 0);
        assert_eq!(a.matrix[(0, 1)], 1.0);
        assert!((a.matrix[(1, 2)] - 2f64.sqrt()).abs() < 1e-15);
        let num = &ad.matrix * &a.matrix;
        for i in 0..3 {
            assert!((num[(i, i)] - i as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn commutator_away_from_cutoff() {
        let s = build_basis(2, Sector::AtMost(6), 100).unwrap();
        let (a0, a0d) = ladder_matrices(&s, 0);
        let (a1, a1d) = ladder_matrices(&s, 1);
        for (x, xd, y, yd, delta) in [(&a0, &a0d, &a0, &a0d, 1.0), (&a0, &a0d, &a1, &a1d, 0.0)] {
            let _ = (xd, y);
            let c = &x.matrix * &yd.matrix - &yd.matrix * &x.matrix;
            for (j, occ) in s.basis.iter().enumerate() {
                if occ.iter().map(|&k| k as usize).sum::<usize>() > 4 {
                    continue;
                }
                for i in 0..s.dim() {
                    let expect = if i == j { delta } else { 0.0 };
                    assert!((c[(i, j)] - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn single_mode_levels() {
        let m = [QuadraticMode { a: 5.0, b: 3.0, constant: 0.0 }];
        let s = build_basis(1, Sector::AtMost(80), 1000).unwrap();
        let h = build_quadratic(&m, &s).unwrap();
        assert!(h.hermiticity_defect < 1e-12);
        let e = eigenvalues(&h);
        for k in 0..5 {
            assert!((e[k] - (4.0 * k as f64 - 0.5)).abs() < 1e-8, "{k}: {}", e[k]);
        }
        assert_eq!(quadratic_levels(&m, 3).unwrap(), vec![-0.5, 3.5, 7.5]);
    }

    #[test]
    fn free_single_mode_gibbs_closed_form() {
        let (w, nmax, t, ell) = (1.3, 30usize, 0.7, 2.0);
        let eig: Vec<f64> = (0..=nmax).map(|m| w * m as f64).collect();
        let x = (-w / (t * ell * ell)).exp();
        let closed = -t * ((1.0 - x.powi(nmax as i32 + 1)) / (1.0 - x)).ln();
        assert!((gibbs_free_energy(&eig, t, ell) - closed).abs() < 1e-12);
        assert_eq!(gibbs_free_energy(&eig, 0.0, 1.0), 0.0);
        let mut prev = f64::INFINITY;
        for t in [0.0, 0.1, 0.5, 1.0, 3.0] {
            let f = gibbs_free_energy(&eig, t, ell);
            assert!(f <= prev);
            prev = f;
        }
    }

    #[test]
    fn gibbs_slack_cases() {
        let m = [QuadraticMode { a: 5.0, b: 3.0, constant: 0.0 }];
        let s = build_basis(1, Sector::AtMost(20), 100).unwrap();
        let h = build_quadratic(&m, &s).unwrap();
        let (t, ell) = (0.5, 2.0);
        let g = gibbs_state(&h, t, ell);
        assert!(gibbs_variational_check(&h, &g, t, ell).unwrap().abs() < 1e-10);
        let mixed = DMatrix::identity(s.dim(), s.dim()) / s.dim() as f64;
        assert!(gibbs_variational_check(&h, &mixed, t, ell).unwrap() > 0.0);
        let gs = gibbs_state(&h, 0.0, ell);
        assert!(gibbs_variational_check(&h, &gs, t, ell).unwrap() > 0.0);
        assert!(gibbs_variational_check(&h, &(mixed.clone() * 2.0), t, ell).is_err());
    }

    #[test]
    fn full_h_trivial_cases() {
        let v0 = RadialPotential::barrier(0.0, 1.0).unwrap();
        let modes = [NeumannMode::zero(), NeumannMode::new(1, 0, 0)];
        let s = build_basis(2, Sector::Exactly(2), 100).unwrap();
        let h = build_full_h(&v0, 10.0, &modes, &s, 1e-6).unwrap();
        let e = eigenvalues(&h);
        let pi2 = PI * PI;
        for (a, b) in e.iter().zip([0.0, pi2, 2.0 * pi2]) {
            assert!((a - b).abs() < 1e-12);
        }
        let v = RadialPotential::barrier(2.0, 1.0).unwrap();
        let s1 = build_basis(2, Sector::Exactly(1), 100).unwrap();
        let e = eigenvalues(&build_full_h(&v, 10.0, &modes, &s1, 1e-6).unwrap());
        assert!(e[0].abs() < 1e-12 && (e[1] - pi2).abs() < 1e-12);
    }
}

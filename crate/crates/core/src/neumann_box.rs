//! Neumann eigenbasis of the unit box Λ = [−½, ½]³, the mirror-symmetrized
//! kernels K̃ and K, and the boundary function h.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::scattering::{ModifiedScattering, RadialPotential};

pub type Point = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NeumannMode {
    pub m: [u32; 3],
}

pub fn mode_1d(m: u32, x: f64) -> f64 {
    if m == 0 {
        1.0
    } else {
        SQRT_2 * (PI * m as f64 * (x + 0.5)).cos()
    }
}

impl NeumannMode {
    pub fn new(m0: u32, m1: u32, m2: u32) -> Self {
        Self { m: [m0, m1, m2] }
    }

    pub fn zero() -> Self {
        Self { m: [0; 3] }
    }

    pub fn is_zero(&self) -> bool {
        self.m == [0; 3]
    }

    pub fn p(&self) -> [f64; 3] {
        self.m.map(|k| PI * k as f64)
    }

    pub fn norm_sq(&self) -> u32 {
        self.m.iter().map(|k| k * k).sum()
    }

    pub fn p_norm(&self) -> f64 {
        PI * (self.norm_sq() as f64).sqrt()
    }

    pub fn energy(&self) -> f64 {
        PI * PI * self.norm_sq() as f64
    }

    pub fn value(&self, x: Point) -> f64 {
        (0..3).map(|i| mode_1d(self.m[i], x[i])).product()
    }
}

impl std::fmt::Display for NeumannMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.m[0], self.m[1], self.m[2])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeLattice {
    pub cutoff: u32,
    pub include_zero: bool,
    pub modes: Vec<NeumannMode>,
}

impl ModeLattice {
    /// All m with |m|_∞ ≤ cutoff, lexicographic.
    pub fn new(cutoff: u32, include_zero: bool) -> Self {
        let mut modes = Vec::new();
        for a in 0..=cutoff {
            for b in 0..=cutoff {
                for c in 0..=cutoff {
                    let m = NeumannMode::new(a, b, c);
                    if include_zero || !m.is_zero() {
                        modes.push(m);
                    }
                }
            }
        }
        Self {
            cutoff,
            include_zero,
            modes,
        }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// (P_z x)_i = (−1)^{z_i} x_i + z_i
pub fn mirror_point(z: [i32; 3], x: Point) -> Point {
    let mut out = x;
    for i in 0..3 {
        let s = if z[i] % 2 == 0 { 1.0 } else { -1.0 };
        out[i] = s * x[i] + z[i] as f64;
    }
    out
}

pub fn mirror_labels() -> impl Iterator<Item = [i32; 3]> {
    (0..27).map(|k| [k / 9 - 1, (k / 3) % 3 - 1, k % 3 - 1])
}

fn dist(x: Point, y: Point) -> f64 {
    ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt()
}

#[derive(Debug, Clone)]
pub struct SymmetrizedKernel {
    pub n: f64,
    pub ms: Arc<ModifiedScattering>,
    pub omega_hat0: f64,
}

impl SymmetrizedKernel {
    pub fn new(n: f64, ms: Arc<ModifiedScattering>) -> Self {
        let omega_hat0 = ms.omega_hat(0.0);
        Self { n, ms, omega_hat0 }
    }

    /// K̃(x, y) = −n Σ_z ω_{ℓ,λ}(P_z x − y)
    pub fn tilde_value(&self, x: Point, y: Point) -> f64 {
        let lam = self.ms.lambda;
        let mut s = 0.0;
        for z in mirror_labels() {
            let d = dist(mirror_point(z, x), y);
            if d < lam {
                s += self.ms.omega_ell_lambda(d);
            }
        }
        -self.n * s
    }

    pub fn value(&self, x: Point, y: Point) -> f64 {
        self.tilde_value(x, y) + self.n * self.omega_hat0
    }

    /// −n ω̂_{ℓ,λ}(p), the eigenvalue of K̃ on u_p.
    pub fn mode_coefficient(&self, m: &NeumannMode) -> f64 {
        -self.n * self.ms.omega_hat(m.p_norm())
    }

    pub fn radial_profile(&self) -> RadialFunction<'_> {
        RadialFunction {
            f: Box::new(move |r| -self.n * self.ms.omega_ell_lambda(r)),
            breaks: self.ms.radial_breaks().to_vec(),
        }
    }
}

/// Radial function on [breaks[0], breaks.last()], smooth between breaks.
pub struct RadialFunction<'a> {
    pub f: Box<dyn Fn(f64) -> f64 + Sync + 'a>,
    pub breaks: Vec<f64>,
}

/// ∫_{−½}^{½} ũ_a(y + d) u_b(y) dy with ũ the even periodic extension.
fn overlap_1d(a: u32, b: u32, d: f64) -> f64 {
    let ca = if a == 0 { 1.0 } else { SQRT_2 };
    let cb = if b == 0 { 1.0 } else { SQRT_2 };
    let phi = PI * a as f64 * d;
    let j = |k: f64| {
        if k == 0.0 {
            phi.cos()
        } else {
            ((k + phi).sin() - phi.sin()) / k
        }
    };
    let (af, bf) = (a as f64, b as f64);
    ca * cb * 0.5 * (j(PI * (af + bf)) + j(PI * (af - bf)))
}

struct BallRule {
    // weight · r², direction cosines, radius
    nodes: Vec<(f64, Point)>,
}

impl BallRule {
    fn new(breaks: &[f64], radial: usize, polar: usize, azimuth: usize) -> Self {
        let gr = GaussLegendre::new(radial);
        let gt = GaussLegendre::new(polar);
        let mut nodes = Vec::new();
        for w in breaks.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            for (r, wr) in gr.mapped(w[0], w[1]) {
                for (&ct, &wt) in gt.nodes.iter().zip(&gt.weights) {
                    let st = (1.0 - ct * ct).sqrt();
                    for k in 0..azimuth {
                        let ph = 2.0 * PI * (k as f64 + 0.5) / azimuth as f64;
                        let wph = 2.0 * PI / azimuth as f64;
                        nodes.push((wr * r * r * wt * wph, [r * st * ph.cos(), r * st * ph.sin(), r * ct]));
                    }
                }
            }
        }
        Self { nodes }
    }
}

fn coefficient_matrix(f: &RadialFunction, modes: &[NeumannMode], order: usize) -> Vec<Vec<f64>> {
    let rule = BallRule::new(&f.breaks, order, order, 2 * order);
    let cmax = modes.iter().flat_map(|m| m.m).max().unwrap_or(0) as usize + 1;
    // per node: weight·f and three cmax×cmax overlap tables
    let tables: Vec<(f64, Vec<f64>)> = rule
        .nodes
        .par_iter()
        .map(|(w, d)| {
            let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            let mut t = vec![0.0; 3 * cmax * cmax];
            for i in 0..3 {
                for a in 0..cmax {
                    for b in 0..cmax {
                        t[i * cmax * cmax + a * cmax + b] = overlap_1d(a as u32, b as u32, d[i]);
                    }
                }
            }
            (w * (f.f)(r), t)
        })
        .collect();
    modes
        .par_iter()
        .map(|p| {
            modes
                .iter()
                .map(|q| {
                    let mut s = 0.0;
                    for (w, t) in &tables {
                        let mut prod = *w;
                        for i in 0..3 {
                            prod *= t[i * cmax * cmax + p.m[i] as usize * cmax + q.m[i] as usize];
                        }
                        s += prod;
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Matrix ⟨u_p, Σ_z f(P_z · − ·) u_q⟩ over `modes`, with the quadrature order
/// doubled once to confirm `tol` stability.
pub fn neumann_matrix(f: &RadialFunction, modes: &[NeumannMode], tol: f64) -> Result<Vec<Vec<f64>>> {
    let mut order = 12;
    let mut prev = coefficient_matrix(f, modes, order);
    let mut achieved = f64::INFINITY;
    for _ in 0..3 {
        order *= 2;
        let next = coefficient_matrix(f, modes, order);
        achieved = prev
            .iter()
            .flatten()
            .zip(next.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if achieved <= tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        what: "Neumann coefficient quadrature",
        achieved,
        target: tol,
    })
}

pub fn neumann_coefficient(f: &RadialFunction, p: NeumannMode, q: NeumannMode, tol: f64) -> Result<f64> {
    if p == q {
        return Ok(neumann_matrix(f, &[p], tol)?[0][0]);
    }
    Ok(neumann_matrix(f, &[p, q], tol)?[0][1])
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalityRow {
    pub p_index: usize,
    pub q_index: usize,
    pub m_pq: f64,
    pub expected: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalityReport {
    pub modes: Vec<NeumannMode>,
    pub rows: Vec<DiagonalityRow>,
    pub max_offdiag: f64,
    pub max_diag_rel_err: f64,
}

/// ⟨u_p, K̃ u_q⟩ against δ_{pq}(−n ω̂(p)). The matrix of K differs only in the
/// (0,0) entry, shifted by n ω̂(0).
pub fn kernel_diagonality(k: &SymmetrizedKernel, lattice: &ModeLattice, tol: f64) -> Result<DiagonalityReport> {
    let prof = k.radial_profile();
    let mat = neumann_matrix(&prof, &lattice.modes, tol)?;
    let expected: Vec<f64> = lattice.modes.par_iter().map(|m| k.mode_coefficient(m)).collect();
    let mut rows = Vec::new();
    let mut max_offdiag: f64 = 0.0;
    let mut max_diag_rel_err: f64 = 0.0;
    for (i, row) in mat.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let e = if i == j { expected[i] } else { 0.0 };
            let err = (v - e).abs();
            if i == j {
                let rel = if e != 0.0 { err / e.abs() } else { err };
                max_diag_rel_err = max_diag_rel_err.max(rel);
            } else {
                max_offdiag = max_offdiag.max(err);
            }
            rows.push(DiagonalityRow {
                p_index: i,
                q_index: j,
                m_pq: v,
                expected: e,
                abs_err: err,
            });
        }
    }
    Ok(DiagonalityReport {
        modes: lattice.modes.clone(),
        rows,
        max_offdiag,
        max_diag_rel_err,
    })
}

fn boundary_integral(k: &SymmetrizedKernel, v: &RadialPotential, x: Point, order: usize) -> f64 {
    let ell = k.ms.ell;
    let breaks: Vec<f64> = v.breakpoints().iter().map(|b| b / ell).collect();
    let gr = GaussLegendre::new(order);
    let gt = GaussLegendre::new(order);
    let az = 2 * order;
    let base = k.n + k.n * k.omega_hat0;
    let mut total = 0.0;
    for (piece, w) in breaks.windows(2).enumerate() {
        if w[1] <= w[0] {
            continue;
        }
        for (r, wr) in gr.mapped(w[0], w[1]) {
            let vl = ell * ell * v.value_in_piece(piece, ell * r);
            let mut ang = 0.0;
            // split the sphere by octant so the box clipping is resolved per octant
            for oct in 0..8 {
                let sz = if oct & 4 == 0 { 1.0 } else { -1.0 };
                for (th, wt) in gt.mapped(0.0, 0.5 * PI) {
                    let (st, ct) = th.sin_cos();
                    let wt = wt * st;
                    for j in 0..az {
                        let ph = 0.5 * PI * ((oct & 3) as f64 + (j as f64 + 0.5) / az as f64);
                        let wph = 0.5 * PI / az as f64;
                        let y = [x[0] - r * st * ph.cos(), x[1] - r * st * ph.sin(), x[2] - sz * r * ct];
                        if y.iter().any(|c| c.abs() > 0.5) {
                            continue;
                        }
                        ang += wt * wph * (base + k.tilde_value(x, y));
                    }
                }
            }
            total += wr * r * r * vl * ang;
        }
    }
    total
}

/// h(x) = ∫_Λ V_ℓ(x−y)(n + K(x,y)) dy − 8π𝔞n/ℓ.
pub fn boundary_function(k: &SymmetrizedKernel, v: &RadialPotential, x: Point) -> f64 {
    if k.n == 0.0 {
        return -0.0;
    }
    boundary_integral(k, v, x, 16) - 8.0 * PI * k.ms.a * k.n / k.ms.ell
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundaryNorms {
    pub l1: f64,
    pub linf: f64,
    pub interior_value: f64,
}

/// L¹ and L^∞ norms of h on a midpoint grid with `cells` cells per half-axis.
/// Points farther than (λ + R/ℓ)/2 from every face see neither mirror images
/// nor the boundary; there h equals n ω̂(0) ‖V‖₁/ℓ and is not re-integrated.
pub fn boundary_norms(k: &SymmetrizedKernel, v: &RadialPotential, cells: usize) -> BoundaryNorms {
    let ell = k.ms.ell;
    let interior_value = k.n * k.omega_hat0 * v.l1_norm / ell;
    let layer = 0.5 * (k.ms.lambda + v.range / ell);
    let h = 0.5 / cells as f64;
    let pts: Vec<Point> = (0..cells.pow(3))
        .map(|i| {
            let (a, b, c) = (i / (cells * cells), (i / cells) % cells, i % cells);
            [(a as f64 + 0.5) * h, (b as f64 + 0.5) * h, (c as f64 + 0.5) * h]
        })
        .collect();
    let vals: Vec<f64> = pts
        .par_iter()
        .map(|x| {
            if x.iter().all(|c| 0.5 - c > layer) {
                interior_value
            } else {
                boundary_function(k, v, *x)
            }
        })
        .collect();
    let cell_vol = 8.0 * h * h * h;
    BoundaryNorms {
        l1: vals.iter().map(|v| v.abs()).sum::<f64>() * cell_vol,
        linf: vals.iter().fold(0.0, |m, v| m.max(v.abs())),
        interior_value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::ModifiedScattering;
    use proptest::prelude::*;

    fn kernel(n: f64, ell: f64, lambda: f64) -> (RadialPotential, SymmetrizedKernel) {
        let v = RadialPotential::barrier(2.0, 1.0).unwrap();
        let ms = ModifiedScattering::from_potential(&v, ell, lambda).unwrap();
        (v, SymmetrizedKernel::new(n, Arc::new(ms)))
    }

    #[test]
    fn mode_values() {
        assert_eq!(NeumannMode::zero().value([0.1, -0.3, 0.2]), 1.0);
        assert!(NeumannMode::new(1, 0, 0).value([0.0; 3]).abs() < 1e-15);
    }

    #[test]
    fn modes_orthonormal() {
        let lat = ModeLattice::new(3, true);
        let gl = GaussLegendre::new(30);
        // 1-d overlaps suffice by separability
        for a in 0..=3 {
            for b in 0..=3 {
                let v = gl.integrate(-0.5, 0.5, |x| mode_1d(a, x) * mode_1d(b, x));
                assert!((v - f64::from(u8::from(a == b))).abs() < 1e-13);
                assert!((overlap_1d(a, b, 0.0) - f64::from(u8::from(a == b))).abs() < 1e-14);
            }
        }
        assert_eq!(lat.len(), 64);
        assert_eq!(lat.modes[1], NeumannMode::new(0, 0, 1));
    }

    #[test]
    fn neumann_derivative_vanishes_at_faces() {
        let h = 1e-6;
        for m in 0..5 {
            for x in [-0.5, 0.5] {
                let fd = (mode_1d(m, x + h) - mode_1d(m, x - h)) / (2.0 * h);
                assert!(fd.abs() < 1e-6);
            }
        }
    }

    #[test]
    fn overlap_matches_quadrature() {
        let gl = GaussLegendre::new(30);
        for (a, b, d) in [(1, 2, 0.13), (3, 3, -0.2), (0, 2, 0.07)] {
            let ext = |m: u32, x: f64| {
                // even reflection across the faces at ±½
                let y = if x > 0.5 { 1.0 - x } else if x < -0.5 { -1.0 - x } else { x };
                mode_1d(m, y)
            };
            let brk = if d > 0.0 { [-0.5, 0.5 - d, 0.5] } else { [-0.5, -0.5 - d, 0.5] };
            let q = gl.composite(&brk, 1, |y| ext(a, y + d) * mode_1d(b, y));
            assert!((q - overlap_1d(a, b, d)).abs() < 1e-13);
        }
    }

    #[test]
    fn mirror_examples() {
        assert_eq!(mirror_point([0, 0, 0], [0.3, 0.1, 0.0]), [0.3, 0.1, 0.0]);
        let p = mirror_point([1, 0, 0], [0.3, 0.1, 0.0]);
        assert!((p[0] - 0.7).abs() < 1e-15 && p[1] == 0.1);
        assert_eq!(mirror_labels().count(), 27);
    }

    proptest! {
        #[test]
        fn mirror_distance_symmetry(
            x in proptest::array::uniform3(-0.5f64..0.5),
            y in proptest::array::uniform3(-0.5f64..0.5),
            zi in 0usize..27,
        ) {
            let z = mirror_labels().nth(zi).unwrap();
            let a = dist(mirror_point(z, x), y);
            let b = dist(mirror_point(z, y), x);
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!(a >= dist(x, y) - 1e-12);
        }
    }

    #[test]
    fn kernel_symmetry_and_interior_identity() {
        let (_, k) = kernel(10.0, 50.0, 0.1);
        let x = [0.05, -0.1, 0.2];
        let y = [0.08, -0.07, 0.22];
        let direct = -k.n * k.ms.omega_ell_lambda(dist(x, y));
        assert_eq!(k.tilde_value(x, y), direct);
        assert_eq!(k.tilde_value(x, [0.3, 0.3, -0.3]), 0.0);
        for (x, y) in [([0.45, 0.1, -0.48], [0.47, 0.12, -0.45]), ([-0.49, 0.49, 0.0], [-0.45, 0.46, 0.03])] {
            assert!((k.value(x, y) - k.value(y, x)).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_function_interior_value() {
        let (v, k) = kernel(10.0, 50.0, 0.1);
        let h = boundary_function(&k, &v, [0.0; 3]);
        let exact = k.n * k.omega_hat0 * v.l1_norm / k.ms.ell;
        assert!((h - exact).abs() < 1e-8 * k.n / k.ms.ell, "{h} {exact}");
        let (v0, k0) = kernel(0.0, 50.0, 0.1);
        assert_eq!(boundary_function(&k0, &v0, [0.1; 3]), 0.0);
    }

    #[test]
    fn zero_mode_coefficient_is_integral() {
        let (_, k) = kernel(1.0, 50.0, 0.1);
        let f = k.radial_profile();
        let c = neumann_coefficient(&f, NeumannMode::zero(), NeumannMode::zero(), 1e-10).unwrap();
        assert!((c + k.omega_hat0).abs() < 1e-10 * k.omega_hat0);
    }

    #[test]
    fn brute_force_six_dimensional_check() {
        // smooth bump so the tensor rule converges quickly
        let s = 0.3;
        let bump = move |r: f64| if r < s { (1.0 - (r / s).powi(2)).powi(3) } else { 0.0 };
        let f = RadialFunction {
            f: Box::new(bump),
            breaks: vec![0.0, s],
        };
        let modes = [NeumannMode::new(0, 0, 0), NeumannMode::new(1, 0, 0), NeumannMode::new(0, 1, 1)];
        let mat = neumann_matrix(&f, &modes, 1e-10).unwrap();
        let gl = GaussLegendre::new(4);
        let panels = 3;
        let mut pts = Vec::new();
        for i in 0..panels {
            let lo = -0.5 + i as f64 / panels as f64;
            pts.extend(gl.mapped(lo, lo + 1.0 / panels as f64));
        }
        let mut brute = [[0.0; 3]; 3];
        let mut grid: Vec<(Point, f64)> = Vec::new();
        for &(a, wa) in &pts {
            for &(b, wb) in &pts {
                for &(c, wc) in &pts {
                    grid.push(([a, b, c], wa * wb * wc));
                }
            }
        }
        for &(x, wx) in &grid {
            for &(y, wy) in &grid {
                let kv: f64 = mirror_labels().map(|z| bump(dist(mirror_point(z, x), y))).sum();
                if kv == 0.0 {
                    continue;
                }
                for (i, p) in modes.iter().enumerate() {
                    for (j, q) in modes.iter().enumerate() {
                        brute[i][j] += wx * wy * kv * p.value(x) * q.value(y);
                    }
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                assert!((brute[i][j] - mat[i][j]).abs() < 5e-3 * mat[0][0], "{i}{j}: {} vs {}", brute[i][j], mat[i][j]);
            }
        }
    }
}

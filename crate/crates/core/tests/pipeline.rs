use std::f64::consts::PI;
use std::sync::Arc;

use bosegas::bogoliubov::{f_bog, BogParams, DispersionTable};
use bosegas::fock::{build_basis, build_h_bog, eigenvalues, Sector};
use bosegas::neumann_box::{ModeLattice, NeumannMode, SymmetrizedKernel};
use bosegas::scattering::{scattering_length, solve_zero_energy, GridSpec, ModifiedScattering, RadialPotential};
use bosegas::thermo::{box_assembly, lhy_free_energy, schedule, ThermoParams};

#[test]
fn kernel_coefficients_feed_the_dispersion() {
    let v = RadialPotential::barrier(2.0, 1.0).unwrap();
    let sol = Arc::new(solve_zero_energy(&v, GridSpec::default_for(&v)).unwrap());
    let ms = Arc::new(ModifiedScattering::new(&v, sol, 50.0, 0.1).unwrap());
    let params = BogParams::new(10.0, 0.0, ms.clone()).unwrap();
    let k = SymmetrizedKernel::new(10.0, ms.clone());
    let table = DispersionTable::new(&params, &ModeLattice::new(2, false)).unwrap();
    for e in &table.entries {
        // B_p = nε̂(p) and the kernel diagonal is −nω̂(p); both come from the same ω
        assert!((e.b_p - 10.0 * ms.epsilon_hat(e.p)).abs() < 1e-14);
        assert!(e.e > 0.0 && e.e <= e.a_p);
        assert!(k.mode_coefficient(&e.mode) < 0.0);
    }
}

#[test]
fn cubic_symmetry_degeneracy_in_fock_spectrum() {
    let params = BogParams::from_potential(&RadialPotential::barrier(2.0, 1.0).unwrap(), 10.0, 50.0, 0.1, 0.0).unwrap();
    let modes = [NeumannMode::new(1, 0, 0), NeumannMode::new(0, 1, 0), NeumannMode::new(0, 0, 1)];
    let space = build_basis(3, Sector::AtMost(12), 5000).unwrap();
    let h = build_h_bog(&params, &modes, &space).unwrap();
    let e = eigenvalues(&h);
    // three degenerate single excitations
    assert!((e[1] - e[2]).abs() < 1e-9 && (e[2] - e[3]).abs() < 1e-9);
}

#[test]
fn assembly_with_box_free_energy_provider() {
    let v = RadialPotential::barrier(2.0, 1.0).unwrap();
    let a = scattering_length(&v).unwrap().a;
    let (rho, t) = (2e-3, 5e-4);
    let ell: f64 = 40.0;
    let tp = ThermoParams::new(rho, a, t).unwrap();
    let mu = 8.0 * PI * a * rho;
    let vol = ell.powi(3);
    let n_typ = (rho * vol).round();
    let n0 = (20.0 * rho * vol) as usize;
    let provider = |n: usize| f_bog(n as f64, ell, a, t, false).unwrap().total;
    let r = box_assembly(&tp, ell, mu, n0, provider).unwrap();
    // localization never beats the single box at its own typical particle number
    assert!(r.bound <= provider(n_typ as usize) / vol + mu * (rho - n_typ / vol) + 1e-15);
    assert!(r.linear_growth.unwrap().holds);
    assert!(r.geometric_tail.unwrap().holds);
    assert!(r.small_n_branch <= r.large_n_branch);
    assert!((r.minimizer as f64 - n_typ).abs() <= 0.1 * n_typ);
    let lhy = lhy_free_energy(&tp).total;
    assert!(((r.bound - lhy) / lhy).abs() < 0.1, "{} vs {lhy}", r.bound);
}

#[test]
fn schedule_reports_violations_at_moderate_density() {
    let tp = ThermoParams::new(1e-4, 1.0, 0.0).unwrap();
    let s = schedule(&tp, 1.0).unwrap();
    assert_eq!(s.constraints.len(), 3);
    // λ = Y^{10κ} is close to 1 at any desk-scale Y
    assert!(!s.constraints.iter().find(|c| c.name == "lambda < 1/4").unwrap().holds);
    assert!(s.m0 < s.m_cut && s.m_cut < s.n_typical);
}

#[test]
fn box_thermal_term_approaches_the_continuum_linearly_in_hbar() {
    use bosegas::fit::loglog_slope;
    let (rho, a, t) = (1e-3, 1.0, 1e-3);
    let continuum = lhy_free_energy(&ThermoParams::new(rho, a, t).unwrap()).thermal;
    let (mut hbars, mut gaps) = (Vec::new(), Vec::new());
    for ell in [800.0f64, 1600.0, 3200.0] {
        let boxed = f_bog(rho * ell.powi(3), ell, a, t, false).unwrap().thermal / ell.powi(3);
        hbars.push(1.0 / (t * ell * ell).sqrt());
        gaps.push((boxed - continuum).abs());
    }
    let s = loglog_slope(&hbars, &gaps).slope;
    assert!((s - 1.0).abs() < 0.15, "slope {s}");
}

#[test]
fn scheduled_assembly_uses_schedule_parameters() {
    use bosegas::thermo::assemble;
    let tp = ThermoParams::new(1e-2, 0.05, 1e-4).unwrap();
    let s = schedule(&tp, 0.05).unwrap();
    let a = tp.a;
    let vol = s.ell.powi(3);
    let r = assemble(&tp, &s, |n| 4.0 * PI * a * (n * n) as f64 / vol).unwrap();
    assert_eq!(r.n_cap, (40.0 * s.n_typical).ceil() as usize);
    assert!(((r.bound - 4.0 * PI * a * 1e-4) / (4.0 * PI * a * 1e-4)).abs() < 1e-3);
}

use std::f64::consts::PI;
use std::sync::Arc;

use bosegas::bogoliubov::{
    dispersion_deviation, e_bog_deviation, ground_energy, lhy_closed, riemann_gap, BogParams, DispersionTable,
};
use bosegas::fit::loglog_slope;
use bosegas::fock::{
    bog_modes, build_basis, build_full_h, build_h_bog, gibbs_free_energy, quadratic_levels, spectrum,
    spectrum_with_convergence, Sector, DEFAULT_DIM_LIMIT,
};
use bosegas::neumann_box::{kernel_diagonality, ModeLattice, NeumannMode, SymmetrizedKernel};
use bosegas::scattering::{
    barrier_scattering_length, scattering_length, solve_zero_energy, GridSpec, ModifiedScattering, PotentialKind,
};
use bosegas::thermo::{lhy_free_energy, schedule, ThermoParams};
use bosegas::verify;
use serde_json::json;

use crate::config::Settings;
use crate::output::{num, Report};
use crate::Command;

pub struct Outcome {
    pub report: Report,
    /// set when a verification failed
    pub failed: Option<String>,
}

type Res<T> = Result<T, String>;

fn ok(report: Report) -> Res<Outcome> {
    Ok(Outcome { report, failed: None })
}

fn e(err: bosegas::Error) -> String {
    err.to_string()
}

pub fn run(cmd: Command, s: &Settings) -> Res<Outcome> {
    match cmd {
        Command::Scatter => scatter(s),
        Command::Kernel => kernel(s),
        Command::Spectrum => dispersion(s),
        Command::Freeenergy => free_energy(s),
        Command::Oracle => oracle(s),
        Command::Verify => verify_all(s),
        Command::Sweep => sweep(s),
    }
}

fn scatter(s: &Settings) -> Res<Outcome> {
    let v = s.radial_potential().map_err(e)?;
    let sol = solve_zero_energy(&v, GridSpec::default_for(&v)).map_err(e)?;
    let a_quadrature = sol.quadrature_scattering_length(&v);
    let closed = match v.kind {
        PotentialKind::Barrier { v0, radius } => Some(barrier_scattering_length(v0, radius)),
        _ => None,
    };
    let rows = sol
        .grid
        .iter()
        .zip(&sol.g)
        .map(|(&r, &g)| vec![num(r), num(g), num(sol.omega(r)), num(sol.residual)])
        .collect();
    ok(Report {
        header: vec!["r", "g", "omega", "fit_residual"],
        rows,
        json: json!({
            "a": sol.a,
            "a_quadrature": a_quadrature,
            "a_closed_form": closed,
            "identity_rel_err": (a_quadrature - sol.a).abs() / sol.a.abs().max(f64::MIN_POSITIVE),
            "slope_alpha": sol.slope_alpha,
            "fit_residual": sol.residual,
            "range": sol.range,
            "step": sol.step,
            "l1_norm": v.l1_norm,
            "grid_points": sol.grid.len(),
        }),
    })
}

fn kernel(s: &Settings) -> Res<Outcome> {
    let v = s.radial_potential().map_err(e)?;
    let ms = Arc::new(ModifiedScattering::from_potential(&v, s.ell, s.lambda).map_err(e)?);
    let k = SymmetrizedKernel::new(s.n, ms);
    let r = kernel_diagonality(&k, &ModeLattice::new(s.cutoff, true), s.tol).map_err(e)?;
    let rows = r
        .rows
        .iter()
        .map(|x| vec![x.p_index.to_string(), x.q_index.to_string(), num(x.m_pq), num(x.expected), num(x.abs_err)])
        .collect();
    let modes: Vec<String> = r.modes.iter().map(|m| m.to_string()).collect();
    ok(Report {
        header: vec!["p_index", "q_index", "M_pq", "expected", "abs_err"],
        rows,
        json: json!({
            "modes": modes,
            "max_offdiag": r.max_offdiag,
            "max_diag_rel_err": r.max_diag_rel_err,
            "rows": r.rows,
        }),
    })
}

fn bog_params(s: &Settings) -> Res<BogParams> {
    let v = s.radial_potential().map_err(e)?;
    BogParams::from_potential(&v, s.n, s.ell, s.lambda, s.temp).map_err(e)
}

fn dispersion(s: &Settings) -> Res<Outcome> {
    let params = bog_params(s)?;
    let t = DispersionTable::new(&params, &ModeLattice::new(s.cutoff, false)).map_err(e)?;
    let rows = t
        .entries
        .iter()
        .map(|x| {
            vec![
                x.mode.to_string(),
                num(x.p),
                num(x.a_p),
                num(x.b_p),
                num(x.nu),
                num(x.phi),
                num(x.e),
                num(x.e_approx),
                num((x.e - x.e_approx).abs()),
            ]
        })
        .collect();
    ok(Report {
        header: vec!["mode", "p", "A_p", "B_p", "nu", "phi", "e", "e_approx", "abs_dev"],
        rows,
        json: json!({ "a": params.a, "density_ratio": params.density_ratio, "entries": t.entries }),
    })
}

fn free_energy(s: &Settings) -> Res<Outcome> {
    let v = s.radial_potential().map_err(e)?;
    let a = match s.a {
        Some(a) => a,
        None => scattering_length(&v).map_err(e)?.a,
    };
    let tp = ThermoParams::new(s.rho, a, s.temp).map_err(e)?;
    let r = lhy_free_energy(&tp);
    let sched = schedule(&tp, v.range).ok();
    let constraints = sched.as_ref().map(|x| x.constraints.clone());
    let rows = vec![
        vec!["leading".into(), num(r.leading), num(0.0)],
        vec!["lhy_correction".into(), num(r.lhy_correction), num(0.0)],
        vec!["thermal".into(), num(r.thermal), num(r.thermal_tail)],
        vec!["total".into(), num(r.total), num(r.thermal_tail)],
    ];
    ok(Report {
        header: vec!["quantity", "value", "tail_estimate"],
        rows,
        json: json!({
            "inputs": { "rho": tp.rho, "a": tp.a, "temp": tp.temperature, "Y": tp.y(), "Ta2": tp.ta2() },
            "leading": r.leading,
            "lhy_correction": r.lhy_correction,
            "thermal": r.thermal,
            "thermal_tail": r.thermal_tail,
            "total": r.total,
            "schedule": sched,
            "constraint_report": constraints,
        }),
    })
}

fn oracle(s: &Settings) -> Res<Outcome> {
    let modes: Vec<NeumannMode> = s.modes.iter().map(|m| NeumannMode::new(m[0], m[1], m[2])).collect();
    let (res, exact, gibbs, dim) = if s.hamiltonian == "full" {
        let v = s.radial_potential().map_err(e)?;
        let space = build_basis(modes.len(), Sector::Exactly(s.particles), DEFAULT_DIM_LIMIT).map_err(e)?;
        let h = build_full_h(&v, s.ell, &modes, &space, s.tol).map_err(e)?;
        let res = spectrum(&h, s.particles);
        let gibbs = gibbs_free_energy(&res.eigenvalues, s.temp, s.ell);
        (res, None, gibbs, space.dim())
    } else {
        let params = bog_params(s)?;
        let build = |cut: usize| {
            let space = build_basis(modes.len(), Sector::AtMost(cut), DEFAULT_DIM_LIMIT)?;
            build_h_bog(&params, &modes, &space)
        };
        let res = spectrum_with_convergence(build, s.n_max, 1e-8).map_err(e)?;
        let exact = quadratic_levels(&bog_modes(&params, &modes).map_err(e)?, res.eigenvalues.len()).map_err(e)?;
        let gibbs = gibbs_free_energy(&res.eigenvalues, s.temp, s.ell);
        let dim = res.eigenvalues.len();
        (res, Some(exact), gibbs, dim)
    };
    let shifts = res.shift_vs_half_cutoff.clone().unwrap_or_default();
    let rows = res
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            vec![
                i.to_string(),
                num(x),
                res.cutoff.to_string(),
                shifts.get(i).map(|&d| num(d)).unwrap_or_default(),
                exact.as_ref().and_then(|v| v.get(i)).map(|&d| num(d)).unwrap_or_default(),
            ]
        })
        .collect();
    ok(Report {
        header: vec!["index", "eigenvalue", "cutoff", "shift_vs_half_cutoff", "bogoliubov_level"],
        rows,
        json: json!({
            "hamiltonian": s.hamiltonian,
            "dim": dim,
            "converged": res.converged,
            "spectrum": res,
            "bogoliubov_levels": exact,
            "gibbs_free_energy": gibbs,
        }),
    })
}

fn verify_all(s: &Settings) -> Res<Outcome> {
    let checks: Vec<_> = verify::all_checks_filtered(&s.criteria);
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.id.to_string()).collect();
    for c in &checks {
        log::info!("{}", c.line());
    }
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.id.to_string(),
                c.name.to_string(),
                if c.pass { "PASS" } else { "FAIL" }.to_string(),
                c.measured.clone(),
                c.tolerance.to_string(),
                num(c.budget_seconds),
            ]
        })
        .collect();
    let json_checks: Vec<_> = checks
        .iter()
        .map(|c| {
            json!({ "id": c.id, "name": c.name, "pass": c.pass, "measured": c.measured,
                    "tolerance": c.tolerance, "budget_seconds": c.budget_seconds })
        })
        .collect();
    Ok(Outcome {
        report: Report {
            header: vec!["id", "name", "status", "measured", "tolerance", "budget_seconds"],
            rows,
            json: json!({ "checks": json_checks }),
        },
        failed: (!failed.is_empty()).then(|| format!("criteria={}", failed.join(","))),
    })
}

fn sweep(s: &Settings) -> Res<Outcome> {
    let pick = |default: &[f64]| if s.values.is_empty() { default.to_vec() } else { s.values.clone() };
    let v = s.radial_potential().map_err(e)?;
    let sol = Arc::new(solve_zero_energy(&v, GridSpec::default_for(&v)).map_err(e)?);
    let params = |n: f64, lambda: f64| -> Res<BogParams> {
        let ms = ModifiedScattering::new(&v, sol.clone(), s.ell, lambda).map_err(e)?;
        BogParams::new(n, 0.0, Arc::new(ms)).map_err(e)
    };
    let (parameter, quantity, xs, points): (&str, &str, Vec<f64>, Vec<(f64, f64)>) = match s.sweep.as_str() {
        "dispersion-lambda" => {
            let xs = pick(&[0.2, 0.1, 0.05]);
            let grid: Vec<f64> = (0..600).map(|i| PI * 3000f64.powf(i as f64 / 599.0)).collect();
            let pts = xs
                .iter()
                .map(|&l| Ok((dispersion_deviation(&params(s.n, l)?, &grid).map_err(e)?.sup, 0.0)))
                .collect::<Res<Vec<_>>>()?;
            ("lambda", "sup_abs_dispersion_deviation", xs, pts)
        }
        "ebog-lambda" => {
            let xs = pick(&[0.2, 0.1, 0.05]);
            let pts = xs
                .iter()
                .map(|&l| {
                    let d = e_bog_deviation(&params(s.n, l)?).map_err(e)?;
                    Ok((d.deviation, d.tail_estimate))
                })
                .collect::<Res<Vec<_>>>()?;
            ("lambda", "e_bog_deviation", xs, pts)
        }
        "ebog-density" => {
            let xs = pick(&[0.25, 0.5, 1.0, 2.0]);
            let pts = xs
                .iter()
                .map(|&r| {
                    let d = e_bog_deviation(&params(r * s.ell, s.lambda)?).map_err(e)?;
                    Ok((d.deviation, d.tail_estimate))
                })
                .collect::<Res<Vec<_>>>()?;
            ("n_over_ell", "e_bog_deviation", xs, pts)
        }
        "riemann" => {
            let xs = pick(&verify::RIEMANN_HBARS);
            let pts = xs
                .iter()
                .map(|&h| Ok((riemann_gap(h, s.q).map_err(e)?.gap, 0.0)))
                .collect::<Res<Vec<_>>>()?;
            ("hbar", "riemann_gap", xs, pts)
        }
        "lhy-residual" => {
            let xs = pick(&verify::LHY_DENSITY_RATIOS);
            let pts = xs
                .iter()
                .map(|&c| {
                    let g = ground_energy(c, 1.0, 1.0, None).map_err(e)?;
                    Ok(((g.value - lhy_closed(c, 1.0, 1.0)).abs(), g.tail_estimate))
                })
                .collect::<Res<Vec<_>>>()?;
            ("n_a_over_ell", "lhy_residual", xs, pts)
        }
        other => return Err(format!("unknown sweep '{other}'")),
    };
    let ys: Vec<f64> = points.iter().map(|p| p.0).collect();
    let fit = (xs.len() >= 2).then(|| loglog_slope(&xs, &ys));
    let rows = xs
        .iter()
        .zip(&points)
        .map(|(&x, &(y, tail))| {
            vec![
                parameter.to_string(),
                num(x),
                quantity.to_string(),
                num(y),
                num(tail),
                fit.map(|f| num(f.slope)).unwrap_or_default(),
            ]
        })
        .collect();
    ok(Report {
        header: vec!["parameter", "value", "quantity", "result", "tail_estimate", "fitted_exponent"],
        rows,
        json: json!({
            "parameter": parameter,
            "quantity": quantity,
            "values": xs,
            "results": ys,
            "tail_estimates": points.iter().map(|p| p.1).collect::<Vec<_>>(),
            "fit": fit,
        }),
    })
}

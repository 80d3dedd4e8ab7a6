"""Smoke test for the pybosegas extension module.

Build and install with `pip install --no-build-isolation -e crates/py`,
then run `python3 python/smoke_test.py` (or `pytest python/`).
"""

import math

import pybosegas as bg


def test_barrier_scattering_length():
    v = bg.RadialPotential.barrier(2.0, 1.0)
    a, a_quad = bg.scattering_length(v)
    assert abs(a - (1.0 - math.tanh(1.0))) < 1e-8
    assert abs(a_quad / a - 1.0) < 1e-8
    sol = bg.solve_zero_energy(v)
    assert abs(sol.omega(5.0) - a / 5.0) < 1e-9


def test_renormalized_potential_integral():
    v = bg.RadialPotential.barrier(2.0, 1.0)
    ms = bg.ModifiedScattering(v, 100.0, 0.1)
    assert abs(ms.epsilon_integral() / (8 * math.pi * ms.a / 100.0) - 1.0) < 1e-8


def test_bogoliubov_oracle():
    v = bg.RadialPotential.barrier(2.0, 1.0)
    params = bg.BogParams(bg.ModifiedScattering(v, 50.0, 0.1), 10.0)
    modes = [(1, 0, 0), (1, 1, 0)]
    spec = params.oracle_spectrum(modes, 30)
    exact = params.bogoliubov_levels(modes, 5)
    assert spec["converged"]
    for x, y in zip(spec["eigenvalues"], exact):
        assert abs(x - y) < 1e-7
    table = params.dispersion_table(1)
    assert len(table) == 7 and all(row["e"] > 0 for row in table)


def test_lhy():
    assert abs(bg.lhy_half_space_integral() / (512 * math.pi / 15) - 1.0) < 1e-10
    r = bg.lhy_free_energy(1e-4, 1.0, 0.0)
    assert r["thermal"] == 0.0
    assert abs(r["lhy_correction"] / r["leading"] - 128 / (15 * math.sqrt(math.pi)) * 1e-2) < 1e-12


def test_box_assembly_quadratic_oracle():
    rho, a, ell = 0.01, 1.0, (1000.5 / 0.01) ** (1 / 3)
    vol = ell**3
    r = bg.box_assembly(rho, a, 0.0, ell, 8 * math.pi * a * rho, 20010, lambda n: 4 * math.pi * a * n * n / vol)
    assert abs(r["bound"] / (4 * math.pi * a * rho**2) - 1.0) < 1e-6


def test_checks_and_errors():
    checks = bg.run_checks([1, 3])
    assert [c["id"] for c in checks] == [1, 3] and all(c["pass"] for c in checks)
    try:
        bg.RadialPotential.barrier(-1.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative barrier accepted")


if __name__ == "__main__":
    for name, f in list(globals().items()):
        if name.startswith("test_"):
            f()
            print(f"ok {name}")

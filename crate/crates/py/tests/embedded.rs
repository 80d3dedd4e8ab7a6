use pyo3::prelude::*;
use pybosegas::pybosegas;
use pyo3::types::PyDict;

#[test]
fn module_imports_and_computes() {
    pyo3::append_to_inittab!(pybosegas);
    Python::initialize();
    Python::attach(|py| {
        let locals = PyDict::new(py);
        py.run(
            c"
import math, pybosegas as bg
v = bg.RadialPotential.barrier(2.0, 1.0)
a, _ = bg.scattering_length(v)
assert abs(a - (1 - math.tanh(1))) < 1e-8
r = bg.lhy_free_energy(1e-3, 1.0, 0.0)
total = r['total']
try:
    bg.BogParams(bg.ModifiedScattering(v, 50.0, 0.01), 10.0)
    bad = False
except ValueError:
    bad = True
",
            None,
            Some(&locals),
        )
        .unwrap();
        let total: f64 = locals.get_item("total").unwrap().unwrap().extract().unwrap();
        let lead = 4.0 * std::f64::consts::PI * 1e-6;
        assert!((total / lead - 1.0 - 4.814_417_779_6 * 1e-3f64.sqrt()).abs() < 1e-10);
        assert!(locals.get_item("bad").unwrap().unwrap().extract::<bool>().unwrap());
    });
}

//! Python module over the core library. Thin by design: plain floats,
//! lists, and one result class; anything heavier stays on the Rust side.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qmlab::{born, bound, energetics, momentum, units, Grid, Potential};

fn err(e: qmlab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// One bound level with its wavefunction sampled on the radial grid.
#[pyclass(frozen, get_all)]
struct EigenState {
    index: usize,
    energy: f64,
    energy_ev: f64,
    method: String,
    residual_sup: f64,
    r: Vec<f64>,
    psi: Vec<f64>,
}

#[pymethods]
impl EigenState {
    fn __repr__(&self) -> String {
        format!(
            "EigenState(index={}, energy={:.6e}, method='{}')",
            self.index, self.energy, self.method
        )
    }
}

fn state_from(sol: bound::EigenSolution) -> EigenState {
    EigenState {
        index: sol.index,
        energy: sol.energy,
        energy_ev: sol.energy * units::HARTREE_IN_EV,
        method: sol.method.name().to_string(),
        residual_sup: sol.residual_sup,
        r: sol.psi.grid().nodes().to_vec(),
        psi: sol.psi.real_values(),
    }
}

/// Lowest `count` levels of −strength/r at angular momentum `l`.
#[pyfunction]
#[pyo3(signature = (l=0, count=1, r_max=40.0, n=4000, strength=1.0))]
fn solve_coulomb(l: u32, count: usize, r_max: f64, n: usize, strength: f64) -> PyResult<Vec<EigenState>> {
    let grid = Grid::radial(r_max, n).map_err(err)?;
    let pot = Potential::coulomb(strength).map_err(err)?;
    let states = bound::solve_radial(&pot, l, count, &grid).map_err(err)?;
    Ok(states.into_iter().map(state_from).collect())
}

/// Hydrogen ground state as (energy, energy_ev).
#[pyfunction]
#[pyo3(signature = (r_max=40.0, n=4000))]
fn ground_state_energy(r_max: f64, n: usize) -> PyResult<(f64, f64)> {
    let states = solve_coulomb(0, 1, r_max, n, 1.0)?;
    Ok((states[0].energy, states[0].energy_ev))
}

/// Closed-form hydrogen momentum amplitude a(p).
#[pyfunction]
fn amplitude_closed_form(p: f64) -> PyResult<f64> {
    momentum::hydrogen_amplitude_closed_form(p).map_err(err)
}

/// Momentum decomposition of the solved hydrogen ground state:
/// (p nodes, a(p), a at p=0).
#[pyfunction]
#[pyo3(signature = (r_max=40.0, n=4000, p_max=20.0, p_bins=2000))]
fn momentum_amplitudes(
    r_max: f64,
    n: usize,
    p_max: f64,
    p_bins: usize,
) -> PyResult<(Vec<f64>, Vec<f64>, f64)> {
    let grid = Grid::radial(r_max, n).map_err(err)?;
    let pot = Potential::coulomb(1.0).map_err(err)?;
    let states = bound::solve_radial(&pot, 0, 1, &grid).map_err(err)?;
    let p_grid = Grid::radial(p_max, p_bins).map_err(err)?;
    let amp = momentum::decompose_onto(&states[0].psi, &p_grid).map_err(err)?;
    Ok((amp.p_grid.nodes().to_vec(), amp.values, amp.at_zero))
}

/// Radius where the kinetic and balancing energy densities cross for the
/// hydrogen ground state.
#[pyfunction]
#[pyo3(signature = (r_max=40.0, n=4000))]
fn crossing_radius(r_max: f64, n: usize) -> PyResult<f64> {
    let grid = Grid::radial(r_max, n).map_err(err)?;
    let pot = Potential::coulomb(1.0).map_err(err)?;
    let states = bound::solve_radial(&pot, 0, 1, &grid).map_err(err)?;
    let dens = energetics::energy_densities(&states[0].psi, &pot).map_err(err)?;
    energetics::crossing_radius(&dens).map_err(err)
}

/// Integrated energy components of the hydrogen ground state as a dict
/// with keys ke, c, pe, e.
#[pyfunction]
#[pyo3(signature = (r_max=40.0, n=4000))]
fn energy_totals(py: Python<'_>, r_max: f64, n: usize) -> PyResult<Py<PyDict>> {
    let grid = Grid::radial(r_max, n).map_err(err)?;
    let pot = Potential::coulomb(1.0).map_err(err)?;
    let states = bound::solve_radial(&pot, 0, 1, &grid).map_err(err)?;
    let dens = energetics::energy_densities(&states[0].psi, &pot).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("ke", dens.ke_total)?;
    out.set_item("c", dens.c_total)?;
    out.set_item("pe", dens.pe_total)?;
    out.set_item("e", dens.e_total)?;
    Ok(out.into())
}

/// First-order amplitude and cross-section for −strength·e^{−mu r}/r at
/// momentum p and angle theta (radians): dict with q, f, dcs, method.
#[pyfunction]
#[pyo3(signature = (strength=1.0, mu=1.0, p=1.0, theta=std::f64::consts::PI))]
fn born_amplitude_yukawa(
    py: Python<'_>,
    strength: f64,
    mu: f64,
    p: f64,
    theta: f64,
) -> PyResult<Py<PyDict>> {
    let pot = Potential::yukawa(strength, mu).map_err(err)?;
    let kin = born::MomentumTransfer::from_kinematics(p, theta).map_err(err)?;
    let res = born::born_amplitude(&pot, p, theta).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("q", kin.q)?;
    out.set_item("f", res.amplitude)?;
    out.set_item("dcs", res.dcs)?;
    out.set_item("method", res.method.name())?;
    Ok(out.into())
}

/// Unscreened-limit cross-section at (p, theta), reached by screening
/// extrapolation.
#[pyfunction]
fn rutherford_dcs(p: f64, theta: f64) -> PyResult<f64> {
    let res = born::rutherford_dcs(p, theta, born::DEFAULT_SCREENINGS).map_err(err)?;
    Ok(res.dcs)
}

#[pyfunction]
fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

#[pymodule]
fn qmlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<EigenState>()?;
    m.add_function(wrap_pyfunction!(solve_coulomb, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state_energy, m)?)?;
    m.add_function(wrap_pyfunction!(amplitude_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(momentum_amplitudes, m)?)?;
    m.add_function(wrap_pyfunction!(crossing_radius, m)?)?;
    m.add_function(wrap_pyfunction!(energy_totals, m)?)?;
    m.add_function(wrap_pyfunction!(born_amplitude_yukawa, m)?)?;
    m.add_function(wrap_pyfunction!(rutherford_dcs, m)?)?;
    m.add("HARTREE_IN_EV", units::HARTREE_IN_EV)?;
    m.add("BOHR_IN_M", units::BOHR_IN_M)?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    Ok(())
}

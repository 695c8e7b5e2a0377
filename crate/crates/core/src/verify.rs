//! The acceptance suite: every headline claim of the library, run end to
//! end on hydrogen defaults and reported as one pass/fail entry each.
//!
//! Callers (the CLI `verify` command and the acceptance test target) get a
//! flat list of checks with the numbers that were actually produced, so a
//! failure is diagnosable from the report alone.

use crate::bound::{self, EigenSolution};
use crate::energetics;
use crate::momentum;
use crate::potential::Potential;
use crate::tdse::{self, PropagationRun};
use crate::{born, units, Grid, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// One acceptance entry: what was checked, against what, and how it went.
#[derive(Debug, Clone)]
pub struct Check {
    pub criterion: u8,
    pub name: &'static str,
    /// Short phrase tying the check to the physical claim it realizes.
    pub anchor: &'static str,
    pub expected: f64,
    pub computed: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn within(
        criterion: u8,
        name: &'static str,
        anchor: &'static str,
        expected: f64,
        computed: f64,
        tol: f64,
    ) -> Self {
        let pass = computed.is_finite() && (computed - expected).abs() <= tol;
        Check { criterion, name, anchor, expected, computed, tol, pass }
    }

    /// |computed| must stay at or below `bound`.
    fn below(
        criterion: u8,
        name: &'static str,
        anchor: &'static str,
        computed: f64,
        bound: f64,
    ) -> Self {
        let pass = computed.is_finite() && computed.abs() <= bound;
        Check { criterion, name, anchor, expected: 0.0, computed, tol: bound, pass }
    }

    /// computed must exceed the `floor`.
    fn above(
        criterion: u8,
        name: &'static str,
        anchor: &'static str,
        computed: f64,
        floor: f64,
    ) -> Self {
        let pass = computed.is_finite() && computed > floor;
        Check { criterion, name, anchor, expected: floor, computed, tol: 0.0, pass }
    }
}

#[derive(Debug, Clone)]
pub struct AcceptanceReport {
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn hydrogen_ground(grid: &Grid) -> Result<EigenSolution> {
    let coulomb = Potential::coulomb(1.0)?;
    let mut states = bound::solve_radial(&coulomb, 0, 1, grid)?;
    Ok(states.remove(0))
}

/// Phase error of a harmonic eigenstate over one period at the given step
/// count; the second-order probe for the propagator.
fn eigenstate_phase_error(n_steps: usize) -> Result<f64> {
    let grid = Grid::uniform(-20.0, 20.0, 512)?;
    let psi0 = tdse::gaussian_packet(&grid, 0.0, std::f64::consts::FRAC_1_SQRT_2, 0.0)?;
    let period = 2.0 * PI;
    let dt = period / n_steps as f64;
    let run = PropagationRun::new(psi0.clone(), Potential::harmonic(1.0)?, dt, n_steps)?;
    let done = tdse::propagate(run)?;
    let psi_t = done.final_state().expect("propagated run has a final state");
    let w = grid.volume_weights();
    let mut overlap = Complex64::new(0.0, 0.0);
    for i in 0..grid.n() {
        overlap += psi0.values()[i].conj() * psi_t.values()[i] * w[i];
    }
    Ok((overlap * Complex64::from_polar(1.0, 0.5 * period)).arg().abs())
}

/// Runs every acceptance criterion and collects the verdicts.  Check
/// failures are encoded in the report, not returned as errors; `Err` means
/// the suite itself could not run.
pub fn run_acceptance() -> Result<AcceptanceReport> {
    let mut checks = Vec::new();
    let coulomb = Potential::coulomb(1.0)?;
    let grid = Grid::radial_default();

    // 1: ground-state energy, both unit systems
    let ground = hydrogen_ground(&grid)?;
    checks.push(Check::within(
        1,
        "ground-state energy (hartree)",
        "hydrogen ground level at minus one half hartree",
        -0.5,
        ground.energy,
        1e-4,
    ));
    checks.push(Check::within(
        1,
        "ground-state energy (eV)",
        "hydrogen ground level at -13.6 eV",
        -13.6,
        units::hartree_to_ev(ground.energy)?,
        0.01,
    ));

    // 2: eigenfunction shape against e^{−r}/√π
    let norm = 1.0 / PI.sqrt();
    let mut shape_dev = 0.0f64;
    for (i, &r) in grid.nodes().iter().enumerate() {
        if r > 20.0 {
            break;
        }
        shape_dev = shape_dev.max((ground.psi.values()[i].re - norm * (-r).exp()).abs());
    }
    checks.push(Check::below(
        2,
        "ground-state shape deviation on [h, 20]",
        "normalized exponential orbital",
        shape_dev,
        1e-4,
    ));

    // 3: momentum amplitude against the closed form, and the norm identity
    let amp = momentum::decompose(&ground.psi)?;
    let mut a_dev = (amp.at_zero - momentum::hydrogen_amplitude_closed_form(0.0)?).abs();
    for (j, &p) in amp.p_grid.nodes().iter().enumerate() {
        if p > 10.0 {
            break;
        }
        a_dev = a_dev.max((amp.values[j] - momentum::hydrogen_amplitude_closed_form(p)?).abs());
    }
    checks.push(Check::below(
        3,
        "momentum amplitude deviation on [0, 10]",
        "momentum distribution of the ground orbital",
        a_dev,
        1e-3,
    ));
    checks.push(Check::below(
        3,
        "momentum-space norm minus one",
        "norm preserved across the transform",
        momentum::parseval_total(&amp) - 1.0,
        1e-4,
    ));

    // 4-6: pointwise fields of the closed-form orbital
    let closed = bound::ground_state_closed_form(&grid)?;
    let dens = energetics::energy_densities(&closed.psi, &coulomb)?;
    let mut ke_rel = 0.0f64;
    for i in 0..grid.n() {
        let target = 0.5 * dens.density[i];
        if target > 0.0 {
            ke_rel = ke_rel.max((dens.ke[i] - target).abs() / target);
        }
    }
    checks.push(Check::below(
        4,
        "kinetic density vs half the probability density",
        "kinetic density proportional to the density itself",
        ke_rel,
        1e-4,
    ));
    let mut c_rel = 0.0f64;
    for (i, &r) in grid.nodes().iter().enumerate() {
        // the closed form crosses zero at r = 2; relative error is
        // meaningless in its immediate neighborhood
        if !(0.1..=10.0).contains(&r) || (r - 2.0).abs() <= 0.1 {
            continue;
        }
        let target = (1.0 / r - 0.5) * dens.density[i];
        c_rel = c_rel.max((dens.c[i] - target).abs() / target.abs());
    }
    checks.push(Check::below(
        4,
        "balancing density vs its closed form on [0.1, 10]",
        "balancing term of the ground orbital",
        c_rel,
        1e-4,
    ));
    checks.push(Check::within(
        4,
        "balancing-density crossing radius",
        "balancing term zero at twice the length scale",
        2.0,
        energetics::crossing_radius(&dens)?,
        1e-3,
    ));

    checks.push(Check::within(
        5,
        "total kinetic energy",
        "ground-state kinetic total",
        0.5,
        dens.ke_total,
        1e-4,
    ));
    checks.push(Check::within(
        5,
        "total potential energy",
        "ground-state potential total",
        -1.0,
        dens.pe_total,
        1e-4,
    ));
    checks.push(Check::within(
        5,
        "total energy",
        "ground-state energy total",
        -0.5,
        dens.e_total,
        1e-4,
    ));
    checks.push(Check::below(
        5,
        "virial balance 2*KE + PE",
        "virial condition for the bare 1/r potential",
        2.0 * dens.ke_total + dens.pe_total,
        1e-4,
    ));
    let virial = energetics::virial_report(&dens);
    let local_worst = virial
        .checks
        .iter()
        .skip(1)
        .map(|c| c.deviation / c.lhs.abs())
        .fold(0.0, f64::max);
    checks.push(Check::below(
        5,
        "local balance checks at one bohr",
        "pointwise energy bookkeeping at the length scale",
        local_worst,
        1e-3,
    ));

    let separation =
        (0..grid.n()).map(|i| (dens.ke[i] - dens.c[i]).abs()).fold(0.0, f64::max);
    checks.push(Check::above(
        6,
        "peak pointwise kinetic-vs-balancing separation",
        "the two kinetic forms differ pointwise",
        separation,
        0.01,
    ));
    checks.push(Check::below(
        6,
        "relative total kinetic-vs-balancing gap",
        "the two kinetic forms share their total",
        (dens.ke_total - dens.c_total) / dens.ke_total,
        1e-6,
    ));

    // 7: stationary residual of the solved pair, then a deliberate miss
    let res = energetics::residual(&ground.psi, &coulomb, ground.energy)?;
    let scale = ground.energy.abs() * ground.psi.max_abs();
    checks.push(Check::below(
        7,
        "stationary residual over its natural scale",
        "the solved pair annihilates the stationary form",
        res.sup_norm / scale,
        1e-4,
    ));
    let miss = energetics::residual(&ground.psi, &coulomb, -0.4)?;
    let mut miss_dev = 0.0f64;
    for (v, psi) in miss.values.iter().zip(ground.psi.values()) {
        miss_dev = miss_dev.max((v - psi * 0.1).norm());
    }
    checks.push(Check::below(
        7,
        "shifted-energy residual vs 0.1 psi",
        "residual scales as the energy offset times the state",
        miss_dev,
        1e-3,
    ));

    // 8: screened-limit correspondence and the cross-section oracle
    let (_, screening_report) = born::potential_from_propagator(born::DEFAULT_SCREENINGS)?;
    checks.push(Check::below(
        8,
        "extrapolated potential vs -1/r on [0.5, 10]",
        "bare potential recovered from the screened limit",
        screening_report.max_rel_deviation,
        1e-3,
    ));
    let yukawa = Potential::yukawa(1.0, 1.0)?;
    let mut quad_rel = 0.0f64;
    for i in 0..=11 {
        let theta = PI / 12.0 + i as f64 * (PI - PI / 12.0) / 11.0;
        let analytic = born::born_amplitude(&yukawa, 1.0, theta)?.amplitude;
        let quad = born::born_amplitude_quadrature(&yukawa, 1.0, theta)?.amplitude;
        quad_rel = quad_rel.max((quad - analytic).abs() / analytic.abs());
    }
    checks.push(Check::below(
        8,
        "amplitude quadrature vs closed form",
        "screened amplitude computed two independent ways",
        quad_rel,
        1e-5,
    ));
    checks.push(Check::within(
        8,
        "Rutherford cross-section at p=1, 90 degrees",
        "classical cross-section from the screened limit",
        1.0,
        born::rutherford_dcs(1.0, FRAC_PI_2, born::DEFAULT_SCREENINGS)?.dcs,
        1e-2,
    ));

    // 9: propagator properties
    let grid_1d = Grid::uniform(-20.0, 20.0, 512)?;
    let eigen = tdse::gaussian_packet(&grid_1d, 0.0, std::f64::consts::FRAC_1_SQRT_2, 0.0)?;
    let long_run =
        PropagationRun::new(eigen, Potential::harmonic(1.0)?, 0.001, 10_000)?.with_stride(1000);
    let long_done = tdse::propagate(long_run)?;
    let norm_dev =
        long_done.snapshots.iter().map(|s| (s.norm - 1.0).abs()).fold(0.0, f64::max);
    checks.push(Check::below(
        9,
        "norm drift over ten thousand steps",
        "unitary stepping",
        norm_dev,
        1e-8,
    ));
    let phase_100 = eigenstate_phase_error(100)?;
    checks.push(Check::below(
        9,
        "eigenstate phase error over one period",
        "stationary state only turns its phase",
        phase_100,
        1e-3,
    ));
    let audit_grid = Grid::uniform(-80.0, 79.9609375, 4096)?;
    let barrier: Vec<(f64, f64)> = audit_grid
        .nodes()
        .iter()
        .map(|&x| {
            let s = (x * x + 1.0).sqrt();
            (x, (-s).exp() / s)
        })
        .collect();
    let packet = tdse::gaussian_packet(&audit_grid, -35.0, 3.0, 2.0)?;
    let audit_run = PropagationRun::new(packet, Potential::tabulated(barrier)?, 0.005, 7000)?
        .with_stride(200)
        .with_mask(true);
    let audit_done = tdse::propagate(audit_run)?;
    let ledger = tdse::scattering_energy_audit(&audit_done)?;
    checks.push(Check::below(
        9,
        "energy-ledger drift in the barrier traversal",
        "initial energy retained through the scattering run",
        ledger.max_rel_drift,
        1e-5,
    ));

    // 10: method agreement and convergence orders
    let fine = Grid::radial(40.0, 8000)?;
    let dense = bound::solve_radial(&coulomb, 0, 2, &fine)?;
    let shooting_grid = Grid::radial(40.0, 16_000)?;
    let numerov_0 = bound::numerov_eigenvalue(&coulomb, (-0.6, -0.4), &shooting_grid)?;
    let numerov_1 = bound::numerov_eigenvalue(&coulomb, (-0.14, -0.11), &shooting_grid)?;
    checks.push(Check::below(
        10,
        "ground-state energy, two methods",
        "independent eigenvalue methods agree",
        dense[0].energy - numerov_0,
        1e-5,
    ));
    checks.push(Check::below(
        10,
        "first-excited energy, two methods",
        "independent eigenvalue methods agree",
        dense[1].energy - numerov_1,
        1e-5,
    ));
    let coarse = hydrogen_ground(&Grid::radial(40.0, 2000)?)?.energy;
    let medium = hydrogen_ground(&Grid::radial(40.0, 4000)?)?.energy;
    let eigen_ratio = (coarse + 0.5) / (medium + 0.5);
    checks.push(Check::within(
        10,
        "eigensolver error ratio under grid halving",
        "second-order eigenvalue convergence",
        4.0,
        eigen_ratio,
        0.5,
    ));
    let phase_200 = eigenstate_phase_error(200)?;
    checks.push(Check::within(
        10,
        "propagator error ratio under step halving",
        "second-order splitting convergence",
        4.0,
        phase_100 / phase_200,
        0.5,
    ));

    let pass = checks.iter().all(|c| c.pass);
    Ok(AcceptanceReport { checks, pass })
}

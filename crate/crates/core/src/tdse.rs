//! Time evolution on 1D uniform grids.
//!
//! One step is the symmetric splitting e^{−iV dt/2} e^{−iT dt} e^{−iV dt/2}
//! with the kinetic factor applied spectrally; the grid is treated as
//! periodic with length n·h, so the kinetic step is exact and the splitting
//! error is the only error source.  An optional cos² absorbing mask over
//! the outer tenth of each side keeps wrap-around out of energy audits.

use crate::grid::GridKind;
use crate::potential::Potential;
use crate::wavefunction::{Normalization, Wavefunction};
use crate::{Error, Grid, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Boundary amplitude above this aborts a run as contaminated.
const BOUNDARY_LIMIT: f64 = 1e-4;

/// State and observables recorded at one instant of a run.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub psi: Wavefunction,
    pub norm: f64,
    /// Total energy: kinetic + potential, extensive in the surviving norm.
    pub energy: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub position: f64,
    pub momentum: f64,
}

/// One propagation: initial state, static potential, stepping plan, and
/// (after `propagate`) the recorded snapshots.
#[derive(Debug, Clone)]
pub struct PropagationRun {
    pub psi0: Wavefunction,
    pub pot: Potential,
    pub dt: f64,
    pub steps: usize,
    pub snapshot_stride: usize,
    pub absorbing_mask: bool,
    /// dt·max|V| ≥ 0.5 on this grid: the potential phase advances fast
    /// enough per step to degrade the splitting.
    pub stability_warning: bool,
    pub snapshots: Vec<Snapshot>,
}

impl PropagationRun {
    pub fn new(psi0: Wavefunction, pot: Potential, dt: f64, steps: usize) -> Result<Self> {
        if psi0.grid().kind() != GridKind::Uniform1d {
            return Err(Error::Grid("propagation needs a 1D uniform grid".into()));
        }
        if psi0.grid().n() < 16 {
            return Err(Error::Grid(format!(
                "propagation needs at least 16 nodes, got {}",
                psi0.grid().n()
            )));
        }
        if !dt.is_finite() {
            return Err(Error::Domain(format!("time step must be finite, got {dt}")));
        }
        if psi0.normalization() != Normalization::UnitL2 {
            return Err(Error::Domain("initial state must be unit-normalized".into()));
        }
        let v = pot.evaluate_many(psi0.grid().nodes())?;
        let vmax = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let stability_warning = dt.abs() * vmax >= 0.5;
        Ok(PropagationRun {
            psi0,
            pot,
            dt,
            steps,
            snapshot_stride: 0,
            absorbing_mask: false,
            stability_warning,
            snapshots: Vec::new(),
        })
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.snapshot_stride = stride;
        self
    }

    pub fn with_mask(mut self, on: bool) -> Self {
        self.absorbing_mask = on;
        self
    }

    /// Final state; present once the run has been propagated.
    pub fn final_state(&self) -> Option<&Wavefunction> {
        self.snapshots.last().map(|s| &s.psi)
    }
}

/// Min-uncertainty packet (2πσ²)^{−1/4} e^{−(x−x₀)²/4σ² + ip₀x}, with σ the
/// initial position spread, renormalized on the grid.
pub fn gaussian_packet(grid: &Grid, x0: f64, sigma: f64, p0: f64) -> Result<Wavefunction> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Domain(format!("packet width must be positive, got {sigma}")));
    }
    let amp = 1.0 / (2.0 * PI * sigma * sigma).powf(0.25);
    let values: Vec<Complex64> = grid
        .nodes()
        .iter()
        .map(|&x| {
            let envelope = amp * (-(x - x0) * (x - x0) / (4.0 * sigma * sigma)).exp();
            Complex64::from_polar(envelope, p0 * x)
        })
        .collect();
    Wavefunction::unit(grid.clone(), values)
}

/// ⟨x²⟩ − ⟨x⟩² of a state on its grid.
pub fn position_variance(psi: &Wavefunction) -> f64 {
    let w = psi.grid().volume_weights();
    let nodes = psi.grid().nodes();
    let dens = psi.density();
    let mut nn = 0.0;
    let mut x1 = 0.0;
    let mut x2 = 0.0;
    for i in 0..nodes.len() {
        let d = dens[i] * w[i];
        nn += d;
        x1 += nodes[i] * d;
        x2 += nodes[i] * nodes[i] * d;
    }
    x2 / nn - (x1 / nn) * (x1 / nn)
}

/// Periodic spectral wavenumbers for an n-node grid of spacing h.
fn wavenumbers(n: usize, h: f64) -> Vec<f64> {
    let length = n as f64 * h;
    (0..n)
        .map(|j| {
            let j = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
            2.0 * PI * j / length
        })
        .collect()
}

/// cos² ramp from 0 at each edge to 1 over the outer tenth of the nodes.
fn absorbing_profile(n: usize) -> Vec<f64> {
    let w = n / 10;
    let mut m = vec![1.0; n];
    for i in 0..w {
        let ramp = (0.5 * PI * (w - i) as f64 / w as f64).cos();
        m[i] = ramp * ramp;
        m[n - 1 - i] = ramp * ramp;
    }
    m
}

struct Observer {
    fft: std::sync::Arc<dyn rustfft::Fft<f64>>,
    scratch: Vec<Complex64>,
    buf: Vec<Complex64>,
    k: Vec<f64>,
    weights: Vec<f64>,
    nodes: Vec<f64>,
    v: Vec<f64>,
}

impl Observer {
    fn snapshot(&mut self, step: usize, dt: f64, psi: &Wavefunction) -> Snapshot {
        let vals = psi.values();
        let mut nn = 0.0;
        let mut xbar = 0.0;
        let mut pe = 0.0;
        for i in 0..vals.len() {
            let d = vals[i].norm_sqr() * self.weights[i];
            nn += d;
            xbar += self.nodes[i] * d;
            pe += self.v[i] * d;
        }
        self.buf.copy_from_slice(vals);
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        let mut s2 = 0.0;
        let mut ke_spec = 0.0;
        let mut p_spec = 0.0;
        for (j, f) in self.buf.iter().enumerate() {
            let a = f.norm_sqr();
            s2 += a;
            ke_spec += 0.5 * self.k[j] * self.k[j] * a;
            p_spec += self.k[j] * a;
        }
        let kinetic = nn * ke_spec / s2;
        Snapshot {
            step,
            time: step as f64 * dt,
            psi: psi.clone(),
            norm: nn.sqrt(),
            energy: kinetic + pe,
            kinetic,
            potential: pe,
            position: xbar / nn,
            momentum: p_spec / s2,
        }
    }
}

/// Runs the stepping plan, filling `snapshots` (always including the
/// initial and final states).  Zero steps returns the input unchanged.
pub fn propagate(mut run: PropagationRun) -> Result<PropagationRun> {
    let grid = run.psi0.grid().clone();
    let n = grid.n();
    let h = grid.h();
    let v = run.pot.evaluate_many(grid.nodes())?;
    let k = wavenumbers(n, h);

    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());

    let half_v: Vec<Complex64> =
        v.iter().map(|&vi| Complex64::from_polar(1.0, -0.5 * vi * run.dt)).collect();
    let kinetic: Vec<Complex64> =
        k.iter().map(|&kj| Complex64::from_polar(1.0, -0.5 * kj * kj * run.dt)).collect();
    let mask = run.absorbing_mask.then(|| absorbing_profile(n));

    let mut observer = Observer {
        fft: forward.clone(),
        scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        buf: vec![Complex64::new(0.0, 0.0); n],
        k,
        weights: grid.volume_weights(),
        nodes: grid.nodes().to_vec(),
        v,
    };

    let boundary = |psi: &[Complex64], step: usize| -> Result<()> {
        let amp = psi[0].norm().max(psi[n - 1].norm());
        if amp > BOUNDARY_LIMIT {
            return Err(Error::BoundaryContamination { step, amplitude: amp });
        }
        Ok(())
    };

    let mut psi = run.psi0.values().to_vec();
    boundary(&psi, 0)?;
    run.snapshots.clear();
    run.snapshots.push(observer.snapshot(0, run.dt, &run.psi0));

    let mut scratch = vec![Complex64::new(0.0, 0.0); scratch_len];
    let inv_n = 1.0 / n as f64;
    for step in 1..=run.steps {
        for (p, ph) in psi.iter_mut().zip(&half_v) {
            *p *= ph;
        }
        forward.process_with_scratch(&mut psi, &mut scratch);
        for (p, ph) in psi.iter_mut().zip(&kinetic) {
            *p *= ph;
        }
        inverse.process_with_scratch(&mut psi, &mut scratch);
        for (p, ph) in psi.iter_mut().zip(&half_v) {
            *p = *p * ph * inv_n;
        }
        if let Some(m) = &mask {
            for (p, &mi) in psi.iter_mut().zip(m) {
                *p *= mi;
            }
        }
        boundary(&psi, step)?;
        let record_stride = run.snapshot_stride > 0 && step % run.snapshot_stride == 0;
        if record_stride || step == run.steps {
            let state = Wavefunction::raw(grid.clone(), psi.clone())?;
            run.snapshots.push(observer.snapshot(step, run.dt, &state));
        }
    }
    Ok(run)
}

/// One row of the per-snapshot energy bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct LedgerRow {
    pub time: f64,
    pub norm: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub energy: f64,
}

/// Energy ledger of a completed run: the initial total is the reference,
/// and the maximum relative excursion from it is the conservation verdict.
#[derive(Debug, Clone)]
pub struct EnergyLedger {
    pub rows: Vec<LedgerRow>,
    pub e_in: f64,
    pub max_rel_drift: f64,
}

pub fn scattering_energy_audit(run: &PropagationRun) -> Result<EnergyLedger> {
    if run.snapshots.is_empty() {
        return Err(Error::Domain("run has no snapshots; propagate it first".into()));
    }
    let rows: Vec<LedgerRow> = run
        .snapshots
        .iter()
        .map(|s| LedgerRow {
            time: s.time,
            norm: s.norm,
            kinetic: s.kinetic,
            potential: s.potential,
            energy: s.energy,
        })
        .collect();
    let e_in = rows[0].energy;
    let scale = e_in.abs().max(1e-300);
    let max_rel_drift =
        rows.iter().map(|r| (r.energy - e_in).abs() / scale).fold(0.0, f64::max);
    Ok(EnergyLedger { rows, e_in, max_rel_drift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn zero_potential() -> Potential {
        Potential::tabulated(vec![(-1e4, 0.0), (1e4, 0.0)]).unwrap()
    }

    /// Ground state of the unit harmonic well is the σ = 1/√2 packet.
    fn harmonic_ground(grid: &Grid) -> Wavefunction {
        gaussian_packet(grid, 0.0, FRAC_1_SQRT_2, 0.0).unwrap()
    }

    fn eigenstate_phase_error(n_steps: usize) -> f64 {
        let grid = Grid::uniform(-20.0, 20.0, 512).unwrap();
        let psi0 = harmonic_ground(&grid);
        let period = 2.0 * PI;
        let dt = period / n_steps as f64;
        let run =
            PropagationRun::new(psi0.clone(), Potential::harmonic(1.0).unwrap(), dt, n_steps)
                .unwrap();
        let done = propagate(run).unwrap();
        let psi_t = done.final_state().unwrap();
        let w = grid.volume_weights();
        let mut overlap = Complex64::new(0.0, 0.0);
        for i in 0..grid.n() {
            overlap += psi0.values()[i].conj() * psi_t.values()[i] * w[i];
        }
        let e0 = 0.5;
        assert!(
            (overlap.norm() - 1.0).abs() < 1e-6,
            "overlap magnitude {} at {n_steps} steps",
            overlap.norm()
        );
        // rotate the expected phase e^{−iE₀T} away; what remains is error
        (overlap * Complex64::from_polar(1.0, e0 * period)).arg().abs()
    }

    #[test]
    fn eigenstate_acquires_the_stationary_phase() {
        let err = eigenstate_phase_error(100);
        assert!(err < 1e-3, "phase error {err}");
    }

    #[test]
    fn splitting_error_is_second_order_in_dt() {
        let e1 = eigenstate_phase_error(100);
        let e2 = eigenstate_phase_error(200);
        let e4 = eigenstate_phase_error(400);
        let r12 = e1 / e2;
        let r24 = e2 / e4;
        assert!((3.5..4.5).contains(&r12), "ratio {r12}");
        assert!((3.5..4.5).contains(&r24), "ratio {r24}");
    }

    #[test]
    fn norm_is_preserved_over_many_steps() {
        let grid = Grid::uniform(-20.0, 20.0, 512).unwrap();
        let psi0 = harmonic_ground(&grid);
        let run = PropagationRun::new(psi0, Potential::harmonic(1.0).unwrap(), 0.001, 10_000)
            .unwrap()
            .with_stride(1000);
        let done = propagate(run).unwrap();
        assert_eq!(done.snapshots.len(), 11);
        for s in &done.snapshots {
            assert!((s.norm - 1.0).abs() < 1e-8, "norm {} at step {}", s.norm, s.step);
        }
        let e0 = done.snapshots[0].energy;
        for s in &done.snapshots {
            assert!(
                ((s.energy - e0) / e0).abs() < 1e-6,
                "energy drift {} at step {}",
                s.energy - e0,
                s.step
            );
        }
    }

    #[test]
    fn free_packet_spreads_at_the_closed_form_rate() {
        let grid = Grid::uniform(-25.0, 25.0, 1024).unwrap();
        let psi0 = gaussian_packet(&grid, 0.0, 1.0, 0.0).unwrap();
        assert!((position_variance(&psi0) - 1.0).abs() < 1e-9);
        let run = PropagationRun::new(psi0, zero_potential(), 0.01, 100).unwrap();
        let done = propagate(run).unwrap();
        let var = position_variance(done.final_state().unwrap());
        // σ²(t) = σ₀² + t²/(4σ₀²) at t = 1
        assert!((var - 1.25).abs() < 1e-3, "variance {var}");
    }

    #[test]
    fn free_run_has_zero_potential_ledger() {
        let grid = Grid::uniform(-25.0, 25.0, 1024).unwrap();
        let psi0 = gaussian_packet(&grid, 0.0, 1.0, 1.0).unwrap();
        let run = PropagationRun::new(psi0, zero_potential(), 0.01, 200).unwrap().with_stride(50);
        let done = propagate(run).unwrap();
        let ledger = scattering_energy_audit(&done).unwrap();
        let ke0 = ledger.rows[0].kinetic;
        for row in &ledger.rows {
            assert_eq!(row.potential, 0.0);
            assert!(((row.kinetic - ke0) / ke0).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_steps_returns_the_input_exactly() {
        let grid = Grid::uniform(-20.0, 20.0, 256).unwrap();
        let psi0 = gaussian_packet(&grid, 1.0, 1.0, 0.5).unwrap();
        let run = PropagationRun::new(psi0.clone(), zero_potential(), 0.01, 0).unwrap();
        let done = propagate(run).unwrap();
        assert_eq!(done.snapshots.len(), 1);
        let out = done.final_state().unwrap();
        for (a, b) in psi0.values().iter().zip(out.values()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn propagation_reverses_to_the_start() {
        let grid = Grid::uniform(-20.0, 20.0, 512).unwrap();
        let psi0 = gaussian_packet(&grid, 2.0, FRAC_1_SQRT_2, 0.0).unwrap();
        let pot = Potential::harmonic(1.0).unwrap();
        let forward = propagate(PropagationRun::new(psi0.clone(), pot.clone(), 0.01, 500).unwrap())
            .unwrap();
        let turned = Wavefunction::unit(grid.clone(), forward.final_state().unwrap().values().to_vec())
            .unwrap();
        let back = propagate(PropagationRun::new(turned, pot, -0.01, 500).unwrap()).unwrap();
        let out = back.final_state().unwrap();
        let mut worst = 0.0f64;
        for (a, b) in psi0.values().iter().zip(out.values()) {
            worst = worst.max((a - b).norm());
        }
        assert!(worst < 1e-8, "max deviation {worst}");
    }

    #[test]
    fn runaway_packet_reports_boundary_contamination() {
        let grid = Grid::uniform(-10.0, 10.0, 256).unwrap();
        let psi0 = gaussian_packet(&grid, 0.0, 1.0, 5.0).unwrap();
        let run = PropagationRun::new(psi0, zero_potential(), 0.01, 400).unwrap();
        match propagate(run) {
            Err(Error::BoundaryContamination { step, amplitude }) => {
                assert!(step > 50 && step <= 400, "step {step}");
                assert!(amplitude > BOUNDARY_LIMIT);
            }
            other => panic!("expected contamination, got {other:?}"),
        }
    }

    #[test]
    fn fast_potential_phase_sets_the_stability_warning() {
        let grid = Grid::uniform(-10.0, 10.0, 128).unwrap();
        let psi0 = gaussian_packet(&grid, 0.0, 1.0, 0.0).unwrap();
        let deep = Potential::tabulated(vec![(-20.0, -100.0), (20.0, -100.0)]).unwrap();
        let run = PropagationRun::new(psi0.clone(), deep, 0.01, 1).unwrap();
        assert!(run.stability_warning);
        let calm = PropagationRun::new(psi0, zero_potential(), 0.01, 1).unwrap();
        assert!(!calm.stability_warning);
    }

    #[test]
    fn packet_over_a_screened_barrier_conserves_energy() {
        // soft-core screened barrier e^{−√(x²+1)}/√(x²+1), tabulated at the
        // exact grid nodes; the packet passes over it (E_in ≈ 2 ≫ peak 0.37)
        let n = 4096;
        let grid = Grid::uniform(-80.0, 79.9609375, n).unwrap();
        let table: Vec<(f64, f64)> = grid
            .nodes()
            .iter()
            .map(|&x| {
                let s = (x * x + 1.0).sqrt();
                (x, (-s).exp() / s)
            })
            .collect();
        let pot = Potential::tabulated(table).unwrap();
        let psi0 = gaussian_packet(&grid, -35.0, 3.0, 2.0).unwrap();
        let run = PropagationRun::new(psi0, pot, 0.005, 7000)
            .unwrap()
            .with_stride(200)
            .with_mask(true);
        let done = propagate(run).unwrap();
        let ledger = scattering_energy_audit(&done).unwrap();

        // packet kinetic energy p₀²/2 + 1/(8σ²) plus a negligible tail overlap
        let expected_e_in = 2.0 + 1.0 / 72.0;
        assert!(
            (ledger.e_in - expected_e_in).abs() < 1e-6,
            "E_in = {} vs {expected_e_in}",
            ledger.e_in
        );
        assert!(ledger.max_rel_drift < 1e-5, "drift {}", ledger.max_rel_drift);

        let first = ledger.rows.first().unwrap();
        let last = ledger.rows.last().unwrap();
        assert!(first.potential.abs() < 1e-6, "PE(0) = {}", first.potential);
        assert!(last.potential.abs() < 1e-6, "PE(end) = {}", last.potential);
        assert!(
            ((last.kinetic - ledger.e_in) / ledger.e_in).abs() < 1e-5,
            "KE not recovered: {} vs {}",
            last.kinetic,
            ledger.e_in
        );
        // traversal is visible: the packet sits on the barrier mid-run
        let mid_pe = ledger.rows.iter().map(|r| r.potential).fold(0.0, f64::max);
        assert!(mid_pe > 1e-3, "no traversal seen, max PE {mid_pe}");
        assert_eq!(ledger.rows.len(), 36);
    }

    #[test]
    fn audit_needs_a_propagated_run() {
        let grid = Grid::uniform(-20.0, 20.0, 128).unwrap();
        let psi0 = gaussian_packet(&grid, 0.0, 1.0, 0.0).unwrap();
        let run = PropagationRun::new(psi0, zero_potential(), 0.01, 10).unwrap();
        assert!(scattering_energy_audit(&run).is_err());
    }

    #[test]
    fn contaminated_start_is_rejected_at_step_zero() {
        let grid = Grid::uniform(-10.0, 10.0, 128).unwrap();
        let psi0 = gaussian_packet(&grid, 9.5, 1.0, 0.0).unwrap();
        let run = PropagationRun::new(psi0, zero_potential(), 0.01, 10).unwrap();
        match propagate(run) {
            Err(Error::BoundaryContamination { step, .. }) => assert_eq!(step, 0),
            other => panic!("expected contamination, got {other:?}"),
        }
    }

    #[test]
    fn packet_momentum_and_position_are_tracked() {
        let grid = Grid::uniform(-40.0, 40.0, 1024).unwrap();
        let psi0 = gaussian_packet(&grid, -10.0, 2.0, 1.5).unwrap();
        let run = PropagationRun::new(psi0, zero_potential(), 0.01, 400).unwrap().with_stride(400);
        let done = propagate(run).unwrap();
        let s0 = &done.snapshots[0];
        let s1 = &done.snapshots[1];
        assert!((s0.position + 10.0).abs() < 1e-6);
        assert!((s0.momentum - 1.5).abs() < 1e-6);
        // free motion: ⟨x⟩(t) = x₀ + ⟨p⟩t over t = 4
        assert!((s1.position - (-10.0 + 1.5 * 4.0)).abs() < 1e-6, "got {}", s1.position);
        assert!((s1.momentum - 1.5).abs() < 1e-9);
    }

    #[test]
    fn run_construction_validates_inputs() {
        let radial = Grid::radial(10.0, 100).unwrap();
        let vals = vec![Complex64::new(1.0, 0.0); 100];
        let psi = Wavefunction::unit(radial, vals).unwrap();
        assert!(PropagationRun::new(psi, zero_potential(), 0.01, 1).is_err());

        let grid = Grid::uniform(-10.0, 10.0, 128).unwrap();
        let raw = Wavefunction::raw(
            grid.clone(),
            vec![Complex64::new(1.0, 0.0); 128],
        )
        .unwrap();
        assert!(PropagationRun::new(raw, zero_potential(), 0.01, 1).is_err());

        let ok = gaussian_packet(&grid, 0.0, 1.0, 0.0).unwrap();
        assert!(PropagationRun::new(ok.clone(), zero_potential(), f64::NAN, 1).is_err());
        assert!(gaussian_packet(&grid, 0.0, -1.0, 0.0).is_err());
    }
}

//! Bound states of the radial Schrödinger equation.
//!
//! The discrete Hamiltonian acts on u = r·ψ with Dirichlet conditions at the
//! phantom nodes r = 0 and r = r_max + h.  Eigenvalues come from Sturm
//! bisection on the symmetric tridiagonal (three-point) Hamiltonian;
//! eigenvectors are then sharpened by inverse iteration on a pentadiagonal
//! fourth-order refinement of the same operator, which keeps the pointwise
//! residual far below the eigenvalue's own discretization error.  An
//! independent Numerov shooting integrator cross-checks the spectrum.

use crate::calculus::{Banded, DirichletSecondDerivative};
use crate::grid::{Grid, GridKind};
use crate::potential::Potential;
use crate::wavefunction::Wavefunction;
use crate::{Error, Result};

/// Which engine produced an eigenpair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Dense,
    Numerov,
    ClosedForm,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Dense => "dense",
            Method::Numerov => "numerov",
            Method::ClosedForm => "closed-form",
        }
    }
}

/// One bound eigenpair: energy in hartree, unit-L2 wavefunction, 0-based
/// index in ascending energy, producing method, and the sup-norm of the
/// pointwise Schrödinger residual (H−E)ψ on the grid.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub energy: f64,
    pub psi: Wavefunction,
    pub index: usize,
    pub method: Method,
    pub residual_sup: f64,
}

/// V(r) plus the centrifugal barrier l(l+1)/(2r²) at every node.
pub(crate) fn effective_potential(pot: &Potential, l: u32, grid: &Grid) -> Result<Vec<f64>> {
    let cent = (l * (l + 1)) as f64 / 2.0;
    let mut v = pot.evaluate_many(grid.nodes())?;
    if cent != 0.0 {
        for (vi, &r) in v.iter_mut().zip(grid.nodes()) {
            *vi += cent / (r * r);
        }
    }
    Ok(v)
}

/// Diagonal and (constant) off-diagonal of the three-point Hamiltonian on
/// u = rψ.  Symmetric by construction: both off-diagonals are one shared
/// scalar.
pub(crate) fn tridiagonal_hamiltonian(veff: &[f64], h: f64) -> (Vec<f64>, f64) {
    let inv_h2 = 1.0 / (h * h);
    let diag = veff.iter().map(|&v| inv_h2 + v).collect();
    (diag, -0.5 * inv_h2)
}

/// Number of eigenvalues of the tridiagonal strictly below `x`, by the
/// Sturm sequence of its shifted LDLᵀ factorization.
fn count_below(diag: &[f64], off: f64, x: f64) -> usize {
    let off2 = off * off;
    let mut q = diag[0] - x;
    let mut count = 0;
    if q == 0.0 {
        q = -1e-300;
    }
    if q < 0.0 {
        count += 1;
    }
    for &d in &diag[1..] {
        q = d - x - off2 / q;
        if q == 0.0 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The j-th (0-based) eigenvalue of the symmetric tridiagonal, by bisection
/// over the Gershgorin interval.
fn sturm_eigenvalue(diag: &[f64], off: f64, j: usize) -> f64 {
    let radius = 2.0 * off.abs();
    let mut lo = diag.iter().cloned().fold(f64::INFINITY, f64::min) - radius;
    let mut hi = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + radius;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..160 {
        mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-14 * (1.0 + mid.abs()) {
            break;
        }
        if count_below(diag, off, mid) > j {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    mid
}

/// Inverse iteration for the eigenvector of the fourth-order Hamiltonian
/// nearest `shift`, seeded with a half-wave pattern matching the target's
/// node count.  Returns u samples with unit Euclidean norm.
fn inverse_iteration(
    veff: &[f64],
    shift: f64,
    state: usize,
    op: &DirichletSecondDerivative,
) -> Result<Vec<f64>> {
    let n = veff.len();
    let mut m = Banded::new(n, 4, 4);
    op.for_each_entry(|i, j, w| m.add(i, j, -0.5 * w));
    for (i, &v) in veff.iter().enumerate() {
        m.add(i, i, v - shift);
    }
    let lu = m.lu()?;

    let mode = (state + 1) as f64 * std::f64::consts::PI / (n + 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|i| (mode * (i + 1) as f64).sin()).collect();
    normalize(&mut v);
    for _ in 0..30 {
        let mut w = v.clone();
        lu.solve(&mut w);
        normalize(&mut w);
        let dot: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
        if dot < 0.0 {
            for x in &mut w {
                *x = -*x;
            }
        }
        let converged = dot.abs() > 1.0 - 1e-13;
        v = w;
        if converged {
            return Ok(v);
        }
    }
    Err(Error::Solver("inverse iteration did not converge".into()))
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Sup-norm of (Hψ − Eψ) over the grid, with H applied through the
/// fourth-order operator on u = rψ.
fn residual_sup_of(
    op: &DirichletSecondDerivative,
    veff: &[f64],
    energy: f64,
    psi_vals: &[f64],
    nodes: &[f64],
) -> f64 {
    let u: Vec<f64> = psi_vals.iter().zip(nodes).map(|(&p, &r)| p * r).collect();
    let d2 = op.apply(&u);
    u.iter()
        .zip(&d2)
        .zip(veff.iter().zip(nodes))
        .map(|((&ui, &d2i), (&vi, &ri))| ((-0.5 * d2i + (vi - energy) * ui) / ri).abs())
        .fold(0.0, f64::max)
}

/// Fixes the global sign so the value at the first interior maximum of |ψ|
/// (or at the global maximum when |ψ| is monotone) is positive.  Maxima in
/// the far tail, where the samples are pure solver noise, are ignored.
fn fix_sign(vals: &mut [f64]) {
    let n = vals.len();
    let floor = 1e-6 * vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut pick = None;
    for i in 1..n - 1 {
        if vals[i].abs() > floor
            && vals[i].abs() >= vals[i - 1].abs()
            && vals[i].abs() >= vals[i + 1].abs()
        {
            pick = Some(i);
            break;
        }
    }
    let pick = pick.unwrap_or_else(|| {
        let mut best = 0;
        for i in 1..n {
            if vals[i].abs() > vals[best].abs() {
                best = i;
            }
        }
        best
    });
    if vals[pick] < 0.0 {
        for x in vals.iter_mut() {
            *x = -*x;
        }
    }
}

/// The `k` lowest bound eigenpairs of −½∇² + V(r) + l(l+1)/(2r²).
///
/// States are qualified as bound by E < V_eff(r_max), which rejects the
/// box-confined artifacts a finite grid appends above the true spectrum.
pub fn solve_radial(pot: &Potential, l: u32, k: usize, grid: &Grid) -> Result<Vec<EigenSolution>> {
    if k == 0 {
        return Err(Error::Domain("need at least one requested state".into()));
    }
    if grid.kind() != GridKind::Radial {
        return Err(Error::Domain("bound-state solve requires a radial grid".into()));
    }
    if grid.n() < 8 {
        return Err(Error::Domain("bound-state solve needs at least 8 nodes".into()));
    }
    let veff = effective_potential(pot, l, grid)?;
    let (diag, off) = tridiagonal_hamiltonian(&veff, grid.h());
    let ceiling = veff[veff.len() - 1];

    let mut energies = Vec::with_capacity(k);
    for j in 0..k {
        let e = sturm_eigenvalue(&diag, off, j);
        if e >= ceiling {
            return Err(Error::Unbound { found: energies.len(), requested: k });
        }
        energies.push(e);
    }

    let op = DirichletSecondDerivative::new(grid.n(), grid.h());
    let mut out = Vec::with_capacity(k);
    for (j, &energy) in energies.iter().enumerate() {
        let u = inverse_iteration(&veff, energy, j, &op)?;
        let mut psi_vals: Vec<f64> =
            u.iter().zip(grid.nodes()).map(|(&ui, &r)| ui / r).collect();
        fix_sign(&mut psi_vals);
        let psi = Wavefunction::unit_real(grid.clone(), &psi_vals)?;
        let normalized: Vec<f64> = psi.values().iter().map(|z| z.re).collect();
        let residual_sup = residual_sup_of(&op, &veff, energy, &normalized, grid.nodes());
        out.push(EigenSolution { energy, psi, index: j, method: Method::Dense, residual_sup });
    }
    Ok(out)
}

/// The analytic hydrogen ground state e^{−r}/√π sampled on `grid`, with
/// E = −0.5 exactly; an oracle input for the numerical modules.
pub fn ground_state_closed_form(grid: &Grid) -> Result<EigenSolution> {
    if grid.kind() != GridKind::Radial {
        return Err(Error::Domain("closed-form ground state requires a radial grid".into()));
    }
    let norm = std::f64::consts::PI.sqrt().recip();
    let vals: Vec<f64> = grid.nodes().iter().map(|&r| norm * (-r).exp()).collect();
    let psi = Wavefunction::raw_real(grid.clone(), &vals)?;
    let pot = Potential::coulomb(1.0)?;
    let veff = effective_potential(&pot, 0, grid)?;
    let op = DirichletSecondDerivative::new(grid.n(), grid.h());
    let residual_sup = residual_sup_of(&op, &veff, -0.5, &vals, grid.nodes());
    Ok(EigenSolution { energy: -0.5, psi, index: 0, method: Method::ClosedForm, residual_sup })
}

/// Log-derivative mismatch of the two Numerov branches at the outermost
/// classical turning point.  A zero crossing in E marks an eigenvalue.
pub fn numerov_mismatch(pot: &Potential, energy: f64, grid: &Grid) -> Result<f64> {
    if grid.kind() != GridKind::Radial {
        return Err(Error::Domain("shooting integration requires a radial grid".into()));
    }
    let n = grid.n();
    if n < 16 {
        return Err(Error::Domain("shooting integration needs at least 16 nodes".into()));
    }
    let h = grid.h();
    let veff = effective_potential(pot, 0, grid)?;
    if energy >= veff[n - 1] {
        return Err(Error::Domain(format!(
            "trial energy {energy} is not below the potential's edge value {}",
            veff[n - 1]
        )));
    }
    let f: Vec<f64> = veff
        .iter()
        .map(|&v| 1.0 + h * h * (2.0 * (energy - v)) / 12.0)
        .collect();

    // matching node: outermost classical turning point, kept away from the ends
    let turn = (0..n).rev().find(|&i| energy > veff[i]).unwrap_or(3);
    let m = turn.clamp(3, n - 4);

    // outward branch, seeded by the short-range series u ≈ r(1 + c₁ r)
    let r1 = grid.nodes()[0];
    let c1 = r1 * pot.evaluate(r1)?;
    let mut outward = vec![0.0; m + 3];
    outward[0] = r1 * (1.0 + c1 * r1);
    outward[1] = 2.0 * r1 * (1.0 + c1 * 2.0 * r1);
    integrate_branch(&mut outward, &f, 0, true)?;

    // inward branch from the decaying edge
    let mut inward = vec![0.0; n];
    inward[n - 1] = 1e-12;
    inward[n - 2] = 2e-12;
    integrate_branch(&mut inward, &f, m - 2, false)?;

    let d_out = five_point_derivative(&outward, m, h);
    let d_in = five_point_derivative(&inward, m, h);
    if outward[m] == 0.0 || inward[m] == 0.0 {
        return Err(Error::Solver("branch vanishes at the matching node".into()));
    }
    let mismatch = d_out / outward[m] - d_in / inward[m];
    if !mismatch.is_finite() {
        return Err(Error::Solver("branch mismatch is not finite".into()));
    }
    Ok(mismatch)
}

/// Runs the three-term recurrence over `u`, outward from index 2 to the end
/// or inward from the end down to `stop`, rescaling both live values when
/// they exceed 1e250.
fn integrate_branch(u: &mut [f64], f: &[f64], stop: usize, outward: bool) -> Result<()> {
    let rescale = |u: &mut [f64], upto: usize, from: usize| {
        let s = 1e-250;
        for x in &mut u[from..=upto] {
            *x *= s;
        }
    };
    if outward {
        for i in 1..u.len() - 1 {
            u[i + 1] = ((12.0 - 10.0 * f[i]) * u[i] - f[i - 1] * u[i - 1]) / f[i + 1];
            if !u[i + 1].is_finite() {
                return Err(Error::Solver("shooting integration overflowed".into()));
            }
            if u[i + 1].abs() > 1e250 {
                rescale(u, i + 1, 0);
            }
        }
    } else {
        let n = u.len();
        for i in (stop + 1..n - 1).rev() {
            u[i - 1] = ((12.0 - 10.0 * f[i]) * u[i] - f[i + 1] * u[i + 1]) / f[i - 1];
            if !u[i - 1].is_finite() {
                return Err(Error::Solver("shooting integration overflowed".into()));
            }
            if u[i - 1].abs() > 1e250 {
                rescale(u, n - 1, i - 1);
            }
        }
    }
    Ok(())
}

fn five_point_derivative(u: &[f64], m: usize, h: f64) -> f64 {
    (u[m - 2] - 8.0 * u[m - 1] + 8.0 * u[m + 1] - u[m + 2]) / (12.0 * h)
}

/// Bisection on the sign of the branch mismatch over `bracket`, to an
/// energy tolerance of 1e-10 hartree.
pub fn numerov_eigenvalue(pot: &Potential, bracket: (f64, f64), grid: &Grid) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let mut f_lo = numerov_mismatch(pot, lo, grid)?;
    let f_hi = numerov_mismatch(pot, hi, grid)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Domain(format!(
            "bracket [{lo}, {hi}] does not straddle a sign change ({f_lo:+.3e}, {f_hi:+.3e})"
        )));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        let f_mid = numerov_mismatch(pot, mid, grid)?;
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hydrogen() -> Potential {
        Potential::coulomb(1.0).unwrap()
    }

    #[test]
    fn hydrogen_ground_state_energy_and_shape() {
        let grid = Grid::radial_default();
        let sols = solve_radial(&hydrogen(), 0, 1, &grid).unwrap();
        let s = &sols[0];
        assert!((s.energy + 0.5).abs() < 1e-4, "E0 = {}", s.energy);
        assert_eq!(s.index, 0);
        assert_eq!(s.method, Method::Dense);
        let norm = std::f64::consts::PI.sqrt().recip();
        let shape_err = s
            .psi
            .values()
            .iter()
            .zip(grid.nodes())
            .map(|(z, &r)| (z.re - norm * (-r).exp()).abs())
            .fold(0.0, f64::max);
        assert!(shape_err < 1e-6, "shape err {shape_err}");
        let imag = s.psi.values().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        assert!(imag < 1e-10);
    }

    #[test]
    fn hydrogen_first_excited_energy() {
        let grid = Grid::radial_default();
        let sols = solve_radial(&hydrogen(), 0, 2, &grid).unwrap();
        assert!((sols[1].energy + 0.125).abs() < 1e-4, "E1 = {}", sols[1].energy);
        assert!(sols[0].energy < sols[1].energy);
    }

    #[test]
    fn harmonic_ground_energy() {
        let grid = Grid::radial_default();
        let pot = Potential::harmonic(1.0).unwrap();
        let sols = solve_radial(&pot, 0, 1, &grid).unwrap();
        assert!((sols[0].energy - 1.5).abs() < 1e-3, "E0 = {}", sols[0].energy);
    }

    #[test]
    fn eigenpairs_are_orthonormal_under_quadrature() {
        let grid = Grid::radial_default();
        let sols = solve_radial(&hydrogen(), 0, 2, &grid).unwrap();
        let vw = grid.volume_weights();
        for i in 0..2 {
            for j in 0..2 {
                let dot: f64 = vw
                    .iter()
                    .zip(sols[i].psi.values().iter().zip(sols[j].psi.values()))
                    .map(|(w, (a, b))| w * (a.conj() * b).re)
                    .sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-8, "<{i}|{j}> = {dot}");
            }
        }
    }

    #[test]
    fn residual_is_small_for_solved_pairs() {
        let grid = Grid::radial_default();
        let sols = solve_radial(&hydrogen(), 0, 2, &grid).unwrap();
        for s in &sols {
            let bound = 1e-4 * s.energy.abs() * s.psi.max_abs();
            assert!(s.residual_sup < bound, "residual {} vs bound {bound}", s.residual_sup);
        }
    }

    #[test]
    fn unbound_request_is_reported() {
        let grid = Grid::radial_default();
        match solve_radial(&hydrogen(), 0, 8, &grid) {
            Err(Error::Unbound { found, requested }) => {
                assert!(found < 8);
                assert_eq!(requested, 8);
            }
            other => panic!("expected unbound error, got {other:?}"),
        }
    }

    #[test]
    fn centrifugal_term_raises_the_spectrum() {
        // 2p level of hydrogen: E = -1/8
        let grid = Grid::radial_default();
        let sols = solve_radial(&hydrogen(), 1, 1, &grid).unwrap();
        assert!((sols[0].energy + 0.125).abs() < 1e-4, "E(2p) = {}", sols[0].energy);
    }

    #[test]
    fn eigenvalue_error_shrinks_fourfold_with_h() {
        let errs: Vec<f64> = [2000usize, 4000, 8000]
            .iter()
            .map(|&n| {
                let grid = Grid::radial(40.0, n).unwrap();
                let sols = solve_radial(&hydrogen(), 0, 1, &grid).unwrap();
                (sols[0].energy + 0.5).abs()
            })
            .collect();
        for pair in errs.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn tridiagonal_is_bitwise_symmetric() {
        let grid = Grid::radial(20.0, 200).unwrap();
        let veff = effective_potential(&hydrogen(), 0, &grid).unwrap();
        let (diag, off) = tridiagonal_hamiltonian(&veff, grid.h());
        let n = diag.len();
        let mut dense = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            dense[i][i] = diag[i];
            if i + 1 < n {
                dense[i][i + 1] = off;
                dense[i + 1][i] = off;
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(dense[i][j].to_bits(), dense[j][i].to_bits());
            }
        }
    }

    #[test]
    fn solve_is_deterministic() {
        let grid = Grid::radial_default();
        let a = solve_radial(&hydrogen(), 0, 2, &grid).unwrap();
        let b = solve_radial(&hydrogen(), 0, 2, &grid).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.energy.to_bits(), y.energy.to_bits());
            for (p, q) in x.psi.values().iter().zip(y.psi.values()) {
                assert_eq!(p.re.to_bits(), q.re.to_bits());
            }
        }
    }

    #[test]
    fn closed_form_ground_state_values() {
        let grid = Grid::radial_default();
        let s = ground_state_closed_form(&grid).unwrap();
        assert_eq!(s.energy, -0.5);
        assert_eq!(s.method, Method::ClosedForm);
        assert!((s.psi.value_at_origin().unwrap().re - 0.56419).abs() < 1e-5);
        let at_one = s.psi.values()[99].re;
        assert!((at_one - 0.20755).abs() < 1e-5);
        assert!((s.psi.norm_sq() - 1.0).abs() < 1e-6);
        let bound = 1e-4 * 0.5 * s.psi.max_abs();
        assert!(s.residual_sup < bound, "residual {}", s.residual_sup);
    }

    #[test]
    fn mismatch_vanishes_at_the_eigenvalue() {
        let grid = Grid::radial(40.0, 16000).unwrap();
        let m = numerov_mismatch(&hydrogen(), -0.5, &grid).unwrap();
        assert!(m.abs() < 1e-6, "mismatch {m}");
    }

    #[test]
    fn mismatch_brackets_the_eigenvalue() {
        let grid = Grid::radial_default();
        let lo = numerov_mismatch(&hydrogen(), -0.6, &grid).unwrap();
        let hi = numerov_mismatch(&hydrogen(), -0.4, &grid).unwrap();
        assert!(lo.signum() != hi.signum(), "no sign change: {lo}, {hi}");
    }

    #[test]
    fn harmonic_mismatch_at_known_level() {
        let grid = Grid::radial(40.0, 16000).unwrap();
        let pot = Potential::harmonic(1.0).unwrap();
        let m = numerov_mismatch(&pot, 1.5, &grid).unwrap();
        assert!(m.abs() < 1e-5, "mismatch {m}");
    }

    #[test]
    fn shooting_eigenvalue_from_bracket() {
        let grid = Grid::radial_default();
        let e = numerov_eigenvalue(&hydrogen(), (-0.6, -0.4), &grid).unwrap();
        assert!((e + 0.5).abs() < 1e-4, "E = {e}");
        assert!(numerov_eigenvalue(&hydrogen(), (-0.9, -0.7), &grid).is_err());
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let grid = Grid::radial_default();
        assert!(solve_radial(&hydrogen(), 0, 0, &grid).is_err());
        let flat = Grid::uniform(0.0, 1.0, 11).unwrap();
        assert!(solve_radial(&hydrogen(), 0, 1, &flat).is_err());
        // trial energy above the edge value of the potential
        assert!(numerov_mismatch(&hydrogen(), 0.5, &grid).is_err());
    }
}

//! Pointwise energy fields and their integrated totals.
//!
//! Two local kinetic quantities are deliberately kept apart: ke(r) built
//! from |∇ψ|², which is nonnegative everywhere, and the balancing field
//! c(r) built from −½ψ*∇²ψ, which changes sign.  Their totals agree for
//! decaying wavefunctions (the surface term vanishes) while the fields
//! themselves differ materially; most of this module's checks probe exactly
//! that distinction.
//!
//! Derivatives here use fourth-order stencils so that field-level
//! tolerances are limited by physics, not by the second-order operators the
//! public calculus API exposes.

use crate::calculus::{gradient4, second_derivative4, DirichletSecondDerivative};
use crate::grid::{Grid, GridKind};
use crate::potential::Potential;
use crate::wavefunction::Wavefunction;
use crate::{Error, Result};
use num_complex::Complex64;

/// Energy fields sampled on the grid, in hartree per unit volume, plus
/// their integrated totals in hartree.
#[derive(Debug, Clone)]
pub struct EnergyDensities {
    pub grid: Grid,
    /// |ψ|² samples.
    pub density: Vec<f64>,
    /// ½|∇ψ|², nonnegative at every node.
    pub ke: Vec<f64>,
    /// Re(−½ψ*∇²ψ), the balancing field; sign-indefinite.
    pub c: Vec<f64>,
    /// Im(−½ψ*∇²ψ), reported separately; zero for real states.
    pub c_imag: Vec<f64>,
    /// V|ψ|².
    pub pe: Vec<f64>,
    /// c + pe.
    pub e_field: Vec<f64>,
    pub ke_total: f64,
    pub c_total: f64,
    pub pe_total: f64,
    /// C_total + PE_total.
    pub e_total: f64,
    /// Whether the input decayed at the grid edge, making KE_total and
    /// C_total equivalent up to quadrature error.
    pub surface_equivalent: bool,
    /// Radial grids only: fields extrapolated to r = 0.
    pub origin: Option<OriginFields>,
}

/// Quadratic extrapolation of the fields to r = 0 from the first three
/// nodes (the grid itself never touches the origin).
#[derive(Debug, Clone, Copy)]
pub struct OriginFields {
    pub density: f64,
    pub ke: f64,
    pub c: f64,
    pub pe: f64,
    pub e_field: f64,
}

/// Pointwise Schrödinger residual n(x) = Eψ + ½ψ'' − Vψ.
#[derive(Debug, Clone)]
pub struct ResidualField {
    pub values: Vec<Complex64>,
    pub sup_norm: f64,
    /// Grid node where |n| peaks.
    pub sup_location: f64,
}

/// One identity check: how far `lhs` and `rhs` actually landed apart.
#[derive(Debug, Clone)]
pub struct VirialCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
}

/// Global and local virial identities for a Coulomb eigenstate.
#[derive(Debug, Clone)]
pub struct VirialReport {
    /// Radius the local checks were evaluated at.
    pub at_radius: f64,
    pub checks: Vec<VirialCheck>,
}

fn extrapolate_to_origin(f: &[f64]) -> f64 {
    3.0 * f[0] - 3.0 * f[1] + f[2]
}

/// Laplacian of ψ with fourth-order stencils.  Radial grids go through
/// u = rψ, whose second derivative over r recovers the full ∇²ψ and whose
/// phantom endpoints are genuinely zero for decaying states.
fn laplacian(psi: &Wavefunction) -> Result<Vec<Complex64>> {
    let grid = psi.grid();
    match grid.kind() {
        GridKind::Radial => {
            if grid.n() < 8 {
                return Err(Error::Domain("energy fields need at least 8 radial nodes".into()));
            }
            let u: Vec<Complex64> = psi
                .values()
                .iter()
                .zip(grid.nodes())
                .map(|(z, &r)| z * r)
                .collect();
            let op = DirichletSecondDerivative::half_open(grid.n(), grid.h());
            Ok(op.apply(&u).iter().zip(grid.nodes()).map(|(d, &r)| d / r).collect())
        }
        GridKind::Uniform1d => {
            if grid.n() < 6 {
                return Err(Error::Domain("energy fields need at least 6 nodes".into()));
            }
            Ok(second_derivative4(psi.values(), grid.h()))
        }
    }
}

fn decays_at_edges(psi: &Wavefunction) -> bool {
    let vals = psi.values();
    let max = psi.max_abs();
    let outer = vals[vals.len() - 1].norm() < 1e-8 * max;
    match psi.grid().kind() {
        // the inner surface term carries r² → 0, so only the outer edge counts
        GridKind::Radial => outer,
        GridKind::Uniform1d => outer && vals[0].norm() < 1e-8 * max,
    }
}

/// All four energy fields and their totals for a unit-L2 wavefunction.
pub fn energy_densities(psi: &Wavefunction, pot: &Potential) -> Result<EnergyDensities> {
    let norm_sq = psi.norm_sq();
    if (norm_sq - 1.0).abs() > 1e-6 {
        return Err(Error::Domain(format!(
            "energy fields need a unit-L2 wavefunction, got |psi|^2 = {norm_sq}"
        )));
    }
    let grid = psi.grid().clone();
    let v = pot.evaluate_many(grid.nodes())?;
    let grad = gradient4(psi.values(), grid.h());
    let lap = laplacian(psi)?;

    let density = psi.density();
    let ke: Vec<f64> = grad.iter().map(|g| 0.5 * g.norm_sqr()).collect();
    let c_cplx: Vec<Complex64> = psi
        .values()
        .iter()
        .zip(&lap)
        .map(|(p, l)| p.conj() * l * -0.5)
        .collect();
    let c: Vec<f64> = c_cplx.iter().map(|z| z.re).collect();
    let c_imag: Vec<f64> = c_cplx.iter().map(|z| z.im).collect();
    let pe: Vec<f64> = v.iter().zip(&density).map(|(&vi, &d)| vi * d).collect();
    let e_field: Vec<f64> = c.iter().zip(&pe).map(|(&ci, &pi)| ci + pi).collect();

    let vw = grid.volume_weights();
    let total = |f: &[f64]| -> f64 { vw.iter().zip(f).map(|(w, x)| w * x).sum() };
    let ke_total = total(&ke);
    let c_total = total(&c);
    let pe_total = total(&pe);
    let e_total = c_total + pe_total;

    let origin = (grid.kind() == GridKind::Radial).then(|| OriginFields {
        density: extrapolate_to_origin(&density),
        ke: extrapolate_to_origin(&ke),
        c: extrapolate_to_origin(&c),
        pe: extrapolate_to_origin(&pe),
        e_field: extrapolate_to_origin(&e_field),
    });

    Ok(EnergyDensities {
        surface_equivalent: decays_at_edges(psi),
        grid,
        density,
        ke,
        c,
        c_imag,
        pe,
        e_field,
        ke_total,
        c_total,
        pe_total,
        e_total,
        origin,
    })
}

/// Pointwise residual of the stationary equation at trial energy `energy`.
pub fn residual(psi: &Wavefunction, pot: &Potential, energy: f64) -> Result<ResidualField> {
    let grid = psi.grid();
    let v = pot.evaluate_many(grid.nodes())?;
    let lap = laplacian(psi)?;
    let values: Vec<Complex64> = psi
        .values()
        .iter()
        .zip(lap.iter().zip(&v))
        .map(|(p, (l, &vi))| p * (energy - vi) + l * 0.5)
        .collect();
    let (arg, sup_norm) = values
        .iter()
        .map(|z| z.norm())
        .enumerate()
        .fold((0, 0.0), |acc, (i, m)| if m > acc.1 { (i, m) } else { acc });
    Ok(ResidualField { values, sup_norm, sup_location: grid.nodes()[arg] })
}

/// Virial identities for a Coulomb eigenstate: the global 2·KE = −PE plus
/// three local identities at r = 1 (node nearest one bohr).
pub fn virial_report(dens: &EnergyDensities) -> VirialReport {
    let nodes = dens.grid.nodes();
    let at = nodes
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut checks = Vec::new();
    let mut push = |name, lhs: f64, rhs: f64| {
        checks.push(VirialCheck { name, lhs, rhs, deviation: (lhs - rhs).abs() });
    };
    push("2*KE_total = -PE_total", 2.0 * dens.ke_total, -dens.pe_total);
    push("KE(1) = C(1)", dens.ke[at], dens.c[at]);
    push("E(1) = KE(1) + PE(1)", dens.e_field[at], dens.ke[at] + dens.pe[at]);
    push("KE(1) = -PE(1)/2", dens.ke[at], -0.5 * dens.pe[at]);
    VirialReport { at_radius: nodes[at], checks }
}

/// The radius where the balancing field c changes sign, by linear
/// interpolation.  Sign changes where the density has fallen below 1e-12
/// are solver noise and are ignored.  Anything other than exactly one
/// crossing is reported through the error, candidates included.
pub fn crossing_radius(dens: &EnergyDensities) -> Result<f64> {
    let nodes = dens.grid.nodes();
    let mut candidates = Vec::new();
    for i in 0..dens.c.len() - 1 {
        if dens.density[i] <= 1e-12 || dens.density[i + 1] <= 1e-12 {
            continue;
        }
        let (a, b) = (dens.c[i], dens.c[i + 1]);
        if a == 0.0 {
            candidates.push(nodes[i]);
        } else if a.signum() != b.signum() && b != 0.0 {
            candidates.push(nodes[i] + (nodes[i + 1] - nodes[i]) * a / (a - b));
        }
    }
    match candidates.as_slice() {
        [one] => Ok(*one),
        _ => Err(Error::Crossings(candidates)),
    }
}

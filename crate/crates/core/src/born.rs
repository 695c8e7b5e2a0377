//! First-order scattering off a static source.
//!
//! Everything here is the lowest-order (one-exchange) calculation: the
//! static propagator weight 1/q², the screened potential it Fourier-pairs
//! with, and the first Born amplitude with its Rutherford cross-section
//! limit.  The unscreened 1/r case is singular in the forward direction, so
//! it is always approached through a decreasing sequence of screenings and
//! an explicit extrapolation, never evaluated directly.

use crate::potential::Potential;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Kinematics of one elastic deflection: incident momentum `p`, angle
/// `theta`, transfer magnitude q = 2p·sin(θ/2), zero energy transfer.
#[derive(Debug, Clone, Copy)]
pub struct MomentumTransfer {
    pub p: f64,
    pub theta: f64,
    pub q: f64,
    /// Energy transfer; identically zero for an immovable source.
    pub q0: f64,
}

impl MomentumTransfer {
    pub fn from_kinematics(p: f64, theta: f64) -> Result<Self> {
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::Domain(format!("incident momentum must be positive, got {p}")));
        }
        if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("angle must lie in [0, pi], got {theta}")));
        }
        Ok(MomentumTransfer { p, theta, q: 2.0 * p * (0.5 * theta).sin(), q0: 0.0 })
    }
}

/// How an amplitude value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeMethod {
    AnalyticYukawa,
    Quadrature,
    CoulombLimit,
}

impl AmplitudeMethod {
    pub fn name(&self) -> &'static str {
        match self {
            AmplitudeMethod::AnalyticYukawa => "analytic-yukawa",
            AmplitudeMethod::Quadrature => "quadrature",
            AmplitudeMethod::CoulombLimit => "coulomb-limit",
        }
    }
}

/// Scattering amplitude f(θ) in bohr and the differential cross-section
/// |f|² it implies.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringResult {
    pub amplitude: f64,
    pub dcs: f64,
    pub method: AmplitudeMethod,
}

impl ScatteringResult {
    fn new(amplitude: f64, method: AmplitudeMethod) -> Self {
        ScatteringResult { amplitude, dcs: amplitude * amplitude, method }
    }
}

/// Screening sequence whose zero-screening extrapolation reproduces −1/r
/// to ~1e-5 relative; three halving terms alone leave ~1.1e-3 at r = 10.
pub const DEFAULT_SCREENINGS: &[f64] = &[0.04, 0.02, 0.01, 0.005];

/// Static propagator weight 1/q².
pub fn propagator_weight(transfer: &MomentumTransfer) -> Result<f64> {
    if transfer.q == 0.0 {
        return Err(Error::SingularForward);
    }
    Ok(1.0 / (transfer.q * transfer.q))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(n >= 3 && n % 2 == 1);
    let h = (b - a) / (n - 1) as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n - 1 {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// V_μ(r) from the momentum-space weight 4π/(k²+μ²): the oscillatory
/// k-integral is tamed by splitting off the known ∫sin(kr)/k dk = π/2 and
/// substituting k = μs, leaving an absolutely convergent integrand.
/// Returns (value, quadrature error estimate from halving the resolution).
fn screened_potential_quadrature(mu: f64, r: f64) -> (f64, f64) {
    let x = mu * r;
    let integrand = |s: f64| -> f64 {
        if s == 0.0 {
            x
        } else {
            (x * s).sin() / (s * (1.0 + s * s))
        }
    };
    // ≥ 40 samples per oscillation period 2π/x, on a fixed [0, 300] window
    let steps = (30_000usize).max((300.0 * x * 40.0 / (2.0 * PI)).ceil() as usize);
    let steps = steps + steps % 2; // even panel count
    let fine = simpson(integrand, 0.0, 300.0, steps + 1);
    let coarse = simpson(integrand, 0.0, 300.0, steps / 2 + 1);
    let value = -(2.0 / (PI * r)) * (PI / 2.0 - fine);
    let estimate = (2.0 / (PI * r)) * (fine - coarse).abs();
    (value, estimate)
}

/// The screened potential value V_μ(r) by quadrature.
pub fn screened_potential_value(mu: f64, r: f64) -> Result<f64> {
    if !mu.is_finite() || mu <= 0.0 {
        return Err(Error::Domain(format!("screening must be positive, got {mu}")));
    }
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    Ok(screened_potential_quadrature(mu, r).0)
}

/// Per-screening potential tables and their limit.
#[derive(Debug, Clone)]
pub struct ScreeningExtrapolation {
    pub radii: Vec<f64>,
    pub screenings: Vec<f64>,
    /// per_screening[i][j] = V at screenings[i], radii[j].
    pub per_screening: Vec<Vec<f64>>,
    /// Polynomial extrapolation of each column to zero screening.
    pub extrapolated: Vec<f64>,
    /// max over radii of |extrapolated − (−1/r)| / (1/r).
    pub max_rel_deviation: f64,
}

/// Polynomial extrapolation to x = 0 through the points (xs, ys).
fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len();
    let mut t = ys.to_vec();
    for level in 1..n {
        for i in 0..n - level {
            t[i] = (xs[i] * t[i + 1] - xs[i + level] * t[i]) / (xs[i] - xs[i + level]);
        }
    }
    t[0]
}

/// Builds the real-space potential implied by the static propagator for a
/// decreasing sequence of screenings, extrapolates the sequence to zero
/// screening, and reports how close the limit lands to −1/r.  The limit is
/// returned as a tabulated potential on radii 0.5(0.1)10.
pub fn potential_from_propagator(
    mu_sequence: &[f64],
) -> Result<(Potential, ScreeningExtrapolation)> {
    if mu_sequence.len() < 3 {
        return Err(Error::Domain(format!(
            "need at least 3 screenings to extrapolate, got {}",
            mu_sequence.len()
        )));
    }
    for pair in mu_sequence.windows(2) {
        if !(pair[0] > pair[1]) {
            return Err(Error::Domain(format!(
                "screenings must decrease strictly: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if mu_sequence.iter().any(|&m| !m.is_finite() || m <= 0.0) {
        return Err(Error::Domain("screenings must be positive".into()));
    }

    let radii: Vec<f64> = (0..=95).map(|i| 0.5 + 0.1 * i as f64).collect();
    let mut per_screening = Vec::with_capacity(mu_sequence.len());
    for &mu in mu_sequence {
        let mut row = Vec::with_capacity(radii.len());
        let mut worst = 0.0f64;
        for &r in &radii {
            let (v, est) = screened_potential_quadrature(mu, r);
            worst = worst.max(est / v.abs().max(1e-30));
            row.push(v);
        }
        if worst > 1e-6 {
            return Err(Error::Solver(format!(
                "screened-potential quadrature did not converge for screening {mu} \
                 (relative estimate {worst:.2e})"
            )));
        }
        per_screening.push(row);
    }

    let extrapolated: Vec<f64> = (0..radii.len())
        .map(|j| {
            let col: Vec<f64> = per_screening.iter().map(|row| row[j]).collect();
            extrapolate_to_zero(mu_sequence, &col)
        })
        .collect();
    let max_rel_deviation = radii
        .iter()
        .zip(&extrapolated)
        .map(|(&r, &v)| (v + 1.0 / r).abs() * r)
        .fold(0.0, f64::max);

    let table: Vec<(f64, f64)> = radii.iter().cloned().zip(extrapolated.iter().cloned()).collect();
    let pot = Potential::tabulated(table)?;
    Ok((
        pot,
        ScreeningExtrapolation {
            radii,
            screenings: mu_sequence.to_vec(),
            per_screening,
            extrapolated,
            max_rel_deviation,
        },
    ))
}

fn reject_unscreened() -> Error {
    Error::Domain(
        "the unscreened 1/r potential has a divergent forward amplitude; \
         scatter off a screened potential and extrapolate the screening to zero"
            .into(),
    )
}

/// First Born amplitude f(θ) = −2∫ V(r) r sin(qr)/q dr.  Screened
/// potentials use the closed form 2·strength/(q²+μ²); tabulated potentials
/// are integrated over their support.
pub fn born_amplitude(pot: &Potential, p: f64, theta: f64) -> Result<ScatteringResult> {
    let transfer = MomentumTransfer::from_kinematics(p, theta)?;
    match pot {
        Potential::Yukawa { strength, screening } => {
            if *screening == 0.0 {
                return Err(reject_unscreened());
            }
            let q2 = transfer.q * transfer.q;
            Ok(ScatteringResult::new(
                2.0 * strength / (q2 + screening * screening),
                AmplitudeMethod::AnalyticYukawa,
            ))
        }
        Potential::Coulomb { .. } => Err(reject_unscreened()),
        Potential::Tabulated { .. } => born_amplitude_quadrature(pot, p, theta),
        Potential::Harmonic { .. } => Err(Error::Domain(
            "a confining potential has no scattering amplitude".into(),
        )),
    }
}

/// The quadrature path of the Born integral, usable on screened and
/// tabulated potentials alike; the independent cross-check for the closed
/// form.
pub fn born_amplitude_quadrature(pot: &Potential, p: f64, theta: f64) -> Result<ScatteringResult> {
    let transfer = MomentumTransfer::from_kinematics(p, theta)?;
    let q = transfer.q;
    let (lo, hi) = match pot {
        Potential::Yukawa { screening, .. } => {
            if *screening == 0.0 {
                return Err(reject_unscreened());
            }
            // e^{−μr} envelope falls below 1e-12 of its peak at r ≈ 28/μ
            (0.0, 28.0 / screening)
        }
        Potential::Tabulated { table } => {
            let first = table[0].0;
            if first < 0.0 {
                return Err(Error::Domain(
                    "scattering needs a radial table starting at r >= 0".into(),
                ));
            }
            (first, table[table.len() - 1].0)
        }
        Potential::Coulomb { .. } => return Err(reject_unscreened()),
        Potential::Harmonic { .. } => {
            return Err(Error::Domain(
                "a confining potential has no scattering amplitude".into(),
            ))
        }
    };

    // r·V(r) is finite even for the screened kinds' 1/r prefactor
    let rv = |r: f64| -> f64 {
        if r == 0.0 {
            match pot {
                Potential::Yukawa { strength, .. } => -strength,
                _ => 0.0,
            }
        } else {
            pot.evaluate(r).map(|v| v * r).unwrap_or(0.0)
        }
    };
    // kernel sin(qr)/q, degenerating to r in the forward direction
    let kernel = |r: f64| -> f64 {
        if q == 0.0 {
            r
        } else {
            (q * r).sin() / q
        }
    };

    let periods = (hi - lo) * q / (2.0 * PI);
    let steps = (2000usize).max((periods * 40.0).ceil() as usize).min(2_000_000);
    let steps = steps + steps % 2;
    let f = simpson(|r| rv(r) * kernel(r), lo, hi, steps + 1);
    Ok(ScatteringResult::new(-2.0 * f, AmplitudeMethod::Quadrature))
}

/// Differential cross-section in the zero-screening limit: the amplitude is
/// evaluated per screening and extrapolated in μ² (it is rational in μ²).
pub fn rutherford_dcs(p: f64, theta: f64, mu_sequence: &[f64]) -> Result<ScatteringResult> {
    if mu_sequence.len() < 3 {
        return Err(Error::Domain(format!(
            "need at least 3 screenings to extrapolate, got {}",
            mu_sequence.len()
        )));
    }
    let mut xs = Vec::with_capacity(mu_sequence.len());
    let mut ys = Vec::with_capacity(mu_sequence.len());
    for &mu in mu_sequence {
        let pot = Potential::yukawa(1.0, mu)?;
        ys.push(born_amplitude(&pot, p, theta)?.amplitude);
        xs.push(mu * mu);
    }
    let f = extrapolate_to_zero(&xs, &ys);
    Ok(ScatteringResult { amplitude: f, dcs: f * f, method: AmplitudeMethod::CoulombLimit })
}

//! Sampled wavefunctions with a declared normalization convention.

use crate::grid::{Grid, GridKind};
use crate::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `integral |psi|^2 dV = 1` under the grid's quadrature
    /// (volume element: dx on 1D grids, 4*pi*r^2 dr on radial grids).
    UnitL2,
    /// No normalization claim.
    Raw,
}

#[derive(Debug, Clone)]
pub struct Wavefunction {
    grid: Grid,
    values: Vec<Complex64>,
    normalization: Normalization,
}

impl Wavefunction {
    pub fn raw(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        Self::check(&grid, &values)?;
        Ok(Wavefunction { grid, values, normalization: Normalization::Raw })
    }

    /// Scales the samples so `integral |psi|^2 dV = 1` under the grid's
    /// quadrature; this makes the UnitL2 invariant hold by construction.
    pub fn unit(grid: Grid, mut values: Vec<Complex64>) -> Result<Self> {
        Self::check(&grid, &values)?;
        let norm_sq = Self::norm_sq_of(&grid, &values);
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::Domain(format!("cannot normalize: |psi|^2 integrates to {norm_sq}")));
        }
        let scale = 1.0 / norm_sq.sqrt();
        for v in &mut values {
            *v *= scale;
        }
        Ok(Wavefunction { grid, values, normalization: Normalization::UnitL2 })
    }

    pub fn raw_real(grid: Grid, values: &[f64]) -> Result<Self> {
        Self::raw(grid, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn unit_real(grid: Grid, values: &[f64]) -> Result<Self> {
        Self::unit(grid, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    fn check(grid: &Grid, values: &[Complex64]) -> Result<()> {
        if values.len() != grid.n() {
            return Err(Error::Shape { expected: grid.n(), got: values.len() });
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("wavefunction samples"));
        }
        Ok(())
    }

    fn norm_sq_of(grid: &Grid, values: &[Complex64]) -> f64 {
        grid.volume_weights()
            .iter()
            .zip(values)
            .map(|(w, v)| w * v.norm_sqr())
            .sum()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// `integral |psi|^2 dV` under the grid's quadrature.
    pub fn norm_sq(&self) -> f64 {
        Self::norm_sq_of(&self.grid, &self.values)
    }

    /// `|psi_i|^2` per node.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Value at `r = 0` by quadratic extrapolation from the first three
    /// nodes.  Radial grids exclude the origin, so densities there are
    /// reported rather than sampled.
    pub fn value_at_origin(&self) -> Result<Complex64> {
        if self.grid.kind() != GridKind::Radial {
            return Err(Error::Domain("origin extrapolation applies to radial grids".into()));
        }
        let v = &self.values;
        Ok(v[0] * 3.0 - v[1] * 3.0 + v[2])
    }
}

//! Grids and quadrature.
//!
//! Two node layouts cover every problem in this crate:
//!
//! * `Uniform1d`: `n` nodes from `start` to `stop` inclusive, spacing
//!   `h = (stop - start)/(n - 1)`.
//! * `Radial`: `n` nodes at `r_i = i*h`, `h = r_max/n`.  The origin is
//!   excluded; radial integrands carry the `4*pi*r^2` volume element and
//!   vanish at `r = 0`, so quadrature closes over `[0, r_max]` with a
//!   phantom origin node whose own weight is dropped.  Because of that
//!   closure the radial weight sum is `r_max - h/3` (Simpson) or
//!   `r_max - h/2` (trapezoid), not `stop - start`; the uniform layout
//!   keeps the exact `stop - start` sum.
//!
//! Radial grids default to Simpson weights (the trapezoid closure leaves an
//! O(h^2) Euler-Maclaurin term in integrands that do not flatten at the
//! origin).  Trapezoid weights remain available behind the same interface
//! and are the right choice for sine-transform grids, where uniform weights
//! make the transform pair exactly mutually inverse.

use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Uniform1d,
    Radial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    Trapezoid,
    Simpson,
}

#[derive(Debug, Clone)]
pub struct Grid {
    kind: GridKind,
    rule: QuadratureRule,
    start: f64,
    stop: f64,
    n: usize,
    h: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.rule == other.rule
            && self.start == other.start
            && self.stop == other.stop
            && self.n == other.n
    }
}

impl Grid {
    /// Uniform grid over `[start, stop]`, both ends included.
    pub fn uniform(start: f64, stop: f64, n: usize) -> Result<Self> {
        Self::uniform_with_rule(start, stop, n, QuadratureRule::Trapezoid)
    }

    pub fn uniform_with_rule(start: f64, stop: f64, n: usize, rule: QuadratureRule) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::NonFinite("grid bounds"));
        }
        if n < 3 {
            return Err(Error::Grid(format!("need n >= 3 nodes, got {n}")));
        }
        if stop <= start {
            return Err(Error::Grid(format!("need stop > start, got [{start}, {stop}]")));
        }
        let h = (stop - start) / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|i| start + i as f64 * h).collect();
        let weights = match rule {
            QuadratureRule::Trapezoid => {
                let mut w = vec![h; n];
                w[0] = h / 2.0;
                w[n - 1] = h / 2.0;
                w
            }
            QuadratureRule::Simpson => {
                if !(n - 1).is_multiple_of(2) {
                    return Err(Error::Grid(format!(
                        "Simpson weights on a uniform grid need an even panel count (odd n), got n = {n}"
                    )));
                }
                let mut w = vec![0.0; n];
                w[0] = h / 3.0;
                w[n - 1] = h / 3.0;
                for (i, wi) in w.iter_mut().enumerate().take(n - 1).skip(1) {
                    *wi = if i % 2 == 1 { 4.0 * h / 3.0 } else { 2.0 * h / 3.0 };
                }
                w
            }
        };
        Ok(Grid { kind: GridKind::Uniform1d, rule, start, stop, n, h, nodes, weights })
    }

    /// Radial grid with nodes `i*h`, `i = 1..=n`, `h = r_max/n`.
    pub fn radial(r_max: f64, n: usize) -> Result<Self> {
        Self::radial_with_rule(r_max, n, QuadratureRule::Simpson)
    }

    pub fn radial_with_rule(r_max: f64, n: usize, rule: QuadratureRule) -> Result<Self> {
        if !r_max.is_finite() {
            return Err(Error::NonFinite("grid bounds"));
        }
        if n < 3 {
            return Err(Error::Grid(format!("need n >= 3 nodes, got {n}")));
        }
        if r_max <= 0.0 {
            return Err(Error::Grid(format!("need r_max > 0, got {r_max}")));
        }
        let h = r_max / n as f64;
        let nodes: Vec<f64> = (1..=n).map(|i| i as f64 * h).collect();
        let weights = match rule {
            QuadratureRule::Trapezoid => {
                let mut w = vec![h; n];
                w[n - 1] = h / 2.0;
                w
            }
            QuadratureRule::Simpson => {
                if !n.is_multiple_of(2) {
                    return Err(Error::Grid(format!(
                        "Simpson weights on a radial grid need an even node count, got n = {n}"
                    )));
                }
                let mut w = vec![0.0; n];
                for (i, wi) in w.iter_mut().enumerate() {
                    let node = i + 1;
                    *wi = if node == n {
                        h / 3.0
                    } else if node % 2 == 1 {
                        4.0 * h / 3.0
                    } else {
                        2.0 * h / 3.0
                    };
                }
                w
            }
        };
        Ok(Grid { kind: GridKind::Radial, rule, start: h, stop: r_max, n, h, nodes, weights })
    }

    /// Default radial grid for hydrogen-class problems: `psi_1s(40) ~ e^{-40}`
    /// guarantees the decay preconditions used across the crate.
    pub fn radial_default() -> Self {
        Self::radial(40.0, 4000).expect("default radial grid")
    }

    /// Momentum grid conjugate to this radial grid: `p_j = j*pi/(r_max + h)`,
    /// same node count, trapezoid weights.
    ///
    /// On the pair (radial trapezoid grid, conjugate grid) the discrete radial
    /// sine transform is orthogonal, so decompose followed by reconstruct is
    /// the identity up to roundoff and boundary decay.
    pub fn conjugate_momentum(&self) -> Result<Self> {
        if self.kind != GridKind::Radial {
            return Err(Error::Domain("conjugate momentum grid requires a radial grid".into()));
        }
        let period = self.stop + self.h;
        let p_max = self.n as f64 * PI / period;
        Self::radial_with_rule(p_max, self.n, QuadratureRule::Trapezoid)
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Quadrature weight times the volume element per node:
    /// `w_i` on 1D grids, `w_i * 4*pi*r_i^2` on radial grids.
    pub fn volume_weights(&self) -> Vec<f64> {
        match self.kind {
            GridKind::Uniform1d => self.weights.clone(),
            GridKind::Radial => self
                .weights
                .iter()
                .zip(&self.nodes)
                .map(|(w, r)| w * 4.0 * PI * r * r)
                .collect(),
        }
    }

    /// Plain weighted sum `sum_i w_i f_i`.  The volume element is the
    /// caller's business (see `volume_weights`).
    pub fn integrate(&self, f: &[f64]) -> Result<f64> {
        self.check_samples(f.len())?;
        if f.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("integrand samples"));
        }
        Ok(f.iter().zip(&self.weights).map(|(x, w)| x * w).sum())
    }

    pub fn integrate_complex(&self, f: &[Complex64]) -> Result<Complex64> {
        self.check_samples(f.len())?;
        if f.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::NonFinite("integrand samples"));
        }
        Ok(f.iter().zip(&self.weights).map(|(x, w)| x * *w).sum())
    }

    fn check_samples(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::Shape { expected: self.n, got: len });
        }
        Ok(())
    }
}

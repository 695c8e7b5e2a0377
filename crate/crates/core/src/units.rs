//! Conversions between Hartree atomic units and laboratory units.
//!
//! Everything else in this crate works in atomic units (hbar = m_e = e = 1);
//! conversions belong at I/O boundaries only.

use crate::{Error, Result};

/// One hartree in electronvolts.
pub const HARTREE_IN_EV: f64 = 27.2114;

/// One bohr in meters.
pub const BOHR_IN_M: f64 = 5.29177e-11;

fn finite(x: f64, what: &'static str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(what))
    }
}

pub fn hartree_to_ev(e: f64) -> Result<f64> {
    Ok(finite(e, "energy")? * HARTREE_IN_EV)
}

pub fn ev_to_hartree(e: f64) -> Result<f64> {
    Ok(finite(e, "energy")? / HARTREE_IN_EV)
}

pub fn bohr_to_meters(r: f64) -> Result<f64> {
    Ok(finite(r, "length")? * BOHR_IN_M)
}

pub fn meters_to_bohr(r: f64) -> Result<f64> {
    Ok(finite(r, "length")? / BOHR_IN_M)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_energy_in_ev() {
        let ev = hartree_to_ev(-0.5).unwrap();
        assert!((ev - (-13.6)).abs() / 13.6 < 1e-3, "got {ev}");
    }

    #[test]
    fn zero_maps_to_zero() {
        assert_eq!(hartree_to_ev(0.0).unwrap(), 0.0);
        assert_eq!(bohr_to_meters(0.0).unwrap(), 0.0);
    }

    #[test]
    fn one_hartree_in_ev() {
        let ev = hartree_to_ev(1.0).unwrap();
        assert!((ev - 27.2).abs() / 27.2 < 1e-3, "got {ev}");
    }

    #[test]
    fn one_bohr_in_meters() {
        let m = bohr_to_meters(1.0).unwrap();
        assert!((m - 5.29e-11).abs() / 5.29e-11 < 1e-3, "got {m}");
    }

    #[test]
    fn bohr_linearity() {
        let m = bohr_to_meters(2.0).unwrap();
        assert!((m - 1.058e-10).abs() / 1.058e-10 < 1e-3, "got {m}");
    }

    #[test]
    fn round_trips_are_identity() {
        // property: to lab units and back within 1e-12 relative, over a wide range
        let mut x = 1e-8;
        while x < 1e8 {
            for v in [x, -x] {
                let e = ev_to_hartree(hartree_to_ev(v).unwrap()).unwrap();
                assert!((e - v).abs() <= 1e-12 * v.abs(), "energy round trip at {v}");
                let r = meters_to_bohr(bohr_to_meters(v).unwrap()).unwrap();
                assert!((r - v).abs() <= 1e-12 * v.abs(), "length round trip at {v}");
            }
            x *= 7.3;
        }
    }

    #[test]
    fn non_finite_rejected() {
        assert!(hartree_to_ev(f64::NAN).is_err());
        assert!(hartree_to_ev(f64::INFINITY).is_err());
        assert!(bohr_to_meters(f64::NEG_INFINITY).is_err());
    }
}

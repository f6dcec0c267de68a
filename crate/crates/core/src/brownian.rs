//! Brownian translation and reorientation, and the dead-reckoning bound.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bem::mesh::SpheroidShape;
use crate::bem::rotation::perrin_transverse_friction;
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::quantities::{Scenario, BOLTZMANN};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrownianRecord {
    /// m²/s.
    pub d: f64,
    /// s.
    pub tau: f64,
    /// m²/s.
    pub d_m: f64,
}

pub fn translational_diffusion(a: f64, eta: f64, t: f64) -> Result<f64> {
    ensure_positive("a", a)?;
    ensure_positive("eta", eta)?;
    ensure_positive("T", t)?;
    Ok(BOLTZMANN * t / (6.0 * PI * a * eta))
}

pub fn orientation_time(a: f64, eta: f64, t: f64) -> Result<f64> {
    ensure_positive("a", a)?;
    ensure_positive("eta", eta)?;
    ensure_positive("T", t)?;
    Ok(4.0 * PI * a.powi(3) * eta / (BOLTZMANN * t))
}

/// Heading-loss time for rotation about the transverse axes.
pub fn spheroid_orientation_time(shape: &SpheroidShape, eta: f64, t: f64) -> Result<f64> {
    ensure_positive("eta", eta)?;
    ensure_positive("T", t)?;
    Ok(perrin_transverse_friction(shape, eta) / (2.0 * BOLTZMANN * t))
}

pub fn rms_displacement(d: f64, t: f64) -> Result<f64> {
    ensure_non_negative("D", d)?;
    ensure_non_negative("t", t)?;
    Ok((6.0 * d * t).sqrt())
}

pub fn motile_diffusion(tau: f64, u: f64) -> Result<f64> {
    ensure_non_negative("tau", tau)?;
    ensure_non_negative("U", u)?;
    Ok(tau * u * u / 3.0)
}

/// Slowest speed that covers `d` before the heading drifts by `alpha_rms`
/// radians.
pub fn dead_reckoning_speed(d: f64, tau: f64, alpha_rms: f64) -> Result<f64> {
    ensure_positive("d", d)?;
    ensure_positive("tau", tau)?;
    if !(alpha_rms > 0.0) || !alpha_rms.is_finite() {
        return Err(Error::param("alpha_rms", "angle must be positive; zero needs infinite speed"));
    }
    Ok(d / (tau * alpha_rms * alpha_rms))
}

pub fn location_error(d: f64, alpha_rms: f64) -> f64 {
    d * alpha_rms.sin()
}

pub fn brownian_record(scenario: &Scenario) -> Result<BrownianRecord> {
    let d = translational_diffusion(scenario.a, scenario.eta, scenario.t_body)?;
    let tau = orientation_time(scenario.a, scenario.eta, scenario.t_body)?;
    Ok(BrownianRecord { d, tau, d_m: motile_diffusion(tau, scenario.u)? })
}

/// One scenario column of the Brownian summary table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrownianTableRow {
    pub d: f64,
    /// rms displacement while travelling `travel`, m.
    pub rms_displacement: f64,
    pub tau: f64,
    /// Distance covered in one orientation time, m.
    pub travel_in_tau: f64,
    pub d_m: f64,
}

pub fn brownian_table(scenario: &Scenario, travel: f64) -> Result<BrownianTableRow> {
    ensure_positive("U", scenario.u)?;
    let rec = brownian_record(scenario)?;
    Ok(BrownianTableRow {
        d: rec.d,
        rms_displacement: rms_displacement(rec.d, travel / scenario.u)?,
        tau: rec.tau,
        travel_in_tau: scenario.u * rec.tau,
        d_m: rec.d_m,
    })
}

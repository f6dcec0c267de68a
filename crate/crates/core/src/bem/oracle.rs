//! Brute-force swimming speed of an oscillating sphere: quasi-static
//! boundary-element solves on the deformed surface over one period.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::mesh::{BemMesh, Generatrix};
use super::solver::BemSolver;
use crate::error::{ensure_positive, Error, Result};
use crate::numerics::LegendreTable;
use crate::quantities::Scenario;
use crate::squirmer::{is_normalized, surface_state, ModeSpectrum};

/// Instantaneous deformed generatrix, parameterised by the material angle ϑ.
pub struct DeformedBody<'s> {
    pub spec: &'s ModeSpectrum,
    pub a: f64,
    pub t: f64,
}

impl DeformedBody<'_> {
    /// (u_ρ, u_z) of the material point at ϑ, relative to the body centre.
    pub fn velocity(&self, vartheta: f64) -> [f64; 2] {
        let s = surface_state(self.spec, self.a, vartheta, self.t);
        let (st, ct) = s.theta.sin_cos();
        let (vr, vt) = s.velocity;
        [vr * st + vt * ct, vr * ct - vt * st]
    }
}

impl Generatrix for DeformedBody<'_> {
    fn point(&self, vartheta: f64) -> [f64; 2] {
        let s = surface_state(self.spec, self.a, vartheta, self.t);
        [s.r * s.theta.sin(), s.r * s.theta.cos()]
    }

    fn derivative(&self, vartheta: f64) -> [f64; 2] {
        let table = LegendreTable::new(self.spec.nmax(), vartheta.cos());
        let tau = self.spec.omega * self.t;
        let eps = self.spec.epsilon;
        let (mut r, mut th, mut dr, mut dth) = (0.0, 0.0, 0.0, 0.0);
        for m in &self.spec.modes {
            let alpha = m.a * (tau - m.gamma).cos();
            let beta = m.b * (tau - m.eta).cos();
            let k = m.n as f64 + 1.0;
            r += alpha * table.p[m.n];
            th += beta * table.p1(m.n) / k;
            dr += alpha * table.p1(m.n);
            dth += beta * table.dp1_dtheta(m.n) / k;
        }
        let radius = self.a * (1.0 + eps * r);
        let theta = vartheta + eps * th;
        let drad = self.a * eps * dr;
        let dtheta = 1.0 + eps * dth;
        let (st, ct) = theta.sin_cos();
        [drad * st + radius * ct * dtheta, drad * ct - radius * st * dtheta]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    pub elements: usize,
    pub steps_per_period: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { elements: 128, steps_per_period: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRun {
    pub mean_speed: f64,
    /// Instantaneous swimming speed at each step of one period.
    pub speeds: Vec<f64>,
    pub displacement: f64,
    pub elapsed: f64,
}

/// Mean swimming speed over `n_periods` with default resolution.
pub fn swim_oscillation_oracle(spec: &ModeSpectrum, a: f64, scenario: &Scenario, n_periods: usize) -> Result<f64> {
    Ok(swim_oscillation_oracle_with(spec, a, scenario, n_periods, OracleOptions::default())?.mean_speed)
}

pub fn swim_oscillation_oracle_with(
    spec: &ModeSpectrum,
    a: f64,
    scenario: &Scenario,
    n_periods: usize,
    options: OracleOptions,
) -> Result<OracleRun> {
    spec.validate()?;
    ensure_positive("a", a)?;
    if n_periods == 0 {
        return Err(Error::param("n_periods", "need at least one period"));
    }
    if options.steps_per_period < 2 {
        return Err(Error::param("steps_per_period", "need at least two steps per period"));
    }
    if spec.epsilon == 0.0 || spec.omega == 0.0 || spec.is_zero() {
        return Ok(OracleRun { mean_speed: 0.0, speeds: vec![0.0; options.steps_per_period], displacement: 0.0, elapsed: 0.0 });
    }
    if !is_normalized(spec) {
        return Err(Error::InvalidState("oracle needs a normalized spectrum".into()));
    }
    let period = 2.0 * PI / spec.omega;
    let dt = period / options.steps_per_period as f64;
    // the quasi-static configuration depends only on the phase, so one
    // period of samples serves every period
    let mut speeds = Vec::with_capacity(options.steps_per_period);
    for step in 0..options.steps_per_period {
        let body = DeformedBody { spec, a, t: step as f64 * dt };
        let mesh = BemMesh::uniform_parameter(&body, options.elements)?;
        let solver = BemSolver::new(&body, mesh, scenario.eta)?;
        let sol = solver.swim_with_velocity(&|t| body.velocity(t))?;
        speeds.push(sol.rigid_velocity);
    }
    let per_period: f64 = speeds.iter().sum::<f64>() * dt;
    let displacement = per_period * n_periods as f64;
    let elapsed = period * n_periods as f64;
    Ok(OracleRun { mean_speed: displacement / elapsed, speeds, displacement, elapsed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::squirmer::{normalize_spectrum, optimal_spectrum};

    fn spec(eps: f64) -> ModeSpectrum {
        normalize_spectrum(&optimal_spectrum(10, 10).unwrap(), 1e-6).unwrap().with_scale(eps, 1000.0)
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let s = spec(0.05);
        let body = DeformedBody { spec: &s, a: 1e-6, t: 1.3e-3 };
        for &v in &[0.01, 0.7, 1.6, 3.1] {
            let h = 1e-6;
            let (p, m) = (body.point(v + h), body.point(v - h));
            let d = body.derivative(v);
            for i in 0..2 {
                let fd = (p[i] - m[i]) / (2.0 * h);
                assert!((fd - d[i]).abs() < 1e-6 * 1e-6 * 10.0, "{v} {i} {fd} {}", d[i]);
            }
        }
    }

    #[test]
    fn zero_amplitude_gives_zero() {
        let s = spec(0.0);
        let u = swim_oscillation_oracle(&s, 1e-6, &Scenario::low(), 1).unwrap();
        assert_eq!(u, 0.0);
    }

    #[test]
    fn large_amplitude_is_a_geometry_error() {
        let s = spec(0.6);
        let err = swim_oscillation_oracle_with(&s, 1e-6, &Scenario::low(), 1, OracleOptions { elements: 64, steps_per_period: 4 })
            .unwrap_err();
        assert!(matches!(err, Error::Geometry(_)), "{err}");
    }
}

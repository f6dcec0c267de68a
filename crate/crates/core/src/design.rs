//! Power, stress and navigation constraints over (speed, viscosity) for the
//! two reference propulsion designs.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actuators::{reference_rod_array, rod_internal_power, treadmill_internal_power, FrictionModel, RodArrayDesign};
use crate::brownian::{dead_reckoning_speed, orientation_time};
use crate::error::{ensure_positive, Error, Result};
use crate::field::{shear_and_stress_with, MotionMode, PreparedFlow, ShearMeasure};
use crate::quantities::Scenario;
use crate::squirmer::{normalize_spectrum, optimal_spectrum, oscillation_coefficients, ModeSpectrum, OscillationCoefficients};
use crate::tangential::{band_power, required_band_speed, BandActuation};

/// Speed range the reference designs are meant for, m/s.
pub const SPEED_RANGE: (f64, f64) = (1e-6, 1e-2);
/// Viscosity range the reference designs are meant for, Pa·s.
pub const VISCOSITY_RANGE: (f64, f64) = (1e-3, 10.0);
/// Oscillation amplitude scale held fixed while the frequency follows U.
pub const OSCILLATION_EPSILON: f64 = 0.05;
/// Band angle of the tangential reference design.
pub const BAND_GAMMA: f64 = PI / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Tangential,
    Oscillating,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Tangential => "tangential",
            Method::Oscillating => "oscillating",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    /// W.
    pub p_max: f64,
    /// Pa.
    pub stress_max: f64,
    /// Distance from the surface where stress is limited, m.
    pub probe_distance: f64,
    /// Dead-reckoning travel, m.
    pub brownian_distance: f64,
    /// rms heading error allowed over the travel, radians.
    pub alpha_rms: f64,
    /// Cells above this Womersley number are flagged model-invalid.
    pub womersley_max: f64,
}

impl Default for ConstraintSet {
    fn default() -> Self {
        ConstraintSet {
            p_max: 1e-12,
            stress_max: 1.0,
            probe_distance: 1e-6,
            brownian_distance: 20e-6,
            alpha_rms: 20f64.to_radians(),
            womersley_max: 1.0,
        }
    }
}

impl ConstraintSet {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("P_max", self.p_max)?;
        ensure_positive("stress_max", self.stress_max)?;
        ensure_positive("probe_distance", self.probe_distance)?;
        ensure_positive("brownian_distance", self.brownian_distance)?;
        ensure_positive("alpha_rms", self.alpha_rms)?;
        ensure_positive("womersley_max", self.womersley_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintFlags {
    pub power: bool,
    pub stress: bool,
    pub brownian: bool,
}

/// Value over limit for each constraint; ≤ 1 passes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintMargins {
    pub power: f64,
    pub stress: f64,
    pub brownian: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityCell {
    pub u: f64,
    pub eta: f64,
    pub method: Method,
    pub pass: ConstraintFlags,
    pub margins: ConstraintMargins,
    pub p_propel: f64,
    pub p_internal: f64,
    /// Zero for tangential motion.
    pub womersley: f64,
    pub model_valid: bool,
    /// Inside the speed and viscosity ranges of the reference designs.
    pub in_range: bool,
}

impl FeasibilityCell {
    pub fn all_pass(&self) -> bool {
        self.pass.power && self.pass.stress && self.pass.brownian
    }

    pub fn p_total(&self) -> f64 {
        self.p_propel + self.p_internal
    }

    pub fn internal_fraction(&self) -> f64 {
        let t = self.p_total();
        if t > 0.0 {
            self.p_internal / t
        } else {
            0.0
        }
    }
}

/// The reference designs of both methods on one robot, with the flow-derived
/// quantities computed once at a reference speed.
#[derive(Debug, Clone)]
pub struct ReferenceDesigns {
    base: Scenario,
    constraints: ConstraintSet,
    friction: FrictionModel,
    coefficients: OscillationCoefficients,
    rods: RodArrayDesign,
    /// Shear rate per unit speed at the probe distance, 1/m.
    shear_tangential: f64,
    shear_oscillating: f64,
}

impl ReferenceDesigns {
    /// `base` fixes the robot radius, fluid density and temperature.
    pub fn new(base: &Scenario, constraints: &ConstraintSet) -> Result<Self> {
        constraints.validate()?;
        let spec = normalize_spectrum(&optimal_spectrum(10, 10)?, base.a)?;
        let coefficients = oscillation_coefficients(&spec)?;
        let rods = reference_rod_array(20, base.a)?;
        let u_ref = base.u;
        let band = BandActuation::meridional(BAND_GAMMA, required_band_speed(u_ref, BAND_GAMMA)?)?;
        let tangential = MotionMode::TangentialBand { scenario: base.clone(), band };
        let omega = coefficients.omega_for_speed(u_ref, base.a, OSCILLATION_EPSILON)?;
        let oscillating = MotionMode::Oscillating { scenario: base.clone(), spectrum: spec.with_scale(OSCILLATION_EPSILON, omega) };
        let shear = |m: &MotionMode| -> Result<f64> {
            let flow = PreparedFlow::new(m)?;
            Ok(shear_and_stress_with(&flow, constraints.probe_distance, base.eta, ShearMeasure::Envelope)?.shear_rate / u_ref)
        };
        Ok(ReferenceDesigns {
            base: base.clone(),
            constraints: *constraints,
            friction: FrictionModel::steady(),
            coefficients,
            rods,
            shear_tangential: shear(&tangential)?,
            shear_oscillating: shear(&oscillating)?,
        })
    }

    pub fn coefficients(&self) -> &OscillationCoefficients {
        &self.coefficients
    }

    /// Oscillation frequency needed for speed `u`, rad/s.
    pub fn oscillation_frequency(&self, u: f64) -> Result<f64> {
        self.coefficients.omega_for_speed(u, self.base.a, OSCILLATION_EPSILON)
    }

    pub fn evaluate(&self, method: Method, u: f64, eta: f64) -> Result<FeasibilityCell> {
        ensure_positive("U", u)?;
        ensure_positive("eta", eta)?;
        let a = self.base.a;
        let c = &self.constraints;
        let (p_propel, p_internal, shear, womersley) = match method {
            Method::Tangential => {
                let v = required_band_speed(u, BAND_GAMMA)?;
                let band_area = 4.0 * PI * a * a * (BAND_GAMMA / 2.0).sin();
                (
                    band_power(BAND_GAMMA, v, a, eta),
                    treadmill_internal_power(&self.friction, band_area, v)?,
                    self.shear_tangential * u,
                    0.0,
                )
            }
            Method::Oscillating => {
                let w = self.oscillation_frequency(u)?;
                let eps = OSCILLATION_EPSILON;
                let p = self.coefficients.c_p * a.powi(3) * eps * eps * eta * w * w;
                let nu = eta / self.base.rho;
                (
                    p,
                    rod_internal_power(&self.friction, &self.rods, a * eps * w)?,
                    self.shear_oscillating * u,
                    a * (w / nu).sqrt(),
                )
            }
        };
        let tau = orientation_time(a, eta, self.base.t_body)?;
        let u_nav = dead_reckoning_speed(c.brownian_distance, tau, c.alpha_rms)?;
        let margins = ConstraintMargins {
            power: (p_propel + p_internal) / c.p_max,
            stress: eta * shear / c.stress_max,
            brownian: u_nav / u,
        };
        let in_range = (SPEED_RANGE.0..=SPEED_RANGE.1).contains(&u) && (VISCOSITY_RANGE.0..=VISCOSITY_RANGE.1).contains(&eta);
        Ok(FeasibilityCell {
            u,
            eta,
            method,
            pass: ConstraintFlags { power: margins.power <= 1.0, stress: margins.stress <= 1.0, brownian: margins.brownian <= 1.0 },
            margins,
            p_propel,
            p_internal,
            womersley,
            model_valid: womersley <= c.womersley_max,
            in_range,
        })
    }
}

/// One-off evaluation on the 1 µm reference robot.
pub fn evaluate_constraints(method: Method, u: f64, eta: f64, constraints: &ConstraintSet) -> Result<FeasibilityCell> {
    ReferenceDesigns::new(&Scenario::low(), constraints)?.evaluate(method, u, eta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityGrid {
    pub method: Method,
    pub u: Vec<f64>,
    pub eta: Vec<f64>,
    /// Row-major: speed index outer, viscosity index inner.
    pub cells: Vec<FeasibilityCell>,
}

impl FeasibilityGrid {
    pub fn cell(&self, iu: usize, ie: usize) -> &FeasibilityCell {
        &self.cells[iu * self.eta.len() + ie]
    }

    pub fn mask(&self) -> Vec<bool> {
        self.cells.iter().map(FeasibilityCell::all_pass).collect()
    }
}

pub fn feasibility_grid_with(refs: &ReferenceDesigns, u_range: &[f64], eta_range: &[f64], method: Method) -> Result<FeasibilityGrid> {
    let points: Vec<(f64, f64)> = u_range.iter().flat_map(|&u| eta_range.iter().map(move |&e| (u, e))).collect();
    let cells = points.par_iter().map(|&(u, e)| refs.evaluate(method, u, e)).collect::<Result<Vec<_>>>()?;
    Ok(FeasibilityGrid { method, u: u_range.to_vec(), eta: eta_range.to_vec(), cells })
}

pub fn feasibility_grid(u_range: &[f64], eta_range: &[f64], method: Method, constraints: &ConstraintSet) -> Result<FeasibilityGrid> {
    let refs = ReferenceDesigns::new(&Scenario::low(), constraints)?;
    feasibility_grid_with(&refs, u_range, eta_range, method)
}

/// `n` logarithmically spaced values from `lo` to `hi`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    ensure_positive("lo", lo)?;
    ensure_positive("hi", hi)?;
    if n < 2 {
        return Err(Error::param("n", "need at least two points"));
    }
    let (l, h) = (lo.log10(), hi.log10());
    Ok((0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => 10f64.powf(l + (h - l) * i as f64 / (n - 1) as f64),
        })
        .collect())
}

/// Lowest mechanical resonance (1/2π)√(k/m), Hz.
pub fn resonance_estimate(k_s: f64, m: f64) -> Result<f64> {
    ensure_positive("k_s", k_s)?;
    ensure_positive("m", m)?;
    Ok((k_s / m).sqrt() / (2.0 * PI))
}

/// Spectrum and frequency of the oscillating reference design at speed `u`.
pub fn oscillating_reference(refs: &ReferenceDesigns, u: f64) -> Result<ModeSpectrum> {
    let spec = normalize_spectrum(&optimal_spectrum(10, 10)?, refs.base.a)?;
    Ok(spec.with_scale(OSCILLATION_EPSILON, refs.oscillation_frequency(u)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn refs() -> &'static ReferenceDesigns {
        static R: OnceLock<ReferenceDesigns> = OnceLock::new();
        R.get_or_init(|| ReferenceDesigns::new(&Scenario::low(), &ConstraintSet::default()).unwrap())
    }

    #[test]
    fn scenario_points_pass_when_oscillating() {
        for s in [Scenario::low(), Scenario::high()] {
            let c = refs().evaluate(Method::Oscillating, s.u, s.eta).unwrap();
            assert!(c.all_pass(), "{c:?}");
            assert!(c.model_valid && c.in_range);
        }
    }

    #[test]
    fn slow_low_viscosity_fails_navigation() {
        let c = refs().evaluate(Method::Oscillating, 20e-6, 1e-3).unwrap();
        assert!(!c.pass.brownian);
        assert!(c.pass.power && c.pass.stress);
        assert!(c.margins.brownian > 2.0);
    }

    #[test]
    fn stress_matches_single_point_field() {
        let low = Scenario::low();
        let c = refs().evaluate(Method::Tangential, low.u, low.eta).unwrap();
        assert!((c.margins.stress / 0.04 - 1.0).abs() < 0.3, "{}", c.margins.stress);
        let h = refs().evaluate(Method::Tangential, low.u, 100.0 * low.eta).unwrap();
        assert!((h.margins.stress / c.margins.stress - 100.0).abs() < 1e-9);
    }

    #[test]
    fn tangential_is_cheaper_but_shears_more() {
        let mut cheaper_only = false;
        for &u in &log_space(1e-6, 1e-2, 9).unwrap() {
            for &e in &log_space(1e-3, 10.0, 9).unwrap() {
                let t = refs().evaluate(Method::Tangential, u, e).unwrap();
                let o = refs().evaluate(Method::Oscillating, u, e).unwrap();
                assert!(t.margins.power < o.margins.power);
                assert!(t.margins.stress > o.margins.stress);
                cheaper_only |= t.pass.power && !o.pass.power;
            }
        }
        assert!(cheaper_only);
    }

    #[test]
    fn womersley_flag_in_fast_thin_corner() {
        let c = refs().evaluate(Method::Oscillating, 1e-2, 1e-3).unwrap();
        assert!(c.womersley > 1.0 && !c.model_valid);
        let low = Scenario::low();
        let l = refs().evaluate(Method::Oscillating, low.u, low.eta).unwrap();
        assert!((l.womersley - 0.11).abs() < 0.02, "{}", l.womersley);
    }

    #[test]
    fn out_of_range_is_reported_not_rejected() {
        let c = refs().evaluate(Method::Tangential, 0.1, 1e-3).unwrap();
        assert!(!c.in_range);
        assert!(refs().evaluate(Method::Tangential, 0.0, 1e-3).is_err());
    }

    #[test]
    fn grid_layout() {
        let us = log_space(1e-6, 1e-2, 5).unwrap();
        let es = log_space(1e-3, 10.0, 4).unwrap();
        let g = feasibility_grid_with(refs(), &us, &es, Method::Tangential).unwrap();
        assert_eq!(g.cells.len(), 20);
        let c = g.cell(3, 2);
        assert_eq!((c.u, c.eta), (us[3], es[2]));
        assert_eq!(g.mask().len(), 20);
        for c in &g.cells {
            assert_eq!(c.pass.power, c.margins.power <= 1.0);
            assert_eq!(c.pass.stress, c.margins.stress <= 1.0);
            assert_eq!(c.pass.brownian, c.margins.brownian <= 1.0);
        }
    }

    #[test]
    fn power_and_stress_regions_are_monotone() {
        let us = log_space(1e-6, 1e-2, 13).unwrap();
        let es = log_space(1e-3, 10.0, 13).unwrap();
        for m in [Method::Tangential, Method::Oscillating] {
            let g = feasibility_grid_with(refs(), &us, &es, m).unwrap();
            for iu in 0..us.len() {
                for ie in 0..es.len() {
                    let c = g.cell(iu, ie);
                    if iu > 0 {
                        let d = g.cell(iu - 1, ie);
                        assert!(!c.pass.power || d.pass.power);
                        assert!(!c.pass.stress || d.pass.stress);
                    }
                    if ie > 0 {
                        let d = g.cell(iu, ie - 1);
                        assert!(!c.pass.power || d.pass.power);
                        assert!(!c.pass.stress || d.pass.stress);
                    }
                }
            }
        }
    }

    #[test]
    fn internal_losses_matter_only_in_thin_fluids() {
        let us = log_space(1e-6, 1e-2, 9).unwrap();
        let es = log_space(1e-3, 10.0, 9).unwrap();
        let g = feasibility_grid_with(refs(), &us, &es, Method::Tangential).unwrap();
        let noticeable: Vec<_> = g.cells.iter().filter(|c| c.all_pass() && c.internal_fraction() > 0.1).collect();
        assert!(!noticeable.is_empty());
        for c in &noticeable {
            assert!(c.eta <= 1e-2, "{c:?}");
        }
        let quiet = g.cells.iter().filter(|c| c.all_pass() && c.internal_fraction() <= 0.1).count();
        assert!(quiet > 0);
        // friction over drag is η⁻¹ and independent of speed here
        let a = refs().evaluate(Method::Tangential, 1e-5, 1e-3).unwrap();
        let b = refs().evaluate(Method::Tangential, 1e-3, 1e-3).unwrap();
        assert!((a.internal_fraction() - b.internal_fraction()).abs() < 1e-12);
    }

    #[test]
    fn resonance() {
        let f = resonance_estimate(25.0, 4e-15).unwrap();
        assert!((f / 12.58e6 - 1.0).abs() < 1e-3, "{f}");
        assert!((resonance_estimate(100.0, 4e-15).unwrap() / f - 2.0).abs() < 1e-12);
        let w = refs().oscillation_frequency(100e-6).unwrap();
        assert!(w / (2.0 * PI) < 2e3 && w / (2.0 * PI) < f / 1e3);
        assert!(resonance_estimate(0.0, 1.0).is_err());
    }

    #[test]
    fn log_space_endpoints() {
        let v = log_space(1e-3, 10.0, 5).unwrap();
        assert_eq!(v[0], 1e-3);
        assert_eq!(v[4], 10.0);
        assert!((v[2] / 0.1 - 1.0).abs() < 1e-12);
    }
}

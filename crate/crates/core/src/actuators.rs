//! Internal friction and structural loads of surface actuators.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Default sliding-friction coefficient, kg/(m² s).
pub const DEFAULT_K_FRICTION: f64 = 1000.0;
/// Default failure strength of tread material, Pa.
pub const DEFAULT_FAILURE_STRENGTH: f64 = 1e10;
/// Sliding area of the reference treadmill set, m².
pub const REFERENCE_SLIDING_AREA: f64 = 20e-12;
/// Band area the reference treadmill set covers (half a 1 µm sphere), m².
pub const REFERENCE_BAND_AREA: f64 = 2.0 * PI * 1e-12;

/// Sliding area per unit of propulsion band area for treadmills.
pub fn treadmill_area_ratio() -> f64 {
    REFERENCE_SLIDING_AREA / REFERENCE_BAND_AREA
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Duty {
    #[default]
    Steady,
    Sinusoidal,
}

impl Duty {
    pub fn factor(self) -> f64 {
        match self {
            Duty::Steady => 1.0,
            Duty::Sinusoidal => 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrictionModel {
    pub k_friction: f64,
    pub duty: Duty,
}

impl Default for FrictionModel {
    fn default() -> Self {
        FrictionModel { k_friction: DEFAULT_K_FRICTION, duty: Duty::Steady }
    }
}

impl FrictionModel {
    pub fn new(k_friction: f64, duty: Duty) -> Result<Self> {
        ensure_positive("k_friction", k_friction)?;
        Ok(FrictionModel { k_friction, duty })
    }

    pub fn steady() -> Self {
        Self::default()
    }

    pub fn sinusoidal() -> Self {
        FrictionModel { duty: Duty::Sinusoidal, ..Self::default() }
    }
}

/// Power lost to sliding friction over area `s` at peak speed `v`.
pub fn sliding_friction_power(model: &FrictionModel, s: f64, v: f64) -> Result<f64> {
    ensure_non_negative("S", s)?;
    if !v.is_finite() {
        return Err(Error::param("v", "speed must be finite"));
    }
    Ok(model.duty.factor() * model.k_friction * s * v * v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreadmillDesign {
    /// Tread width, m.
    pub w: f64,
    /// Length exposed to the fluid, m.
    pub l: f64,
    /// Tread thickness, m.
    pub h: f64,
    /// Young's modulus, Pa.
    pub e: f64,
    /// Bearing radius, m.
    pub r: f64,
    pub count: usize,
    /// Total tread and bearing sliding area, m².
    pub sliding_area: f64,
}

impl Default for TreadmillDesign {
    fn default() -> Self {
        TreadmillDesign {
            w: 100e-9,
            l: 1e-6,
            h: 1e-9,
            e: 1000e9,
            r: 50e-9,
            count: 50,
            sliding_area: REFERENCE_SLIDING_AREA,
        }
    }
}

impl TreadmillDesign {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("W", self.w), ("L", self.l), ("h", self.h), ("E", self.e), ("r", self.r), ("sliding_area", self.sliding_area)] {
            ensure_positive(name, v)?;
        }
        if self.h >= self.r {
            return Err(Error::param("h", "tread must be thinner than the bearing radius"));
        }
        if self.count == 0 {
            return Err(Error::param("count", "need at least one treadmill"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreadmillRecord {
    /// Bearing rotation rate, Hz.
    pub rotation_frequency: f64,
    /// Bearing angular velocity, rad/s.
    pub angular_velocity: f64,
    pub bend_strain: f64,
    /// Pa.
    pub bend_stress: f64,
    /// Fluid drag on one tread, N.
    pub drag_force: f64,
    /// Pa.
    pub tension: f64,
}

impl TreadmillRecord {
    pub fn tension_ok(&self, failure_strength: f64) -> bool {
        self.tension < failure_strength
    }
}

pub fn treadmill_analysis(design: &TreadmillDesign, eta: f64, v: f64, d: f64) -> Result<TreadmillRecord> {
    design.validate()?;
    ensure_positive("eta", eta)?;
    ensure_non_negative("v", v)?;
    ensure_positive("d", d)?;
    let drag = eta * (v / d) * design.l * design.w;
    Ok(TreadmillRecord {
        rotation_frequency: v / (2.0 * PI * design.r),
        angular_velocity: v / design.r,
        bend_strain: design.h / design.r,
        bend_stress: design.e * design.h / design.r,
        drag_force: drag,
        tension: drag / (design.h * design.w),
    })
}

/// Centrifugal stress scale ρv² on a rim.
pub fn wheel_rim_stress(rho: f64, v: f64) -> Result<f64> {
    ensure_non_negative("rho", rho)?;
    ensure_non_negative("v", v)?;
    Ok(rho * v * v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RodArrayDesign {
    pub rod_radius: f64,
    pub rod_length: f64,
    pub rod_count: usize,
    /// m².
    pub sliding_area: f64,
    pub max_displacement: f64,
    /// Actuation spacing on the surface, m.
    pub spacing: f64,
}

impl RodArrayDesign {
    pub fn recomputed_area(&self) -> f64 {
        self.rod_count as f64 * 2.0 * PI * self.rod_radius * self.rod_length
    }
}

pub fn rod_array_for_modes(n_max: usize, a: f64, rod_radius: f64, max_disp: f64) -> Result<RodArrayDesign> {
    if n_max < 2 {
        return Err(Error::param("n_max", format!("highest mode must be at least 2, got {n_max}")));
    }
    ensure_positive("a", a)?;
    ensure_positive("rod_radius", rod_radius)?;
    ensure_positive("max_disp", max_disp)?;
    let spacing = PI * a / n_max as f64;
    let rod_count = (4.0 * PI * a * a / (spacing * spacing)).round() as usize;
    let rod_length = 5.0 * max_disp;
    let mut design = RodArrayDesign { rod_radius, rod_length, rod_count, sliding_area: 0.0, max_displacement: max_disp, spacing };
    design.sliding_area = design.recomputed_area();
    Ok(design)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiezoRequirement {
    pub voltage: f64,
    /// V/m across a slab as thick as the robot radius.
    pub field: f64,
}

pub fn piezo_requirements(epsilon: f64, a: f64, d_per_volt: f64) -> Result<PiezoRequirement> {
    ensure_non_negative("epsilon", epsilon)?;
    ensure_positive("a", a)?;
    ensure_positive("d_per_volt", d_per_volt)?;
    let voltage = a * epsilon / d_per_volt;
    Ok(PiezoRequirement { voltage, field: voltage / a })
}

/// Treadmill friction for a band of area `band_area` at tread speed `v`.
pub fn treadmill_internal_power(model: &FrictionModel, band_area: f64, v: f64) -> Result<f64> {
    sliding_friction_power(model, treadmill_area_ratio() * band_area, v)
}

/// Upper-bound rod friction with every rod at the peak surface speed.
pub fn rod_internal_power(model: &FrictionModel, rods: &RodArrayDesign, peak_speed: f64) -> Result<f64> {
    let m = FrictionModel { duty: Duty::Sinusoidal, ..*model };
    sliding_friction_power(&m, rods.sliding_area, peak_speed)
}

/// Rod array sized for the reference oscillation spectrum on a 1 µm sphere.
pub fn reference_rod_array(n_max: usize, a: f64) -> Result<RodArrayDesign> {
    rod_array_for_modes(n_max, a, 50e-9, 50e-9)
}

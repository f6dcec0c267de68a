//! SI physical quantities, the two reference fluid scenarios and the
//! externally dragged sphere that every propulsion method is measured against.
//!
//! Everything in this crate is stored in SI base units. Conversions to
//! µm, pN or pW happen only when printing.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Boltzmann constant, J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;

pub const MICRON: f64 = 1e-6;
pub const NANOMETER: f64 = 1e-9;
pub const PICONEWTON: f64 = 1e-12;
pub const PICOWATT: f64 = 1e-12;

/// The two reference scenarios: water-like fluid at 100 µm/s and a fluid
/// 10⁴ times more viscous at 1 µm/s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Low,
    High,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::Low, Preset::High];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Low => "low",
            Preset::High => "high",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "low" => Ok(Preset::Low),
            "high" => Ok(Preset::High),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fluid and robot parameters for one operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    /// Speed of sound, m/s.
    pub c: f64,
    /// Fluid density, kg/m³.
    pub rho: f64,
    /// Temperature, K.
    pub t_body: f64,
    /// Dynamic viscosity, Pa·s.
    pub eta: f64,
    /// Kinematic viscosity, m²/s. Always `eta / rho`.
    pub nu: f64,
    /// Robot radius, m.
    pub a: f64,
    /// Target locomotion speed, m/s.
    pub u: f64,
}

/// Explicit scenario fields; `nu` is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioFields {
    pub c: f64,
    pub rho: f64,
    pub t_body: f64,
    pub eta: f64,
    pub a: f64,
    pub u: f64,
}

impl Scenario {
    pub fn new(name: impl Into<String>, fields: ScenarioFields) -> Result<Self> {
        ensure_positive("c", fields.c)?;
        ensure_positive("rho", fields.rho)?;
        ensure_positive("T_body", fields.t_body)?;
        ensure_positive("eta", fields.eta)?;
        ensure_positive("a", fields.a)?;
        ensure_positive("U", fields.u)?;
        Ok(Scenario {
            name: name.into(),
            c: fields.c,
            rho: fields.rho,
            t_body: fields.t_body,
            eta: fields.eta,
            nu: fields.eta / fields.rho,
            a: fields.a,
            u: fields.u,
        })
    }

    pub fn preset(preset: Preset) -> Self {
        let (eta, u) = match preset {
            Preset::Low => (1e-3, 100e-6),
            Preset::High => (10.0, 1e-6),
        };
        let fields = ScenarioFields {
            c: 1500.0,
            rho: 1000.0,
            t_body: 310.0,
            eta,
            a: 1e-6,
            u,
        };
        Scenario::new(preset.name(), fields).expect("preset values are positive")
    }

    pub fn low() -> Self {
        Scenario::preset(Preset::Low)
    }

    pub fn high() -> Self {
        Scenario::preset(Preset::High)
    }

    pub fn fields(&self) -> ScenarioFields {
        ScenarioFields {
            c: self.c,
            rho: self.rho,
            t_body: self.t_body,
            eta: self.eta,
            a: self.a,
            u: self.u,
        }
    }

    /// Copy with a different viscosity (density held fixed).
    pub fn with_viscosity(&self, eta: f64) -> Result<Self> {
        Scenario::new(self.name.clone(), ScenarioFields { eta, ..self.fields() })
    }

    /// Copy with a different target speed.
    pub fn with_speed(&self, u: f64) -> Result<Self> {
        Scenario::new(self.name.clone(), ScenarioFields { u, ..self.fields() })
    }

    pub fn reynolds(&self) -> f64 {
        self.a * self.u / self.nu
    }

    pub fn drag_force(&self) -> f64 {
        6.0 * PI * self.eta * self.a * self.u
    }

    pub fn drag_power(&self) -> f64 {
        self.drag_force() * self.u
    }

    /// Parse a `key = value` scenario file. `preset = low|high` selects the
    /// base values (default `low`); any other key overrides one field.
    /// Keys: name, c, rho, T_body, eta, nu, a, U. Blank lines and `#`
    /// comments are ignored.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim().to_string();
            if entries.contains_key(&key) {
                return Err(Error::Config {
                    line: line_no,
                    reason: format!("duplicate key `{key}`"),
                });
            }
            entries.insert(key, (line_no, value.trim().to_string()));
        }

        let base = match entries.remove("preset") {
            Some((line, v)) => v.parse::<Preset>().map_err(|e| Error::Config {
                line,
                reason: e.to_string(),
            })?,
            None => Preset::Low,
        };
        let mut scenario = Scenario::preset(base);
        let mut fields = scenario.fields();
        let mut nu_override = None;

        for (key, (line, value)) in &entries {
            let number = || {
                value.parse::<f64>().map_err(|_| Error::Config {
                    line: *line,
                    reason: format!("`{key}` expects a number in SI units, got `{value}`"),
                })
            };
            match key.as_str() {
                "name" => scenario.name = value.clone(),
                "c" => fields.c = number()?,
                "rho" => fields.rho = number()?,
                "T_body" => fields.t_body = number()?,
                "eta" => fields.eta = number()?,
                "nu" => nu_override = Some((*line, number()?)),
                "a" => fields.a = number()?,
                "U" => fields.u = number()?,
                other => {
                    return Err(Error::Config {
                        line: *line,
                        reason: format!(
                            "unknown key `{other}` (valid: preset, name, c, rho, T_body, eta, nu, a, U)"
                        ),
                    })
                }
            }
        }

        if let Some((line, nu)) = nu_override {
            if entries.contains_key("rho") {
                let implied = fields.eta / fields.rho;
                if ((nu - implied) / implied).abs() > 1e-12 {
                    return Err(Error::Config {
                        line,
                        reason: format!("nu = {nu:e} contradicts eta/rho = {implied:e}"),
                    });
                }
            } else if nu > 0.0 {
                fields.rho = fields.eta / nu;
            } else {
                return Err(Error::Config {
                    line,
                    reason: "nu must be positive".into(),
                });
            }
        }

        let name = scenario.name.clone();
        Scenario::new(name, fields).map_err(|e| Error::Config {
            line: 0,
            reason: e.to_string(),
        })
    }
}

/// Scenario source: a named preset or explicit field values.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioSpec {
    Preset(Preset),
    Explicit { name: String, fields: ScenarioFields },
}

pub fn make_scenario(spec: &ScenarioSpec) -> Result<Scenario> {
    match spec {
        ScenarioSpec::Preset(p) => Ok(Scenario::preset(*p)),
        ScenarioSpec::Explicit { name, fields } => Scenario::new(name.clone(), *fields),
    }
}

/// Resolve a preset by name, listing the valid names on failure.
pub fn scenario_by_name(name: &str) -> Result<Scenario> {
    Ok(Scenario::preset(name.parse()?))
}

/// Stokes drag on a sphere of radius `a` moving at `u`: 6πηaU.
pub fn stokes_drag(a: f64, eta: f64, u: f64) -> Result<f64> {
    ensure_positive("a", a)?;
    ensure_positive("eta", eta)?;
    ensure_non_negative("U", u)?;
    Ok(6.0 * PI * eta * a * u)
}

/// Power to drag the sphere: force times speed.
pub fn drag_power(a: f64, eta: f64, u: f64) -> Result<f64> {
    Ok(stokes_drag(a, eta, u)? * u)
}

pub fn reynolds(a: f64, u: f64, nu: f64) -> Result<f64> {
    ensure_positive("a", a)?;
    ensure_positive("nu", nu)?;
    ensure_non_negative("U", u)?;
    Ok(a * u / nu)
}

/// Speed, power and force figures for one design operating in one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerformanceRecord {
    /// Locomotion speed, m/s.
    pub speed: f64,
    /// Power dissipated in the fluid, W.
    pub propel_power: f64,
    /// Power dissipated inside the robot, W.
    pub internal_power: f64,
    /// Drag power at `speed` divided by `propel_power`.
    pub efficiency: f64,
    /// Thrust, N: the force that would stall the robot.
    pub thrust: f64,
}

impl PerformanceRecord {
    /// Build a record from speed and fluid power; efficiency and thrust follow
    /// from the Stokes drag at the same speed.
    pub fn from_speed_power(a: f64, eta: f64, speed: f64, propel_power: f64) -> Result<Self> {
        ensure_non_negative("propel_power", propel_power)?;
        let thrust = stokes_drag(a, eta, speed.abs())?;
        let efficiency = if propel_power > 0.0 {
            thrust * speed.abs() / propel_power
        } else {
            0.0
        };
        Ok(PerformanceRecord {
            speed,
            propel_power,
            internal_power: 0.0,
            efficiency,
            thrust,
        })
    }

    pub fn total_power(&self) -> f64 {
        self.propel_power + self.internal_power
    }

    pub fn with_internal_power(mut self, internal_power: f64) -> Self {
        self.internal_power = internal_power;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn drag_examples() {
        let f = stokes_drag(1e-6, 1e-3, 100e-6).unwrap();
        assert_relative_eq!(f, 1.884_955_592e-12, max_relative = 1e-9);
        let f = stokes_drag(1e-6, 10.0, 1e-6).unwrap();
        assert_relative_eq!(f, 188.4955592e-12, max_relative = 1e-9);
        assert_eq!(stokes_drag(1e-6, 1e-3, 0.0).unwrap(), 0.0);
        assert!(stokes_drag(0.0, 1e-3, 1.0).is_err());
        assert!(stokes_drag(1e-6, -1.0, 1.0).is_err());
    }

    #[test]
    fn drag_power_both_presets() {
        for p in Preset::ALL {
            let s = Scenario::preset(p);
            assert_relative_eq!(s.drag_power(), 1.884_955_592e-16, max_relative = 1e-9);
            // paper quotes 2e-4 pW
            assert!((s.drag_power() / (2e-4 * PICOWATT) - 1.0).abs() < 0.06);
        }
    }

    #[test]
    fn reynolds_examples() {
        let low = Scenario::low();
        assert_relative_eq!(reynolds(low.a, low.u, low.nu).unwrap(), 1e-4, max_relative = 1e-12);
        let high = Scenario::high();
        assert_relative_eq!(reynolds(high.a, high.u, high.nu).unwrap(), 1e-10, max_relative = 1e-12);
        assert_eq!(reynolds(1e-6, 0.0, 1e-6).unwrap(), 0.0);
        assert!(reynolds(1e-6, 1.0, 0.0).is_err());
    }

    #[test]
    fn presets_match_reference_values() {
        let low = make_scenario(&ScenarioSpec::Preset(Preset::Low)).unwrap();
        assert_eq!(low.eta, 1e-3);
        assert_eq!(low.nu, 1e-6);
        assert_eq!(low.u, 100e-6);
        assert_eq!(low.a, 1e-6);
        assert_eq!(low.t_body, 310.0);
        let high = Scenario::high();
        assert_eq!(high.eta, 10.0);
        assert_eq!(high.nu, 1e-2);
        assert_eq!(high.u, 1e-6);
    }

    #[test]
    fn explicit_scenario_derives_nu() {
        let s = make_scenario(&ScenarioSpec::Explicit {
            name: "x".into(),
            fields: ScenarioFields {
                c: 1500.0,
                rho: 1000.0,
                t_body: 300.0,
                eta: 1e-3,
                a: 2e-6,
                u: 1e-5,
            },
        })
        .unwrap();
        assert_eq!(s.nu, 1e-6);
    }

    #[test]
    fn unknown_preset_lists_valid_names() {
        let err = scenario_by_name("medium").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("low") && msg.contains("high"), "{msg}");
    }

    #[test]
    fn config_file_overrides_preset() {
        let s = Scenario::from_config_str("preset = high\n# comment\nU = 2e-6\nname = thick\n").unwrap();
        assert_eq!(s.eta, 10.0);
        assert_eq!(s.u, 2e-6);
        assert_eq!(s.name, "thick");
        let s = Scenario::from_config_str("eta = 2e-3\nnu = 2e-6").unwrap();
        assert_relative_eq!(s.rho, 1000.0, max_relative = 1e-12);
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        match Scenario::from_config_str("eta = 1e-3\nspeed = 3\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match Scenario::from_config_str("\n\neta = fast") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Scenario::from_config_str("rho = 1000\neta=1e-3\nnu = 5").is_err());
    }

    proptest! {
        #[test]
        fn drag_is_linear_in_each_argument(
            a in 1e-8f64..1e-4, eta in 1e-4f64..1e2, u in 1e-8f64..1e-2, k in 0.1f64..10.0
        ) {
            let f = stokes_drag(a, eta, u).unwrap();
            prop_assert!((stokes_drag(k * a, eta, u).unwrap() / (k * f) - 1.0).abs() < 1e-12);
            prop_assert!((stokes_drag(a, k * eta, u).unwrap() / (k * f) - 1.0).abs() < 1e-12);
            prop_assert!((stokes_drag(a, eta, k * u).unwrap() / (k * f) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn nu_is_exactly_eta_over_rho(eta in 1e-4f64..1e2, rho in 500.0f64..2000.0) {
            let s = Scenario::new("p", ScenarioFields { eta, rho, ..Scenario::low().fields() }).unwrap();
            prop_assert_eq!(s.nu, eta / rho);
        }
    }
}

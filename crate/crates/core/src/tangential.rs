//! Sphere propelled by steady tangential motion of its own surface.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, Error, Result};
use crate::numerics::GaussLegendre;
use crate::quantities::{PerformanceRecord, Scenario};

type Evaluator = dyn Fn(f64, f64) -> (f64, f64) + Send + Sync;

/// Tangential surface velocity u(θ, φ) given as (u_θ, u_φ) in m/s.
#[derive(Clone)]
pub struct SurfaceVelocityField {
    eval: Arc<Evaluator>,
    pub axisymmetric: bool,
    /// Polar angles where the field may jump; quadrature splits there.
    pub theta_breaks: Vec<f64>,
}

impl fmt::Debug for SurfaceVelocityField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceVelocityField")
            .field("axisymmetric", &self.axisymmetric)
            .field("theta_breaks", &self.theta_breaks)
            .finish()
    }
}

impl SurfaceVelocityField {
    pub fn new(
        axisymmetric: bool,
        theta_breaks: Vec<f64>,
        eval: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        SurfaceVelocityField {
            eval: Arc::new(eval),
            axisymmetric,
            theta_breaks,
        }
    }

    /// Axisymmetric meridional field u_θ = f(θ).
    pub fn meridional(theta_breaks: Vec<f64>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        SurfaceVelocityField::new(true, theta_breaks, move |th, _| (f(th), 0.0))
    }

    /// u_θ = v sin θ.
    pub fn sin_theta(v: f64) -> Self {
        SurfaceVelocityField::meridional(Vec::new(), move |th| v * th.sin())
    }

    pub fn zero() -> Self {
        SurfaceVelocityField::new(true, Vec::new(), |_, _| (0.0, 0.0))
    }

    pub fn eval(&self, theta: f64, phi: f64) -> (f64, f64) {
        (self.eval)(theta, phi)
    }

    /// Cartesian vector at (θ, φ). The radial component is zero by construction.
    pub fn cartesian(&self, theta: f64, phi: f64) -> [f64; 3] {
        let (ut, up) = self.eval(theta, phi);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        [ut * ct * cp - up * sp, ut * ct * sp + up * cp, -ut * st]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandProfile {
    /// u = v θ̂ inside the band.
    ConstantMeridional,
    /// u = v cos φ θ̂ inside the band; turns the sphere instead of translating it.
    CosPhiRotation,
}

/// Surface motion confined to an equatorial band of angular width γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandActuation {
    pub gamma: f64,
    pub v: f64,
    pub profile: BandProfile,
}

impl BandActuation {
    pub fn new(gamma: f64, v: f64, profile: BandProfile) -> Result<Self> {
        check_gamma(gamma)?;
        ensure_non_negative("v", v)?;
        Ok(BandActuation { gamma, v, profile })
    }

    pub fn meridional(gamma: f64, v: f64) -> Result<Self> {
        BandActuation::new(gamma, v, BandProfile::ConstantMeridional)
    }

    /// Polar angle of the band's upper edge, (π − γ)/2.
    pub fn psi(&self) -> f64 {
        0.5 * (PI - self.gamma)
    }

    pub fn contains(&self, theta: f64) -> bool {
        let psi = self.psi();
        theta >= psi && theta <= PI - psi
    }

    pub fn field(&self) -> SurfaceVelocityField {
        let band = *self;
        let psi = self.psi();
        let breaks = vec![psi, PI - psi];
        match self.profile {
            BandProfile::ConstantMeridional => SurfaceVelocityField::meridional(breaks, move |th| {
                if band.contains(th) {
                    band.v
                } else {
                    0.0
                }
            }),
            BandProfile::CosPhiRotation => SurfaceVelocityField::new(false, breaks, move |th, phi| {
                if band.contains(th) {
                    (band.v * phi.cos(), 0.0)
                } else {
                    (0.0, 0.0)
                }
            }),
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 0.0 && gamma <= PI {
        Ok(())
    } else {
        Err(Error::param("gamma", format!("band width must lie in (0, π], got {gamma}")))
    }
}

/// Surface-integral settings: Gauss–Legendre in θ per piece, trapezoid in φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceQuadrature {
    pub theta_nodes: usize,
    pub phi_nodes: usize,
    pub rel_tol: f64,
}

impl Default for SurfaceQuadrature {
    fn default() -> Self {
        SurfaceQuadrature {
            theta_nodes: 64,
            phi_nodes: 128,
            rel_tol: 1e-10,
        }
    }
}

impl SurfaceQuadrature {
    /// ∮ g(θ, φ) dΩ over the unit sphere for a vector-valued integrand.
    /// Also returns ∮|g| as the magnitude scale for error control.
    fn integrate<const N: usize>(
        &self,
        field: &SurfaceVelocityField,
        scalar: bool,
        g: &impl Fn(f64, f64) -> [f64; N],
    ) -> ([f64; N], f64) {
        let rule = GaussLegendre::new(self.theta_nodes);
        let mut ts = vec![0.0, PI];
        ts.extend(field.theta_breaks.iter().copied().filter(|t| *t > 0.0 && *t < PI));
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        // a scalar integrand of an axisymmetric field needs one azimuth only
        let phis: Vec<f64> = if field.axisymmetric && scalar {
            vec![0.0]
        } else {
            (0..self.phi_nodes).map(|j| 2.0 * PI * j as f64 / self.phi_nodes as f64).collect()
        };
        let dphi = 2.0 * PI / phis.len() as f64;
        let mut acc = [0.0; N];
        let mut mag = 0.0;
        for w in ts.windows(2) {
            for (th, wt) in rule.mapped(w[0], w[1]) {
                let wx = wt * th.sin();
                for &phi in &phis {
                    let v = g(th, phi);
                    for k in 0..N {
                        acc[k] += wx * dphi * v[k];
                        mag += wx * dphi * v[k].abs();
                    }
                }
            }
        }
        (acc, mag)
    }

    /// Integrate, then repeat with doubled resolution and compare.
    fn converged<const N: usize>(
        &self,
        field: &SurfaceVelocityField,
        scalar: bool,
        g: impl Fn(f64, f64) -> [f64; N],
    ) -> Result<[f64; N]> {
        let (coarse, _) = self.integrate(field, scalar, &g);
        let fine_q = SurfaceQuadrature {
            theta_nodes: 2 * self.theta_nodes,
            phi_nodes: 2 * self.phi_nodes,
            ..*self
        };
        let (fine, scale) = fine_q.integrate(field, scalar, &g);
        let change = coarse
            .iter()
            .zip(&fine)
            .map(|(c, f)| (c - f).abs())
            .fold(0.0, f64::max);
        if change > self.rel_tol * scale {
            return Err(Error::numerical(
                "sphere_tangential",
                format!("surface quadrature changed by {:.3e} relative on refinement", change / scale),
            ));
        }
        Ok(fine)
    }
}

/// Swimming velocity U = −(1/4πa²)∮u dS, body frame with +z the propulsion axis.
pub fn locomotion_velocity(field: &SurfaceVelocityField, a: f64) -> Result<[f64; 3]> {
    locomotion_velocity_with(field, a, &SurfaceQuadrature::default())
}

pub fn locomotion_velocity_with(field: &SurfaceVelocityField, _a: f64, q: &SurfaceQuadrature) -> Result<[f64; 3]> {
    let s = q.converged(field, false, |th, phi| field.cartesian(th, phi))?;
    Ok(s.map(|v| -v / (4.0 * PI)))
}

/// Rotation rate Ω = −(3/8πa³)∮ n×u dS.
pub fn angular_velocity(field: &SurfaceVelocityField, a: f64) -> Result<[f64; 3]> {
    let q = SurfaceQuadrature::default();
    let s = q.converged(field, false, |th, phi| {
        let (ut, up) = field.eval(th, phi);
        // n × θ̂ = φ̂, n × φ̂ = −θ̂
        let (st, ct) = th.sin_cos();
        let (sp, cp) = phi.sin_cos();
        [
            -ut * sp - up * ct * cp,
            ut * cp - up * ct * sp,
            up * st,
        ]
    })?;
    Ok(s.map(|v| -3.0 * v / (8.0 * PI * a)))
}

/// Power (2η/a)∮|u|² dS for axisymmetric tangential fields.
pub fn propulsion_power(field: &SurfaceVelocityField, a: f64, eta: f64) -> Result<f64> {
    if !field.axisymmetric {
        return Err(Error::Unsupported(
            "surface power formula holds for axisymmetric fields only; solve non-axisymmetric motion with the boundary-element solver".into(),
        ));
    }
    let q = SurfaceQuadrature::default();
    let [s] = q.converged(field, true, |th, phi| {
        let (ut, up) = field.eval(th, phi);
        [ut * ut + up * up]
    })?;
    Ok(2.0 * eta * a * s)
}

/// Hydrodynamic efficiency 6πηaU²/P of a tangential field, by quadrature.
pub fn field_efficiency(field: &SurfaceVelocityField) -> Result<f64> {
    let u = locomotion_velocity(field, 1.0)?;
    let speed = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    let p = propulsion_power(field, 1.0, 1.0)?;
    Ok(if p > 0.0 { 6.0 * PI * speed * speed / p } else { 0.0 })
}

pub fn band_speed(gamma: f64, v: f64) -> f64 {
    0.25 * v * (gamma + gamma.sin())
}

pub fn band_power(gamma: f64, v: f64, a: f64, eta: f64) -> f64 {
    8.0 * PI * a * eta * v * v * (0.5 * gamma).sin()
}

pub fn band_efficiency(gamma: f64) -> f64 {
    let g = gamma + gamma.sin();
    3.0 / 64.0 * g * g / (0.5 * gamma).sin()
}

/// Rotation rate magnitude of a cos φ band, (3/4)(v/a)sin(γ/2).
pub fn band_rotation_rate(gamma: f64, v: f64, a: f64) -> f64 {
    0.75 * v / a * (0.5 * gamma).sin()
}

/// Closed-form performance of a meridional band in a scenario.
pub fn band_performance(band: &BandActuation, scenario: &Scenario) -> Result<PerformanceRecord> {
    check_gamma(band.gamma)?;
    if band.profile != BandProfile::ConstantMeridional {
        return Err(Error::Unsupported("band_performance needs a constant meridional profile".into()));
    }
    let u = band_speed(band.gamma, band.v);
    let p = band_power(band.gamma, band.v, scenario.a, scenario.eta);
    PerformanceRecord::from_speed_power(scenario.a, scenario.eta, u, p)
}

/// The same record from surface quadrature instead of closed forms.
pub fn band_performance_quadrature(band: &BandActuation, scenario: &Scenario) -> Result<PerformanceRecord> {
    check_gamma(band.gamma)?;
    let field = band.field();
    let u = locomotion_velocity(&field, scenario.a)?[2];
    let p = propulsion_power(&field, scenario.a, scenario.eta)?;
    PerformanceRecord::from_speed_power(scenario.a, scenario.eta, u, p)
}

/// Band speed v giving swimming speed `u_target`.
pub fn required_band_speed(u_target: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    ensure_non_negative("U_target", u_target)?;
    Ok(4.0 * u_target / (gamma + gamma.sin()))
}

/// Time for a turn through `angle` at rotation rate `omega`.
pub fn turn_time(angle: f64, omega: f64) -> Result<f64> {
    crate::error::ensure_positive("omega", omega)?;
    Ok(angle / omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantities::{PICOWATT, PICONEWTON};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const DEG60: f64 = PI / 3.0;

    #[test]
    fn sin_theta_field() {
        let f = SurfaceVelocityField::sin_theta(3.0);
        let u = locomotion_velocity(&f, 1e-6).unwrap();
        assert_relative_eq!(u[2], 2.0, max_relative = 1e-12);
        assert!(u[0].abs() < 1e-12 && u[1].abs() < 1e-12);
        assert_relative_eq!(field_efficiency(&f).unwrap(), 0.5, max_relative = 1e-10);
    }

    #[test]
    fn table2_band() {
        let low = Scenario::low();
        let band = BandActuation::meridional(DEG60, 210e-6).unwrap();
        let rec = band_performance(&band, &low).unwrap();
        assert!((rec.speed / 100e-6 - 1.0).abs() < 0.01);
        assert!((rec.propel_power / (0.00055 * PICOWATT) - 1.0).abs() < 0.01);
        assert!((rec.efficiency - 0.34).abs() < 0.005);
        assert!((rec.thrust / (1.9 * PICONEWTON) - 1.0).abs() < 0.01);
        let high = Scenario::high();
        let band = BandActuation::meridional(DEG60, 2.1e-6).unwrap();
        let rec = band_performance(&band, &high).unwrap();
        assert!((rec.speed / 1e-6 - 1.0).abs() < 0.01);
        assert!((rec.propel_power / (0.00055 * PICOWATT) - 1.0).abs() < 0.01);
        assert!((rec.thrust / (190.0 * PICONEWTON) - 1.0).abs() < 0.01);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let low = Scenario::low();
        for &g in &[0.2, DEG60, 2.0, PI] {
            let band = BandActuation::meridional(g, 210e-6).unwrap();
            let a = band_performance(&band, &low).unwrap();
            let b = band_performance_quadrature(&band, &low).unwrap();
            assert_relative_eq!(a.speed, b.speed, max_relative = 1e-6);
            assert_relative_eq!(a.propel_power, b.propel_power, max_relative = 1e-6);
            assert_relative_eq!(a.efficiency, b.efficiency, max_relative = 1e-6);
        }
        assert_relative_eq!(band_efficiency(PI), 3.0 / 64.0 * PI * PI, max_relative = 1e-12);
        assert!((band_efficiency(PI) - 0.4628).abs() < 1e-3);
    }

    #[test]
    fn zero_field() {
        let f = SurfaceVelocityField::zero();
        assert_eq!(locomotion_velocity(&f, 1e-6).unwrap(), [0.0; 3]);
        assert_eq!(propulsion_power(&f, 1e-6, 1e-3).unwrap(), 0.0);
        assert_eq!(angular_velocity(&f, 1e-6).unwrap(), [0.0; 3]);
    }

    #[test]
    fn table3_rotation() {
        let band = BandActuation::new(DEG60, 267e-6, BandProfile::CosPhiRotation).unwrap();
        let w = angular_velocity(&band.field(), 1e-6).unwrap();
        assert!(w[0].abs() < 1e-9 && w[2].abs() < 1e-9);
        assert!(w[1] < 0.0);
        assert!((w[1].abs() - 100.0).abs() < 1.0);
        assert_relative_eq!(w[1].abs(), band_rotation_rate(DEG60, 267e-6, 1e-6), max_relative = 1e-9);
        let u = locomotion_velocity(&band.field(), 1e-6).unwrap();
        assert!(u.iter().all(|c| c.abs() < 1e-12));
        let t = turn_time(PI / 2.0, 100.0).unwrap();
        assert_relative_eq!(t, 0.0157, max_relative = 0.01);
    }

    #[test]
    fn axisymmetric_fields_do_not_rotate() {
        let band = BandActuation::meridional(1.1, 50e-6).unwrap();
        let w = angular_velocity(&band.field(), 1e-6).unwrap();
        assert!(w.iter().all(|c| c.abs() < 1e-9));
    }

    #[test]
    fn power_rejects_non_axisymmetric() {
        let band = BandActuation::new(DEG60, 1.0, BandProfile::CosPhiRotation).unwrap();
        assert!(matches!(propulsion_power(&band.field(), 1.0, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn required_speed_examples() {
        let v = required_band_speed(100e-6, DEG60).unwrap();
        assert_relative_eq!(v, 209.1e-6, max_relative = 2e-4);
        assert_eq!(required_band_speed(0.0, DEG60).unwrap(), 0.0);
        assert!(required_band_speed(1.0, 0.0).is_err());
        assert!(required_band_speed(1.0, 3.2).is_err());
        assert!(BandActuation::meridional(-0.1, 1.0).is_err());
    }

    fn random_field(coefs: Vec<f64>, gamma: f64) -> SurfaceVelocityField {
        let psi = 0.5 * (PI - gamma);
        SurfaceVelocityField::meridional(vec![psi, PI - psi], move |th| {
            if th < psi || th > PI - psi {
                return 0.0;
            }
            coefs.iter().enumerate().map(|(k, c)| c * (k as f64 * th).cos()).sum::<f64>()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn efficiency_never_exceeds_half(
            coefs in proptest::collection::vec(-1.0f64..1.0, 1..5),
            gamma in 0.1f64..PI,
        ) {
            let f = random_field(coefs, gamma);
            let e = field_efficiency(&f).unwrap();
            prop_assert!(e <= 0.5 + 1e-9, "efficiency {}", e);
        }

        #[test]
        fn round_trip_band_speed(u in 0.0f64..1e-3, gamma in 0.01f64..PI) {
            let v = required_band_speed(u, gamma).unwrap();
            let band = BandActuation::meridional(gamma, v).unwrap();
            let rec = band_performance(&band, &Scenario::low()).unwrap();
            prop_assert!((rec.speed - u).abs() <= 1e-12 * u.max(1e-30));
        }

        #[test]
        fn scaling_in_v_and_eta(v in 1e-6f64..1e-3, k in 0.1f64..10.0, eta in 1e-3f64..10.0, gamma in 0.1f64..PI) {
            let f1 = BandActuation::meridional(gamma, v).unwrap().field();
            let f2 = BandActuation::meridional(gamma, k * v).unwrap().field();
            let u1 = locomotion_velocity(&f1, 1e-6).unwrap()[2];
            let u2 = locomotion_velocity(&f2, 1e-6).unwrap()[2];
            prop_assert!((u2 / (k * u1) - 1.0).abs() < 1e-10);
            let p1 = propulsion_power(&f1, 1e-6, eta).unwrap();
            let p2 = propulsion_power(&f2, 1e-6, eta).unwrap();
            prop_assert!((p2 / (k * k * p1) - 1.0).abs() < 1e-10);
            let p3 = propulsion_power(&f1, 1e-6, k * eta).unwrap();
            prop_assert!((p3 / (k * p1) - 1.0).abs() < 1e-10);
            let r1 = angular_velocity(&BandActuation::new(gamma, v, BandProfile::CosPhiRotation).unwrap().field(), 1e-6).unwrap()[1];
            let r2 = angular_velocity(&BandActuation::new(gamma, k * v, BandProfile::CosPhiRotation).unwrap().field(), 1e-6).unwrap()[1];
            prop_assert!((r2 / (k * r1) - 1.0).abs() < 1e-10);
        }

        #[test]
        fn axisymmetric_output_independent_of_phi(th in 0.0f64..PI, p1 in 0.0f64..6.28, p2 in 0.0f64..6.28) {
            let f = BandActuation::meridional(1.0, 2.0).unwrap().field();
            prop_assert_eq!(f.eval(th, p1), f.eval(th, p2));
        }
    }
}

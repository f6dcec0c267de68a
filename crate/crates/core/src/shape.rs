//! Spheroid designs under fixed non-propulsion volume and area.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actuators::{treadmill_internal_power, FrictionModel};
use crate::bem::mesh::SpheroidShape;
use crate::bem::solver::{solve_swim, SlipProfile, DEFAULT_ELEMENTS};
use crate::brownian::{dead_reckoning_speed, spheroid_orientation_time};
use crate::error::{ensure_positive, Error, Result};
use crate::quantities::Scenario;

/// Tolerance on the active constraints, relative.
pub const CONSTRAINT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConstraints {
    /// m³.
    pub v_np_min: f64,
    /// m².
    pub s_np_min: f64,
    /// Bearing radius; the housing takes depth 2r under the band, m.
    pub r_bearing: f64,
    pub b_min: f64,
}

impl Default for GeometryConstraints {
    /// Values of a 1 µm sphere with half its surface propulsive.
    fn default() -> Self {
        let a: f64 = 1e-6;
        let r_bearing = 50e-9;
        let s_p = 2.0 * PI * a * a;
        GeometryConstraints {
            v_np_min: 4.0 / 3.0 * PI * a.powi(3) - 2.0 * r_bearing * s_p,
            s_np_min: s_p,
            r_bearing,
            b_min: 0.3e-6,
        }
    }
}

impl GeometryConstraints {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("V_np_min", self.v_np_min)?;
        ensure_positive("S_np_min", self.s_np_min)?;
        ensure_positive("r_bearing", self.r_bearing)?;
        ensure_positive("b_min", self.b_min)
    }

    /// Volume margin of a shape once all spare area is propulsive.
    fn volume_slack(&self, shape: &SpheroidShape) -> f64 {
        shape.volume() - 2.0 * self.r_bearing * (shape.area() - self.s_np_min) - self.v_np_min
    }

    /// Radius of the sphere that meets both constraints with equality.
    pub fn sphere_radius(&self) -> Result<f64> {
        self.validate()?;
        let slack = |r: f64| self.volume_slack(&SpheroidShape { a: r, b: r });
        let mut lo = (self.s_np_min / (4.0 * PI)).sqrt();
        let mut hi = lo.max((self.v_np_min * 3.0 / (4.0 * PI)).cbrt()) * 2.0;
        while slack(hi) < 0.0 {
            hi *= 2.0;
        }
        if slack(lo) > 0.0 {
            return Err(Error::Infeasible("non-propulsion volume is met before any area is spare".into()));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if slack(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Ok(hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpheroidGeometry {
    pub v: f64,
    pub s: f64,
}

pub fn spheroid_geometry(shape: &SpheroidShape) -> SpheroidGeometry {
    SpheroidGeometry { v: shape.volume(), s: shape.area() }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedDesign {
    pub shape: SpheroidShape,
    /// Propulsion band area, m².
    pub s_p: f64,
    /// Band runs over generatrix parameters [t1, π − t1].
    pub band_t1: f64,
    /// Tread speed, m/s (zero until solved).
    pub v: f64,
    pub p_propel: f64,
    pub p_internal: f64,
    pub p_total: f64,
}

impl ConstrainedDesign {
    pub fn volume_residual(&self, c: &GeometryConstraints) -> f64 {
        (self.shape.volume() - 2.0 * c.r_bearing * self.s_p) / c.v_np_min - 1.0
    }

    pub fn area_residual(&self, c: &GeometryConstraints) -> f64 {
        (self.shape.area() - self.s_p) / c.s_np_min - 1.0
    }

    pub fn slip(&self) -> SlipProfile {
        SlipProfile::Band { t1: self.band_t1, t2: PI - self.band_t1, v: self.v }
    }
}

/// Shortest spheroid with semi-minor axis `b` whose spare area, all used for
/// propulsion, still leaves the required interior volume.
pub fn constrained_shape(b: f64, c: &GeometryConstraints) -> Result<ConstrainedDesign> {
    c.validate()?;
    ensure_positive("b", b)?;
    if b < c.b_min * (1.0 - 1e-12) {
        return Err(Error::param("b", format!("{b:e} m is below the minimum semi-minor axis {:e} m", c.b_min)));
    }
    let slack = |a: f64| c.volume_slack(&SpheroidShape { a, b });
    let a = if slack(b) >= 0.0 {
        b
    } else {
        let (mut lo, mut hi) = (b, 100.0 * b);
        if slack(hi) < 0.0 {
            return Err(Error::Infeasible(format!("no semi-major axis in [{b:e}, {:e}] m meets the volume constraint", 100.0 * b)));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if slack(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        hi
    };
    let shape = SpheroidShape::new(a, b)?;
    let s_p = (shape.area() - c.s_np_min).max(0.0);
    if s_p <= 0.0 {
        return Err(Error::Infeasible(format!("b = {b:e} m leaves no area for propulsion")));
    }
    let band_t1 = shape.zone_for_area(s_p)?;
    Ok(ConstrainedDesign { shape, s_p, band_t1, v: 0.0, p_propel: 0.0, p_internal: 0.0, p_total: 0.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub elements: usize,
    pub friction: FrictionModel,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { elements: DEFAULT_ELEMENTS, friction: FrictionModel::steady() }
    }
}

/// A design solved for tread speed and power at the target swimming speed.
pub fn solve_design(b: f64, scenario: &Scenario, c: &GeometryConstraints, opts: &SweepOptions) -> Result<ConstrainedDesign> {
    let mut d = constrained_shape(b, c)?;
    let unit = SlipProfile::Band { t1: d.band_t1, t2: PI - d.band_t1, v: 1.0 };
    let sol = solve_swim(&d.shape, &unit, scenario.eta, opts.elements)?;
    if !(sol.rigid_velocity > 0.0) {
        return Err(Error::numerical("shape_tradeoff", format!("band gives no forward speed at b = {b:e} m")));
    }
    // speed and power are linear and quadratic in v
    d.v = scenario.u / sol.rigid_velocity;
    d.p_propel = sol.power * d.v * d.v;
    d.p_internal = treadmill_internal_power(&opts.friction, d.s_p, d.v)?;
    d.p_total = d.p_propel + d.p_internal;
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub design: ConstrainedDesign,
    pub v_rel: f64,
    pub p_propel_rel: f64,
    pub p_internal_rel: f64,
    pub p_total_rel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeSweep {
    pub sphere: ConstrainedDesign,
    pub entries: Vec<SweepEntry>,
}

pub fn shape_sweep(b_range: &[f64], scenario: &Scenario, c: &GeometryConstraints, opts: &SweepOptions) -> Result<ShapeSweep> {
    let sphere = solve_design(c.sphere_radius()?, scenario, c, opts)?;
    let designs: Vec<Result<ConstrainedDesign>> = b_range.par_iter().map(|&b| solve_design(b, scenario, c, opts)).collect();
    let mut entries = Vec::with_capacity(designs.len());
    for d in designs {
        let d = d?;
        entries.push(SweepEntry {
            design: d,
            v_rel: d.v / sphere.v,
            p_propel_rel: d.p_propel / sphere.p_propel,
            p_internal_rel: d.p_internal / sphere.p_internal,
            p_total_rel: d.p_total / sphere.p_total,
        });
    }
    Ok(ShapeSweep { sphere, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrownianShapeEntry {
    pub shape: SpheroidShape,
    pub tau: f64,
    pub u_required: f64,
}

pub fn brownian_shape_sweep(
    b_range: &[f64],
    c: &GeometryConstraints,
    d: f64,
    alpha_rms: f64,
    eta: f64,
    t: f64,
) -> Result<Vec<BrownianShapeEntry>> {
    b_range
        .iter()
        .map(|&b| {
            let design = constrained_shape(b, c)?;
            let tau = spheroid_orientation_time(&design.shape, eta, t)?;
            Ok(BrownianShapeEntry { shape: design.shape, tau, u_required: dead_reckoning_speed(d, tau, alpha_rms)? })
        })
        .collect()
}

/// `n` values from `hi` down to `lo`, evenly spaced.
pub fn b_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![hi];
    }
    (0..n).map(|i| hi - (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_sphere_geometry() {
        let g = spheroid_geometry(&SpheroidShape::sphere(1e-6).unwrap());
        assert!((g.v / 1e-18 - 4.18879).abs() < 1e-5);
        assert!((g.s / 1e-12 - 12.56637).abs() < 1e-5);
        let c = GeometryConstraints::default();
        assert!(((g.v - 2.0 * c.r_bearing * g.s / 2.0) / 1e-18 - 3.5605).abs() < 1e-4);
        assert!((c.v_np_min / 1e-18 - 3.56).abs() < 0.01);
        assert!((c.s_np_min / 1e-12 - 6.28).abs() < 0.01);
    }

    #[test]
    fn area_grows_as_shape_thins_at_fixed_volume() {
        let v = 4.0 / 3.0 * PI;
        let mut last = 0.0;
        for i in 0..40 {
            let b = 1.0 - 0.02 * i as f64;
            let a = v / (4.0 / 3.0 * PI * b * b);
            let s = SpheroidShape::new(a, b).unwrap().area();
            assert!(s > last);
            last = s;
        }
    }

    #[test]
    fn sphere_design() {
        let c = GeometryConstraints::default();
        assert!((c.sphere_radius().unwrap() / 1e-6 - 1.0).abs() < 1e-12);
        let d = constrained_shape(1e-6, &c).unwrap();
        assert!((d.shape.a / 1e-6 - 1.0).abs() < 1e-9);
        assert!((d.s_p / (2.0 * PI * 1e-12) - 1.0).abs() < 1e-6);
        assert!((d.band_t1 - PI / 3.0).abs() < 1e-6);
    }

    #[test]
    fn elongated_design_matches_grid_scan() {
        let c = GeometryConstraints::default();
        let d = constrained_shape(0.5e-6, &c).unwrap();
        assert!(d.shape.a > 1e-6);
        assert!(d.volume_residual(&c).abs() < CONSTRAINT_TOL);
        assert!(d.area_residual(&c).abs() < CONSTRAINT_TOL);
        // dense scan for the first feasible a
        let b = 0.5e-6;
        let first = (0..100_000)
            .map(|i| b + i as f64 * 1e-10)
            .find(|&a| c.volume_slack(&SpheroidShape { a, b }) >= 0.0)
            .unwrap();
        assert!((first - d.shape.a).abs() <= 1e-10, "{first} {}", d.shape.a);
    }

    #[test]
    fn constraints_active_across_range() {
        let c = GeometryConstraints::default();
        for b in b_grid(0.4e-6, 1e-6, 13) {
            let d = constrained_shape(b, &c).unwrap();
            assert!(d.volume_residual(&c).abs() < CONSTRAINT_TOL, "{b}");
            assert!(d.area_residual(&c).abs() < CONSTRAINT_TOL, "{b}");
            assert!((d.shape.zone_area(d.band_t1) / d.s_p - 1.0).abs() < 1e-10);
        }
        assert!(matches!(constrained_shape(0.3e-6, &c), Err(Error::Infeasible(_))));
        assert!(matches!(constrained_shape(0.2e-6, &c), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn sweep_trends() {
        let c = GeometryConstraints::default();
        let opts = SweepOptions { elements: 128, ..Default::default() };
        let s = shape_sweep(&b_grid(0.4e-6, 1e-6, 7), &Scenario::low(), &c, &opts).unwrap();
        let first = &s.entries[0];
        for x in [first.v_rel, first.p_propel_rel, first.p_internal_rel, first.p_total_rel] {
            assert!((x - 1.0).abs() < 1e-6, "{x}");
        }
        for w in s.entries.windows(2) {
            assert!(w[1].p_propel_rel < w[0].p_propel_rel);
        }
        let totals: Vec<f64> = s.entries.iter().map(|e| e.p_total_rel).collect();
        let (imin, _) = totals.iter().enumerate().fold((0, f64::INFINITY), |m, (i, &t)| if t < m.1 { (i, t) } else { m });
        assert!(imin > 0 && imin < totals.len() - 1, "{totals:?}");
        // sphere power against the closed form for a band of the same area
        let sph = &s.sphere;
        let gamma = 2.0 * (sph.s_p / (4.0 * PI * 1e-12)).asin();
        let u = crate::tangential::band_speed(gamma, sph.v);
        assert!((u / 100e-6 - 1.0).abs() < 0.02);
    }

    #[test]
    fn brownian_sweep() {
        let c = GeometryConstraints::default();
        let alpha = 20f64.to_radians();
        let bs = b_grid(0.4e-6, 1e-6, 7);
        let out = brownian_shape_sweep(&bs, &c, 20e-6, alpha, 1e-3, 310.0).unwrap();
        assert!((out[0].u_required / 55.7e-6 - 1.0).abs() < 0.01, "{}", out[0].u_required);
        for w in out.windows(2) {
            assert!(w[1].u_required < w[0].u_required);
        }
        let half = brownian_shape_sweep(&bs, &c, 20e-6, alpha / 2.0, 1e-3, 310.0).unwrap();
        for (x, y) in out.iter().zip(&half) {
            assert!((y.u_required / x.u_required - 4.0).abs() < 1e-12);
        }
    }
}

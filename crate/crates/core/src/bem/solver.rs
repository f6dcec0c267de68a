//! Collocation solver for axisymmetric Stokes flow past a body of revolution.
//!
//! Boundary integral form with n pointing into the fluid and f = σ·n the
//! traction the fluid exerts on the body, x0 on the surface:
//!   (1/4πη) ∫ G·f dS + 2 u_rigid = −2 u_s(x0) + (1/4π) ∫ (u_s − u_s(x0))·T·n dS
//! with u_s the surface velocity relative to the rigid motion.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{ring_double_layer, ring_kernels};
use super::mesh::{BemMesh, Generatrix, SpheroidShape};
use crate::error::{ensure_positive, Error, Result};

/// Default element count.
pub const DEFAULT_ELEMENTS: usize = 256;

/// Tangential surface speed along the generatrix, positive toward the
/// south pole (increasing t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlipProfile {
    /// Speed v between parameters t1 < t2, zero elsewhere.
    Band { t1: f64, t2: f64, v: f64 },
    /// v sin t.
    SinTheta { v: f64 },
    Zero,
}

impl SlipProfile {
    /// Equatorial band of angular width γ on the parameter circle.
    pub fn equatorial_band(gamma: f64, v: f64) -> Self {
        SlipProfile::Band { t1: 0.5 * (PI - gamma), t2: 0.5 * (PI + gamma), v }
    }

    pub fn speed(&self, t: f64) -> f64 {
        match *self {
            SlipProfile::Band { t1, t2, v } => {
                if t > t1 && t < t2 {
                    v
                } else {
                    0.0
                }
            }
            SlipProfile::SinTheta { v } => v * t.sin(),
            SlipProfile::Zero => 0.0,
        }
    }

    pub fn breaks(&self) -> Vec<f64> {
        match *self {
            SlipProfile::Band { t1, t2, .. } => vec![t1, t2],
            _ => Vec::new(),
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        match *self {
            SlipProfile::Band { t1, t2, v } => SlipProfile::Band { t1, t2, v: v * k },
            SlipProfile::SinTheta { v } => SlipProfile::SinTheta { v: v * k },
            SlipProfile::Zero => SlipProfile::Zero,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BemSolution {
    /// (f_ρ, f_z) per element, Pa.
    pub traction: Vec<[f64; 2]>,
    /// Axial translation speed, m/s.
    pub rigid_velocity: f64,
    /// −∮ u·(σ·n) dS, W.
    pub power: f64,
    /// Net axial force, N (zero up to round-off for a swimmer).
    pub axial_force: f64,
}

/// Assembled and factored single-layer system for one surface.
pub struct BemSolver<'c> {
    curve: &'c dyn Generatrix,
    mesh: BemMesh,
    eta: f64,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    areas: Vec<f64>,
    unit_translation: DVector<f64>,
}

impl<'c> BemSolver<'c> {
    pub fn new(curve: &'c dyn Generatrix, mesh: BemMesh, eta: f64) -> Result<Self> {
        ensure_positive("eta", eta)?;
        let n = mesh.len();
        let scale = 1.0 / (4.0 * PI * eta);
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let x0 = mesh.elements[i].mid;
                let mut row = vec![0.0; 4 * n];
                for e in 0..n {
                    for q in mesh.quadrature(curve, e, i) {
                        let k = ring_kernels(x0, q.x, q.normal);
                        for o in 0..2 {
                            for c in 0..2 {
                                row[o * 2 * n + 2 * e + c] += scale * q.weight * k.sl[o][c];
                            }
                        }
                    }
                }
                row
            })
            .collect();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for (i, row) in rows.iter().enumerate() {
            for o in 0..2 {
                for j in 0..2 * n {
                    m[(2 * i + o, j)] = row[o * 2 * n + j];
                }
            }
        }
        let lu = m.lu();
        let diag = lu.u().diagonal();
        let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0f64), |(l, h), d| (l.min(d.abs()), h.max(d.abs())));
        if !(lo > 1e-13 * hi) || !lo.is_finite() {
            return Err(Error::numerical(
                "stokes_bem",
                format!(
                    "singular single-layer matrix (pivot ratio {:.2e}) on mesh of {} elements, arc length {:e} m",
                    lo / hi,
                    n,
                    mesh.arc_length
                ),
            ));
        }
        let areas: Vec<f64> = (0..n).map(|e| mesh.element_integral(curve, e, |_| 1.0)).collect();
        let mut rhs = DVector::zeros(2 * n);
        for i in 0..n {
            rhs[2 * i + 1] = -2.0;
        }
        let unit_translation = lu.solve(&rhs).ok_or_else(|| Error::numerical("stokes_bem", "LU solve failed"))?;
        Ok(BemSolver { curve, mesh, eta, lu, areas, unit_translation })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn mesh(&self) -> &BemMesh {
        &self.mesh
    }

    fn axial_force(&self, f: &DVector<f64>) -> f64 {
        self.areas.iter().enumerate().map(|(e, a)| a * f[2 * e + 1]).sum()
    }

    /// Axial force on the body per unit translation speed (negative: drag).
    pub fn translation_force(&self) -> f64 {
        self.axial_force(&self.unit_translation)
    }

    /// Traction for rigid axial translation at speed u.
    pub fn translation_traction(&self, u: f64) -> Vec<[f64; 2]> {
        self.unit_translation.as_slice().chunks(2).map(|c| [u * c[0], u * c[1]]).collect()
    }

    /// Right-hand side for a surface velocity (ρ, z components).
    fn rhs(&self, velocity: &(dyn Fn(f64) -> [f64; 2] + Sync)) -> DVector<f64> {
        let n = self.mesh.len();
        let mesh = &self.mesh;
        let curve = self.curve;
        let rows: Vec<[f64; 2]> = (0..n)
            .into_par_iter()
            .map(|i| {
                let el = &mesh.elements[i];
                let u0 = velocity(el.tc);
                let mut acc = [0.0; 2];
                for e in 0..n {
                    for q in mesh.quadrature(curve, e, i) {
                        let d = ring_double_layer(el.mid, q.x, q.normal, velocity(q.t), u0);
                        acc[0] += q.weight * d[0];
                        acc[1] += q.weight * d[1];
                    }
                }
                [-2.0 * u0[0] + acc[0] / (4.0 * PI), -2.0 * u0[1] + acc[1] / (4.0 * PI)]
            })
            .collect();
        DVector::from_iterator(2 * n, rows.into_iter().flatten())
    }

    /// Force-free swimming with the given surface velocity relative to the
    /// body. The velocity may have normal components.
    pub fn swim_with_velocity(&self, velocity: &(dyn Fn(f64) -> [f64; 2] + Sync)) -> Result<BemSolution> {
        let rhs = self.rhs(velocity);
        let fs = self.lu.solve(&rhs).ok_or_else(|| Error::numerical("stokes_bem", "LU solve failed"))?;
        let ft = self.translation_force();
        let u = -self.axial_force(&fs) / ft;
        let f = fs + &self.unit_translation * u;
        let mut power = 0.0;
        for e in 0..self.mesh.len() {
            let (fr, fz) = (f[2 * e], f[2 * e + 1]);
            power -= self.mesh.element_integral(self.curve, e, |t| {
                let v = velocity(t);
                v[0] * fr + v[1] * fz
            });
        }
        let sol = BemSolution {
            traction: f.as_slice().chunks(2).map(|c| [c[0], c[1]]).collect(),
            rigid_velocity: u,
            power,
            axial_force: self.axial_force(&f),
        };
        if !sol.rigid_velocity.is_finite() || !sol.power.is_finite() {
            return Err(Error::numerical("stokes_bem", "non-finite swimming solution"));
        }
        Ok(sol)
    }

    /// Force-free swimming with a tangential slip profile.
    pub fn swim(&self, slip: &SlipProfile) -> Result<BemSolution> {
        let curve = self.curve;
        let velocity = move |t: f64| {
            let s = slip.speed(t);
            let tn = curve.tangent(t);
            [s * tn[0], s * tn[1]]
        };
        self.swim_with_velocity(&velocity)
    }

    /// Mesh and traction as CSV, for debugging.
    pub fn dump_csv(&self, solution: &BemSolution) -> String {
        let mut s = self.mesh.to_csv();
        s.push_str("element,f_rho_Pa,f_z_Pa\n");
        for (i, f) in solution.traction.iter().enumerate() {
            let _ = writeln!(s, "{i},{:e},{:e}", f[0], f[1]);
        }
        s
    }
}

fn check_elements(n: usize) -> Result<()> {
    if n < 64 {
        return Err(Error::param("N", format!("mesh needs at least 64 elements, got {n}")));
    }
    Ok(())
}

/// Drag force magnitude on a spheroid translating along its axis.
pub fn drag_translation(shape: &SpheroidShape, eta: f64, u: f64, n: usize) -> Result<f64> {
    check_elements(n)?;
    let mesh = BemMesh::arc_length(shape, n, &[])?;
    let solver = BemSolver::new(shape, mesh, eta)?;
    Ok(-solver.translation_force() * u)
}

/// Force-free swimming of a spheroid with tangential slip.
pub fn solve_swim(shape: &SpheroidShape, slip: &SlipProfile, eta: f64, n: usize) -> Result<BemSolution> {
    check_elements(n)?;
    let mesh = BemMesh::arc_length(shape, n, &slip.breaks())?;
    let solver = BemSolver::new(shape, mesh, eta)?;
    solver.swim(slip)
}

/// Mesh and traction of a swim solve as CSV, for debugging.
pub fn swim_dump_csv(shape: &SpheroidShape, slip: &SlipProfile, eta: f64, n: usize) -> Result<String> {
    check_elements(n)?;
    let mesh = BemMesh::arc_length(shape, n, &slip.breaks())?;
    let solver = BemSolver::new(shape, mesh, eta)?;
    let sol = solver.swim(slip)?;
    Ok(solver.dump_csv(&sol))
}

/// Classical closed form for axial drag of a prolate spheroid.
pub fn oberbeck_axial_drag(shape: &SpheroidShape, eta: f64, u: f64) -> f64 {
    let e = shape.eccentricity();
    if e < 1e-3 {
        // series: the closed form cancels badly near the sphere
        return 6.0 * PI * eta * shape.a * u * (1.0 - e * e / 5.0);
    }
    let l = ((1.0 + e) / (1.0 - e)).ln();
    16.0 * PI * eta * shape.a * e.powi(3) * u / ((1.0 + e * e) * l - 2.0 * e)
}

//! Rigid rotation about a transverse axis: first azimuthal Fourier mode.
//!
//! Rotation Ω x̂ gives u_ρ = −Ωz sin φ, u_φ = −Ωz cos φ, u_z = Ωρ sin φ, and
//! the traction takes the form (F_ρ sin φ, F_φ cos φ, F_z sin φ).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::mesh::{BemMesh, Generatrix, SpheroidShape};
use crate::error::{ensure_positive, Error, Result};
use crate::numerics::GaussLegendre;

const TRAPEZOID_POINTS: usize = 64;

/// ∫ G·f dφ at x0 (azimuth φ0) for the three unit traction modes, as rows of
/// local (ρ, φ, z) velocity.
fn ring_mode1(x0: [f64; 2], x: [f64; 2], phi0: f64) -> [[f64; 3]; 3] {
    let (rho0, rho) = (x0[0], x[0]);
    let dr = rho - rho0;
    let dz = x[1] - x0[1];
    let mut out = [[0.0; 3]; 3];
    let mut add = |psi: f64, w: f64| {
        let h = (0.5 * psi).sin();
        let omc = 2.0 * h * h;
        let (s, c) = psi.sin_cos();
        let xh = [dr - rho * omc, rho * s, dz];
        let r2 = dr * dr + 2.0 * rho * rho0 * omc + dz * dz;
        let ir = 1.0 / r2.sqrt();
        let ir3 = ir / r2;
        let (sp, cp) = (phi0 + psi).sin_cos();
        let modes = [[sp * c, sp * s, 0.0], [-cp * s, cp * c, 0.0], [0.0, 0.0, sp]];
        for (j, f) in modes.iter().enumerate() {
            let xf = xh[0] * f[0] + xh[1] * f[1] + xh[2] * f[2];
            for i in 0..3 {
                out[i][j] += w * (f[i] * ir + xh[i] * xf * ir3);
            }
        }
    };
    let a = rho * rho + rho0 * rho0 + dz * dz;
    let b = 2.0 * rho * rho0;
    if 2.0 * b / (a + b) < 0.5 {
        let h = 2.0 * PI / TRAPEZOID_POINTS as f64;
        for k in 0..TRAPEZOID_POINTS {
            add(h * k as f64, h);
        }
    } else {
        let delta = dr.hypot(dz);
        let w = (delta / (rho * rho0).sqrt()).max(1e-300);
        let umax = (PI / w).asinh();
        let digits = (1.0 / w).log10().max(0.0).ceil() as usize;
        let rule = GaussLegendre::cached((40 + 8 * digits).min(200));
        for (u, wu) in rule.mapped(0.0, umax) {
            let psi = w * u.sinh();
            let jac = w * u.cosh() * wu;
            add(psi, jac);
            add(-psi, jac);
        }
    }
    out
}

/// Torque magnitude per unit angular speed for rotation about a transverse
/// axis, from the boundary-element solution on `mesh`.
pub fn transverse_rotation_friction_on(curve: &dyn Generatrix, mesh: &BemMesh, eta: f64) -> Result<f64> {
    ensure_positive("eta", eta)?;
    let n = mesh.len();
    let scale = -1.0 / (8.0 * PI * eta);
    let rows: Vec<[Vec<f64>; 3]> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x0 = mesh.elements[i].mid;
            let mut rows = [vec![0.0; 3 * n], vec![0.0; 3 * n], vec![0.0; 3 * n]];
            for e in 0..n {
                for q in mesh.quadrature(curve, e, i) {
                    let side = ring_mode1(x0, q.x, 0.5 * PI);
                    let front = ring_mode1(x0, q.x, 0.0);
                    for j in 0..3 {
                        rows[0][3 * e + j] += scale * q.weight * side[0][j];
                        rows[1][3 * e + j] += scale * q.weight * front[1][j];
                        rows[2][3 * e + j] += scale * q.weight * side[2][j];
                    }
                }
            }
            rows
        })
        .collect();
    let mut m = DMatrix::zeros(3 * n, 3 * n);
    let mut rhs = DVector::zeros(3 * n);
    for (i, r) in rows.iter().enumerate() {
        for k in 0..3 {
            for j in 0..3 * n {
                m[(3 * i + k, j)] = r[k][j];
            }
        }
        let [rho0, z0] = mesh.elements[i].mid;
        rhs[3 * i] = -z0;
        rhs[3 * i + 1] = -z0;
        rhs[3 * i + 2] = rho0;
    }
    let f = m.lu().solve(&rhs).ok_or_else(|| {
        Error::numerical("stokes_bem", format!("singular rotation system on mesh of {n} elements"))
    })?;
    let mut torque = 0.0;
    for e in 0..n {
        let (fr, fp, fz) = (f[3 * e], f[3 * e + 1], f[3 * e + 2]);
        // element_integral carries 2π; the azimuthal average of sin² is 1/2
        torque += 0.5
            * mesh.element_integral(curve, e, |t| {
                let [rho, z] = curve.point(t);
                rho * fz - z * (fr + fp)
            });
    }
    Ok(-torque)
}

/// Transverse rotational friction coefficient of a spheroid, N·m·s.
pub fn transverse_rotation_friction(shape: &SpheroidShape, eta: f64, n: usize) -> Result<f64> {
    let mesh = BemMesh::arc_length(shape, n, &[])?;
    transverse_rotation_friction_on(shape, &mesh, eta)
}

/// Classical closed form for rotation of a prolate spheroid about an axis
/// perpendicular to its symmetry axis.
pub fn perrin_transverse_friction(shape: &SpheroidShape, eta: f64) -> f64 {
    let (a, b) = (shape.a, shape.b);
    if (a - b) < 1e-4 * b {
        return 8.0 * PI * eta * b.powi(3) * (1.0 + 1.2 * (a - b) / b);
    }
    let c = (a * a - b * b).sqrt();
    let s = 2.0 / c * ((a + c) / b).ln();
    32.0 * PI * eta * (a.powi(4) - b.powi(4)) / (3.0 * ((2.0 * a * a - b * b) * s - 2.0 * a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_torque() {
        let s = SpheroidShape::sphere(1.0).unwrap();
        let f = transverse_rotation_friction(&s, 1.0, 64).unwrap();
        assert!((f / (8.0 * PI) - 1.0).abs() < 1e-4, "{f}");
    }

    #[test]
    fn closed_form_continuous_at_sphere() {
        let lo = SpheroidShape::new(1.0 + 0.99e-4, 1.0).unwrap();
        let hi = SpheroidShape::new(1.0 + 1.01e-4, 1.0).unwrap();
        let (a, b) = (perrin_transverse_friction(&lo, 1.0), perrin_transverse_friction(&hi, 1.0));
        assert!((a / b - 1.0).abs() < 1e-5);
    }

    #[test]
    fn prolate_matches_closed_form() {
        for ratio in [2.0, 4.0] {
            let s = SpheroidShape::new(ratio, 1.0).unwrap();
            let f = transverse_rotation_friction(&s, 1.0, 96).unwrap();
            let p = perrin_transverse_friction(&s, 1.0);
            assert!((f / p - 1.0).abs() < 5e-3, "{ratio}: {f} {p}");
        }
    }
}

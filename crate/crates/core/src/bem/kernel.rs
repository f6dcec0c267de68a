//! Azimuthally integrated Stokeslet and stresslet kernels for rings.
//!
//! The field point x0 = (ρ0, 0, z0) sits at azimuth 0. The source ring at
//! (ρ, z) carries an axisymmetric density; everything is integrated over
//! φ ∈ [0, 2π) but not yet multiplied by the ring's ρ dl.

use std::f64::consts::PI;

use crate::numerics::{elliptic_ke, GaussLegendre};

/// Kernel values, components ordered (ρ, z).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RingKernels {
    /// Single layer, `sl[out][in]`: velocity at x0 from a unit traction ring.
    pub sl: [[f64; 2]; 2],
    /// Double layer for a ring density (u_ρ ρ̂(φ) + u_z ẑ).
    pub dl: [[f64; 2]; 2],
    /// Double layer for the constant vector ρ̂(0), used in the subtraction.
    pub dl_const: [f64; 2],
}

impl RingKernels {
    fn scaled_add(&mut self, o: &RingKernels, w: f64) {
        for i in 0..2 {
            for j in 0..2 {
                self.sl[i][j] += w * o.sl[i][j];
                self.dl[i][j] += w * o.dl[i][j];
            }
            self.dl_const[i] += w * o.dl_const[i];
        }
    }
}

/// Which φ-integration path was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingPath {
    Trapezoid,
    Elliptic,
    Graded,
}

/// Above this k² the closed form loses too many digits.
const K2_ELLIPTIC_MAX: f64 = 0.999;
/// Below this k² the periodic trapezoid rule converges fast.
const K2_TRAPEZOID_MAX: f64 = 0.5;
const TRAPEZOID_POINTS: usize = 48;

type Poly = [f64; 4];

fn pmul(a: &Poly, b: &Poly) -> Poly {
    let mut out = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

fn pdot(a: &Poly, m: &[f64; 4]) -> f64 {
    a.iter().zip(m).map(|(x, y)| x * y).sum()
}

/// Moments ∫ cos^n φ / r^m dφ over [0, 2π) for m = 1, 3, 5 and n = 0..=3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingMoments {
    pub m1: [f64; 4],
    pub m3: [f64; 4],
    pub m5: [f64; 4],
}

fn k_squared(rho0: f64, rho: f64, dz: f64) -> (f64, f64, f64) {
    let a = rho * rho + rho0 * rho0 + dz * dz;
    let b = 2.0 * rho * rho0;
    (a, b, 2.0 * b / (a + b))
}

pub fn moments_trapezoid(rho0: f64, rho: f64, dz: f64, points: usize) -> RingMoments {
    let (a, b, _) = k_squared(rho0, rho, dz);
    let mut out = RingMoments { m1: [0.0; 4], m3: [0.0; 4], m5: [0.0; 4] };
    let h = 2.0 * PI / points as f64;
    for i in 0..points {
        let c = (h * i as f64).cos();
        let r2 = a - b * c;
        let ir = 1.0 / r2.sqrt();
        let ir3 = ir / r2;
        let ir5 = ir3 / r2;
        let mut cn = 1.0;
        for n in 0..4 {
            out.m1[n] += h * cn * ir;
            out.m3[n] += h * cn * ir3;
            out.m5[n] += h * cn * ir5;
            cn *= c;
        }
    }
    out
}

/// Closed form through complete elliptic integrals.
pub fn moments_elliptic(rho0: f64, rho: f64, dz: f64) -> RingMoments {
    let (a, b, k2) = k_squared(rho0, rho, dz);
    let kp2 = 1.0 - k2;
    let (kk, ee) = elliptic_ke(k2);
    // J_q = ∫_0^{π/2} Δ^q dt for q = −5, −3, −1, 1 (index (q+5)/2)
    let jm3 = ee / kp2;
    let jm5 = (2.0 * (2.0 - k2) * ee - kp2 * kk) / (3.0 * kp2 * kp2);
    let j = [jm5, jm3, kk, ee];
    // cos φ = α − β Δ²
    let alpha = (2.0 - k2) / k2;
    let beta = 2.0 / k2;
    let binom = [[1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [1.0, 2.0, 1.0, 0.0], [1.0, 3.0, 3.0, 1.0]];
    let apb = a + b;
    let moment = |m: usize, n: usize| -> f64 {
        let mut s = 0.0;
        for jj in 0..=n {
            let q = 2 * jj as i32 - m as i32;
            let idx = ((q + 5) / 2) as usize;
            s += binom[n][jj] * alpha.powi((n - jj) as i32) * (-beta).powi(jj as i32) * j[idx];
        }
        4.0 * apb.powf(-(m as f64) / 2.0) * s
    };
    let mut out = RingMoments { m1: [0.0; 4], m3: [0.0; 4], m5: [0.0; 4] };
    for n in 0..4 {
        out.m1[n] = if n <= 1 { moment(1, n) } else { f64::NAN };
        out.m3[n] = if n <= 2 { moment(3, n) } else { f64::NAN };
        out.m5[n] = moment(5, n);
    }
    out
}

struct Geometry {
    x: Poly,
    d: Poly,
    z: Poly,
    nn: Poly,
}

fn geometry(x0: [f64; 2], x: [f64; 2], n: [f64; 2]) -> Geometry {
    let (rho0, z0) = (x0[0], x0[1]);
    let (rho, zz) = (x[0], x[1]);
    let dz = zz - z0;
    let xx = [-rho0, rho, 0.0, 0.0];
    let d = [rho, -rho0, 0.0, 0.0];
    let z = [dz, 0.0, 0.0, 0.0];
    let nn = [n[0] * rho + n[1] * dz, -n[0] * rho0, 0.0, 0.0];
    Geometry { x: xx, d, z, nn }
}

fn assemble(g: &Geometry, m: &RingMoments) -> RingKernels {
    let c = [0.0, 1.0, 0.0, 0.0];
    let one = [1.0, 0.0, 0.0, 0.0];
    // m1/m3 entries beyond their degree are never touched: polynomial degrees stay in range
    let m1 = [m.m1[0], m.m1[1], 0.0, 0.0];
    let m3 = [m.m3[0], m.m3[1], m.m3[2], 0.0];
    let sl = [
        [pdot(&c, &m1) + pdot(&pmul(&g.x, &g.d), &m3), pdot(&pmul(&g.x, &g.z), &m3)],
        [pdot(&pmul(&g.z, &g.d), &m3), pdot(&one, &m1) + pdot(&pmul(&g.z, &g.z), &m3)],
    ];
    let dn = pmul(&g.d, &g.nn);
    let zn = pmul(&g.z, &g.nn);
    let xn = pmul(&g.x, &g.nn);
    let dl = [
        [-6.0 * pdot(&pmul(&dn, &g.x), &m.m5), -6.0 * pdot(&pmul(&zn, &g.x), &m.m5)],
        [-6.0 * pdot(&pmul(&dn, &g.z), &m.m5), -6.0 * pdot(&pmul(&zn, &g.z), &m.m5)],
    ];
    let dl_const = [-6.0 * pdot(&pmul(&xn, &g.x), &m.m5), -6.0 * pdot(&pmul(&xn, &g.z), &m.m5)];
    RingKernels { sl, dl, dl_const }
}

/// Pointwise integrand at azimuth φ. Differences are formed through
/// 1 − cos φ so nearly coincident rings keep their digits.
fn integrand(x0: [f64; 2], x: [f64; 2], n: [f64; 2], phi: f64) -> RingKernels {
    let (rho0, rho) = (x0[0], x[0]);
    let dz = x[1] - x0[1];
    let dr = rho - rho0;
    let h = (0.5 * phi).sin();
    let omc = 2.0 * h * h;
    let c = 1.0 - omc;
    let xx = dr - rho * omc;
    let d = dr + rho0 * omc;
    let nn = n[0] * d + n[1] * dz;
    let r2 = dr * dr + 2.0 * rho * rho0 * omc + dz * dz;
    let ir = 1.0 / r2.sqrt();
    let ir3 = ir / r2;
    let ir5 = -6.0 * ir3 / r2;
    RingKernels {
        sl: [[c * ir + xx * d * ir3, xx * dz * ir3], [dz * d * ir3, ir + dz * dz * ir3]],
        dl: [[d * nn * xx * ir5, dz * nn * xx * ir5], [d * nn * dz * ir5, dz * nn * dz * ir5]],
        dl_const: [xx * nn * xx * ir5, xx * nn * dz * ir5],
    }
}

/// sinh-graded quadrature clustered at φ = 0 for nearly coincident rings.
fn graded(x0: [f64; 2], x: [f64; 2], n: [f64; 2]) -> RingKernels {
    let dz = x[1] - x0[1];
    let delta = ((x[0] - x0[0]).powi(2) + dz * dz).sqrt();
    let w = (delta / (x[0] * x0[0]).sqrt()).max(1e-300);
    let umax = (PI / w).asinh();
    let digits = (1.0 / w).log10().max(0.0).ceil() as usize;
    let rule = GaussLegendre::cached((40 + 8 * digits).min(200));
    let mut out = RingKernels::default();
    for (u, wu) in rule.mapped(0.0, umax) {
        let phi = w * u.sinh();
        let jac = w * u.cosh();
        out.scaled_add(&integrand(x0, x, n, phi), 2.0 * wu * jac);
    }
    out
}

pub fn ring_path(x0: [f64; 2], x: [f64; 2]) -> RingPath {
    let (_, _, k2) = k_squared(x0[0], x[0], x[1] - x0[1]);
    if k2 < K2_TRAPEZOID_MAX {
        RingPath::Trapezoid
    } else if k2 <= K2_ELLIPTIC_MAX {
        RingPath::Elliptic
    } else {
        RingPath::Graded
    }
}

/// Ring kernels at field point x0 for a ring at x with unit normal n.
pub fn ring_kernels(x0: [f64; 2], x: [f64; 2], n: [f64; 2]) -> RingKernels {
    match ring_path(x0, x) {
        RingPath::Trapezoid => {
            let m = moments_trapezoid(x0[0], x[0], x[1] - x0[1], TRAPEZOID_POINTS);
            assemble(&geometry(x0, x, n), &m)
        }
        RingPath::Elliptic => {
            let m = moments_elliptic(x0[0], x[0], x[1] - x0[1]);
            assemble(&geometry(x0, x, n), &m)
        }
        RingPath::Graded => graded(x0, x, n),
    }
}

/// Double layer of the ring density u (ρ, z parts) minus the constant
/// vector u0 = u0_ρ ρ̂(0) + u0_z ẑ, evaluated at x0.
pub fn ring_double_layer(x0: [f64; 2], x: [f64; 2], n: [f64; 2], u: [f64; 2], u0: [f64; 2]) -> [f64; 2] {
    if ring_path(x0, x) != RingPath::Graded {
        let k = ring_kernels(x0, x, n);
        let dz = u[1] - u0[1];
        return [
            k.dl[0][0] * u[0] + k.dl[0][1] * dz - k.dl_const[0] * u0[0],
            k.dl[1][0] * u[0] + k.dl[1][1] * dz - k.dl_const[1] * u0[0],
        ];
    }
    let (rho0, rho) = (x0[0], x[0]);
    let dz = x[1] - x0[1];
    let dr = rho - rho0;
    let delta = (dr * dr + dz * dz).sqrt();
    let w = (delta / (rho * rho0).sqrt()).max(1e-300);
    let umax = (PI / w).asinh();
    let digits = (1.0 / w).log10().max(0.0).ceil() as usize;
    let rule = GaussLegendre::cached((40 + 8 * digits).min(200));
    let mut out = [0.0; 2];
    for (s, ws) in rule.mapped(0.0, umax) {
        let phi = w * s.sinh();
        let jac = w * s.cosh();
        let h = (0.5 * phi).sin();
        let omc = 2.0 * h * h;
        let xx = dr - rho * omc;
        let d = dr + rho0 * omc;
        let nn = n[0] * d + n[1] * dz;
        let r2 = dr * dr + 2.0 * rho * rho0 * omc + dz * dz;
        let vx = (u[0] - u0[0]) * dr + omc * (u[0] * rho0 + u0[0] * rho) + (u[1] - u0[1]) * dz;
        let f = -6.0 * vx * nn / (r2 * r2 * r2.sqrt()) * 2.0 * ws * jac;
        out[0] += f * xx;
        out[1] += f * dz;
    }
    out
}

/// Reference value by brute-force azimuthal quadrature (tests only).
pub fn ring_kernels_reference(x0: [f64; 2], x: [f64; 2], n: [f64; 2], points: usize) -> RingKernels {
    let rule = GaussLegendre::cached(points);
    let mut out = RingKernels::default();
    // split [0, π] geometrically toward φ = 0
    let mut edges = vec![0.0];
    let mut e = 1e-9;
    while e < PI {
        edges.push(e);
        e *= 2.0;
    }
    edges.push(PI);
    for w in edges.windows(2) {
        for (phi, wp) in rule.mapped(w[0], w[1]) {
            out.scaled_add(&integrand(x0, x, n, phi), 2.0 * wp);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &RingKernels, b: &RingKernels, tol: f64) -> bool {
        let scale = a.sl.iter().flatten().chain(a.dl.iter().flatten()).map(|v| v.abs()).fold(0.0, f64::max);
        let diff = a
            .sl
            .iter()
            .flatten()
            .zip(b.sl.iter().flatten())
            .chain(a.dl.iter().flatten().zip(b.dl.iter().flatten()))
            .chain(a.dl_const.iter().zip(&b.dl_const))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        diff <= tol * scale
    }

    #[test]
    fn elliptic_moments_match_quadrature() {
        for &(rho0, rho, dz) in &[(1.0, 0.8, 0.3), (0.5, 0.55, 0.02), (1.0, 1.0, 0.06), (0.3, 0.2, 0.05)] {
            let e = moments_elliptic(rho0, rho, dz);
            let t = moments_trapezoid(rho0, rho, dz, 20000);
            for n in 0..4 {
                assert!((e.m5[n] / t.m5[n] - 1.0).abs() < 1e-9, "m5[{n}] {} {}", e.m5[n], t.m5[n]);
                if n <= 2 {
                    assert!((e.m3[n] / t.m3[n] - 1.0).abs() < 1e-9);
                }
                if n <= 1 {
                    assert!((e.m1[n] / t.m1[n] - 1.0).abs() < 1e-10);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn subtracted_double_layer_matches_kernels(
            rho0 in 0.05f64..2.0, rho in 0.05f64..2.0, dz in -1.0f64..1.0,
            ang in 0.0f64..6.28, shrink in 0.0f64..3.0,
            u in prop::array::uniform2(-1.0f64..1.0), u0 in prop::array::uniform2(-1.0f64..1.0),
        ) {
            let s = 10f64.powf(-shrink);
            let x = [rho0 + s * (rho - rho0), s * dz];
            let n = [ang.cos(), ang.sin()];
            let k = ring_kernels_reference([rho0, 0.0], x, n, 48);
            let want = [
                k.dl[0][0] * u[0] + k.dl[0][1] * (u[1] - u0[1]) - k.dl_const[0] * u0[0],
                k.dl[1][0] * u[0] + k.dl[1][1] * (u[1] - u0[1]) - k.dl_const[1] * u0[0],
            ];
            let got = ring_double_layer([rho0, 0.0], x, n, u, u0);
            let scale = k.dl.iter().flatten().chain(&k.dl_const).map(|v| v.abs()).fold(0.0, f64::max);
            for i in 0..2 {
                prop_assert!((got[i] - want[i]).abs() <= 1e-7 * scale, "{got:?} {want:?}");
            }
        }

        #[test]
        fn every_path_matches_reference(
            rho0 in 0.05f64..2.0, rho in 0.05f64..2.0, dz in -1.0f64..1.0,
            ang in 0.0f64..6.28, shrink in 0.0f64..6.0,
        ) {
            // pull the ring toward the field point to hit all three paths
            let s = 10f64.powf(-shrink);
            let x = [rho0 + s * (rho - rho0), s * dz];
            let n = [ang.cos(), ang.sin()];
            let got = ring_kernels([rho0, 0.0], x, n);
            let want = ring_kernels_reference([rho0, 0.0], x, n, 24);
            prop_assert!(close(&got, &want, 1e-7), "{:?} vs {:?} path {:?}", got, want, ring_path([rho0, 0.0], x));
        }
    }
}

//! Exterior axisymmetric Stokes flow around a sphere from Legendre boundary data.
//!
//! Boundary data on r = a:
//!   u_r = Σ R_m P_m(cos θ),   u_θ = Σ T_m P_m^1(cos θ)
//! Each mode is a combination of a potential term ~ s^{m+2} and a
//! pressure-carrying term ~ s^m, s = a/r.

use std::f64::consts::PI;

use crate::numerics::{GaussLegendre, LegendreTable};

/// Velocity, its first derivatives and pressure at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FlowPoint {
    pub u_r: f64,
    pub u_theta: f64,
    pub dur_dr: f64,
    pub dur_dtheta: f64,
    pub dut_dr: f64,
    pub dut_dtheta: f64,
    pub pressure: f64,
}

impl FlowPoint {
    /// Cartesian components (u_ρ, u_z) at polar angle θ.
    pub fn cylindrical(&self, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        (self.u_r * s + self.u_theta * c, self.u_r * c - self.u_theta * s)
    }

    pub fn speed(&self) -> f64 {
        self.u_r.hypot(self.u_theta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeFlow {
    pub a: f64,
    pub eta: f64,
    /// Source strength (m = 0): u_r = q s².
    pub source: f64,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
}

impl ModeFlow {
    /// `radial[m]` = R_m, `tangential[m]` = T_m; index 0 of `tangential` is ignored.
    pub fn from_boundary(a: f64, eta: f64, radial: &[f64], tangential: &[f64]) -> Self {
        let mmax = radial.len().max(tangential.len()).saturating_sub(1);
        let mut c1 = vec![0.0; mmax + 1];
        let mut c2 = vec![0.0; mmax + 1];
        for m in 1..=mmax {
            let r = radial.get(m).copied().unwrap_or(0.0);
            let t = tangential.get(m).copied().unwrap_or(0.0);
            let mf = m as f64;
            let mm = mf * (mf + 1.0);
            c1[m] = 0.5 * (t + (mf - 2.0) * r / mm);
            c2[m] = -r / mm - c1[m];
        }
        ModeFlow {
            a,
            eta,
            source: radial.first().copied().unwrap_or(0.0),
            c1,
            c2,
        }
    }

    pub fn mmax(&self) -> usize {
        self.c1.len().saturating_sub(1)
    }

    /// Axial force exerted by the fluid on the sphere.
    pub fn axial_force(&self) -> f64 {
        if self.mmax() >= 1 {
            8.0 * PI * self.eta * self.a * self.c2[1]
        } else {
            0.0
        }
    }

    /// Magnitude of the m-th term at radius r (diagnostics for truncation).
    pub fn term_scale(&self, m: usize, r: f64) -> f64 {
        let s = self.a / r;
        let mf = m as f64;
        (mf * (mf + 1.0)) * (self.c1[m].abs() * s.powi(m as i32 + 2) + self.c2[m].abs() * s.powi(m as i32))
    }

    pub fn eval(&self, r: f64, table: &LegendreTable) -> FlowPoint {
        self.eval_upto(r, table, self.mmax())
    }

    pub fn eval_upto(&self, r: f64, table: &LegendreTable, mmax: usize) -> FlowPoint {
        let s = self.a / r;
        let mut out = FlowPoint {
            u_r: self.source * s * s,
            dur_dr: -2.0 * self.source * s * s / r,
            ..FlowPoint::default()
        };
        let mut sm = s; // s^m
        for m in 1..=mmax.min(self.mmax()).min(table.nmax()) {
            let mf = m as f64;
            let mm = mf * (mf + 1.0);
            let sm2 = sm * s * s;
            let (c1, c2) = (self.c1[m], self.c2[m]);
            let p = table.p[m];
            let w = table.p1(m);
            let radial = -mm * (c1 * sm2 + c2 * sm);
            let tang = mf * c1 * sm2 + (mf - 2.0) * c2 * sm;
            out.u_r += radial * p;
            out.u_theta += tang * w;
            out.dur_dr += mm * ((mf + 2.0) * c1 * sm2 + mf * c2 * sm) * p / r;
            out.dut_dr -= (mf * (mf + 2.0) * c1 * sm2 + (mf - 2.0) * mf * c2 * sm) * w / r;
            out.dur_dtheta += radial * table.dp_dtheta(m);
            out.dut_dtheta += tang * table.dp1_dtheta(m);
            out.pressure -= 2.0 * mf * (2.0 * mf - 1.0) * self.eta * c2 * sm * s * p / self.a;
            sm *= s;
        }
        out
    }

    /// Traction σ·r̂ exerted by the fluid on the sphere surface at the
    /// table's polar angle: (t_r, t_θ).
    pub fn surface_traction(&self, table: &LegendreTable) -> (f64, f64) {
        let f = self.eval(self.a, table);
        traction(&f, self.a, self.eta)
    }
}

/// Traction on a sphere of radius r from a flow sample taken at that radius.
pub fn traction(f: &FlowPoint, r: f64, eta: f64) -> (f64, f64) {
    let srr = -f.pressure + 2.0 * eta * f.dur_dr;
    let srt = eta * (f.dut_dr - f.u_theta / r + f.dur_dtheta / r);
    (srr, srt)
}

/// Legendre coefficients of surface data on x = cos θ.
///
/// Radial: f(x) = Σ R_m P_m(x). Tangential: g(x) = Σ T_m P_m^1(x).
/// `breaks` lists interior x-values where the data jump.
pub fn project(
    mmax: usize,
    breaks: &[f64],
    nodes_per_piece: usize,
    mut radial: impl FnMut(f64) -> f64,
    mut tangential: impl FnMut(f64) -> f64,
) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::new(nodes_per_piece);
    let mut pts = vec![-1.0];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|x| x.abs() < 1.0).collect();
    inner.sort_by(f64::total_cmp);
    pts.extend(inner);
    pts.push(1.0);
    let mut rc = vec![0.0; mmax + 1];
    let mut tc = vec![0.0; mmax + 1];
    for w in pts.windows(2) {
        for (x, wt) in rule.mapped(w[0], w[1]) {
            let table = LegendreTable::new(mmax, x);
            let fr = radial(x);
            let ft = tangential(x);
            for m in 0..=mmax {
                rc[m] += wt * fr * table.p[m];
                if m >= 1 {
                    tc[m] += wt * ft * table.p1(m);
                }
            }
        }
    }
    for m in 0..=mmax {
        let mf = m as f64;
        rc[m] *= (2.0 * mf + 1.0) / 2.0;
        if m >= 1 {
            tc[m] *= (2.0 * mf + 1.0) / (2.0 * mf * (mf + 1.0));
        }
    }
    (rc, tc)
}

/// Translation speed along +z that makes a sphere with the given surface
/// velocity coefficients force-free.
pub fn force_free_speed(radial1: f64, tangential1: f64) -> f64 {
    -(radial1 + 2.0 * tangential1) / 3.0
}

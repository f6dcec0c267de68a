//! Fluid disturbance around a sphere: dragged, band-driven and oscillating.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::modes::{force_free_speed, project, FlowPoint, ModeFlow};
use crate::numerics::LegendreTable;
use crate::quantities::Scenario;
use crate::squirmer::{first_order_flows, peak_over_phase, ModeSpectrum};
use crate::tangential::BandActuation;

/// Hard cap on Legendre terms for the band series.
pub const MAX_TERMS: usize = 200;
/// Target truncation tolerance, relative to the partial sum.
pub const SERIES_TOL: f64 = 1e-8;
/// Beyond this estimated tail the series is reported as non-convergent.
pub const SERIES_FAIL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum MotionMode {
    Dragged { scenario: Scenario },
    TangentialBand { scenario: Scenario, band: BandActuation },
    Oscillating { scenario: Scenario, spectrum: ModeSpectrum },
}

impl MotionMode {
    pub fn scenario(&self) -> &Scenario {
        match self {
            MotionMode::Dragged { scenario }
            | MotionMode::TangentialBand { scenario, .. }
            | MotionMode::Oscillating { scenario, .. } => scenario,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            MotionMode::Dragged { .. } => "dragged",
            MotionMode::TangentialBand { .. } => "tangential",
            MotionMode::Oscillating { .. } => "oscillating",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowSample {
    /// Distance from the sphere surface, m.
    pub d: f64,
    pub theta: f64,
    /// (u_r, u_θ) in the rest frame of the far fluid, m/s.
    pub velocity: (f64, f64),
    /// Deviation from ambient pressure, Pa.
    pub pressure: f64,
}

impl FlowSample {
    pub fn speed(&self) -> f64 {
        self.velocity.0.hypot(self.velocity.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShearStress {
    pub shear_rate: f64,
    pub stress: f64,
}

/// Which shear measure to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShearMeasure {
    /// Radial derivative of the max-speed envelope.
    #[default]
    Envelope,
    /// Largest √(2 e:e) over the sphere at that distance.
    StrainRate,
}

/// A motion mode with its series coefficients computed once.
#[derive(Debug, Clone)]
pub struct PreparedFlow {
    a: f64,
    kind: Prepared,
}

#[derive(Debug, Clone)]
enum Prepared {
    Steady { flow: ModeFlow, band: Option<(BandActuation, f64)> },
    Periodic { cos: ModeFlow, sin: ModeFlow, omega: f64 },
}

impl PreparedFlow {
    pub fn new(mode: &MotionMode) -> Result<Self> {
        let a = mode.scenario().a;
        let eta = mode.scenario().eta;
        let kind = match mode {
            MotionMode::Dragged { scenario } => {
                let u = scenario.u;
                Prepared::Steady {
                    flow: ModeFlow::from_boundary(a, eta, &[0.0, u], &[0.0, u]),
                    band: None,
                }
            }
            MotionMode::TangentialBand { band, .. } => {
                let psi = band.psi();
                let b = *band;
                let (_, mut tc) = project(
                    MAX_TERMS,
                    &[psi.cos(), (PI - psi).cos()],
                    2 * MAX_TERMS,
                    |_| 0.0,
                    move |x| if b.contains(x.acos()) { b.v } else { 0.0 },
                );
                let u = force_free_speed(0.0, tc[1]);
                tc[1] += u;
                let mut rc = vec![0.0; MAX_TERMS + 1];
                rc[1] = u;
                Prepared::Steady {
                    flow: ModeFlow::from_boundary(a, eta, &rc, &tc),
                    band: Some((b, u)),
                }
            }
            MotionMode::Oscillating { spectrum, .. } => {
                let (cos, sin) = first_order_flows(spectrum, a, eta);
                Prepared::Periodic { cos, sin, omega: spectrum.omega }
            }
        };
        Ok(PreparedFlow { a, kind })
    }

    /// Swimming speed implied by the series (band) or zero.
    pub fn swim_speed(&self) -> f64 {
        match &self.kind {
            Prepared::Steady { band: Some((_, u)), .. } => *u,
            _ => 0.0,
        }
    }

    fn flows(&self) -> Vec<&ModeFlow> {
        match &self.kind {
            Prepared::Steady { flow, .. } => vec![flow],
            Prepared::Periodic { cos, sin, .. } => vec![cos, sin],
        }
    }

    /// Number of terms needed at radius r, or a numerical error.
    fn terms_at(&self, r: f64) -> Result<usize> {
        let mut needed = 0;
        for flow in self.flows() {
            let mmax = flow.mmax();
            if mmax <= 40 {
                needed = needed.max(mmax);
                continue;
            }
            let s = self.a / r;
            let total: f64 = (1..=mmax).map(|m| flow.term_scale(m, r)).sum();
            if total == 0.0 {
                continue;
            }
            let mut acc = 0.0;
            let mut cut = mmax;
            for m in (1..=mmax).rev() {
                acc += flow.term_scale(m, r);
                if acc > SERIES_TOL * total {
                    cut = m;
                    break;
                }
            }
            if cut == mmax {
                let last = flow.term_scale(mmax, r);
                let tail = if s < 1.0 { last * s / (1.0 - s) } else { f64::INFINITY };
                if tail > SERIES_FAIL_TOL * total {
                    return Err(Error::numerical(
                        "stokes_field",
                        format!(
                            "Legendre series not converged at d = {:e} m: {} terms, tail estimate {:.2e} of sum",
                            r - self.a,
                            mmax,
                            tail / total
                        ),
                    ));
                }
            }
            needed = needed.max(cut);
        }
        Ok(needed)
    }

    fn point(&self, r: f64, theta: f64, t: f64, terms: usize) -> FlowPoint {
        let table = LegendreTable::new(terms, theta.cos());
        match &self.kind {
            Prepared::Steady { flow, .. } => flow.eval_upto(r, &table, terms),
            Prepared::Periodic { cos, sin, omega } => {
                let (s, c) = (omega * t).sin_cos();
                let a = cos.eval_upto(r, &table, terms);
                let b = sin.eval_upto(r, &table, terms);
                FlowPoint {
                    u_r: c * a.u_r + s * b.u_r,
                    u_theta: c * a.u_theta + s * b.u_theta,
                    dur_dr: c * a.dur_dr + s * b.dur_dr,
                    dur_dtheta: c * a.dur_dtheta + s * b.dur_dtheta,
                    dut_dr: c * a.dut_dr + s * b.dut_dr,
                    dut_dtheta: c * a.dut_dtheta + s * b.dut_dtheta,
                    pressure: c * a.pressure + s * b.pressure,
                }
            }
        }
    }

    pub fn sample(&self, d: f64, theta: f64, t: f64) -> Result<FlowSample> {
        ensure_non_negative("d", d).map_err(|_| Error::Domain { r: self.a + d, a: self.a })?;
        let r = self.a + d;
        if let (0.0, Prepared::Steady { band: Some((band, u)), flow }) = (d, &self.kind) {
            // on the body the flow equals the boundary data
            let slip = if band.contains(theta) { band.v } else { 0.0 };
            let table = LegendreTable::new(flow.mmax(), theta.cos());
            let p = flow.eval(r, &table).pressure;
            return Ok(FlowSample {
                d,
                theta,
                velocity: (u * theta.cos(), slip - u * theta.sin()),
                pressure: p,
            });
        }
        let terms = self.terms_at(r)?;
        let f = self.point(r, theta, t, terms);
        Ok(FlowSample {
            d,
            theta,
            velocity: (f.u_r, f.u_theta),
            pressure: f.pressure,
        })
    }

    /// Speed at (r, θ), maximised over the period for oscillating flow.
    fn peak_speed(&self, r: f64, theta: f64, terms: usize) -> f64 {
        let table = LegendreTable::new(terms, theta.cos());
        match &self.kind {
            Prepared::Steady { flow, .. } => flow.eval_upto(r, &table, terms).speed(),
            Prepared::Periodic { cos, sin, .. } => {
                let a = cos.eval_upto(r, &table, terms);
                let b = sin.eval_upto(r, &table, terms);
                peak_over_phase([a.u_r, a.u_theta], [b.u_r, b.u_theta])
            }
        }
    }

    pub fn max_speed(&self, d: f64) -> Result<f64> {
        if !(d >= 0.0) {
            return Err(Error::Domain { r: self.a + d, a: self.a });
        }
        let r = self.a + d;
        if d == 0.0 {
            if let Prepared::Steady { band: Some((band, u)), .. } = &self.kind {
                // |U ẑ + v θ̂| is largest at the band edge nearest the equator side of motion
                let psi = band.psi();
                let best = [psi, PI / 2.0, PI - psi]
                    .iter()
                    .map(|&th| (u * th.cos()).hypot(band.v - u * th.sin()))
                    .fold(u.abs(), f64::max);
                return Ok(best);
            }
        }
        let terms = self.terms_at(r)?;
        let f = |th: f64| self.peak_speed(r, th, terms);
        Ok(maximize_over_theta(f))
    }

    /// Largest √(2 e:e) over θ (and phase) at distance d.
    pub fn max_strain_rate(&self, d: f64) -> Result<f64> {
        ensure_positive("d", d)?;
        let r = self.a + d;
        let terms = self.terms_at(r)?;
        let phases: Vec<f64> = match &self.kind {
            Prepared::Steady { .. } => vec![0.0],
            Prepared::Periodic { omega, .. } => (0..32).map(|k| 2.0 * PI * k as f64 / (32.0 * omega.max(1e-300))).collect(),
        };
        let mut best: f64 = 0.0;
        for &t in &phases {
            let g = |th: f64| {
                let f = self.point(r, th, t, terms);
                strain_norm(&f, r, th)
            };
            best = best.max(maximize_over_theta(g));
        }
        Ok(best)
    }
}

fn strain_norm(f: &FlowPoint, r: f64, th: f64) -> f64 {
    let s = th.sin().max(1e-12);
    let err = f.dur_dr;
    let ett = (f.dut_dtheta + f.u_r) / r;
    let epp = (f.u_r + f.u_theta * th.cos() / s) / r;
    let ert = 0.5 * (f.dut_dr - f.u_theta / r + f.dur_dtheta / r);
    (2.0 * (err * err + ett * ett + epp * epp + 2.0 * ert * ert)).sqrt()
}

fn maximize_over_theta(f: impl Fn(f64) -> f64) -> f64 {
    const N: usize = 360;
    let grid: Vec<f64> = (0..=N).map(|i| PI * i as f64 / N as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let top = vals.iter().copied().fold(0.0, f64::max);
    let mut best = top;
    for i in 0..=N {
        let l = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
        let r = if i < N { vals[i + 1] } else { f64::NEG_INFINITY };
        if vals[i] >= l && vals[i] >= r && vals[i] > 0.9 * top {
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(N)];
            best = best.max(golden(&f, lo, hi));
        }
    }
    best
}

fn golden(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    f1.max(f2)
}

pub fn exterior_flow(mode: &MotionMode, d: f64, theta: f64, t: f64) -> Result<FlowSample> {
    PreparedFlow::new(mode)?.sample(d, theta, t)
}

pub fn max_speed_vs_distance(mode: &MotionMode, d: f64) -> Result<f64> {
    PreparedFlow::new(mode)?.max_speed(d)
}

/// Shear rate and viscous stress at surface distance d.
pub fn shear_and_stress(mode: &MotionMode, d: f64, eta: f64) -> Result<ShearStress> {
    shear_and_stress_with(&PreparedFlow::new(mode)?, d, eta, ShearMeasure::Envelope)
}

pub fn shear_and_stress_with(flow: &PreparedFlow, d: f64, eta: f64, measure: ShearMeasure) -> Result<ShearStress> {
    ensure_positive("d", d)?;
    let shear_rate = match measure {
        ShearMeasure::Envelope => {
            let h = d / 100.0;
            ((flow.max_speed(d + h)? - flow.max_speed(d - h)?) / (2.0 * h)).abs()
        }
        ShearMeasure::StrainRate => flow.max_strain_rate(d)?,
    };
    Ok(ShearStress {
        shear_rate,
        stress: eta * shear_rate,
    })
}

/// Least-squares slope of log(max speed) against log r over [r_lo, r_hi].
pub fn decay_exponent(flow: &PreparedFlow, a: f64, r_lo: f64, r_hi: f64) -> Result<f64> {
    let n = 16;
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let lr = r_lo.ln() + (r_hi.ln() - r_lo.ln()) * i as f64 / (n - 1) as f64;
            let r = lr.exp();
            flow.max_speed(r - a).map(|s| (lr, s.ln()))
        })
        .collect::<Result<_>>()?;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

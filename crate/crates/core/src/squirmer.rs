//! Small-amplitude surface oscillation of a sphere.
//!
//! A material point at reference angle ϑ sits at
//!   r = a(1 + ε Σ α_n(t) P_n(cos ϑ)),  θ = ϑ + ε Σ β_n(t) V_n(cos ϑ)
//! with α_n = A_n cos(ωt − γ_n) and β_n = B_n cos(ωt − η_n).
//! Performance is the period average of the O(ε²) expansion.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::modes::{traction, ModeFlow};
use crate::numerics::{GaussLegendre, LegendreTable};
use crate::quantities::{PerformanceRecord, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub gamma: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub epsilon: f64,
    pub omega: f64,
    pub modes: Vec<Mode>,
}

impl ModeSpectrum {
    pub fn new(epsilon: f64, omega: f64, modes: Vec<Mode>) -> Result<Self> {
        let spec = ModeSpectrum { epsilon, omega, modes };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("epsilon", self.epsilon)?;
        ensure_non_negative("omega", self.omega)?;
        let mut seen: Vec<usize> = Vec::with_capacity(self.modes.len());
        for m in &self.modes {
            if m.n < 2 {
                return Err(Error::param("n", format!("oscillation modes start at n = 2, got {}", m.n)));
            }
            if seen.contains(&m.n) {
                return Err(Error::param("n", format!("mode {} listed twice", m.n)));
            }
            seen.push(m.n);
            ensure_non_negative("A", m.a)?;
            ensure_non_negative("B", m.b)?;
            if !m.gamma.is_finite() || !m.eta.is_finite() {
                return Err(Error::param("phase", "phases must be finite"));
            }
        }
        Ok(())
    }

    pub fn with_scale(mut self, epsilon: f64, omega: f64) -> Self {
        self.epsilon = epsilon;
        self.omega = omega;
        self
    }

    pub fn nmax(&self) -> usize {
        self.modes.iter().map(|m| m.n).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.modes.iter().all(|m| m.a == 0.0 && m.b == 0.0)
    }

    /// Scale all amplitudes by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let mut out = self.clone();
        for m in &mut out.modes {
            m.a *= k;
            m.b *= k;
        }
        out
    }

    /// Negate all phases, reversing the travelling wave.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        for m in &mut out.modes {
            m.gamma = -m.gamma;
            m.eta = -m.eta;
        }
        out
    }

    /// Drop tangential motion.
    pub fn radial_only(&self) -> Self {
        let mut out = self.clone();
        for m in &mut out.modes {
            m.b = 0.0;
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ModeSpectrum =
            serde_json::from_str(text).map_err(|e| Error::param("spectrum", e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Displacement amplitudes at one reference angle as cos/sin parts in
    /// time: (R, Θ) = cos τ (R_c, Θ_c) + sin τ (R_s, Θ_s), per unit aε.
    fn displacement_parts(&self, table: &LegendreTable) -> [f64; 4] {
        let mut out = [0.0; 4];
        for m in &self.modes {
            let p = table.p[m.n];
            let v = table.p1(m.n) / (m.n as f64 + 1.0);
            out[0] += m.a * m.gamma.cos() * p;
            out[1] += m.a * m.gamma.sin() * p;
            out[2] += m.b * m.eta.cos() * v;
            out[3] += m.b * m.eta.sin() * v;
        }
        out
    }

    /// Largest linearised displacement over the period at reference angle
    /// ϑ, per unit aε. The maximum over time is exact.
    fn peak_displacement_at(&self, vartheta: f64) -> f64 {
        let table = LegendreTable::new(self.nmax(), vartheta.cos());
        let [rc, rs, tc, ts] = self.displacement_parts(&table);
        peak_over_phase([rc, tc], [rs, ts])
    }
}

/// max over τ of |cos τ·c + sin τ·s| for 2-vectors c, s.
pub(crate) fn peak_over_phase(c: [f64; 2], s: [f64; 2]) -> f64 {
    let cc = c[0] * c[0] + c[1] * c[1];
    let ss = s[0] * s[0] + s[1] * s[1];
    let cs = c[0] * s[0] + c[1] * s[1];
    let half = 0.5 * (cc - ss);
    (0.5 * (cc + ss) + (half * half + cs * cs).sqrt()).max(0.0).sqrt()
}

/// Amplitudes for modes n = k..=k+p that maximise efficiency, unnormalized,
/// with ε = 0.05 and ω = 1 rad/s as placeholders.
pub fn optimal_spectrum(k: usize, p: usize) -> Result<ModeSpectrum> {
    if k < 2 {
        return Err(Error::param("k", format!("lowest mode must be at least 2, got {k}")));
    }
    let psi = PI / (p as f64 + 2.0);
    let modes = (k..=k + p)
        .map(|n| {
            let j = (n - k + 1) as f64;
            let s = (j * psi).sin();
            let phase = -0.5 * PI * (j - 1.0);
            Mode {
                n,
                a: (1.0 + SQRT_2) * s,
                b: s,
                gamma: phase,
                eta: phase,
            }
        })
        .collect();
    ModeSpectrum::new(0.05, 1.0, modes)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceState {
    pub vartheta: f64,
    pub r: f64,
    pub theta: f64,
    /// (dr/dt, r dθ/dt), m/s.
    pub velocity: (f64, f64),
}

pub fn surface_state(spec: &ModeSpectrum, a: f64, vartheta: f64, t: f64) -> SurfaceState {
    let table = LegendreTable::new(spec.nmax(), vartheta.cos());
    let tau = spec.omega * t;
    let (mut r, mut th, mut dr, mut dth) = (0.0, 0.0, 0.0, 0.0);
    for m in &spec.modes {
        let p = table.p[m.n];
        let v = table.p1(m.n) / (m.n as f64 + 1.0);
        r += m.a * (tau - m.gamma).cos() * p;
        th += m.b * (tau - m.eta).cos() * v;
        dr -= m.a * (tau - m.gamma).sin() * p;
        dth -= m.b * (tau - m.eta).sin() * v;
    }
    let eps = spec.epsilon;
    let w = spec.omega;
    let radius = a * (1.0 + eps * r);
    SurfaceState {
        vartheta,
        r: radius,
        theta: vartheta + eps * th,
        velocity: (a * eps * w * dr, radius * eps * w * dth),
    }
}

const NORMALIZE_NODES: usize = 512;

/// Largest linearised material-point displacement over (ϑ, t), divided by aε.
pub fn peak_displacement(spec: &ModeSpectrum) -> f64 {
    let rule = GaussLegendre::new(NORMALIZE_NODES);
    let mut grid: Vec<f64> = rule.nodes.iter().map(|x| x.acos()).collect();
    grid.push(0.0);
    grid.push(PI);
    grid.sort_by(f64::total_cmp);
    let vals: Vec<f64> = grid.iter().map(|&t| spec.peak_displacement_at(t)).collect();
    let best = vals.iter().copied().fold(0.0, f64::max);
    let mut peak = best;
    // refine every grid local maximum that is close to the best value
    for i in 0..grid.len() {
        let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < grid.len() { vals[i + 1] } else { f64::NEG_INFINITY };
        if vals[i] >= left && vals[i] >= right && vals[i] > 0.95 * best {
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(grid.len() - 1)];
            peak = peak.max(golden_max(|t| spec.peak_displacement_at(t), lo, hi));
        }
    }
    peak
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = f(lo).max(f(hi));
    while hi - lo > 1e-12 {
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
        best = best.max(f1).max(f2);
    }
    best
}

/// Scale amplitudes so the largest displacement over the surface and the
/// period is aε. The displacement is the first-order one, aε(R r̂ + Θ θ̂).
pub fn normalize_spectrum(spec: &ModeSpectrum, _a: f64) -> Result<ModeSpectrum> {
    spec.validate()?;
    if spec.modes.is_empty() || spec.is_zero() {
        return Err(Error::param("spectrum", "all amplitudes are zero"));
    }
    let peak = peak_displacement(spec);
    Ok(spec.scaled(1.0 / peak))
}

pub fn is_normalized(spec: &ModeSpectrum) -> bool {
    !spec.is_zero() && (peak_displacement(spec) - 1.0).abs() <= 1e-4
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiStatic {
    /// Viscous damping length √(2ν/ω), m.
    pub delta: f64,
    pub womersley: f64,
}

pub fn quasistatic_validity(scenario: &Scenario, omega: f64) -> Result<QuasiStatic> {
    ensure_positive("omega", omega)?;
    Ok(QuasiStatic {
        delta: (2.0 * scenario.nu / omega).sqrt(),
        womersley: scenario.a * (omega / scenario.nu).sqrt(),
    })
}

/// Dimensionless performance: U = c_u aε²ω, P = c_p a³ε²ηω², efficiency =
/// c_eff ε², thrust = c_t a²ε²ηω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationCoefficients {
    pub c_u: f64,
    pub c_p: f64,
    pub c_eff: f64,
    pub c_t: f64,
}

impl OscillationCoefficients {
    fn from_speed_power(c_u: f64, c_p: f64) -> Self {
        OscillationCoefficients {
            c_u,
            c_p,
            c_eff: if c_p > 0.0 { 6.0 * PI * c_u * c_u / c_p } else { 0.0 },
            c_t: 6.0 * PI * c_u,
        }
    }

    /// Oscillation frequency giving speed `u` at scale ε on radius a.
    pub fn omega_for_speed(&self, u: f64, a: f64, epsilon: f64) -> Result<f64> {
        ensure_positive("epsilon", epsilon)?;
        if self.c_u.abs() < 1e-300 {
            return Err(Error::Infeasible("spectrum does not swim".into()));
        }
        Ok(u / (self.c_u.abs() * a * epsilon * epsilon))
    }
}

/// First-order flow as cos/sin parts: u(t) = cos(ωt) F_c + sin(ωt) F_s.
/// Includes the m = 1 translation that keeps the sphere force-free (zero for
/// n ≥ 2 spectra).
pub fn first_order_flows(spec: &ModeSpectrum, a: f64, eta: f64) -> (ModeFlow, ModeFlow) {
    let nmax = spec.nmax();
    let scale = a * spec.epsilon * spec.omega;
    let mut rc = vec![0.0; nmax + 1];
    let mut rs = vec![0.0; nmax + 1];
    let mut tc = vec![0.0; nmax + 1];
    let mut ts = vec![0.0; nmax + 1];
    for m in &spec.modes {
        let k = 1.0 / (m.n as f64 + 1.0);
        rc[m.n] += scale * m.a * m.gamma.sin();
        rs[m.n] -= scale * m.a * m.gamma.cos();
        tc[m.n] += scale * m.b * m.eta.sin() * k;
        ts[m.n] -= scale * m.b * m.eta.cos() * k;
    }
    (
        ModeFlow::from_boundary(a, eta, &rc, &tc),
        ModeFlow::from_boundary(a, eta, &rs, &ts),
    )
}

/// Period-averaged speed and power per unit (a, ε, ω, η).
fn averaged(spec: &ModeSpectrum, theta_nodes: usize, time_steps: usize) -> (f64, f64) {
    let unit = spec.clone().with_scale(1.0, 1.0);
    let (fc, fs) = first_order_flows(&unit, 1.0, 1.0);
    let rule = GaussLegendre::new(theta_nodes);
    let nmax = spec.nmax();
    let mut u_sum = 0.0;
    let mut p_sum = 0.0;
    for (th, w) in rule.mapped(0.0, PI) {
        let (st, ct) = th.sin_cos();
        let table = LegendreTable::new(nmax, ct);
        let [xrc, xrs, xtc, xts] = unit.displacement_parts(&table);
        let c = fc.eval(1.0, &table);
        let s = fs.eval(1.0, &table);
        let (trc, ttc) = traction(&c, 1.0, 1.0);
        let (trs, tts) = traction(&s, 1.0, 1.0);
        let mut cz = 0.0;
        let mut pw = 0.0;
        for step in 0..time_steps {
            let tau = 2.0 * PI * step as f64 / time_steps as f64;
            let (sn, cs) = tau.sin_cos();
            let mix = |x: f64, y: f64| cs * x + sn * y;
            let xr = mix(xrc, xrs);
            let xt = mix(xtc, xts);
            let ur = mix(c.u_r, s.u_r);
            let ut = mix(c.u_theta, s.u_theta);
            let conv_r = xr * mix(c.dur_dr, s.dur_dr) + xt * mix(c.dur_dtheta, s.dur_dtheta) - xt * ut;
            let conv_t = xr * mix(c.dut_dr, s.dut_dr) + xt * mix(c.dut_dtheta, s.dut_dtheta) + xt * ur;
            cz += conv_r * ct - conv_t * st;
            pw += ur * mix(trc, trs) + ut * mix(ttc, tts);
        }
        u_sum += w * st * cz;
        p_sum -= w * st * pw;
    }
    let nt = time_steps as f64;
    // (1/4π)∮ dS = ½∫ sin θ dθ ; power integrates over 2π sin θ dθ
    (0.5 * u_sum / nt, 2.0 * PI * p_sum / nt)
}

/// O(ε²) coefficients of a normalized spectrum.
pub fn oscillation_coefficients(spec: &ModeSpectrum) -> Result<OscillationCoefficients> {
    spec.validate()?;
    if !is_normalized(spec) {
        return Err(Error::InvalidState(
            "spectrum must be normalized (max displacement aε) before computing performance".into(),
        ));
    }
    let nodes = 4 * spec.nmax() + 32;
    let (u1, p1) = averaged(spec, nodes, 64);
    let (u2, p2) = averaged(spec, 2 * nodes, 128);
    // speed can vanish by symmetry; measure it against √P as well
    let du = (u2 - u1).abs() / u2.abs().max(p2.abs().sqrt()).max(1e-300);
    let dp = (p2 - p1).abs() / p2.abs().max(1e-300);
    if du > 1e-8 || dp > 1e-8 {
        return Err(Error::numerical(
            "squirmer_modes",
            format!("period average not converged on refinement (speed {du:.2e}, power {dp:.2e})"),
        ));
    }
    Ok(OscillationCoefficients::from_speed_power(u2, p2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub record: PerformanceRecord,
    pub coefficients: OscillationCoefficients,
    pub validity: QuasiStatic,
    pub warnings: Vec<String>,
}

pub fn oscillation_analysis(spec: &ModeSpectrum, scenario: &Scenario) -> Result<OscillationReport> {
    spec.validate()?;
    let coefficients = oscillation_coefficients(spec)?;
    let validity = quasistatic_validity(scenario, spec.omega.max(f64::MIN_POSITIVE))?;
    let mut warnings = Vec::new();
    if validity.womersley >= 0.5 {
        return Err(Error::Unsupported(format!(
            "Womersley number {:.3} too large for the quasi-static expansion",
            validity.womersley
        )));
    }
    if validity.womersley > 0.2 {
        warnings.push(format!(
            "Womersley number {:.3} above 0.2; quasi-static accuracy degrades",
            validity.womersley
        ));
    }
    let (a, eta, eps, w) = (scenario.a, scenario.eta, spec.epsilon, spec.omega);
    let record = if eps == 0.0 || w == 0.0 {
        PerformanceRecord::default()
    } else {
        let u = coefficients.c_u * a * eps * eps * w;
        let p = coefficients.c_p * a.powi(3) * eps * eps * eta * w * w;
        PerformanceRecord::from_speed_power(a, eta, u, p)?
    };
    Ok(OscillationReport {
        record,
        coefficients,
        validity,
        warnings,
    })
}

pub fn oscillation_performance(spec: &ModeSpectrum, scenario: &Scenario) -> Result<PerformanceRecord> {
    if spec.epsilon == 0.0 {
        spec.validate()?;
        return Ok(PerformanceRecord::default());
    }
    Ok(oscillation_analysis(spec, scenario)?.record)
}

/// Normalized optimal spectrum driven at the frequency that gives the
/// scenario's target speed.
pub fn spectrum_for_scenario(k: usize, p: usize, epsilon: f64, scenario: &Scenario) -> Result<(ModeSpectrum, OscillationCoefficients)> {
    let spec = normalize_spectrum(&optimal_spectrum(k, p)?, scenario.a)?;
    let coeffs = oscillation_coefficients(&spec)?;
    let omega = coeffs.omega_for_speed(scenario.u, scenario.a, epsilon)?;
    Ok((spec.with_scale(epsilon, omega), coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn reference() -> ModeSpectrum {
        normalize_spectrum(&optimal_spectrum(10, 10).unwrap(), 1e-6).unwrap()
    }

    #[test]
    fn optimal_amplitudes() {
        let s = optimal_spectrum(10, 10).unwrap();
        assert_eq!(s.modes.len(), 11);
        let m = s.modes[0];
        assert_eq!(m.n, 10);
        assert_relative_eq!(m.a, 0.6249, epsilon = 1e-4);
        assert_relative_eq!(m.b, 0.2588, epsilon = 1e-4);
        assert_eq!(m.gamma, 0.0);
        let s = optimal_spectrum(2, 0).unwrap();
        assert_eq!(s.modes.len(), 1);
        assert_relative_eq!(s.modes[0].a, 1.0 + SQRT_2, epsilon = 1e-15);
        assert!(optimal_spectrum(1, 3).is_err());
    }

    #[test]
    fn spectrum_json_round_trip() {
        let s = reference().with_scale(0.05, 1200.0);
        let text = s.to_json();
        assert!(text.contains("\"A\"") && text.contains("\"gamma\""));
        assert_eq!(ModeSpectrum::from_json(&text).unwrap(), s);
        assert!(ModeSpectrum::from_json(r#"{"epsilon":0.1,"omega":1,"modes":[{"n":1,"A":1,"B":0,"gamma":0,"eta":0}]}"#).is_err());
        assert!(ModeSpectrum::from_json(r#"{"epsilon":0.1,"omega":1,"modes":[{"n":3,"A":1,"B":0,"gamma":0,"eta":0},{"n":3,"A":1,"B":0,"gamma":0,"eta":0}]}"#).is_err());
    }

    #[test]
    fn surface_state_examples() {
        let s = reference().with_scale(0.0, 100.0);
        let st = surface_state(&s, 1e-6, 0.7, 0.003);
        assert_eq!(st.r, 1e-6);
        assert_eq!(st.theta, 0.7);
        let s = reference().with_scale(0.05, 100.0);
        for t in [0.0, 0.01, 0.02] {
            assert_eq!(surface_state(&s, 1e-6, 0.0, t).theta, 0.0);
        }
    }

    #[test]
    fn normalized_peak_is_fifty_nanometres() {
        let s = reference().with_scale(0.05, 1.0);
        let a = 1e-6;
        // brute force over a (ϑ, t) grid
        let mut best: f64 = 0.0;
        let mut best_th = 0.0;
        for i in 0..=2000 {
            let th = PI * i as f64 / 2000.0;
            for j in 0..256 {
                let t = 2.0 * PI * j as f64 / 256.0;
                let st = surface_state(&s, a, th, t);
                let d = ((st.r - a).powi(2) + (a * (st.theta - th)).powi(2)).sqrt();
                if d > best {
                    best = d;
                    best_th = th;
                }
            }
        }
        assert!((best / 50e-9 - 1.0).abs() < 2e-3, "{best}");
        assert!(best <= 50e-9 * (1.0 + 1e-9));
        // largest motion near the equator
        assert!((best_th - PI / 2.0).abs() < 0.35, "{best_th}");
    }

    #[test]
    fn normalize_single_mode_at_pole() {
        let s = ModeSpectrum::new(0.05, 1.0, vec![Mode { n: 2, a: 1.0, b: 0.0, gamma: 0.0, eta: 0.0 }]).unwrap();
        let n = normalize_spectrum(&s, 1e-6).unwrap();
        assert_relative_eq!(n.modes[0].a, 1.0, max_relative = 1e-12);
        assert_relative_eq!(n.peak_displacement_at(0.0), 1.0, max_relative = 1e-12);
        let zero = ModeSpectrum::new(0.05, 1.0, vec![Mode { n: 2, a: 0.0, b: 0.0, gamma: 0.0, eta: 0.0 }]).unwrap();
        assert!(normalize_spectrum(&zero, 1e-6).is_err());
    }

    #[test]
    fn quasistatic_examples() {
        let low = Scenario::low();
        let q = quasistatic_validity(&low, 2.0 * PI * 2000.0).unwrap();
        assert!((q.delta / 12.6e-6 - 1.0).abs() < 0.01);
        assert!((q.womersley - 0.11).abs() < 0.01);
        let high = Scenario::high();
        let q = quasistatic_validity(&high, 2.0 * PI * 20.0).unwrap();
        assert!((q.delta / 13000e-6 - 1.0).abs() < 0.05);
        assert!((q.womersley / 1e-4 - 1.0).abs() < 0.15);
        let q4 = quasistatic_validity(&high, 4.0 * 2.0 * PI * 20.0).unwrap();
        assert_relative_eq!(q4.delta, 0.5 * q.delta, max_relative = 1e-12);
        assert!(quasistatic_validity(&high, 0.0).is_err());
    }

    #[test]
    fn table5_coefficients() {
        let c = oscillation_coefficients(&reference()).unwrap();
        assert!((c.c_u / 3.29 - 1.0).abs() < 0.01, "{c:?}");
        assert!((c.c_p / 65.5 - 1.0).abs() < 0.01, "{c:?}");
        assert!((c.c_eff / 3.12 - 1.0).abs() < 0.01, "{c:?}");
        assert!((c.c_t / 62.1 - 1.0).abs() < 0.01, "{c:?}");
    }

    #[test]
    fn table5_low_scenario() {
        let low = Scenario::low();
        let spec = reference().with_scale(0.05, 2.0 * PI * 2000.0);
        let rec = oscillation_performance(&spec, &low).unwrap();
        assert!((rec.speed / 100e-6 - 1.0).abs() < 0.06);
        assert!((rec.propel_power / 0.025e-12 - 1.0).abs() < 0.1);
        assert!((rec.efficiency / 0.008 - 1.0).abs() < 0.1);
        assert!((rec.thrust / 1.9e-12 - 1.0).abs() < 0.06);
        assert_eq!(
            oscillation_performance(&spec.clone().with_scale(0.0, 1.0), &low).unwrap(),
            PerformanceRecord::default()
        );
    }

    #[test]
    fn unnormalized_is_rejected() {
        let s = optimal_spectrum(10, 10).unwrap();
        assert!(matches!(oscillation_performance(&s, &Scenario::low()), Err(Error::InvalidState(_))));
    }

    #[test]
    fn radial_only_swims_slower() {
        let full = oscillation_coefficients(&reference()).unwrap();
        let radial = normalize_spectrum(&reference().radial_only(), 1e-6).unwrap();
        let r = oscillation_coefficients(&radial).unwrap();
        let ratio = r.c_u / full.c_u;
        assert!((ratio / 0.6 - 1.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn reversed_phases_reverse_speed() {
        let c = oscillation_coefficients(&reference()).unwrap();
        let r = oscillation_coefficients(&reference().reversed()).unwrap();
        assert_relative_eq!(r.c_u, -c.c_u, max_relative = 1e-9);
        assert_relative_eq!(r.c_p, c.c_p, max_relative = 1e-9);
    }

    #[test]
    fn standing_mode_does_not_swim() {
        let s = normalize_spectrum(&optimal_spectrum(2, 0).unwrap(), 1e-6).unwrap();
        let c = oscillation_coefficients(&s).unwrap();
        assert!(c.c_u.abs() < 1e-10 * c.c_p, "{c:?}");
    }

    #[test]
    fn high_womersley_is_rejected() {
        let low = Scenario::low();
        let spec = reference().with_scale(0.05, 1e6);
        assert!(matches!(oscillation_performance(&spec, &low), Err(Error::Unsupported(_))));
        let report = oscillation_analysis(&reference().with_scale(0.05, 0.1e6), &low).unwrap();
        assert_eq!(report.warnings.len(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn velocity_is_time_derivative(th in 0.01f64..3.13, t in 0.0f64..1.0) {
            let s = reference().with_scale(0.05, 7.0);
            let a = 1e-6;
            let period = 2.0 * PI / 7.0;
            let h = 1e-6 * period;
            let p = surface_state(&s, a, th, t + h);
            let m = surface_state(&s, a, th, t - h);
            let c = surface_state(&s, a, th, t);
            let vr = (p.r - m.r) / (2.0 * h);
            let vt = c.r * (p.theta - m.theta) / (2.0 * h);
            let scale = a * 0.05 * 7.0;
            prop_assert!((vr - c.velocity.0).abs() < 1e-5 * scale);
            prop_assert!((vt - c.velocity.1).abs() < 1e-5 * scale);
        }

        #[test]
        fn normalization_is_scale_invariant(k in 0.1f64..10.0) {
            let s = optimal_spectrum(4, 3).unwrap();
            let a = normalize_spectrum(&s, 1e-6).unwrap();
            let b = normalize_spectrum(&s.scaled(k), 1e-6).unwrap();
            for (x, y) in a.modes.iter().zip(&b.modes) {
                prop_assert!((x.a - y.a).abs() < 1e-10 * x.a.max(1e-12));
                prop_assert!((x.b - y.b).abs() < 1e-10 * x.b.max(1e-12));
            }
        }

        #[test]
        fn scaling_laws(eps in 0.005f64..0.08, w in 10.0f64..5000.0, eta in 1e-3f64..10.0) {
            let sc = Scenario::low().with_viscosity(eta).unwrap();
            let base = reference();
            let r1 = oscillation_performance(&base.clone().with_scale(eps, w), &sc).unwrap();
            let r2 = oscillation_performance(&base.clone().with_scale(2.0 * eps, 3.0 * w), &sc).unwrap();
            prop_assert!((r2.speed / (12.0 * r1.speed) - 1.0).abs() < 1e-9);
            prop_assert!((r2.propel_power / (36.0 * r1.propel_power) - 1.0).abs() < 1e-9);
            prop_assert!((r2.thrust / (12.0 * r1.thrust) - 1.0).abs() < 1e-9);
            let r3 = oscillation_performance(&base.clone().with_scale(eps, 3.0 * w), &sc).unwrap();
            prop_assert!((r3.efficiency / r1.efficiency - 1.0).abs() < 1e-9);
        }
    }
}

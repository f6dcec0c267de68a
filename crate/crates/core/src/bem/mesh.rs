//! Generatrix curves and their element meshes.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::numerics::GaussLegendre;

/// Meridian curve of a body of revolution, parameter t ∈ [0, π] running
/// from the north pole (t = 0) to the south pole.
pub trait Generatrix: Sync {
    /// (ρ, z).
    fn point(&self, t: f64) -> [f64; 2];
    /// d(ρ, z)/dt.
    fn derivative(&self, t: f64) -> [f64; 2];

    fn speed(&self, t: f64) -> f64 {
        let d = self.derivative(t);
        d[0].hypot(d[1])
    }

    /// Outward unit normal.
    fn normal(&self, t: f64) -> [f64; 2] {
        let d = self.derivative(t);
        let s = d[0].hypot(d[1]);
        [-d[1] / s, d[0] / s]
    }

    /// Unit tangent in the direction of increasing t.
    fn tangent(&self, t: f64) -> [f64; 2] {
        let d = self.derivative(t);
        let s = d[0].hypot(d[1]);
        [d[0] / s, d[1] / s]
    }
}

/// Prolate spheroid with semi-major axis `a` along the symmetry axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpheroidShape {
    pub a: f64,
    pub b: f64,
}

impl SpheroidShape {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        ensure_positive("b", b)?;
        ensure_positive("a", a)?;
        if a < b {
            return Err(Error::param("a", format!("semi-major axis {a:e} is smaller than semi-minor {b:e}")));
        }
        Ok(SpheroidShape { a, b })
    }

    pub fn sphere(a: f64) -> Result<Self> {
        Self::new(a, a)
    }

    pub fn is_sphere(&self) -> bool {
        self.a == self.b
    }

    pub fn eccentricity(&self) -> f64 {
        (1.0 - (self.b / self.a).powi(2)).max(0.0).sqrt()
    }

    pub fn volume(&self) -> f64 {
        4.0 / 3.0 * PI * self.a * self.b * self.b
    }

    pub fn area(&self) -> f64 {
        let e = self.eccentricity();
        // asin(e)/e, with its series near the sphere
        let ratio = if e < 1e-4 { 1.0 + e * e / 6.0 + 3.0 * e.powi(4) / 40.0 } else { e.asin() / e };
        2.0 * PI * self.b * self.b + 2.0 * PI * self.a * self.b * ratio
    }

    /// Area of the zone between t and π − t.
    pub fn zone_area(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 0.5 * PI);
        let rule = GaussLegendre::cached(64);
        2.0 * rule.integrate(t, 0.5 * PI, |s| 2.0 * PI * self.point(s)[0] * self.speed(s))
    }

    /// Parameter t of the symmetric equatorial zone with the given area.
    pub fn zone_for_area(&self, area: f64) -> Result<f64> {
        let total = self.area();
        if !(0.0..=total * (1.0 + 1e-12)).contains(&area) {
            return Err(Error::param("S_p", format!("band area {area:e} outside [0, {total:e}]")));
        }
        let (mut lo, mut hi) = (0.0, 0.5 * PI);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.zone_area(mid) > area {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

impl Generatrix for SpheroidShape {
    fn point(&self, t: f64) -> [f64; 2] {
        [self.b * t.sin(), self.a * t.cos()]
    }

    fn derivative(&self, t: f64) -> [f64; 2] {
        [self.b * t.cos(), -self.a * t.sin()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub t0: f64,
    pub t1: f64,
    /// Collocation parameter.
    pub tc: f64,
    pub mid: [f64; 2],
    pub normal: [f64; 2],
    pub length: f64,
}

/// One quadrature point on an element; `weight` includes ρ dl.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPoint {
    pub t: f64,
    pub x: [f64; 2],
    pub normal: [f64; 2],
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct BemMesh {
    pub elements: Vec<Element>,
    pub arc_length: f64,
}

const ARC_RULE: usize = 24;
const ARC_PANELS: usize = 16;

fn arc_between(curve: &dyn Generatrix, rule: &GaussLegendre, t0: f64, t1: f64) -> f64 {
    let h = (t1 - t0) / ARC_PANELS as f64;
    (0..ARC_PANELS)
        .map(|i| {
            let lo = t0 + h * i as f64;
            rule.integrate(lo, lo + h, |t| curve.speed(t))
        })
        .sum()
}

/// Parameter at arc length `s` past t0 (s within the piece).
fn invert_arc(curve: &dyn Generatrix, rule: &GaussLegendre, t0: f64, t1: f64, s: f64) -> f64 {
    let (mut lo, mut hi) = (t0, t1);
    let mut t = t0 + (t1 - t0) * s / arc_between(curve, rule, t0, t1);
    for _ in 0..60 {
        let f = arc_between(curve, rule, t0, t) - s;
        let step = f / curve.speed(t).max(1e-300);
        if step.abs() < 1e-15 * (t1 - t0) {
            break;
        }
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let next = t - step;
        t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-15 {
            break;
        }
    }
    t
}

impl BemMesh {
    /// Elements of (nearly) equal arc length, with element edges at every
    /// parameter in `breaks`.
    pub fn arc_length(curve: &dyn Generatrix, n: usize, breaks: &[f64]) -> Result<Self> {
        let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&t| t > 0.0 && t < PI).collect();
        cuts.push(0.0);
        cuts.push(PI);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
        let pieces = cuts.len() - 1;
        if n < pieces {
            return Err(Error::param("N", format!("{n} elements cannot resolve {pieces} pieces")));
        }
        let rule = GaussLegendre::cached(ARC_RULE);
        let lengths: Vec<f64> = cuts.windows(2).map(|w| arc_between(curve, &rule, w[0], w[1])).collect();
        let total: f64 = lengths.iter().sum();
        // largest-remainder split of n across pieces, at least one each
        let mut counts: Vec<usize> = lengths.iter().map(|l| ((n as f64 * l / total).floor() as usize).max(1)).collect();
        while counts.iter().sum::<usize>() > n {
            let i = (0..pieces).filter(|&i| counts[i] > 1).max_by(|&i, &j| {
                (counts[i] as f64 / lengths[i]).total_cmp(&(counts[j] as f64 / lengths[j]))
            });
            counts[i.expect("n >= pieces")] -= 1;
        }
        while counts.iter().sum::<usize>() < n {
            let i = (0..pieces)
                .min_by(|&i, &j| (counts[i] as f64 / lengths[i]).total_cmp(&(counts[j] as f64 / lengths[j])))
                .expect("at least one piece");
            counts[i] += 1;
        }
        let mut nodes = vec![0.0];
        let mut colloc = Vec::with_capacity(n);
        for (p, w) in cuts.windows(2).enumerate() {
            let h = lengths[p] / counts[p] as f64;
            let mut prev = w[0];
            for k in 0..counts[p] {
                colloc.push(invert_arc(curve, &rule, w[0], w[1], h * (k as f64 + 0.5)));
                let next = if k + 1 == counts[p] { w[1] } else { invert_arc(curve, &rule, w[0], w[1], h * (k + 1) as f64) };
                nodes.push(next);
                prev = next;
            }
            debug_assert_eq!(prev, w[1]);
        }
        Self::from_nodes(curve, &nodes, Some(&colloc))
    }

    /// Elements uniform in the curve parameter.
    pub fn uniform_parameter(curve: &dyn Generatrix, n: usize) -> Result<Self> {
        let nodes: Vec<f64> = (0..=n).map(|i| PI * i as f64 / n as f64).collect();
        Self::from_nodes(curve, &nodes, None)
    }

    /// Elements between consecutive parameter nodes; collocation at the given
    /// parameters or at parameter midpoints.
    pub fn from_nodes(curve: &dyn Generatrix, nodes: &[f64], colloc: Option<&[f64]>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::param("N", "need at least two elements"));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Geometry("element nodes are not increasing".into()));
        }
        let rule = GaussLegendre::cached(ARC_RULE);
        let mut elements = Vec::with_capacity(nodes.len() - 1);
        for (i, w) in nodes.windows(2).enumerate() {
            let tc = colloc.map_or(0.5 * (w[0] + w[1]), |c| c[i]);
            let length = arc_between(curve, &rule, w[0], w[1]);
            elements.push(Element {
                t0: w[0],
                t1: w[1],
                tc,
                mid: curve.point(tc),
                normal: curve.normal(tc),
                length,
            });
        }
        let arc_length = elements.iter().map(|e| e.length).sum();
        let mesh = BemMesh { elements, arc_length };
        mesh.check_simple(curve)?;
        Ok(mesh)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Reject generatrices that cross themselves or the axis.
    fn check_simple(&self, curve: &dyn Generatrix) -> Result<()> {
        let per = 4;
        let mut poly = Vec::with_capacity(self.len() * per + 1);
        for e in &self.elements {
            for k in 0..per {
                poly.push(curve.point(e.t0 + (e.t1 - e.t0) * k as f64 / per as f64));
            }
        }
        poly.push(curve.point(PI));
        let scale = self.arc_length;
        for (i, p) in poly.iter().enumerate().skip(1).take(poly.len() - 2) {
            if p[0] <= 0.0 {
                return Err(Error::Geometry(format!("generatrix touches the axis at point {i}")));
            }
        }
        let m = poly.len() - 1;
        for i in 0..m {
            for j in i + 2..m {
                if i == 0 && j == m - 1 {
                    continue;
                }
                if segments_cross(poly[i], poly[i + 1], poly[j], poly[j + 1], 1e-14 * scale) {
                    return Err(Error::Geometry(format!("generatrix self-intersects between segments {i} and {j}")));
                }
            }
        }
        Ok(())
    }

    /// Quadrature points for integrating over element `e` as seen from the
    /// collocation point of element `row`.
    pub fn quadrature(&self, curve: &dyn Generatrix, e: usize, row: usize) -> Vec<QuadPoint> {
        let el = &self.elements[e];
        let x0 = self.elements[row].mid;
        let mut out = Vec::new();
        let mut push = |t: f64, dt: f64| {
            let x = curve.point(t);
            out.push(QuadPoint { t, x, normal: curve.normal(t), weight: dt * curve.speed(t) * x[0] });
        };
        if e == row {
            let rule = GaussLegendre::cached(SELF_POINTS);
            for (sign, len) in [(-1.0, el.tc - el.t0), (1.0, el.t1 - el.tc)] {
                for (u, w) in rule.mapped(0.0, 1.0) {
                    push(el.tc + sign * len * u * u * u, w * 3.0 * len * u * u);
                }
            }
            return out;
        }
        let d0 = dist(x0, curve.point(el.t0));
        let d1 = dist(x0, curve.point(el.t1));
        let near = d0.min(d1);
        let h = el.t1 - el.t0;
        if near < 0.25 * el.length {
            // grade toward the end closest to x0
            let rule = GaussLegendre::cached(NEAR_POINTS);
            let (start, sign) = if d0 <= d1 { (el.t0, 1.0) } else { (el.t1, -1.0) };
            for (u, w) in rule.mapped(0.0, 1.0) {
                push(start + sign * h * u * u * u, w * 3.0 * h * u * u);
            }
        } else {
            let points = if near < 3.0 * el.length {
                NEAR_POINTS
            } else if near < 10.0 * el.length {
                FAR_POINTS
            } else {
                DISTANT_POINTS
            };
            let rule = GaussLegendre::cached(points);
            for (t, w) in rule.mapped(el.t0, el.t1) {
                push(t, w);
            }
        }
        out
    }

    /// Area-weighted integral 2π ∫ g ρ dl over element e.
    pub fn element_integral(&self, curve: &dyn Generatrix, e: usize, mut g: impl FnMut(f64) -> f64) -> f64 {
        let el = &self.elements[e];
        let rule = GaussLegendre::cached(FAR_POINTS);
        2.0 * PI * rule.integrate(el.t0, el.t1, |t| g(t) * curve.speed(t) * curve.point(t)[0])
    }

    /// Diagnostic dump of the mesh.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("element,t0,t1,rho_mid_m,z_mid_m,n_rho,n_z,length_m\n");
        for (i, e) in self.elements.iter().enumerate() {
            let _ = writeln!(
                s,
                "{i},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                e.t0, e.t1, e.mid[0], e.mid[1], e.normal[0], e.normal[1], e.length
            );
        }
        s
    }
}

const SELF_POINTS: usize = 16;
const NEAR_POINTS: usize = 16;
const FAR_POINTS: usize = 8;
const DISTANT_POINTS: usize = 4;

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2], tol: f64) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    let tol2 = tol * tol;
    ((d1 > tol2 && d2 < -tol2) || (d1 < -tol2 && d2 > tol2)) && ((d3 > tol2 && d4 < -tol2) || (d3 < -tol2 && d4 > tol2))
}

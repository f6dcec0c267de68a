//! Quadrature rules, Legendre functions and complete elliptic integrals.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const CACHED_RULES: usize = 256;

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            // Tricomi initial guess, then Newton
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared rule for n ≤ 256, built on first use.
    pub fn cached(n: usize) -> &'static GaussLegendre {
        static RULES: [OnceLock<GaussLegendre>; CACHED_RULES + 1] = [const { OnceLock::new() }; CACHED_RULES + 1];
        assert!(n <= CACHED_RULES, "no cached rule with {n} nodes");
        RULES[n].get_or_init(|| GaussLegendre::new(n))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to [lo, hi].
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(lo, hi).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre over the given breakpoints.
pub fn integrate_pieces(rule: &GaussLegendre, breaks: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
    breaks
        .windows(2)
        .map(|w| rule.integrate(w[0], w[1], &mut f))
        .sum()
}

/// Legendre polynomials P_0..=P_nmax and derivatives P'_n at x.
///
/// The derivative recurrence P'_n = P'_{n-2} + (2n-1) P_{n-1} stays finite at
/// the poles where the usual (x²-1) division does not.
#[derive(Debug, Clone)]
pub struct LegendreTable {
    pub x: f64,
    pub p: Vec<f64>,
    pub dp: Vec<f64>,
}

impl LegendreTable {
    pub fn new(nmax: usize, x: f64) -> Self {
        let mut p = vec![0.0; nmax + 1];
        let mut dp = vec![0.0; nmax + 1];
        p[0] = 1.0;
        if nmax >= 1 {
            p[1] = x;
            dp[1] = 1.0;
        }
        for n in 2..=nmax {
            let nf = n as f64;
            p[n] = ((2.0 * nf - 1.0) * x * p[n - 1] - (nf - 1.0) * p[n - 2]) / nf;
            dp[n] = dp[n - 2] + (2.0 * nf - 1.0) * p[n - 1];
        }
        LegendreTable { x, p, dp }
    }

    pub fn nmax(&self) -> usize {
        self.p.len() - 1
    }

    fn sin(&self) -> f64 {
        (1.0 - self.x * self.x).max(0.0).sqrt()
    }

    /// Associated function P_n^1(cos θ) = -sin θ P_n'(cos θ).
    pub fn p1(&self, n: usize) -> f64 {
        -self.sin() * self.dp[n]
    }

    /// d/dθ of P_n^1(cos θ) = x P_n' - n(n+1) P_n.
    pub fn dp1_dtheta(&self, n: usize) -> f64 {
        let nf = n as f64;
        self.x * self.dp[n] - nf * (nf + 1.0) * self.p[n]
    }

    /// d/dθ of P_n(cos θ), which equals P_n^1.
    pub fn dp_dtheta(&self, n: usize) -> f64 {
        self.p1(n)
    }
}

/// (P_n(x), V_n(x)) with V_n = P_n^1 / (n+1).
pub fn legendre_pair(n: usize, x: f64) -> Result<(f64, f64)> {
    if !(x.abs() <= 1.0) {
        return Err(Error::param("x", format!("must lie in [-1, 1], got {x}")));
    }
    let t = LegendreTable::new(n, x);
    Ok((t.p[n], t.p1(n) / (n as f64 + 1.0)))
}

/// Complete elliptic integrals K(m) and E(m), parameter m = k², by the
/// arithmetic-geometric mean.
pub fn elliptic_ke(m: f64) -> (f64, f64) {
    debug_assert!((0.0..1.0).contains(&m));
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    let mut c = m.sqrt();
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    for _ in 0..40 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        pow *= 2.0;
        sum += pow * c * c;
        a = an;
        b = bn;
        if c.abs() < 1e-16 * a {
            break;
        }
    }
    let k = PI / (2.0 * a);
    (k, k * (1.0 - sum))
}

/// Sample points 0..n-1 of a uniform periodic grid on [0, period).
pub fn periodic_grid(n: usize, period: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| period * i as f64 / n as f64)
}

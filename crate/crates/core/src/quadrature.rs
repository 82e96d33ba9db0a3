//! Adaptive quadrature on finite intervals, the half line and the whole line.
//!
//! The default rule is double-exponential: tanh-sinh on `[a, b]`, exp-sinh on
//! `[a, ∞)` and sinh-sinh on `ℝ`. Each level halves the step and reuses all
//! previous nodes, so the level-to-level difference is a cheap error estimate.
//! A mapped Gauss–Legendre rule is available as an independent cross-check.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Highest refinement level before giving up.
pub const MAX_LEVEL: usize = 12;
/// Levels required before the error estimate is trusted.
const MIN_LEVEL: usize = 3;
/// Estimates below this many ulps of `∫|f|` are rounding noise.
const NOISE_ULPS: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Domain {
    Finite(f64, f64),
    /// `[a, ∞)`
    HalfLine(f64),
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadMethod {
    TanhSinh,
    GaussLegendreMapped,
    GammaExpansion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub method: QuadMethod,
    pub evaluations: usize,
    /// Largest term over the result, for cancellation-prone expansions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub tol: f64,
    pub method: QuadMethod,
    pub max_level: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            method: QuadMethod::TanhSinh,
            max_level: MAX_LEVEL,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Integrates `f` over `domain` with the default double-exponential rule.
pub fn integrate_line<F>(f: F, domain: Domain, tol: f64) -> Result<IntegralResult>
where
    F: FnMut(f64) -> Complex64,
{
    integrate(f, domain, QuadOptions::with_tol(tol))
}

pub fn integrate<F>(f: F, domain: Domain, opts: QuadOptions) -> Result<IntegralResult>
where
    F: FnMut(f64) -> Complex64,
{
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Error::invalid(format!("quadrature tolerance must be positive, got {}", opts.tol)));
    }
    match domain {
        Domain::Finite(a, b) if !(a.is_finite() && b.is_finite()) => {
            return Err(Error::invalid("finite domain needs finite endpoints"))
        }
        Domain::HalfLine(a) if !a.is_finite() => return Err(Error::invalid("half-line start must be finite")),
        _ => {}
    }
    if let Domain::Finite(a, b) = domain {
        if a == b {
            return Ok(IntegralResult {
                value: Complex64::new(0.0, 0.0),
                abs_error_estimate: 0.0,
                method: opts.method,
                evaluations: 0,
                condition: None,
            });
        }
        if a > b {
            let mut r = integrate(f, Domain::Finite(b, a), opts)?;
            r.value = -r.value;
            return Ok(r);
        }
    }
    match opts.method {
        QuadMethod::TanhSinh => double_exponential(f, domain, opts),
        QuadMethod::GaussLegendreMapped => gauss_legendre_mapped(f, domain, opts),
        QuadMethod::GammaExpansion => Err(Error::invalid(
            "the Gamma expansion is not a general-purpose quadrature rule",
        )),
    }
}

fn converged(estimate: f64, value: Complex64, l1: f64, tol: f64) -> bool {
    estimate <= (tol * value.norm().max(1.0)).max(NOISE_ULPS * f64::EPSILON * l1)
}

fn checked(f: &mut impl FnMut(f64) -> Complex64, x: f64) -> Result<Complex64> {
    let y = f(x);
    if y.re.is_finite() && y.im.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFiniteIntegrand(x))
    }
}

/// Node abscissa and Jacobian `dx/dt` at parameter `t`, or `None` when the
/// node collapses onto a finite endpoint in floating point.
fn de_node(domain: Domain, t: f64) -> Option<(f64, f64)> {
    let u = FRAC_PI_2 * t.sinh();
    let du = FRAC_PI_2 * t.cosh();
    match domain {
        Domain::Finite(a, b) => {
            let half = 0.5 * (b - a);
            // Distance to the nearer endpoint, r(1 − tanh|u|) = r e^{−|u|}/cosh u,
            // computed without cancellation.
            let offset = half * (-u.abs()).exp() / u.cosh();
            let x = if u < 0.0 { a + offset } else { b - offset };
            if x <= a || x >= b {
                return None;
            }
            let sech = 1.0 / u.cosh();
            Some((x, half * du * sech * sech))
        }
        Domain::HalfLine(a) => {
            let e = u.exp();
            let x = a + e;
            if x <= a || !x.is_finite() {
                return None;
            }
            Some((x, du * e))
        }
        Domain::Line => {
            let x = u.sinh();
            if !x.is_finite() {
                return None;
            }
            Some((x, du * u.cosh()))
        }
    }
}

fn de_tmax(domain: Domain) -> f64 {
    match domain {
        Domain::Finite(..) => 4.0,
        Domain::HalfLine(_) => 4.0,
        Domain::Line => 3.5,
    }
}

fn double_exponential<F>(mut f: F, domain: Domain, opts: QuadOptions) -> Result<IntegralResult>
where
    F: FnMut(f64) -> Complex64,
{
    let tmax = de_tmax(domain);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut l1 = 0.0;
    let mut evaluations = 0usize;
    let mut trace = Vec::new();
    let mut previous: Option<Complex64> = None;

    let mut add_node = |t: f64, sum: &mut Complex64, l1: &mut f64, evals: &mut usize| -> Result<()> {
        if let Some((x, w)) = de_node(domain, t) {
            let y = checked(&mut f, x)? * w;
            *evals += 1;
            *sum += y;
            *l1 += y.norm();
        }
        Ok(())
    };

    // Level 0: integer t.
    let k0 = tmax.floor() as i64;
    for k in -k0..=k0 {
        add_node(k as f64, &mut sum, &mut l1, &mut evaluations)?;
    }
    let mut h = 1.0;
    for level in 0..=opts.max_level {
        if level > 0 {
            h *= 0.5;
            let odd = (tmax / h).floor() as i64;
            let mut j = -odd;
            if j % 2 == 0 {
                j += 1;
            }
            while j <= odd {
                add_node(j as f64 * h, &mut sum, &mut l1, &mut evaluations)?;
                j += 2;
            }
        }
        let value = sum * h;
        if let Some(prev) = previous {
            let estimate = (value - prev).norm();
            trace.push(estimate);
            if level >= MIN_LEVEL && converged(estimate, value, l1 * h, opts.tol) {
                return Ok(IntegralResult {
                    value,
                    abs_error_estimate: estimate,
                    method: QuadMethod::TanhSinh,
                    evaluations,
                    condition: None,
                });
            }
        }
        previous = Some(value);
    }
    Err(Error::Quadrature {
        level: opts.max_level,
        estimate: *trace.last().unwrap_or(&f64::INFINITY),
        trace,
    })
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 0 { 0.0 } else { p0 };
            dp = nf * (x * p - pm1) / (x * x - 1.0);
            let step = p / dp;
            x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
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
    (nodes, weights)
}

/// Maps `s ∈ (−1, 1)` onto the domain; returns `(x, dx/ds)`.
fn gl_map(domain: Domain, s: f64) -> (f64, f64) {
    match domain {
        Domain::Finite(a, b) => (0.5 * (a + b) + 0.5 * (b - a) * s, 0.5 * (b - a)),
        Domain::HalfLine(a) => (a + (1.0 + s) / (1.0 - s), 2.0 / ((1.0 - s) * (1.0 - s))),
        Domain::Line => {
            let d = 1.0 - s * s;
            (s / d, (1.0 + s * s) / (d * d))
        }
    }
}

fn gl_points(level: usize) -> usize {
    16 * (level + 1) * (level + 1)
}

fn gauss_legendre_mapped<F>(mut f: F, domain: Domain, opts: QuadOptions) -> Result<IntegralResult>
where
    F: FnMut(f64) -> Complex64,
{
    let mut previous: Option<Complex64> = None;
    let mut trace = Vec::new();
    let mut evaluations = 0;
    for level in 0..=opts.max_level {
        let (nodes, weights) = gauss_legendre(gl_points(level));
        let mut value = Complex64::new(0.0, 0.0);
        let mut l1 = 0.0;
        for (&s, &w) in nodes.iter().zip(&weights) {
            let (x, jac) = gl_map(domain, s);
            let y = checked(&mut f, x)? * (w * jac);
            evaluations += 1;
            value += y;
            l1 += y.norm();
        }
        if let Some(prev) = previous {
            let estimate = (value - prev).norm();
            trace.push(estimate);
            if level >= 2 && converged(estimate, value, l1, opts.tol) {
                return Ok(IntegralResult {
                    value,
                    abs_error_estimate: estimate,
                    method: QuadMethod::GaussLegendreMapped,
                    evaluations,
                    condition: None,
                });
            }
        }
        previous = Some(value);
    }
    Err(Error::Quadrature {
        level: opts.max_level,
        estimate: *trace.last().unwrap_or(&f64::INFINITY),
        trace,
    })
}

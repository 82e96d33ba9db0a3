//! Gamma, confluent hypergeometric ₁F₁ and associated Laguerre polynomials
//! at complex argument.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative size of the last Maclaurin term at which ₁F₁ summation stops.
pub const HYP1F1_RTOL: f64 = 1e-15;
/// Hard cap on the number of ₁F₁ series terms.
pub const HYP1F1_MAX_TERMS: usize = 1_000_000;

/// Dense polynomial coefficients, index `k` is the power of the variable.
///
/// Trailing zero coefficients are trimmed on construction, so the last entry
/// is nonzero unless the polynomial is identically zero (stored as `[0]`).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs {
    coeffs: Vec<Complex64>,
}

impl PolyCoeffs {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![ZERO] }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `Σ |c_k| |z|^k`, the natural scale for rounding error in [`Self::eval`].
    pub fn eval_abs(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..len)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(ZERO) + other.coeffs.get(k).copied().unwrap_or(ZERO)
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Largest coefficient-wise distance to another polynomial.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|k| {
                (self.coeffs.get(k).copied().unwrap_or(ZERO) - other.coeffs.get(k).copied().unwrap_or(ZERO)).norm()
            })
            .fold(0.0, f64::max)
    }
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(w: Complex64) -> bool {
    w.im == 0.0 && w.re <= 0.0 && w.re == w.re.round()
}

/// `sin(πx)` with the argument reduced first so that integers give exact zeros.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

fn cos_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r.abs() == 0.5 {
        return 0.0;
    }
    (PI * r).cos()
}

fn gamma_real(x: f64) -> f64 {
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_real(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    // Split the power so that t^(x+1/2) cannot overflow before e^-t tames it.
    let half = t.powf(0.5 * (x + 0.5));
    (2.0 * PI).sqrt() * half * ((-t).exp() * half) * a
}

fn gamma_complex(w: Complex64) -> Complex64 {
    if w.re < 0.5 {
        let s = Complex64::new(
            sin_pi(w.re) * (PI * w.im).cosh(),
            cos_pi(w.re) * (PI * w.im).sinh(),
        );
        return PI / (s * gamma_complex(ONE - w));
    }
    let z = w - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * a
}

/// Γ(w) for complex `w`; real arguments take a purely real path.
pub fn gamma(w: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(w) {
        return Err(Error::Pole(w));
    }
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::invalid(format!("gamma argument {w} is not finite")));
    }
    if w.im == 0.0 {
        Ok(Complex64::new(gamma_real(w.re), 0.0))
    } else {
        Ok(gamma_complex(w))
    }
}

/// ₁F₁(a; b; z) by direct Maclaurin summation.
///
/// Terminating series (`a = −n`) are summed exactly to degree `n`, which is
/// allowed even when `b` is a non-positive integer provided the pole index
/// lies beyond the last term.
pub fn hyp1f1(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(a) {
        let n = (-a.re) as usize;
        let mut term = ONE;
        let mut sum = ONE;
        for k in 0..n {
            let bk = b + k as f64;
            if bk == ZERO {
                return Err(Error::Pole(b));
            }
            term *= (a + k as f64) / bk * z / (k + 1) as f64;
            sum += term;
        }
        return Ok(sum);
    }
    if is_nonpositive_integer(b) {
        return Err(Error::Pole(b));
    }
    let mut term = ONE;
    let mut sum = ONE;
    let mut small_run = 0;
    for k in 0..HYP1F1_MAX_TERMS {
        term *= (a + k as f64) / (b + k as f64) * z / (k + 1) as f64;
        sum += term;
        if !(sum.re.is_finite() && sum.im.is_finite()) {
            break;
        }
        // Two consecutive small terms guard against an accidental near-zero term.
        if term.norm() <= HYP1F1_RTOL * sum.norm() {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "hyp1f1 Maclaurin series",
        iterations: HYP1F1_MAX_TERMS,
    })
}

/// L_n^α(z) by the three-term recurrence in `n`.
pub fn laguerre(n: usize, alpha: Complex64, z: Complex64) -> Complex64 {
    let mut prev = ONE;
    if n == 0 {
        return prev;
    }
    let mut cur = ONE + alpha - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - z) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized binomial coefficient `binom(x, j)` as a falling product.
fn binomial(x: Complex64, j: usize) -> Complex64 {
    (0..j).fold(ONE, |acc, i| acc * (x - i as f64) / (i + 1) as f64)
}

/// Coefficients of L_n^α: `c_k = (−1)^k binom(n+α, n−k) / k!`.
pub fn laguerre_coeffs(n: usize, alpha: Complex64) -> PolyCoeffs {
    let top = alpha + n as f64;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut inv_fact = 1.0;
    for k in 0..=n {
        if k > 0 {
            inv_fact /= k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(binomial(top, n - k) * (sign * inv_fact));
    }
    PolyCoeffs::new(coeffs)
}

//! Closed-form bound states for the Morse, shifted oscillator and shifted
//! Eckart families.
//!
//! The oscillator (Hermite–Gaussian) and Eckart (sech-power times Gegenbauer)
//! eigenfunctions are the textbook real-line solutions continued to the
//! shifted argument `x − β − iγ`. All eigenfunctions are unnormalized.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{principal_sqrt, Family, PotentialSpec, KAPPA_HALF_MASS, KAPPA_UNIT_MASS};
use crate::special::laguerre;

/// States with `C − n` or `√(α+1/4) − 1/2 − n` at or below this are threshold states and dropped.
pub const THRESHOLD_TOL: f64 = 1e-12;
/// Largest |Im C| accepted as real.
pub const REAL_C_TOL: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Enough data to evaluate Ψ_n anywhere in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Eigenfunction {
    /// `z^{C−n} e^{−z/2} L_n^{2C−2n}(z)`, `z = 2√V₁ e^{−x}`.
    Morse { n: usize, c: f64, sqrt_v1: Complex64 },
    /// `H_n(u) e^{−u²/2}`, `u = x − β − iγ`.
    Hermite { n: usize, beta: f64, gamma: f64 },
    /// `sech^ε(u) C_n^{(ε+1/2)}(tanh u)`, `u = x − β − iγ`, `ε = √(α+1/4) − 1/2 − n`.
    Eckart { n: usize, epsilon: f64, beta: f64, gamma: f64 },
}

impl Eigenfunction {
    pub fn n(&self) -> usize {
        match *self {
            Eigenfunction::Morse { n, .. } | Eigenfunction::Hermite { n, .. } | Eigenfunction::Eckart { n, .. } => n,
        }
    }

    /// Ψ at complex `w`, continued analytically off the real axis.
    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        let v = match *self {
            Eigenfunction::Morse { sqrt_v1, .. } => {
                // ln z kept analytic in w instead of taking the principal log of z.
                let log_z = (2.0 * sqrt_v1).ln() - w;
                self.eval_log_z(log_z)
            }
            Eigenfunction::Hermite { n, beta, gamma } => {
                let u = w - beta - I * gamma;
                hermite(n, u) * (-0.5 * u * u).exp()
            }
            Eigenfunction::Eckart { n, epsilon, beta, gamma } => {
                let u = w - beta - I * gamma;
                (-epsilon * ln_cosh(u)).exp() * gegenbauer(n, epsilon + 0.5, tanh(u))
            }
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(w))
        }
    }

    pub fn eval_real(&self, x: f64) -> Result<Complex64> {
        self.eval(Complex64::new(x, 0.0))
    }

    /// Morse Ψ as a function of `ln z`; the form used for half-line integrals
    /// in `t = |z|`. Returns NaN for other families.
    pub fn eval_log_z(&self, log_z: Complex64) -> Complex64 {
        match *self {
            Eigenfunction::Morse { n, c, .. } => {
                let z = log_z.exp();
                let nf = n as f64;
                ((c - nf) * log_z - 0.5 * z).exp() * laguerre(n, Complex64::new(2.0 * c - 2.0 * nf, 0.0), z)
            }
            _ => Complex64::new(f64::NAN, f64::NAN),
        }
    }
}

/// Physicists' Hermite polynomial by recurrence.
pub fn hermite(n: usize, u: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * u;
    for k in 1..n {
        let next = 2.0 * u * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Gegenbauer polynomial `C_n^{(a)}(t)` by recurrence.
pub fn gegenbauer(n: usize, a: f64, t: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * a * t;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * t * (kf + a - 1.0) * cur - (kf + 2.0 * a - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    cur
}

/// `tanh u` without the overflow of `sinh/cosh` at large `|Re u|`.
fn tanh(u: Complex64) -> Complex64 {
    let (s, sign) = if u.re >= 0.0 { (u, 1.0) } else { (-u, -1.0) };
    let e = (-2.0 * s).exp();
    sign * (1.0 - e) / (1.0 + e)
}

/// `ln cosh u` without overflow, on the branch continuous from the real axis
/// (valid while `Re cosh u > 0`).
fn ln_cosh(u: Complex64) -> Complex64 {
    let s = if u.re >= 0.0 { u } else { -u };
    s + ((1.0 + (-2.0 * s).exp()) / 2.0).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundState {
    pub n: usize,
    pub energy: Complex64,
    pub eigenfunction: Eigenfunction,
}

fn require_kappa(spec: &PotentialSpec, family: &'static str, expected: f64) -> Result<()> {
    if spec.kappa() == expected {
        Ok(())
    } else {
        Err(Error::WrongKinetic {
            family,
            expected,
            got: spec.kappa(),
        })
    }
}

/// `E_n = −(n − C)²` for `0 ≤ n < C`.
pub fn morse_spectrum(spec: &PotentialSpec) -> Result<Vec<BoundState>> {
    if !spec.is_morse() {
        return Err(Error::invalid(format!("{} is not a Morse potential", spec.name())));
    }
    require_kappa(spec, spec.name(), KAPPA_HALF_MASS)?;
    let c = spec.morse_effective_c()?;
    if c.im.abs() > REAL_C_TOL {
        return Err(Error::NonRealC(c));
    }
    let c = match spec.family() {
        Family::MorseComplex { c, .. } => c,
        _ => c.re,
    };
    let (v1, _) = spec.morse_coefficients().expect("morse family");
    let sqrt_v1 = principal_sqrt(v1)?;
    let mut out = Vec::new();
    let mut n = 0usize;
    while c - n as f64 > THRESHOLD_TOL {
        let d = n as f64 - c;
        out.push(BoundState {
            n,
            energy: Complex64::new(-d * d, 0.0),
            eigenfunction: Eigenfunction::Morse { n, c, sqrt_v1 },
        });
        n += 1;
    }
    Ok(out)
}

/// Ψ_n of a Morse bound state at real `x`.
pub fn morse_wavefunction(state: &BoundState, x: f64) -> Result<Complex64> {
    match state.eigenfunction {
        Eigenfunction::Morse { .. } => state.eigenfunction.eval_real(x),
        _ => Err(Error::invalid("not a Morse bound state")),
    }
}

/// `E_n = n + 1/2` for `n = 0..=n_max`, independent of β and γ.
pub fn ho_spectrum(spec: &PotentialSpec, n_max: usize) -> Result<Vec<BoundState>> {
    let Family::HarmonicShifted { beta, gamma } = spec.family() else {
        return Err(Error::invalid(format!("{} is not the shifted oscillator", spec.name())));
    };
    require_kappa(spec, "ho-shifted", KAPPA_UNIT_MASS)?;
    Ok((0..=n_max)
        .map(|n| BoundState {
            n,
            energy: Complex64::new(n as f64 + 0.5, 0.0),
            eigenfunction: Eigenfunction::Hermite { n, beta, gamma },
        })
        .collect())
}

/// `E_n = −(√(α+1/4) − 1/2 − n)²` for the strictly negative levels.
pub fn eckart_spectrum(spec: &PotentialSpec) -> Result<Vec<BoundState>> {
    let Family::EckartShifted { alpha, beta, gamma } = spec.family() else {
        return Err(Error::invalid(format!("{} is not the shifted Eckart potential", spec.name())));
    };
    require_kappa(spec, "eckart-shifted", KAPPA_HALF_MASS)?;
    let s = (alpha + 0.25).sqrt();
    let mut out = Vec::new();
    let mut n = 0usize;
    loop {
        let epsilon = s - 0.5 - n as f64;
        if epsilon <= THRESHOLD_TOL {
            break;
        }
        out.push(BoundState {
            n,
            energy: Complex64::new(-epsilon * epsilon, 0.0),
            eigenfunction: Eigenfunction::Eckart { n, epsilon, beta, gamma },
        });
        n += 1;
    }
    Ok(out)
}

/// Closed-form spectrum for any family that has one. `n_max` bounds the
/// oscillator ladder and truncates the finite families.
pub fn exact_spectrum(spec: &PotentialSpec, n_max: usize) -> Result<Vec<BoundState>> {
    let mut states = match spec.family() {
        Family::MorseComplex { .. } | Family::MorseGeneral { .. } => morse_spectrum(spec)?,
        Family::HarmonicShifted { .. } => ho_spectrum(spec, n_max)?,
        Family::EckartShifted { .. } => eckart_spectrum(spec)?,
        Family::KhareMandal { .. } => {
            return Err(Error::invalid("khare-mandal has no closed-form spectrum; use the grid method"))
        }
    };
    states.truncate(n_max + 1);
    Ok(states)
}

//! Catalog of complex one-dimensional potentials with their imaginary-shift
//! data.
//!
//! Every family is evaluated by its closed form at complex argument, so
//! `V(x + iθ)` is the analytic continuation, not an interpolation.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Kinetic coefficient for ħ = 1 = 2m, i.e. `H = p² + V`.
pub const KAPPA_HALF_MASS: f64 = 1.0;
/// Kinetic coefficient for ħ = 1 = m, i.e. `H = p²/2 + V`.
pub const KAPPA_UNIT_MASS: f64 = 0.5;

/// Default half-width of the truncated line for the oscillator and Eckart families.
pub const DEFAULT_HALF_WIDTH: f64 = 12.0;
/// Half-width used for the Khare–Mandal family, whose potential grows like e^{4|x|}.
pub const KHARE_MANDAL_HALF_WIDTH: f64 = 3.0;
/// Morse left edge is moved right until |V| at the edge is at most this.
pub const MORSE_WALL_MAX: f64 = 1e6;
/// Two candidate shifts closer than this are considered the same.
pub const SHIFT_MATCH_TOL: f64 = 1e-12;

/// Potential families with their parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// `(A+iB)² e^{−2x} − (2C+1)(A+iB) e^{−x}`.
    MorseComplex { a: f64, b: f64, c: f64 },
    /// `V₁ e^{−2x} − V₂ e^{−x}`.
    MorseGeneral { v1: Complex64, v2: Complex64 },
    /// `½ (x − β − iγ)²`.
    HarmonicShifted { beta: f64, gamma: f64 },
    /// `−α sech²(x − β − iγ)`.
    EckartShifted { alpha: f64, beta: f64, gamma: f64 },
    /// `[ζ cosh(2x) − iM]²`.
    KhareMandal { zeta: f64, m: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::MorseComplex { .. } => "morse-complex",
            Family::MorseGeneral { .. } => "morse-general",
            Family::HarmonicShifted { .. } => "ho-shifted",
            Family::EckartShifted { .. } => "eckart-shifted",
            Family::KhareMandal { .. } => "khare-mandal",
        }
    }

    pub fn default_kappa(&self) -> f64 {
        match self {
            Family::HarmonicShifted { .. } => KAPPA_UNIT_MASS,
            _ => KAPPA_HALF_MASS,
        }
    }
}

/// Catalog names accepted by [`PotentialSpec::from_name`].
pub const CATALOG: [&str; 5] = ["morse-complex", "morse-general", "ho-shifted", "eckart-shifted", "khare-mandal"];

/// The η-shift angle: `η = e^{−θp}` maps `x` to `x + iθ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftParams {
    pub theta: f64,
}

/// A validated potential together with its kinetic coefficient κ in `H = κp² + V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSpec {
    #[serde(flatten)]
    family: Family,
    kappa: f64,
}

/// Loose parameter bag used by the CLI and job files; `from_name` checks it
/// against the family.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialParams {
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(rename = "V1", skip_serializing_if = "Option::is_none")]
    pub v1: Option<[f64; 2]>,
    #[serde(rename = "V2", skip_serializing_if = "Option::is_none")]
    pub v2: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
}

impl PotentialParams {
    /// Fields set in `other` replace those in `self`.
    pub fn overlay(&self, other: &PotentialParams) -> PotentialParams {
        PotentialParams {
            a: other.a.or(self.a),
            b: other.b.or(self.b),
            c: other.c.or(self.c),
            v1: other.v1.or(self.v1),
            v2: other.v2.or(self.v2),
            alpha: other.alpha.or(self.alpha),
            beta: other.beta.or(self.beta),
            gamma: other.gamma.or(self.gamma),
            zeta: other.zeta.or(self.zeta),
            m: other.m.or(self.m),
            kappa: other.kappa.or(self.kappa),
        }
    }

    fn set_fields(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let checks: [(&'static str, bool); 10] = [
            ("A", self.a.is_some()),
            ("B", self.b.is_some()),
            ("C", self.c.is_some()),
            ("V1", self.v1.is_some()),
            ("V2", self.v2.is_some()),
            ("alpha", self.alpha.is_some()),
            ("beta", self.beta.is_some()),
            ("gamma", self.gamma.is_some()),
            ("zeta", self.zeta.is_some()),
            ("M", self.m.is_some()),
        ];
        for (name, set) in checks {
            if set {
                out.push(name);
            }
        }
        out
    }
}

fn require(v: Option<f64>, name: &str, family: &str) -> Result<f64> {
    v.ok_or_else(|| Error::invalid(format!("{family} requires parameter {name}")))
}

fn ensure_finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid("potential parameters must be finite"))
    }
}

impl PotentialSpec {
    pub fn new(family: Family, kappa: f64) -> Result<Self> {
        if kappa != KAPPA_HALF_MASS && kappa != KAPPA_UNIT_MASS {
            return Err(Error::invalid(format!("kinetic coefficient must be 1 or 1/2, got {kappa}")));
        }
        match family {
            Family::MorseComplex { a, b, c } => {
                ensure_finite(&[a, b, c])?;
                if a <= 0.0 {
                    return Err(Error::invalid(format!(
                        "morse-complex requires A > 0 (branch anchor for sqrt(V1) = A + iB), got A = {a}"
                    )));
                }
            }
            Family::MorseGeneral { v1, v2 } => {
                ensure_finite(&[v1.re, v1.im, v2.re, v2.im])?;
                if v1 == Complex64::new(0.0, 0.0) {
                    return Err(Error::invalid("morse-general requires V1 != 0"));
                }
            }
            Family::HarmonicShifted { beta, gamma } => ensure_finite(&[beta, gamma])?,
            Family::EckartShifted { alpha, beta, gamma } => {
                ensure_finite(&[alpha, beta, gamma])?;
                if alpha <= 0.0 {
                    return Err(Error::invalid(format!("eckart-shifted requires alpha > 0, got {alpha}")));
                }
                if gamma.abs() >= FRAC_PI_2 {
                    return Err(Error::invalid(format!(
                        "eckart-shifted requires |gamma| < pi/2 (sech^2 pole on the real line), got {gamma}"
                    )));
                }
            }
            Family::KhareMandal { zeta, m } => {
                ensure_finite(&[zeta, m])?;
                if zeta == 0.0 {
                    return Err(Error::invalid("khare-mandal requires zeta != 0"));
                }
            }
        }
        Ok(Self { family, kappa })
    }

    /// Spec with the family's conventional kinetic coefficient.
    pub fn with_default_kappa(family: Family) -> Result<Self> {
        Self::new(family, family.default_kappa())
    }

    pub fn morse_complex(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::with_default_kappa(Family::MorseComplex { a, b, c })
    }

    pub fn morse_general(v1: Complex64, v2: Complex64) -> Result<Self> {
        Self::with_default_kappa(Family::MorseGeneral { v1, v2 })
    }

    pub fn harmonic_shifted(beta: f64, gamma: f64) -> Result<Self> {
        Self::with_default_kappa(Family::HarmonicShifted { beta, gamma })
    }

    pub fn eckart_shifted(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::with_default_kappa(Family::EckartShifted { alpha, beta, gamma })
    }

    pub fn khare_mandal(zeta: f64, m: f64) -> Result<Self> {
        Self::with_default_kappa(Family::KhareMandal { zeta, m })
    }

    /// Looks up a catalog family by name. Parameters that the family does
    /// not use are rejected rather than ignored.
    pub fn from_name(name: &str, params: &PotentialParams) -> Result<Self> {
        let (family, allowed): (Family, &[&str]) = match name {
            "morse-complex" => (
                Family::MorseComplex {
                    a: require(params.a, "A", name)?,
                    b: params.b.unwrap_or(0.0),
                    c: require(params.c, "C", name)?,
                },
                &["A", "B", "C"],
            ),
            "morse-general" => {
                let v1 = params.v1.ok_or_else(|| Error::invalid("morse-general requires parameter V1"))?;
                let v2 = params.v2.ok_or_else(|| Error::invalid("morse-general requires parameter V2"))?;
                (
                    Family::MorseGeneral {
                        v1: Complex64::new(v1[0], v1[1]),
                        v2: Complex64::new(v2[0], v2[1]),
                    },
                    &["V1", "V2"],
                )
            }
            "ho-shifted" => (
                Family::HarmonicShifted {
                    beta: params.beta.unwrap_or(0.0),
                    gamma: params.gamma.unwrap_or(0.0),
                },
                &["beta", "gamma"],
            ),
            "eckart-shifted" => (
                Family::EckartShifted {
                    alpha: require(params.alpha, "alpha", name)?,
                    beta: params.beta.unwrap_or(0.0),
                    gamma: params.gamma.unwrap_or(0.0),
                },
                &["alpha", "beta", "gamma"],
            ),
            "khare-mandal" => (
                Family::KhareMandal {
                    zeta: require(params.zeta, "zeta", name)?,
                    m: require(params.m, "M", name)?,
                },
                &["zeta", "M"],
            ),
            other => {
                return Err(Error::invalid(format!(
                    "unknown potential '{other}'; expected one of {}",
                    CATALOG.join(", ")
                )))
            }
        };
        if let Some(extra) = params.set_fields().into_iter().find(|f| !allowed.contains(f)) {
            return Err(Error::invalid(format!("parameter {extra} is not used by {name}")));
        }
        Self::new(family, params.kappa.unwrap_or_else(|| family.default_kappa()))
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn name(&self) -> &'static str {
        self.family.name()
    }

    pub fn is_morse(&self) -> bool {
        matches!(self.family, Family::MorseComplex { .. } | Family::MorseGeneral { .. })
    }

    /// `(V₁, V₂)` of the Morse form `V₁e^{−2x} − V₂e^{−x}`.
    pub fn morse_coefficients(&self) -> Option<(Complex64, Complex64)> {
        match self.family {
            Family::MorseComplex { a, b, c } => {
                let s = Complex64::new(a, b);
                Some((s * s, s * (2.0 * c + 1.0)))
            }
            Family::MorseGeneral { v1, v2 } => Some((v1, v2)),
            _ => None,
        }
    }

    /// True when the potential is real on the real axis.
    pub fn is_real(&self) -> bool {
        match self.family {
            Family::MorseComplex { b, .. } => b == 0.0,
            Family::MorseGeneral { v1, v2 } => v1.im == 0.0 && v2.im == 0.0,
            Family::HarmonicShifted { gamma, .. } | Family::EckartShifted { gamma, .. } => gamma == 0.0,
            Family::KhareMandal { m, .. } => m == 0.0,
        }
    }

    /// True for the parity-centred members `V*(−x) = V(x)` of the shifted families.
    pub fn is_pt_symmetric(&self) -> bool {
        match self.family {
            Family::HarmonicShifted { beta, .. } | Family::EckartShifted { beta, .. } => beta == 0.0,
            _ => false,
        }
    }

    /// V(w) by the closed form at complex `w`.
    pub fn evaluate(&self, w: Complex64) -> Result<Complex64> {
        let v = match self.family {
            Family::MorseComplex { .. } | Family::MorseGeneral { .. } => {
                let (v1, v2) = self.morse_coefficients().expect("morse family");
                let e1 = (-w).exp();
                v1 * e1 * e1 - v2 * e1
            }
            Family::HarmonicShifted { beta, gamma } => {
                let u = w - beta - I * gamma;
                0.5 * u * u
            }
            Family::EckartShifted { alpha, beta, gamma } => {
                let ch = (w - beta - I * gamma).cosh();
                -alpha / (ch * ch)
            }
            Family::KhareMandal { zeta, m } => {
                let t = zeta * (2.0 * w).cosh() - I * m;
                t * t
            }
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(w))
        }
    }

    pub fn evaluate_real(&self, x: f64) -> Result<Complex64> {
        self.evaluate(Complex64::new(x, 0.0))
    }

    /// θ with `V(x + iθ) = V*(x)` for all real `x`.
    pub fn pseudo_shift_angle(&self) -> Result<ShiftParams> {
        let theta = match self.family {
            Family::MorseComplex { a, b, .. } => 2.0 * (b / a).atan(),
            Family::MorseGeneral { v1, v2 } => {
                // V₁e^{−2iθ} = V₁* fixes θ = arg V₁ (mod π); V₂e^{−iθ} = V₂* then
                // needs arg V₂ = θ/2 (mod π).
                let theta = v1.arg();
                if v2 != Complex64::new(0.0, 0.0) {
                    let mismatch = v2.arg() - 0.5 * theta;
                    let wrapped = mismatch - PI * (mismatch / PI).round();
                    if wrapped.abs() > SHIFT_MATCH_TOL {
                        return Err(Error::NoKnownShift(format!(
                            "morse-general: V1 needs theta = {theta} but V2 = {v2} needs arg(V2) = theta/2 mod pi \
                             (off by {wrapped:.3e})"
                        )));
                    }
                }
                theta
            }
            Family::HarmonicShifted { gamma, .. } | Family::EckartShifted { gamma, .. } => 2.0 * gamma,
            Family::KhareMandal { .. } => FRAC_PI_2,
        };
        Ok(ShiftParams { theta })
    }

    /// Effective Morse parameter `V₂/(2√V₁) − 1/2`, with `Re √V₁ > 0`.
    ///
    /// For the complex Morse family this is exactly the real parameter `C`.
    pub fn morse_effective_c(&self) -> Result<Complex64> {
        let (v1, v2) = self
            .morse_coefficients()
            .ok_or_else(|| Error::invalid(format!("{} is not a Morse potential", self.name())))?;
        let root = principal_sqrt(v1)?;
        Ok(v2 / (2.0 * root) - 0.5)
    }

    /// Pointwise real and imaginary parts of V on a real grid.
    pub fn real_imag_parts(&self, xs: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut re = Vec::with_capacity(xs.len());
        let mut im = Vec::with_capacity(xs.len());
        for &x in xs {
            let v = self.evaluate_real(x)?;
            re.push(v.re);
            im.push(v.im);
        }
        Ok((re, im))
    }

    /// Default truncated interval standing in for the real line.
    pub fn natural_domain(&self) -> (f64, f64) {
        match self.family {
            Family::MorseComplex { .. } | Family::MorseGeneral { .. } => self.morse_domain(),
            Family::HarmonicShifted { beta, .. } | Family::EckartShifted { beta, .. } => {
                (beta - DEFAULT_HALF_WIDTH, beta + DEFAULT_HALF_WIDTH)
            }
            Family::KhareMandal { .. } => (-KHARE_MANDAL_HALF_WIDTH, KHARE_MANDAL_HALF_WIDTH),
        }
    }

    /// Morse interval: left edge at −4 unless the wall bound
    /// `|V₁|e^{−2x} + |V₂|e^{−x}` exceeds [`MORSE_WALL_MAX`] there; right edge at 14, stretched when the
    /// shallowest bound state decays more slowly than e^{−x}.
    fn morse_domain(&self) -> (f64, f64) {
        let (v1, v2) = self.morse_coefficients().expect("morse family");
        let (p, q) = (v1.norm(), v2.norm());
        // |V₁|y² + |V₂|y = MORSE_WALL_MAX with y = e^{−x}.
        let y = (-q + (q * q + 4.0 * p * MORSE_WALL_MAX).sqrt()) / (2.0 * p);
        let left = (-4.0f64).max(-y.ln());
        let mut right = 14.0;
        if let Ok(c) = self.morse_effective_c() {
            if c.re > 0.0 {
                let n_max = (c.re - 1e-12).ceil() - 1.0;
                let decay = c.re - n_max.max(0.0);
                if decay < 1.0 {
                    right = 14.0 / decay;
                }
            }
        }
        (left, right.max(left + 1.0))
    }

    /// Evenly spaced points spanning the natural domain, endpoints included.
    pub fn natural_grid(&self, points: usize) -> Vec<f64> {
        let (a, b) = self.natural_domain();
        linspace(a, b, points)
    }
}

/// Principal square root with `Re > 0`; a purely imaginary root is ambiguous.
pub fn principal_sqrt(v: Complex64) -> Result<Complex64> {
    let root = v.sqrt();
    if root.re > 0.0 {
        Ok(root)
    } else {
        Err(Error::BranchAmbiguity(v))
    }
}

pub fn linspace(a: f64, b: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (points - 1) as f64;
            (0..points).map(|i| if i + 1 == points { b } else { a + step * i as f64 }).collect()
        }
    }
}

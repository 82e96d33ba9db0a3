//! The Laguerre overlap integral
//!
//! ```text
//! I(m, n, c) = ∫₀^∞ z^{2c−m−n−1} e^{−z} L_m^{2c−2m}(z) L_n^{2c−2n}(z) dz
//! ```
//!
//! by quadrature and by a finite Gamma expansion, plus Gram matrices of
//! closed-form eigenfunctions under the η, PT and plain pairings.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{principal_sqrt, PotentialSpec};
use crate::quadrature::{integrate_line, Domain, IntegralResult, QuadMethod};
use crate::spectra::{BoundState, Eigenfunction};
use crate::special::{gamma, laguerre};
use twofloat::TwoFloat;

/// Gamma expansions whose cancellation ratio exceeds this are untrusted.
pub const UNTRUSTED_CONDITION: f64 = 1e12;
/// Quadrature tolerance for overlap integrals.
pub const OVERLAP_TOL: f64 = 1e-14;
/// Quadrature tolerance for Gram entries.
pub const GRAM_TOL: f64 = 1e-12;

fn check_overlap_args(m: usize, n: usize, c: f64) -> Result<f64> {
    if !c.is_finite() {
        return Err(Error::invalid(format!("c must be finite, got {c}")));
    }
    let s = 2.0 * c - (m + n + 1) as f64;
    if s <= -1.0 {
        return Err(Error::Precondition(format!(
            "overlap I({m}, {n}, {c}) diverges at z = 0: exponent 2c − (m+n+1) = {s} must exceed −1"
        )));
    }
    Ok(s)
}

/// True when `I(m, n, c)` converges.
pub fn overlap_integrable(m: usize, n: usize, c: f64) -> bool {
    check_overlap_args(m, n, c).is_ok()
}

/// `I(m, n, c)` by double-exponential quadrature.
///
/// Split at `z = 1`. On `[0, 1]` the substitution `z = u^{1/(s+1)}` absorbs
/// `z^s`, so exponents close to −1 leave no endpoint mass beyond the reach
/// of the rule; `[1, ∞)` uses exp-sinh directly.
pub fn laguerre_overlap_quadrature(m: usize, n: usize, c: f64) -> Result<IntegralResult> {
    let s = check_overlap_args(m, n, c)?;
    let p = s + 1.0;
    let am = Complex64::new(2.0 * c - 2.0 * m as f64, 0.0);
    let an = Complex64::new(2.0 * c - 2.0 * n as f64, 0.0);
    let ll = move |z: f64| {
        let zc = Complex64::new(z, 0.0);
        laguerre(m, am, zc) * laguerre(n, an, zc)
    };
    // Far in the tail the weight underflows while the polynomials overflow;
    // the product there is zero, not NaN.
    let weighted = |log_w: f64, z: f64| {
        let w = log_w.exp();
        if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            w * ll(z)
        }
    };
    let head = integrate_line(
        |u| {
            let z = u.powf(1.0 / p);
            weighted(-z, z) / p
        },
        Domain::Finite(0.0, 1.0),
        OVERLAP_TOL,
    )?;
    let tail = integrate_line(|z| weighted(s * z.ln() - z, z), Domain::HalfLine(1.0), OVERLAP_TOL)?;
    Ok(IntegralResult {
        value: head.value + tail.value,
        abs_error_estimate: head.abs_error_estimate + tail.abs_error_estimate,
        method: head.method,
        evaluations: head.evaluations + tail.evaluations,
        condition: None,
    })
}

/// Relative accuracy assumed for the single f64 Gamma factor.
const GAMMA_REL_ERR: f64 = 1e-14;
/// Unit roundoff of double-double arithmetic.
const DD_EPS: f64 = 1.0e-32;

/// Coefficients of `L_n^{(α)}` in double-double: `(−1)^j/j! · binom(n+α, n−j)`,
/// with the binomial as a falling product.
fn laguerre_coeffs_dd(n: usize, alpha: f64) -> Vec<TwoFloat> {
    (0..=n)
        .map(|j| {
            let mut b = TwoFloat::from(1.0);
            for i in 1..=(n - j) {
                b = b * (TwoFloat::from(alpha) + (j + i) as f64) / i as f64;
            }
            for i in 1..=j {
                b = b / i as f64;
            }
            if j % 2 == 1 {
                -b
            } else {
                b
            }
        })
        .collect()
}

/// `I(m, n, c)` as `Γ(s+1) Σ_{j,k} a_j b_k (s+1)_{j+k}` with `s = 2c−m−n−1`
/// and `a_j`, `b_k` the Laguerre coefficients.
///
/// The alternating sum is accumulated in double-double arithmetic, since
/// for `c ≳ 5` it cancels by five or more digits. `condition` is
/// `Σ|terms| / |result|`.
pub fn laguerre_overlap_exact(m: usize, n: usize, c: f64) -> Result<IntegralResult> {
    let s = check_overlap_args(m, n, c)?;
    let a = laguerre_coeffs_dd(m, 2.0 * c - 2.0 * m as f64);
    let b = laguerre_coeffs_dd(n, 2.0 * c - 2.0 * n as f64);
    let mut poch = vec![TwoFloat::from(1.0)];
    for p in 0..(m + n) {
        let next = poch[p] * (s + 1.0 + p as f64);
        poch.push(next);
    }
    let mut sum = TwoFloat::from(0.0);
    let mut magnitude = 0.0;
    let mut terms = 0usize;
    for (j, aj) in a.iter().enumerate() {
        for (k, bk) in b.iter().enumerate() {
            let t = *aj * *bk * poch[j + k];
            sum += t;
            magnitude += f64::from(t).abs();
            terms += 1;
        }
    }
    let g = gamma(Complex64::new(s + 1.0, 0.0))?.re;
    let value = Complex64::new(g * f64::from(sum), 0.0);
    let magnitude = g * magnitude;
    let condition = if value.norm() > 0.0 { magnitude / value.norm() } else { f64::INFINITY };
    Ok(IntegralResult {
        value,
        abs_error_estimate: GAMMA_REL_ERR * value.norm() + terms as f64 * DD_EPS * magnitude,
        method: QuadMethod::GammaExpansion,
        evaluations: terms,
        condition: Some(condition),
    })
}

/// Both methods side by side for one `(m, n, c)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapComparison {
    pub m: usize,
    pub n: usize,
    pub c: f64,
    pub quadrature: IntegralResult,
    pub exact: IntegralResult,
    /// Natural size of the entry: `√(I(m,m)·I(n,n))` over whichever diagonals converge.
    pub scale: f64,
    /// `|quadrature − exact| / max(|exact|, scale)`.
    pub relative_difference: f64,
    /// Smallest convergent diagonal among `I(m,m)`, `I(n,n)`.
    pub diagonal_min: f64,
    /// True when the Gamma expansion lost too many digits to cancellation.
    pub untrusted: bool,
}

pub fn compare_overlap(m: usize, n: usize, c: f64) -> Result<OverlapComparison> {
    let quadrature = laguerre_overlap_quadrature(m, n, c)?;
    let exact = laguerre_overlap_exact(m, n, c)?;
    let mut diags = Vec::new();
    for k in [m, n] {
        if overlap_integrable(k, k, c) {
            diags.push(laguerre_overlap_exact(k, k, c)?.value.norm());
        }
    }
    let scale = match diags.as_slice() {
        [a, b] => (a * b).sqrt(),
        [a] => *a,
        _ => unreachable!("2c > m + n forces min(m, n) < c"),
    };
    let diagonal_min = diags.iter().copied().fold(f64::INFINITY, f64::min);
    let relative_difference = (quadrature.value - exact.value).norm() / exact.value.norm().max(scale);
    let untrusted = m == n && exact.condition.is_some_and(|k| k > UNTRUSTED_CONDITION);
    Ok(OverlapComparison {
        m,
        n,
        c,
        quadrature,
        exact,
        scale,
        relative_difference,
        diagonal_min,
        untrusted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pairing {
    /// `∫ Ψ_m*(x) Ψ_n(x + iθ) dx`
    EtaBilinear,
    /// `∫ Ψ_m*(−x) Ψ_n(x) dx`
    PtBilinear,
    /// `∫ Ψ_m(x) Ψ_n(x) dx`
    PlainBilinear,
}

impl Pairing {
    pub fn label(&self) -> &'static str {
        match self {
            Pairing::EtaBilinear => "eta",
            Pairing::PtBilinear => "pt",
            Pairing::PlainBilinear => "plain",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    pub pairing: Pairing,
    pub theta: f64,
    pub states: Vec<usize>,
    /// Gram matrix of L²-normalized states, row-major.
    pub gram: Vec<Vec<Complex64>>,
    /// `max_{m≠n} |gram[m][n]| / min_n |gram[n][n]|`.
    pub off_diag_max_rel: f64,
    pub min_diag: f64,
    /// `‖Ψ_n‖₂` used to normalize each state.
    pub norms: Vec<f64>,
}

/// Real-line integration plan for a family of eigenfunctions.
enum Path {
    /// Ordinary sinh-sinh over x.
    Line,
    /// Morse: `t = |z| ∈ (0, ∞)`, `x = L − ln t`, `dx = dt/t`, `L = ln|2√V₁|`.
    MorseRay { l: f64 },
}

impl Path {
    fn for_states(spec: &PotentialSpec, states: &[BoundState]) -> Result<Self> {
        match states.first().map(|s| s.eigenfunction) {
            Some(Eigenfunction::Morse { .. }) => {
                let (v1, _) = spec
                    .morse_coefficients()
                    .ok_or_else(|| Error::invalid("Morse states need a Morse potential"))?;
                Ok(Path::MorseRay {
                    l: (2.0 * principal_sqrt(v1)?).norm().ln(),
                })
            }
            _ => Ok(Path::Line),
        }
    }

    fn integrate(&self, f: impl Fn(f64) -> Result<Complex64>) -> Result<Complex64> {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let r = match *self {
            Path::Line => integrate_line(|x| f(x).unwrap_or(nan), Domain::Line, GRAM_TOL)?,
            Path::MorseRay { l } => integrate_line(
                |t| f(l - t.ln()).map(|v| v / t).unwrap_or(nan),
                Domain::HalfLine(0.0),
                GRAM_TOL,
            )?,
        };
        Ok(r.value)
    }
}

fn pairing_entry(path: &Path, pairing: Pairing, theta: f64, a: &Eigenfunction, b: &Eigenfunction) -> Result<Complex64> {
    let re = |x: f64| Complex64::new(x, 0.0);
    match pairing {
        Pairing::EtaBilinear => path.integrate(|x| Ok(a.eval(re(x))?.conj() * b.eval(Complex64::new(x, theta))?)),
        Pairing::PtBilinear => path.integrate(|x| Ok(a.eval(re(-x))?.conj() * b.eval(re(x))?)),
        Pairing::PlainBilinear => path.integrate(|x| Ok(a.eval(re(x))? * b.eval(re(x))?)),
    }
}

/// Gram matrix of `states` under `pairing`, after scaling every state to unit L² norm.
///
/// For the η pairing the shift is the potential's catalog angle.
pub fn orthogonality_matrix(spec: &PotentialSpec, states: &[BoundState], pairing: Pairing) -> Result<OrthogonalityReport> {
    if states.is_empty() {
        return Err(Error::Precondition("orthogonality needs at least one state".into()));
    }
    let theta = match pairing {
        Pairing::EtaBilinear => spec.pseudo_shift_angle()?.theta,
        _ => 0.0,
    };
    let path = Path::for_states(spec, states)?;
    let mut norms = Vec::with_capacity(states.len());
    for s in states {
        let ef = s.eigenfunction;
        let n2 = path.integrate(|x| Ok(Complex64::new(ef.eval(Complex64::new(x, 0.0))?.norm_sqr(), 0.0)))?;
        norms.push(n2.re.sqrt());
    }
    let k = states.len();
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for i in 0..k {
        for j in 0..k {
            let g = pairing_entry(&path, pairing, theta, &states[i].eigenfunction, &states[j].eigenfunction)?;
            gram[i][j] = g / (norms[i] * norms[j]);
        }
    }
    let min_diag = (0..k).map(|i| gram[i][i].norm()).fold(f64::INFINITY, f64::min);
    let mut off = 0.0f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            if i != j {
                off = off.max(g.norm());
            }
        }
    }
    Ok(OrthogonalityReport {
        pairing,
        theta,
        states: states.iter().map(|s| s.n).collect(),
        gram,
        off_diag_max_rel: off / min_diag,
        min_diag,
        norms,
    })
}

pub fn eta_orthogonality_matrix(spec: &PotentialSpec, states: &[BoundState]) -> Result<OrthogonalityReport> {
    orthogonality_matrix(spec, states, Pairing::EtaBilinear)
}

pub fn pt_orthogonality_matrix(spec: &PotentialSpec, states: &[BoundState]) -> Result<OrthogonalityReport> {
    orthogonality_matrix(spec, states, Pairing::PtBilinear)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{eckart_spectrum, ho_spectrum, morse_spectrum};

    #[test]
    fn overlap_examples() {
        let q = laguerre_overlap_quadrature(0, 0, 3.0).unwrap();
        assert!((q.value.re - 120.0).abs() < 1e-10);
        let q = laguerre_overlap_quadrature(0, 1, 3.0).unwrap();
        assert!(q.value.norm() < 1e-11, "{q:?}");
        let e = laguerre_overlap_exact(1, 0, 3.0).unwrap();
        assert!(e.value.norm() < 1e-12);
        let e = laguerre_overlap_exact(0, 0, 2.7).unwrap();
        let g = gamma(Complex64::new(5.4, 0.0)).unwrap();
        assert!((e.value - g).norm() < 1e-13 * g.norm());
    }

    #[test]
    fn overlap_reference_values() {
        // Γ(2c−n+1) / (n! (2c−2n)), from an independent high-precision evaluation.
        for (m, c, expected) in [(2, 4.0, 90.0), (4, 5.0, 15.0), (1, 3.0, 30.0), (5, 5.5, 6.0), (2, 8.0, 3_632_428_800.0), (3, 8.0, 103_783_680.0)] {
            let e = laguerre_overlap_exact(m, m, c).unwrap();
            let q = laguerre_overlap_quadrature(m, m, c).unwrap();
            assert!((e.value.re - expected).abs() <= e.abs_error_estimate.max(1e-13 * expected), "exact ({m},{c}): {e:?}");
            assert!((q.value.re - expected).abs() <= 1e-11 * expected, "quad ({m},{c}): {:?}", q.value);
        }
    }

    #[test]
    fn method_agreement_example() {
        let cmp = compare_overlap(3, 1, 5.0).unwrap();
        assert!(cmp.relative_difference <= 1e-10, "{cmp:?}");
        assert!(cmp.exact.value.norm() <= 1e-10 * cmp.diagonal_min);
        assert!(!cmp.untrusted);
    }

    #[test]
    fn divergent_overlap_rejected() {
        assert!(matches!(laguerre_overlap_exact(3, 3, 3.0), Err(Error::Precondition(_))));
        assert!(matches!(laguerre_overlap_quadrature(5, 2, 3.0), Err(Error::Precondition(_))));
        assert!(overlap_integrable(2, 3, 3.0));
    }

    #[test]
    fn real_morse_plain_orthogonality() {
        let m = PotentialSpec::morse_complex(1.0, 0.0, 2.0).unwrap();
        let states = morse_spectrum(&m).unwrap();
        let r = orthogonality_matrix(&m, &states, Pairing::PlainBilinear).unwrap();
        assert!(r.gram[0][1].norm() < 1e-10);
        assert!((r.gram[0][0].re - 1.0).abs() < 1e-12);
        let eta = eta_orthogonality_matrix(&m, &states).unwrap();
        assert_eq!(eta.theta, 0.0);
        assert!(eta.off_diag_max_rel < 1e-10);
    }

    #[test]
    fn complex_morse_eta_gram() {
        let m = PotentialSpec::morse_complex(3.0, 4.0, 5.0).unwrap();
        let states = morse_spectrum(&m).unwrap();
        let r = eta_orthogonality_matrix(&m, &states).unwrap();
        assert_eq!(r.gram.len(), 5);
        assert!(r.off_diag_max_rel <= 1e-8, "{}", r.off_diag_max_rel);
        assert!(r.min_diag > 1e-6);
        // η pairing is the conjugate of the plain bilinear one for Morse.
        let plain = orthogonality_matrix(&m, &states, Pairing::PlainBilinear).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!((r.gram[i][j] - plain.gram[i][j].conj()).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn ho_pairings() {
        let shifted = PotentialSpec::harmonic_shifted(1.0, 0.7).unwrap();
        let states = ho_spectrum(&shifted, 3).unwrap();
        let eta = eta_orthogonality_matrix(&shifted, &states).unwrap();
        assert!(eta.off_diag_max_rel <= 1e-8, "{}", eta.off_diag_max_rel);
        let pt = pt_orthogonality_matrix(&shifted, &states).unwrap();
        assert!(pt.off_diag_max_rel > 1e-3, "PT should fail without parity: {}", pt.off_diag_max_rel);

        let centred = PotentialSpec::harmonic_shifted(0.0, 0.7).unwrap();
        let states = ho_spectrum(&centred, 3).unwrap();
        let pt = pt_orthogonality_matrix(&centred, &states).unwrap();
        assert!(pt.off_diag_max_rel <= 1e-8, "{}", pt.off_diag_max_rel);
    }

    #[test]
    fn eckart_eta_gram() {
        let e = PotentialSpec::eckart_shifted(11.3, 0.5, 0.4).unwrap();
        let states = eckart_spectrum(&e).unwrap();
        let r = eta_orthogonality_matrix(&e, &states);
        let r = r.map_err(|e| e.to_string()).unwrap();
        assert!(r.off_diag_max_rel <= 1e-8, "{}", r.off_diag_max_rel);
    }

    #[test]
    fn real_symmetric_pt_is_plain() {
        let ho = PotentialSpec::harmonic_shifted(0.0, 0.0).unwrap();
        let states = ho_spectrum(&ho, 3).unwrap();
        let pt = pt_orthogonality_matrix(&ho, &states).unwrap();
        let plain = orthogonality_matrix(&ho, &states, Pairing::PlainBilinear).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let parity = if i % 2 == 0 { 1.0 } else { -1.0 };
                assert!((pt.gram[i][j] - parity * plain.gram[i][j]).norm() < 1e-12);
            }
        }
    }
}

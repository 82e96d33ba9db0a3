//! The imaginary coordinate shift `η = e^{−θp}`, acting as `f(x) ↦ f(x + iθ)`.
//!
//! η is only ever applied where a closed form exists (polynomials, Gaussian
//! test functions, catalog potentials and eigenfunctions). Continuing a
//! function sampled on a finite real grid into the complex plane is
//! ill-posed, so there is deliberately no grid version.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::quadrature::{integrate_line, Domain};
use crate::special::PolyCoeffs;

/// Grid size used for potential-level checks.
pub const CHECK_GRID_POINTS: usize = 2001;
/// Default relative tolerance for [`check_pseudo_hermitian`].
pub const DEFAULT_PSEUDO_TOL: f64 = 1e-10;
const DEFECT_QUAD_TOL: f64 = 1e-13;

/// `(iθ)^m`, exact up to the rounding of `θ^m`.
fn i_theta_pow(theta: f64, m: usize) -> Complex64 {
    let r = theta.powi(m as i32);
    match m % 4 {
        0 => Complex64::new(r, 0.0),
        1 => Complex64::new(0.0, r),
        2 => Complex64::new(-r, 0.0),
        _ => Complex64::new(0.0, -r),
    }
}

/// Coefficients of `p(x + iθ)` by binomial re-expansion.
pub fn shift_polynomial(p: &PolyCoeffs, theta: f64) -> PolyCoeffs {
    let c = p.coeffs();
    let n = c.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, slot) in out.iter_mut().enumerate() {
        // Σ_{k ≥ j} c_k C(k, j) (iθ)^{k−j}
        let mut binom = 1.0;
        for k in j..n {
            if k > j {
                binom = binom * k as f64 / (k - j) as f64;
            }
            *slot += c[k] * i_theta_pow(theta, k - j) * binom;
        }
    }
    PolyCoeffs::new(out)
}

/// Gaussian-decaying functions with exact evaluation at complex argument.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticTestFn {
    /// `exp(−(w − center)² / (2 width²))`
    Gaussian { center: Complex64, width: f64 },
    /// `p(w) exp(−w² / (2 width²))`
    GaussianTimesPoly { poly: PolyCoeffs, width: f64 },
}

impl AnalyticTestFn {
    pub fn gaussian(center: Complex64, width: f64) -> Result<Self> {
        check_width(width)?;
        Ok(AnalyticTestFn::Gaussian { center, width })
    }

    pub fn gaussian_times_poly(poly: PolyCoeffs, width: f64) -> Result<Self> {
        check_width(width)?;
        Ok(AnalyticTestFn::GaussianTimesPoly { poly, width })
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        match self {
            AnalyticTestFn::Gaussian { center, width } => {
                let u = w - center;
                (-u * u / (2.0 * width * width)).exp()
            }
            AnalyticTestFn::GaussianTimesPoly { poly, width } => poly.eval(w) * (-w * w / (2.0 * width * width)).exp(),
        }
    }

    /// `(ηf)(x) = f(x + iθ)`.
    pub fn shifted(&self, x: f64, theta: f64) -> Complex64 {
        self.eval(Complex64::new(x, theta))
    }
}

fn check_width(width: f64) -> Result<()> {
    if width > 0.0 && width.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("test-function width must be positive, got {width}")))
    }
}

/// Both sides of `⟨ηu|v⟩ = ⟨u|ηv⟩` and their difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HermiticityDefect {
    pub eta_u_v: Complex64,
    pub u_eta_v: Complex64,
    pub defect: f64,
}

/// `|⟨ηu|v⟩ − ⟨u|ηv⟩|` with sesquilinear real-line inner products.
pub fn hermiticity_defect(u: &AnalyticTestFn, v: &AnalyticTestFn, theta: f64) -> Result<HermiticityDefect> {
    let eta_u_v = integrate_line(
        |x| u.shifted(x, theta).conj() * v.eval(Complex64::new(x, 0.0)),
        Domain::Line,
        DEFECT_QUAD_TOL,
    )?
    .value;
    let u_eta_v = integrate_line(
        |x| u.eval(Complex64::new(x, 0.0)).conj() * v.shifted(x, theta),
        Domain::Line,
        DEFECT_QUAD_TOL,
    )?
    .value;
    Ok(HermiticityDefect {
        eta_u_v,
        u_eta_v,
        defect: (eta_u_v - u_eta_v).norm(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PseudoHermVerdict {
    pub theta_used: f64,
    /// `max |V(x + iθ) − V*(x)|` over the grid.
    pub max_residual: f64,
    /// `max |V(x)|` over the grid; the residual is judged against `tolerance · scale`.
    pub scale: f64,
    pub tolerance: f64,
    pub grid_points: usize,
    pub worst_x: f64,
    pub passed: bool,
}

impl PseudoHermVerdict {
    pub fn relative_residual(&self) -> f64 {
        if self.scale > 0.0 {
            self.max_residual / self.scale
        } else {
            self.max_residual
        }
    }
}

/// Checks `V(x + iθ) = V*(x)` pointwise on `grid`.
pub fn check_pseudo_hermitian(spec: &PotentialSpec, theta: f64, grid: &[f64], tol: f64) -> Result<PseudoHermVerdict> {
    if grid.is_empty() {
        return Err(Error::Precondition("pseudo-Hermiticity check needs a nonempty grid".into()));
    }
    if !theta.is_finite() || !(tol >= 0.0) {
        return Err(Error::invalid("theta must be finite and tol non-negative"));
    }
    let mut max_residual = 0.0f64;
    let mut scale = 0.0f64;
    let mut worst_x = grid[0];
    for &x in grid {
        let v = spec.evaluate_real(x)?;
        let shifted = spec.evaluate(Complex64::new(x, theta))?;
        let r = (shifted - v.conj()).norm();
        if r > max_residual {
            max_residual = r;
            worst_x = x;
        }
        scale = scale.max(v.norm());
    }
    Ok(PseudoHermVerdict {
        theta_used: theta,
        max_residual,
        scale,
        tolerance: tol,
        grid_points: grid.len(),
        worst_x,
        passed: max_residual <= tol * scale,
    })
}

/// [`check_pseudo_hermitian`] at the catalog angle on the natural 2001-point grid.
pub fn check_catalog_shift(spec: &PotentialSpec, tol: f64) -> Result<PseudoHermVerdict> {
    let theta = spec.pseudo_shift_angle()?.theta;
    check_pseudo_hermitian(spec, theta, &spec.natural_grid(CHECK_GRID_POINTS), tol)
}

/// `(z(x + iθ), z*(x))` for the Morse variable `z = 2(A + iB)e^{−x}` with
/// `θ = 2 arctan(B/A)`; the two agree.
pub fn morse_variable_conjugation(a: f64, b: f64, x: f64) -> Result<(Complex64, Complex64)> {
    if !(a > 0.0) || !b.is_finite() || !x.is_finite() {
        return Err(Error::invalid(format!("morse variable needs A > 0 and finite B, x; got A = {a}")));
    }
    let s = Complex64::new(a, b);
    let theta = 2.0 * (b / a).atan();
    let z = |w: Complex64| 2.0 * s * (-w).exp();
    Ok((z(Complex64::new(x, theta)), z(Complex64::new(x, 0.0)).conj()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_examples() {
        let sq = shift_polynomial(&PolyCoeffs::from_real(&[0.0, 0.0, 1.0]), 1.0);
        assert_eq!(sq, PolyCoeffs::new(vec![c(-1.0, 0.0), c(0.0, 2.0), c(1.0, 0.0)]));

        let k = PolyCoeffs::constant(c(2.5, -1.0));
        assert_eq!(shift_polynomial(&k, 0.8), k);

        // (x + i/2)³ − 2(x + i/2) = x³ + 1.5i x² − 2.75x − 1.125i
        let cubic = shift_polynomial(&PolyCoeffs::from_real(&[0.0, -2.0, 0.0, 1.0]), 0.5);
        let expected = PolyCoeffs::new(vec![c(0.0, -1.125), c(-2.75, 0.0), c(0.0, 1.5), c(1.0, 0.0)]);
        assert!(cubic.max_coeff_diff(&expected) < 1e-15);
    }

    #[test]
    fn shift_matches_pointwise_evaluation() {
        let p = PolyCoeffs::new(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.25, 1.0), c(3.0, -1.0)]);
        let q = shift_polynomial(&p, -0.7);
        for x in [-2.0, -0.3, 0.0, 1.1, 4.0] {
            let lhs = q.eval(c(x, 0.0));
            let rhs = p.eval(c(x, -0.7));
            assert!((lhs - rhs).norm() <= 1e-13 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn gaussian_pair_closed_form() {
        let g = AnalyticTestFn::gaussian(c(0.0, 0.0), 1.0).unwrap();
        let d = hermiticity_defect(&g, &g, 2.0).unwrap();
        let exact = PI.sqrt() * E;
        assert!((d.eta_u_v.re - exact).abs() < 1e-10 && d.eta_u_v.im.abs() < 1e-10);
        assert!(d.defect <= 1e-10, "{d:?}");
    }

    #[test]
    fn identity_shift_has_no_defect() {
        let u = AnalyticTestFn::gaussian(c(0.3, 0.2), 0.7).unwrap();
        let v = AnalyticTestFn::gaussian_times_poly(PolyCoeffs::from_real(&[1.0, -1.0, 0.5]), 1.3).unwrap();
        assert!(hermiticity_defect(&u, &v, 0.0).unwrap().defect < 1e-13);
    }

    #[test]
    fn gaussian_against_x_gaussian() {
        let u = AnalyticTestFn::gaussian(c(0.0, 0.0), 1.0).unwrap();
        let v = AnalyticTestFn::gaussian_times_poly(PolyCoeffs::from_real(&[0.0, 1.0]), 1.0).unwrap();
        let d = hermiticity_defect(&u, &v, 1.0).unwrap();
        assert!(d.defect <= 1e-9);
        // ∫ e^{−(x−i)²/2} x e^{−x²/2} dx = (i/2)√π e^{1/4}
        let exact = c(0.0, 0.5 * PI.sqrt() * 0.25f64.exp());
        assert!((d.eta_u_v - exact).norm() < 1e-11);
    }

    #[test]
    fn bad_width_rejected() {
        assert!(AnalyticTestFn::gaussian(c(0.0, 0.0), 0.0).is_err());
        assert!(AnalyticTestFn::gaussian_times_poly(PolyCoeffs::zero(), -1.0).is_err());
    }

    #[test]
    fn morse_verdicts() {
        let spec = PotentialSpec::morse_complex(1.0, 1.0, 3.0).unwrap();
        let grid = spec.natural_grid(CHECK_GRID_POINTS);
        let ok = check_pseudo_hermitian(&spec, FRAC_PI_2, &grid, 1e-12).unwrap();
        assert!(ok.passed, "{ok:?}");
        assert_eq!(ok.grid_points, 2001);
        let wrong = check_pseudo_hermitian(&spec, 0.3, &grid, 1e-12).unwrap();
        assert!(!wrong.passed);
        assert!(wrong.relative_residual() > 1e-3);
    }

    #[test]
    fn real_potential_passes_at_zero() {
        let ho = PotentialSpec::harmonic_shifted(0.0, 0.0).unwrap();
        let v = check_catalog_shift(&ho, 1e-10).unwrap();
        assert!(v.passed && v.theta_used == 0.0 && v.max_residual == 0.0);
    }

    #[test]
    fn empty_grid_rejected() {
        let ho = PotentialSpec::harmonic_shifted(0.0, 0.0).unwrap();
        assert!(matches!(check_pseudo_hermitian(&ho, 0.0, &[], 1e-10), Err(Error::Precondition(_))));
    }

    #[test]
    fn morse_variable_pairs() {
        let (a, b) = morse_variable_conjugation(1.0, 1.0, 0.0).unwrap();
        assert!((a - c(2.0, -2.0)).norm() < 1e-15 && (b - c(2.0, -2.0)).norm() < 1e-15);
        let (a, b) = morse_variable_conjugation(3.0, 4.0, 1.0).unwrap();
        let expected = c(6.0, -8.0) / E;
        assert!((a - expected).norm() <= 1e-13 * expected.norm());
        assert!((b - expected).norm() <= 1e-13 * expected.norm());
        let (a, b) = morse_variable_conjugation(2.0, 0.0, -1.3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.im, 0.0);
        assert!(morse_variable_conjugation(0.0, 1.0, 0.0).is_err());
    }

    mod props {
        use super::*;
        use crate::potential::Family;
        use proptest::prelude::*;

        fn poly(max_degree: usize) -> impl Strategy<Value = PolyCoeffs> {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_degree + 1)
                .prop_map(|v| PolyCoeffs::new(v.into_iter().map(|(a, b)| c(a, b)).collect()))
        }

        fn coeff_scale(p: &PolyCoeffs) -> f64 {
            p.coeffs().iter().map(|z| z.norm()).fold(1.0, f64::max)
        }

        proptest! {
            #[test]
            fn round_trip(p in poly(8), theta in -3.0f64..3.0) {
                let q = shift_polynomial(&p, theta);
                let back = shift_polynomial(&q, -theta);
                prop_assert!(back.max_coeff_diff(&p) <= 1e-13 * coeff_scale(&q));
            }

            #[test]
            fn derivative_commutes(p in poly(8), theta in -3.0f64..3.0) {
                let a = shift_polynomial(&p.derivative(), theta);
                let b = shift_polynomial(&p, theta).derivative();
                prop_assert!(a.max_coeff_diff(&b) <= 1e-13 * coeff_scale(&shift_polynomial(&p, theta)));
            }

            #[test]
            fn degree_preserving_and_linear(p in poly(8), q in poly(8), s in (-2.0f64..2.0, -2.0f64..2.0), theta in -2.0f64..2.0) {
                let sp = shift_polynomial(&p, theta);
                prop_assert_eq!(sp.degree(), p.degree());
                let s = c(s.0, s.1);
                let lhs = shift_polynomial(&p.scale(s).add(&q), theta);
                let rhs = sp.scale(s).add(&shift_polynomial(&q, theta));
                prop_assert!(lhs.max_coeff_diff(&rhs) <= 1e-13 * coeff_scale(&lhs).max(coeff_scale(&rhs)));
            }

            #[test]
            fn catalog_identity_holds(
                family in prop_oneof![
                    (0.1f64..5.0, -5.0f64..5.0, -1.0f64..8.0).prop_map(|(a, b, c)| Family::MorseComplex { a, b, c }),
                    (-3.0f64..3.0, -2.0f64..2.0).prop_map(|(beta, gamma)| Family::HarmonicShifted { beta, gamma }),
                    (0.1f64..20.0, -3.0f64..3.0, -1.5f64..1.5).prop_map(|(alpha, beta, gamma)| Family::EckartShifted { alpha, beta, gamma }),
                    (0.2f64..3.0, -3.0f64..3.0).prop_map(|(zeta, m)| Family::KhareMandal { zeta, m }),
                ]
            ) {
                let spec = PotentialSpec::with_default_kappa(family).unwrap();
                let v = check_catalog_shift(&spec, DEFAULT_PSEUDO_TOL).unwrap();
                prop_assert!(v.passed, "{:?} {:?}", family, v);
            }
        }
    }
}

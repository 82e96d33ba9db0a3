use num_complex::Complex64;
use serde::Serialize;

use super::band::BandMatrix;
use super::eigen::eigenvalues;
use super::hamiltonian::{build_band, Discretization};
use crate::error::{Error, Result};
use crate::potential::PotentialSpec;

/// Fraction of the grid at each end treated as the "outer" region.
pub const OUTER_FRACTION: f64 = 0.1;
/// Eigenvectors with less outer mass than this are bound states.
pub const BOUND_MASS: f64 = 1e-6;
/// Eigenvectors with more outer mass than this live on a wall, not in the
/// well, and are discarded as discretization artifacts.
pub const ARTIFACT_MASS: f64 = 0.5;
/// Real parts closer than this are ordered by imaginary part.
pub const SORT_TIE: f64 = 1e-12;
const MAX_INVERSE_STEPS: usize = 8;
const TARGET_RESIDUAL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    /// Ascending real part.
    pub eigenvalues: Vec<Complex64>,
    /// `‖Hv − λv‖₂ / ‖H‖∞` with `‖v‖₂ = 1`.
    pub residual_norms: Vec<f64>,
    pub bound_flags: Vec<bool>,
    /// Share of `|v|²` in the outer 10% of grid points at each end.
    pub outer_mass: Vec<f64>,
    /// Low-lying eigenvalues skipped because their eigenvectors sit on a wall.
    pub discarded_boundary_modes: usize,
    pub matrix_norm: f64,
    pub discretization: Discretization,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn bound_eigenvalues(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .zip(&self.bound_flags)
            .filter_map(|(e, &b)| b.then_some(*e))
            .collect()
    }
}

/// Default reality tolerance for a grid eigenvalue.
pub fn imag_tolerance(lambda: Complex64) -> f64 {
    1e-6 * lambda.re.abs().max(1.0)
}

/// Sorts by real part, then orders runs of near-equal real parts by imaginary part.
pub fn sort_eigenvalues(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end].re - values[end - 1].re < SORT_TIE {
            end += 1;
        }
        values[start..end].sort_by(|a, b| a.im.total_cmp(&b.im));
        start = end;
    }
}

fn outer_mass(v: &[Complex64]) -> f64 {
    let n = v.len();
    let edge = ((n as f64 * OUTER_FRACTION).ceil() as usize).max(1);
    let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let outer: f64 = v[..edge].iter().chain(&v[n - edge..]).map(|z| z.norm_sqr()).sum();
    outer / total
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
}

fn residual(h: &BandMatrix, lambda: Complex64, v: &[Complex64]) -> f64 {
    h.mul_vec(v)
        .iter()
        .zip(v)
        .map(|(a, b)| (a - lambda * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Eigenvector for a known eigenvalue by shifted inverse iteration.
fn inverse_iteration(h: &BandMatrix, lambda: Complex64, scale: f64) -> (Vec<Complex64>, f64) {
    let n = h.dim();
    // Nudge the shift off the eigenvalue so the factorization stays regular.
    let sigma = lambda + Complex64::new(1.0, 1.0) * (64.0 * f64::EPSILON * scale);
    let lu = h.shifted_lu(sigma);
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.5 * (0.7 * i as f64).sin(), 0.25 * (1.3 * i as f64).cos()))
        .collect();
    normalize(&mut v);
    let mut res = f64::INFINITY;
    for _ in 0..MAX_INVERSE_STEPS {
        lu.solve(&mut v);
        normalize(&mut v);
        res = residual(h, lambda, &v) / scale;
        if res <= TARGET_RESIDUAL {
            break;
        }
    }
    (v, res)
}

/// The `k` lowest-real-part eigenpairs of the grid Hamiltonian, skipping
/// wall-localized artifacts.
///
/// Eigenvalues come from a dense QR iteration on the full matrix; the
/// eigenvectors of the reported ones from inverse iteration on the band.
pub fn solve_spectrum(spec: &PotentialSpec, disc: &Discretization, k: usize) -> Result<SpectrumResult> {
    if k > disc.n_points {
        return Err(Error::invalid(format!(
            "requested {k} eigenvalues from a {}-point grid",
            disc.n_points
        )));
    }
    let band = build_band(spec, disc)?;
    let scale = band.norm_inf();
    let mut all = eigenvalues(&band.to_dense(), f64::EPSILON)?;
    sort_eigenvalues(&mut all);

    let mut out = SpectrumResult {
        eigenvalues: Vec::with_capacity(k),
        residual_norms: Vec::with_capacity(k),
        bound_flags: Vec::with_capacity(k),
        outer_mass: Vec::with_capacity(k),
        discarded_boundary_modes: 0,
        matrix_norm: scale,
        discretization: *disc,
        eigenvectors: Vec::with_capacity(k),
    };
    for lambda in all {
        if out.eigenvalues.len() == k {
            break;
        }
        let (v, res) = inverse_iteration(&band, lambda, scale);
        let mass = outer_mass(&v);
        if mass > ARTIFACT_MASS {
            out.discarded_boundary_modes += 1;
            continue;
        }
        out.eigenvalues.push(lambda);
        out.residual_norms.push(res);
        out.bound_flags.push(mass < BOUND_MASS);
        out.outer_mass.push(mass);
        out.eigenvectors.push(v);
    }
    Ok(out)
}

//! Dense eigendecomposition of general complex matrices.
//!
//! The pipeline is the classical one: diagonal balancing, Householder
//! reduction to upper Hessenberg form, then single-shift QR iteration with
//! Givens rotations and deflation until the matrix is upper triangular
//! (complex Schur form). Eigenvectors come from back substitution on the
//! triangular factor. No symmetry of the input is assumed or exploited.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// QR sweeps allowed per unit of matrix dimension.
pub const SWEEPS_PER_DIM: usize = 30;

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Eigenvalues with matching unit-norm right eigenvectors (stored as columns).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// `‖M v_k − λ_k v_k‖₂` for every pair.
    pub fn residuals(&self, m: &ComplexMatrix) -> Vec<f64> {
        (0..self.eigenvalues.len())
            .map(|k| {
                let v = self.eigenvector(k);
                residual_norm(m, self.eigenvalues[k], &v)
            })
            .collect()
    }
}

/// `‖M v − λ v‖₂ / ‖v‖₂`.
pub fn residual_norm(m: &ComplexMatrix, lambda: Complex64, v: &[Complex64]) -> f64 {
    let mv = m.mul_vec(v);
    let num: f64 = mv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - lambda * b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let den: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    num / den
}

fn validate(m: &ComplexMatrix, tol: f64) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::invalid(format!("eigensolver tolerance must lie in (0, 1), got {tol}")));
    }
    Ok(())
}

/// Full eigendecomposition of a general complex matrix.
///
/// `tol` is the relative deflation threshold for subdiagonal entries;
/// `f64::EPSILON` gives full working precision.
pub fn eig_general(m: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    validate(m, tol)?;
    let n = m.dim();
    let mut h = m.clone();
    let scale = balance(&mut h);
    let mut z = ComplexMatrix::identity(n);
    hessenberg(&mut h, Some(&mut z));
    let eigenvalues = hqr(&mut h, Some(&mut z), tol)?;
    let mut vectors = triangular_eigenvectors(&h, &z);
    for k in 0..n {
        let mut norm = 0.0;
        for i in 0..n {
            vectors[(i, k)] *= scale[i];
            norm += vectors[(i, k)].norm_sqr();
        }
        let norm = norm.sqrt();
        if norm > 0.0 {
            for i in 0..n {
                vectors[(i, k)] /= norm;
            }
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Eigenvalues only. Cheaper than [`eig_general`]: the QR sweeps touch only
/// the active window and no Schur vectors are accumulated.
pub fn eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    validate(m, tol)?;
    let mut h = m.clone();
    balance(&mut h);
    hessenberg(&mut h, None);
    hqr(&mut h, None, tol)
}

/// Parlett–Reinsch diagonal balancing by powers of two. Returns the scaling
/// `d` such that the balanced matrix is `D⁻¹ M D`.
fn balance(a: &mut ComplexMatrix) -> Vec<f64> {
    const RADIX: f64 = 2.0;
    const SQRDX: f64 = RADIX * RADIX;
    let n = a.dim();
    let mut d = vec![1.0; n];
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += cabs1(a[(j, i)]);
                    r += cabs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= SQRDX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= SQRDX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                d[i] *= f;
                for z in a.row_mut(i) {
                    *z /= f;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
    d
}

/// In-place Householder reduction to upper Hessenberg form. When `q` is
/// given it is multiplied on the right by the accumulated reflectors.
///
/// Column fill is tracked so that banded inputs only pay for the rows a
/// reflector can actually touch.
fn hessenberg(a: &mut ComplexMatrix, mut q: Option<&mut ComplexMatrix>) {
    let n = a.dim();
    if n < 3 {
        return;
    }
    let mut col_extent: Vec<usize> = (0..n)
        .map(|j| (0..n).rev().find(|&i| a[(i, j)] != ZERO).unwrap_or(0))
        .collect();
    let mut v = vec![ZERO; n];
    let mut w = vec![ZERO; n];

    for k in 0..n - 2 {
        let last = col_extent[k];
        if last <= k + 1 {
            continue;
        }
        let len = last - k;
        let mut tail2 = 0.0;
        for i in 0..len {
            v[i] = a[(k + 1 + i, k)];
            if i > 0 {
                tail2 += v[i].norm_sqr();
            }
        }
        if tail2 == 0.0 {
            col_extent[k] = k + 1;
            continue;
        }
        let xnorm = (tail2 + v[0].norm_sqr()).sqrt();
        let phase = if v[0] == ZERO { ONE } else { v[0] / v[0].norm() };
        let beta = -phase * xnorm;
        v[0] -= beta;
        let vnorm2: f64 = v[..len].iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // H a from the left on rows k+1..=last.
        w[k + 1..n].fill(ZERO);
        for i in 0..len {
            let vi = v[i].conj();
            let row = a.row(k + 1 + i);
            for (wj, rj) in w[k + 1..n].iter_mut().zip(&row[k + 1..n]) {
                *wj += vi * rj;
            }
        }
        for i in 0..len {
            let f = v[i] * tau;
            let row = a.row_mut(k + 1 + i);
            for (rj, wj) in row[k + 1..n].iter_mut().zip(&w[k + 1..n]) {
                *rj -= f * wj;
            }
        }
        a[(k + 1, k)] = beta;
        for i in 1..len {
            a[(k + 1 + i, k)] = ZERO;
        }
        for ext in col_extent[last + 1..].iter_mut() {
            if *ext > k {
                *ext = (*ext).max(last);
            }
        }

        // a H from the right on columns k+1..=last.
        let rmax = col_extent[k + 1..=last].iter().copied().max().unwrap_or(last).max(last);
        for r in 0..=rmax {
            apply_reflector_right(a.row_mut(r), &v[..len], k + 1, tau);
        }
        for ext in col_extent[k + 1..=last].iter_mut() {
            *ext = rmax;
        }
        col_extent[k] = k + 1;

        if let Some(q) = q.as_deref_mut() {
            for r in 0..n {
                apply_reflector_right(q.row_mut(r), &v[..len], k + 1, tau);
            }
        }
    }
}

#[inline]
fn apply_reflector_right(row: &mut [Complex64], v: &[Complex64], offset: usize, tau: f64) {
    let seg = &mut row[offset..offset + v.len()];
    let s: Complex64 = seg.iter().zip(v).map(|(a, b)| a * b).sum();
    let f = s * tau;
    for (a, b) in seg.iter_mut().zip(v) {
        *a -= f * b.conj();
    }
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G [x; y] = [r; 0]`.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64, Complex64) {
    if y == ZERO {
        return (1.0, ZERO, x);
    }
    if x == ZERO {
        return (0.0, ONE, y);
    }
    let ax = x.norm();
    let ay = y.norm();
    let rho = ax.hypot(ay);
    let phase = x / ax;
    (ax / rho, phase * y.conj() / rho, phase * rho)
}

/// Eigenvalue of the trailing 2×2 block `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let bc = b * c;
    if bc == ZERO {
        return d;
    }
    let x = (a - d) * 0.5;
    let mut y = (x * x + bc).sqrt();
    if (x.conj() * y).re < 0.0 {
        y = -y;
    }
    let den = x + y;
    if den == ZERO {
        d
    } else {
        d - bc / den
    }
}

/// Single-shift complex QR iteration on an upper Hessenberg matrix. With
/// `z` present the full Schur form is produced (rotations applied across
/// whole rows and columns, and accumulated into `z`); otherwise only the
/// active window is updated.
fn hqr(h: &mut ComplexMatrix, mut z: Option<&mut ComplexMatrix>, tol: f64) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let mut eig = vec![ZERO; n];
    if n == 0 {
        return Ok(eig);
    }
    let full = z.is_some();
    let max_sweeps = SWEEPS_PER_DIM * n;
    let smlnum = f64::MIN_POSITIVE * (n as f64 / tol);
    let mut sweeps = 0;
    let mut its = 0;
    let mut hi = n - 1;

    loop {
        let mut l = 0;
        for k in (1..=hi).rev() {
            let sub = cabs1(h[(k, k - 1)]);
            if sub <= smlnum {
                l = k;
                break;
            }
            let mut tst = cabs1(h[(k - 1, k - 1)]) + cabs1(h[(k, k)]);
            if tst == 0.0 {
                if k >= 2 {
                    tst += h[(k - 1, k - 2)].re.abs();
                }
                if k < hi {
                    tst += h[(k + 1, k)].re.abs();
                }
            }
            if sub <= tol * tst {
                // Ahues & Tisseur refinement of the deflation test.
                let up = cabs1(h[(k - 1, k)]);
                let ab = sub.max(up);
                let ba = sub.min(up);
                let diff = cabs1(h[(k - 1, k - 1)] - h[(k, k)]);
                let hkk = cabs1(h[(k, k)]);
                let aa = hkk.max(diff);
                let bb = hkk.min(diff);
                let s = aa + ab;
                if ba * (ab / s) <= smlnum.max(tol * (bb * (aa / s))) {
                    l = k;
                    break;
                }
            }
        }
        if l > 0 {
            h[(l, l - 1)] = ZERO;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            its = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        if sweeps >= max_sweeps {
            return Err(Error::Eigen {
                sweeps,
                deflated: n - 1 - hi,
                dim: n,
            });
        }
        sweeps += 1;
        its += 1;

        let shift = if its % 20 == 10 {
            h[(l, l)] + 0.75 * h[(l + 1, l)].re.abs()
        } else if its % 20 == 0 {
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].re.abs()
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        let col_end = if full { n } else { hi + 1 };
        let row_start = if full { 0 } else { l };
        for k in l..hi {
            let (x, y) = if k == l {
                (h[(l, l)] - shift, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s, r) = givens(x, y);
            if k > l {
                h[(k, k - 1)] = r;
                h[(k + 1, k - 1)] = ZERO;
            }
            let sc = s.conj();
            {
                let (rk, rk1) = h.row_pair_mut(k, k + 1);
                for (a, b) in rk[k..col_end].iter_mut().zip(rk1[k..col_end].iter_mut()) {
                    let (x0, y0) = (*a, *b);
                    *a = x0 * c + s * y0;
                    *b = y0 * c - sc * x0;
                }
            }
            let row_end = (k + 2).min(hi);
            for i in row_start..=row_end {
                rotate_columns(h.row_mut(i), k, c, s);
            }
            if let Some(z) = z.as_deref_mut() {
                for i in 0..n {
                    rotate_columns(z.row_mut(i), k, c, s);
                }
            }
        }
    }
    Ok(eig)
}

/// Right-multiplies columns `k, k+1` of a row by `Gᴴ`.
#[inline]
fn rotate_columns(row: &mut [Complex64], k: usize, c: f64, s: Complex64) {
    let a = row[k];
    let b = row[k + 1];
    row[k] = a * c + b * s.conj();
    row[k + 1] = b * c - a * s;
}

/// Eigenvectors `Z y_k` where `y_k` solves `(T − t_kk) y = 0` by back
/// substitution on the upper-triangular Schur factor `T`.
fn triangular_eigenvectors(t: &ComplexMatrix, z: &ComplexMatrix) -> ComplexMatrix {
    let n = t.dim();
    let small = (f64::EPSILON * t.norm_inf()).max(f64::MIN_POSITIVE);
    let mut vectors = ComplexMatrix::zeros(n);
    let mut y = vec![ZERO; n];
    for k in 0..n {
        let lambda = t[(k, k)];
        y[k] = ONE;
        for j in (0..k).rev() {
            let row = t.row(j);
            let sum: Complex64 = row[j + 1..=k].iter().zip(&y[j + 1..=k]).map(|(a, b)| a * b).sum();
            let mut d = row[j] - lambda;
            if d.norm() < small {
                d = Complex64::new(small, 0.0);
            }
            y[j] = -sum / d;
            let mag = y[j].norm();
            if mag > 1e150 {
                for yl in y[j..=k].iter_mut() {
                    *yl /= mag;
                }
            }
        }
        for i in 0..n {
            let zi = z.row(i);
            vectors[(i, k)] = zi[..=k].iter().zip(&y[..=k]).map(|(a, b)| a * b).sum();
        }
    }
    vectors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn rotation_matrix_has_imaginary_pair() {
        let m = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(-1.0, 0.0), c(0.0, 0.0)]]);
        let d = eig_general(&m, f64::EPSILON).unwrap();
        let ev = sorted(d.eigenvalues.clone());
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-14);
        for r in d.residuals(&m) {
            assert!(r < 1e-14);
        }
    }

    #[test]
    fn diagonal_matrix_returns_its_diagonal() {
        let diag = [c(3.0, 1.0), c(-2.0, 0.5), c(0.0, 0.0), c(7.0, -4.0)];
        let m = ComplexMatrix::from_fn(4, |i, j| if i == j { diag[i] } else { ZERO });
        let ev = sorted(eigenvalues(&m, f64::EPSILON).unwrap());
        assert_eq!(ev, sorted(diag.to_vec()));
    }

    #[test]
    fn upper_triangular_eigenvectors() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 1.0), c(0.5, 0.0)],
            vec![ZERO, c(2.0, 0.0), c(1.0, -1.0)],
            vec![ZERO, ZERO, c(3.0, 0.5)],
        ]);
        let d = eig_general(&m, f64::EPSILON).unwrap();
        for r in d.residuals(&m) {
            assert!(r < 1e-13, "residual {r}");
        }
    }

    #[test]
    fn defective_jordan_block() {
        // Eigenvalue 2 with algebraic multiplicity 3; perturbation theory
        // bounds the computed eigenvalues by eps^(1/3).
        let m = ComplexMatrix::from_fn(3, |i, j| {
            if i == j {
                c(2.0, 0.0)
            } else if j == i + 1 {
                ONE
            } else {
                ZERO
            }
        });
        for ev in eigenvalues(&m, f64::EPSILON).unwrap() {
            assert!((ev - c(2.0, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn trace_and_residuals_on_dense_nonnormal_matrix() {
        let n = 25;
        let m = ComplexMatrix::from_fn(n, |i, j| {
            let x = (i * 7 + j * 13) as f64;
            c((x * 0.37).sin() * (1.0 + i as f64), (x * 0.11).cos() - 0.3 * j as f64)
        });
        let d = eig_general(&m, f64::EPSILON).unwrap();
        let trace: Complex64 = (0..n).map(|i| m[(i, i)]).sum();
        let sum: Complex64 = d.eigenvalues.iter().sum();
        assert!((trace - sum).norm() < 1e-10 * m.norm_inf());
        for r in d.residuals(&m) {
            assert!(r < 1e-12 * m.norm_inf(), "residual {r}");
        }
        let only = sorted(eigenvalues(&m, f64::EPSILON).unwrap());
        let full = sorted(d.eigenvalues);
        for (a, b) in only.iter().zip(&full) {
            assert!((a - b).norm() < 1e-10 * m.norm_inf());
        }
    }

    #[test]
    fn zero_and_tiny_sizes() {
        assert!(eigenvalues(&ComplexMatrix::zeros(0), f64::EPSILON).unwrap().is_empty());
        let one = ComplexMatrix::from_rows(&[vec![c(4.0, -1.0)]]);
        assert_eq!(eigenvalues(&one, f64::EPSILON).unwrap(), vec![c(4.0, -1.0)]);
    }

    #[test]
    fn rejects_non_finite_entries_and_bad_tolerance() {
        let m = ComplexMatrix::from_rows(&[vec![c(f64::NAN, 0.0)]]);
        assert!(matches!(eigenvalues(&m, f64::EPSILON), Err(Error::InvalidParameter(_))));
        let m = ComplexMatrix::identity(2);
        assert!(eigenvalues(&m, 0.0).is_err());
    }
}

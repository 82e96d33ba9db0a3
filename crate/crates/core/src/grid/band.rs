//! Banded complex matrices and their LU factorization with partial pivoting,
//! used for inverse iteration on the finite-difference Hamiltonians.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square matrix with `kl` sub- and `ku` super-diagonals.
///
/// Row `i` stores columns `i − kl ..= i + ku + kl`; the extra `kl` columns
/// hold the fill produced by row interchanges during factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![ZERO; n * (2 * kl + ku + 1)],
        }
    }

    fn width(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl);
        i * self.width() + (j + self.kl - i)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if j + self.kl < i || j > i + self.ku {
            ZERO
        } else {
            self.data[self.slot(i, j)]
        }
    }

    /// Sets an entry inside the band; panics outside it.
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "({i}, {j}) is outside the band");
        let s = self.slot(i, j);
        self.data[s] = value;
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, |i, j| self.get(i, j))
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * v[j]).sum()
            })
            .collect()
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j).norm()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// LU factors of `self − σI`. Exactly zero pivots are replaced by
    /// `ε‖A‖∞`, the usual safeguard when σ is an eigenvalue.
    pub fn shifted_lu(&self, sigma: Complex64) -> BandLu {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let tiny = f64::EPSILON * self.norm_inf().max(f64::MIN_POSITIVE);
        let mut a = self.clone();
        for i in 0..n {
            let s = a.slot(i, i);
            a.data[s] -= sigma;
        }
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + kl + ku).min(n - 1);
            let mut p = k;
            let mut best = a.data[a.slot(k, k)].norm();
            for i in (k + 1)..=last_row {
                let v = a.data[a.slot(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[k] = p;
            if p != k {
                for j in k..=last_col {
                    let (sk, sp) = (a.slot(k, j), a.slot(p, j));
                    a.data.swap(sk, sp);
                }
            }
            let dk = a.slot(k, k);
            if a.data[dk] == ZERO {
                a.data[dk] = Complex64::new(tiny, 0.0);
            }
            let pivot = a.data[dk];
            for i in (k + 1)..=last_row {
                let si = a.slot(i, k);
                let l = a.data[si] / pivot;
                a.data[si] = l;
                if l == ZERO {
                    continue;
                }
                for j in (k + 1)..=last_col {
                    let (dst, src) = (a.slot(i, j), a.slot(k, j));
                    let u = a.data[src];
                    a.data[dst] -= l * u;
                }
            }
        }
        BandLu { lu: a, piv }
    }
}

/// Output of [`BandMatrix::shifted_lu`].
#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
    piv: Vec<usize>,
}

impl BandLu {
    /// Solves `(A − σI) x = b` in place.
    pub fn solve(&self, b: &mut [Complex64]) {
        let a = &self.lu;
        let n = a.n;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            for i in (k + 1)..=(k + a.kl).min(n - 1) {
                b[i] -= a.data[a.slot(i, k)] * bk;
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in (i + 1)..=(i + a.kl + a.ku).min(n - 1) {
                s -= a.data[a.slot(i, j)] * b[j];
            }
            b[i] = s / a.data[a.slot(i, i)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(n: usize, kl: usize, ku: usize) -> BandMatrix {
        let mut m = BandMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let t = (i * 7 + j * 3) as f64;
                // Small diagonal forces row interchanges.
                let d = if i == j { 0.01 } else { 1.0 };
                m.set(i, j, c(d * t.sin(), (0.3 * t).cos()));
            }
        }
        m
    }

    #[test]
    fn solve_is_backward_stable() {
        for (kl, ku) in [(1, 1), (2, 2), (1, 3), (3, 0)] {
            let m = sample(40, kl, ku);
            let sigma = c(0.2, -0.1);
            let x_true: Vec<Complex64> = (0..40).map(|i| c(i as f64 * 0.1, 1.0 - i as f64 * 0.05)).collect();
            let shifted: Vec<Complex64> = m.mul_vec(&x_true).iter().zip(&x_true).map(|(a, x)| a - sigma * x).collect();
            let mut x = shifted.clone();
            m.shifted_lu(sigma).solve(&mut x);
            // Backward error: ‖(A − σ)x − b‖ relative to ‖A − σ‖‖x‖.
            let ax = m.mul_vec(&x);
            let res = ax.iter().zip(&x).zip(&shifted).map(|((a, xi), b)| (a - sigma * xi - b).norm()).fold(0.0, f64::max);
            let xnorm = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let err = res / ((m.norm_inf() + sigma.norm()) * xnorm);
            assert!(err < 1e-14, "kl={kl} ku={ku} backward error {err}");
        }
    }

    #[test]
    fn dense_round_trip() {
        let m = sample(12, 2, 1);
        let d = m.to_dense();
        assert_eq!(d.bandwidths(), (2, 1));
        let v: Vec<Complex64> = (0..12).map(|i| c(1.0, i as f64)).collect();
        let diff = d.mul_vec(&v).iter().zip(m.mul_vec(&v)).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-13);
        assert_eq!(m.get(0, 5), ZERO);
    }

    #[test]
    fn singular_shift_does_not_divide_by_zero() {
        let mut m = BandMatrix::zeros(3, 1, 1);
        for i in 0..3 {
            m.set(i, i, c(2.0, 0.0));
        }
        let lu = m.shifted_lu(c(2.0, 0.0));
        let mut b = vec![c(1.0, 0.0); 3];
        lu.solve(&mut b);
        assert!(b.iter().all(|z| z.re.is_finite()));
    }
}

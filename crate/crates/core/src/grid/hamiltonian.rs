use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::band::BandMatrix;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::potential::PotentialSpec;

pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FdOrder {
    Fd2,
    Fd4,
}

impl FdOrder {
    /// Nominal convergence order in the spacing h.
    pub fn nominal(&self) -> u32 {
        match self {
            FdOrder::Fd2 => 2,
            FdOrder::Fd4 => 4,
        }
    }

    /// Half-width of the second-derivative stencil.
    pub fn reach(&self) -> usize {
        match self {
            FdOrder::Fd2 => 1,
            FdOrder::Fd4 => 2,
        }
    }
}

/// Uniform interior grid on `(x_min, x_max)` with Dirichlet walls at both ends.
///
/// The `n_points` unknowns sit at `x_j = x_min + (j+1)h`, `h = (x_max − x_min)/(n_points + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discretization {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub order: FdOrder,
    pub boundary: &'static str,
}

impl Discretization {
    pub fn new(x_min: f64, x_max: f64, n_points: usize, order: FdOrder) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
            return Err(Error::invalid(format!("need finite x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if n_points < MIN_POINTS {
            return Err(Error::invalid(format!("need at least {MIN_POINTS} grid points, got {n_points}")));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
            order,
            boundary: "dirichlet",
        })
    }

    /// The potential's natural domain at the given resolution.
    pub fn natural(spec: &PotentialSpec, n_points: usize, order: FdOrder) -> Result<Self> {
        let (a, b) = spec.natural_domain();
        Self::new(a, b, n_points, order)
    }

    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points + 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.h();
        (0..self.n_points).map(|j| self.x_min + (j + 1) as f64 * h).collect()
    }

    /// Same interval with the spacing divided by `2^k`.
    pub fn refined(&self, k: u32) -> Self {
        Self {
            n_points: (self.n_points + 1) * (1usize << k) - 1,
            ..*self
        }
    }

    /// A note when the grid reaches past the potential's natural domain.
    pub fn domain_warning(&self, spec: &PotentialSpec) -> Option<String> {
        let (a, b) = spec.natural_domain();
        let slack = 1e-9 * (b - a);
        if self.x_min < a - slack || self.x_max > b + slack {
            Some(format!(
                "grid [{}, {}] extends beyond the natural domain [{a}, {b}] of {}",
                self.x_min,
                self.x_max,
                spec.name()
            ))
        } else {
            None
        }
    }
}

/// `κ p² + diag(V)` from the potential values at the grid points.
pub(crate) fn assemble(values: &[Complex64], kappa: f64, h: f64, order: FdOrder) -> BandMatrix {
    let n = values.len();
    let r = order.reach();
    let mut m = BandMatrix::zeros(n, r, r);
    let stencil: &[f64] = match order {
        FdOrder::Fd2 => &[2.0, -1.0],
        FdOrder::Fd4 => &[30.0 / 12.0, -16.0 / 12.0, 1.0 / 12.0],
    };
    let k = kappa / (h * h);
    for i in 0..n {
        m.set(i, i, values[i] + k * stencil[0]);
        for (d, &w) in stencil.iter().enumerate().skip(1) {
            if i + d < n {
                m.set(i, i + d, Complex64::new(k * w, 0.0));
                m.set(i + d, i, Complex64::new(k * w, 0.0));
            }
        }
    }
    m
}

/// Banded form of the Hamiltonian.
pub fn build_band(spec: &PotentialSpec, disc: &Discretization) -> Result<BandMatrix> {
    let values = disc
        .points()
        .into_iter()
        .map(|x| spec.evaluate_real(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(&values, spec.kappa(), disc.h(), disc.order))
}

/// Dense Hamiltonian; complex symmetric and never conjugate-symmetrized.
pub fn build_hamiltonian(spec: &PotentialSpec, disc: &Discretization) -> Result<ComplexMatrix> {
    Ok(build_band(spec, disc)?.to_dense())
}

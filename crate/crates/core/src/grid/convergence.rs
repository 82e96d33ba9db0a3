use num_complex::Complex64;
use serde::Serialize;

use super::hamiltonian::Discretization;
use super::spectrum::solve_spectrum;
use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::spectra::exact_spectrum;

/// Errors below this are rounding noise and yield no order estimate.
const ERROR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_points: usize,
    pub h: f64,
    /// Grid eigenvalue matched to each tracked exact level.
    pub energies: Vec<Complex64>,
    pub errors: Vec<f64>,
    /// `error(previous) / error(this)`, per tracked level.
    pub ratios: Vec<Option<f64>>,
    /// `log₂` of the ratio.
    pub orders: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub exact: Vec<Complex64>,
    pub rows: Vec<ConvergenceRow>,
    pub nominal_order: u32,
    /// Smallest order over tracked levels at the finest refinement.
    pub empirical_order: Option<f64>,
    /// True when the finest step improves by less than half the nominal order,
    /// i.e. the error is dominated by something other than h (truncation of
    /// the interval, or rounding).
    pub plateau: bool,
}

/// Grid eigenvalue errors against the closed form for `levels` lowest states
/// at spacings `h, h/2, …, h/2^refinements`.
///
/// Each refinement uses `n_k = (n + 1)·2^k − 1` points so the spacing halves exactly.
pub fn convergence_study(
    spec: &PotentialSpec,
    base: &Discretization,
    refinements: u32,
    levels: usize,
) -> Result<ConvergenceTable> {
    if refinements < 2 {
        return Err(Error::invalid(format!("convergence study needs at least 2 refinements, got {refinements}")));
    }
    if levels == 0 {
        return Err(Error::invalid("convergence study needs at least one tracked level"));
    }
    let exact: Vec<Complex64> = exact_spectrum(spec, levels - 1)?.iter().map(|s| s.energy).collect();
    if exact.is_empty() {
        return Err(Error::invalid(format!("{} has no bound states to track", spec.name())));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for k in 0..=refinements {
        let disc = base.refined(k);
        let want = (exact.len() + 4).min(disc.n_points);
        let result = solve_spectrum(spec, &disc, want)?;
        let mut energies = Vec::with_capacity(exact.len());
        let mut errors = Vec::with_capacity(exact.len());
        for e in &exact {
            let nearest = result
                .eigenvalues
                .iter()
                .copied()
                .min_by(|a, b| (a - e).norm().total_cmp(&(b - e).norm()))
                .ok_or_else(|| Error::invalid("grid produced no eigenvalues"))?;
            energies.push(nearest);
            errors.push((nearest - e).norm());
        }
        let (ratios, orders) = match rows.last() {
            Some(prev) => errors
                .iter()
                .zip(&prev.errors)
                .map(|(&now, &before)| {
                    if now > ERROR_FLOOR && before > ERROR_FLOOR {
                        let r = before / now;
                        (Some(r), Some(r.log2()))
                    } else {
                        (None, None)
                    }
                })
                .unzip(),
            None => (vec![None; exact.len()], vec![None; exact.len()]),
        };
        rows.push(ConvergenceRow {
            n_points: disc.n_points,
            h: disc.h(),
            energies,
            errors,
            ratios,
            orders,
        });
    }
    let nominal_order = base.order.nominal();
    let last = rows.last().expect("at least three rows");
    let empirical_order = last.orders.iter().flatten().copied().reduce(f64::min);
    let plateau = match empirical_order {
        Some(p) => p < 0.5 * nominal_order as f64,
        None => false,
    };
    Ok(ConvergenceTable {
        exact,
        rows,
        nominal_order,
        empirical_order,
        plateau,
    })
}

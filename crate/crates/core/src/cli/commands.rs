use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::args::{CommandKind, MethodArg, PairingArg};
use super::report::{complex, complex_text, fixed, num, sci, Report};
use super::{Failure, Settings, EXIT_CHECK_FAILED, EXIT_OK};
use crate::error::Error;
use crate::grid::{convergence_study, solve_spectrum, Discretization, FdOrder};
use crate::orthogonality::{compare_overlap, orthogonality_matrix, Pairing};
use crate::potential::{linspace, Family, PotentialSpec};
use crate::shift::{check_pseudo_hermitian, CHECK_GRID_POINTS, DEFAULT_PSEUDO_TOL};
use crate::spectra::{exact_spectrum, BoundState};

/// Grid points used by `spectrum` when none are given.
const MORSE_DEFAULT_POINTS: usize = 1600;
const DEFAULT_POINTS: usize = 1200;
/// Base grid of `converge`; refinements use `(n + 1)·2^k − 1` points.
const CONVERGE_DEFAULT_POINTS: usize = 99;
const CONVERGE_DEFAULT_REFINEMENTS: u32 = 3;
/// Oscillator states shown when `--k` is absent.
const HO_DEFAULT_STATES: usize = 6;
const HO_DEFAULT_GRAM_STATES: usize = 4;
const GRID_ONLY_DEFAULT_STATES: usize = 5;
const SPECTRUM_REALITY_TOL: f64 = 1e-6;
const GRAM_PASS_TOL: f64 = 1e-8;
const OVERLAP_PASS_TOL: f64 = 1e-10;

pub(super) fn dispatch(command: CommandKind, s: &Settings) -> Result<Report, Failure> {
    match command {
        CommandKind::Spectrum => spectrum(s),
        CommandKind::CheckPseudo => check_pseudo(s),
        CommandKind::Orthogonality => orthogonality(s),
        CommandKind::LaguerreIntegral => laguerre_integral(s),
        CommandKind::Converge => converge(s),
    }
}

fn potential(s: &Settings) -> Result<PotentialSpec, Failure> {
    let name = s
        .potential
        .as_deref()
        .ok_or_else(|| Failure::invalid("--potential is required"))?;
    Ok(PotentialSpec::from_name(name, &s.params)?)
}

fn potential_inputs(spec: &PotentialSpec, s: &Settings) -> Value {
    let mut params = s.params.clone();
    params.kappa = Some(spec.kappa());
    json!({ "name": spec.name(), "params": params })
}

fn positive(value: Option<f64>, default: f64, what: &str) -> Result<f64, Failure> {
    let v = value.unwrap_or(default);
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Failure::invalid(format!("{what} must be positive and finite, got {v}")))
    }
}

fn discretization(spec: &PotentialSpec, s: &Settings, default_points: usize) -> Result<Discretization, Failure> {
    let (a, b) = spec.natural_domain();
    let order = s.order.map(FdOrder::from).unwrap_or(FdOrder::Fd4);
    Ok(Discretization::new(
        s.x_min.unwrap_or(a),
        s.x_max.unwrap_or(b),
        s.n_points.unwrap_or(default_points),
        order,
    )?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn spectrum(s: &Settings) -> Result<Report, Failure> {
    let spec = potential(s)?;
    let tol = positive(s.tol, SPECTRUM_REALITY_TOL, "--tol")?;
    let mut notes: Vec<String> = Vec::new();
    let k = match s.k {
        Some(0) => return Err(Failure::invalid("--k must be at least 1")),
        Some(k) => k,
        None => match spec.family() {
            Family::HarmonicShifted { .. } => HO_DEFAULT_STATES,
            Family::KhareMandal { .. } => GRID_ONLY_DEFAULT_STATES,
            // Every closed-form state; falls back below if there is no closed form.
            _ => exact_spectrum(&spec, usize::MAX - 1).map(|v| v.len().max(1)).unwrap_or(GRID_ONLY_DEFAULT_STATES),
        },
    };

    let (method, exact) = match s.method {
        Some(MethodArg::Grid) => (MethodArg::Grid, Vec::new()),
        Some(m) => (m, exact_spectrum(&spec, k - 1)?),
        None => match exact_spectrum(&spec, k - 1) {
            Ok(states) => (MethodArg::Both, states),
            Err(e @ (Error::InvalidParameter(_) | Error::NonRealC(_))) => {
                notes.push(format!("no closed form ({e}); grid only"));
                (MethodArg::Grid, Vec::new())
            }
            Err(e) => return Err(e.into()),
        },
    };

    let default_points = if spec.is_morse() { MORSE_DEFAULT_POINTS } else { DEFAULT_POINTS };
    let disc = discretization(&spec, s, default_points)?;
    let grid = if method == MethodArg::Exact {
        None
    } else {
        if let Some(w) = disc.domain_warning(&spec) {
            notes.push(w);
        }
        Some(solve_spectrum(&spec, &disc, k.min(disc.n_points))?)
    };

    let rows_len = exact.len().max(grid.as_ref().map_or(0, |g| g.len()));
    let mut headers = vec!["n"];
    if method != MethodArg::Grid {
        headers.push("E_exact");
    }
    if method != MethodArg::Exact {
        headers.extend(["E_grid", "|Im E_grid|", "bound"]);
    }
    if method == MethodArg::Both {
        headers.push("|dE|");
    }
    let mut rows = Vec::new();
    let mut results = Vec::new();
    let mut max_rel: Option<f64> = None;
    let mut all_real = true;
    for i in 0..rows_len {
        let e_exact = exact.get(i).map(|st| st.energy);
        let e_grid = grid.as_ref().and_then(|g| g.eigenvalues.get(i).copied());
        let bound = grid.as_ref().and_then(|g| g.bound_flags.get(i).copied());
        let delta = e_exact.zip(e_grid).map(|(a, b)| (a - b).norm());
        if let (Some(d), Some(e)) = (delta, e_exact) {
            let rel = d / e.norm().max(f64::MIN_POSITIVE);
            max_rel = Some(max_rel.map_or(rel, |m: f64| m.max(rel)));
        }
        if let Some(e) = e_grid {
            all_real &= e.im.abs() <= tol * e.re.abs().max(1.0);
        }
        let blank = || "-".to_string();
        let mut row = vec![i.to_string()];
        if method != MethodArg::Grid {
            row.push(e_exact.map_or_else(blank, |e| fixed(e.re)));
        }
        if method != MethodArg::Exact {
            row.push(e_grid.map_or_else(blank, |e| fixed(e.re)));
            row.push(e_grid.map_or_else(blank, |e| sci(e.im.abs())));
            row.push(bound.map_or_else(blank, |b| b.to_string()));
        }
        if method == MethodArg::Both {
            row.push(delta.map_or_else(blank, sci));
        }
        rows.push(row);
        results.push(json!({
            "n": i,
            "E_exact": e_exact.map_or(Value::Null, complex),
            "E_grid": e_grid.map_or(Value::Null, complex),
            "abs_im_E_grid": e_grid.map_or(Value::Null, |e| num(e.im.abs())),
            "abs_delta_E": delta.map_or(Value::Null, num),
            "bound": bound,
        }));
    }

    let mut summary = vec![("potential", spec.name().to_string())];
    if let Some(m) = max_rel {
        summary.push(("max |dE|/|E|", sci(m)));
    }
    if grid.is_some() {
        summary.push(("grid eigenvalues real", format!("{all_real} (|Im E| <= {tol:e}·max(1, |Re E|))")));
    }
    for n in &notes {
        summary.push(("note", n.clone()));
    }

    if let Some(path) = &s.plot_data {
        write_plot_data(path, &spec, &disc, grid.as_ref(), &exact)?;
    }

    let diagnostics = match &grid {
        Some(g) => json!({
            "residual_norms": g.residual_norms,
            "outer_mass": g.outer_mass,
            "discarded_boundary_modes": g.discarded_boundary_modes,
            "matrix_norm": g.matrix_norm,
            "notes": notes,
        }),
        None => json!({ "notes": notes }),
    };
    let method_name = match method {
        MethodArg::Exact => "exact",
        MethodArg::Grid => "grid",
        MethodArg::Both => "both",
    };
    Ok(Report {
        command: "spectrum",
        inputs: json!({
            "potential": potential_inputs(&spec, s),
            "method": method_name,
            "k": k,
            "tol": tol,
            "discretization": if grid.is_some() { to_value(&disc) } else { Value::Null },
        }),
        results: json!({
            "states": results,
            "max_rel_error": max_rel.map_or(Value::Null, num),
            "grid_real": grid.is_some().then_some(all_real),
        }),
        diagnostics,
        headers,
        rows,
        summary,
        exit_code: EXIT_OK,
    })
}

/// One block per state: `n, x, ReV, ImV, RePsi, ImPsi`, with Ψ scaled to unit
/// discrete L² norm and its largest entry rotated onto the positive real axis.
fn write_plot_data(
    path: &Path,
    spec: &PotentialSpec,
    disc: &Discretization,
    grid: Option<&crate::grid::SpectrumResult>,
    exact: &[BoundState],
) -> Result<(), Failure> {
    let xs = disc.points();
    let h = disc.h();
    let states: Vec<Vec<Complex64>> = match grid {
        Some(g) => g.eigenvectors.clone(),
        None => exact
            .iter()
            .map(|st| xs.iter().map(|&x| st.eigenfunction.eval_real(x)).collect::<crate::Result<Vec<_>>>())
            .collect::<crate::Result<_>>()?,
    };
    let (re_v, im_v) = spec.real_imag_parts(&xs)?;
    let io = |e: csv::Error| Failure::invalid(format!("cannot write plot data to {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["n", "x", "ReV", "ImV", "RePsi", "ImPsi"]).map_err(io)?;
    for (n, psi) in states.iter().enumerate() {
        let norm = (psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * h).sqrt();
        let peak = psi.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
        let phase = if peak.norm() > 0.0 { peak.conj() / peak.norm() } else { Complex64::new(1.0, 0.0) };
        let scale = if norm > 0.0 { phase / norm } else { phase };
        for (j, &x) in xs.iter().enumerate() {
            let p = psi[j] * scale;
            w.write_record([
                n.to_string(),
                format!("{x:.16e}"),
                format!("{:.16e}", re_v[j]),
                format!("{:.16e}", im_v[j]),
                format!("{:.16e}", p.re),
                format!("{:.16e}", p.im),
            ])
            .map_err(io)?;
        }
    }
    w.flush()
        .map_err(|e| Failure::invalid(format!("cannot write plot data to {}: {e}", path.display())))
}

fn check_pseudo(s: &Settings) -> Result<Report, Failure> {
    let spec = potential(s)?;
    let tol = positive(s.tol, DEFAULT_PSEUDO_TOL, "--tol")?;
    let (theta, source) = match s.theta_override {
        Some(t) => (t, "override"),
        None => (spec.pseudo_shift_angle()?.theta, "catalog"),
    };
    let (a, b) = spec.natural_domain();
    let points = s.n_points.unwrap_or(CHECK_GRID_POINTS);
    if points < 2 {
        return Err(Failure::invalid(format!("--n-points must be at least 2, got {points}")));
    }
    let (lo, hi) = (s.x_min.unwrap_or(a), s.x_max.unwrap_or(b));
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Failure::invalid(format!("need finite x_min < x_max, got [{lo}, {hi}]")));
    }
    let verdict = check_pseudo_hermitian(&spec, theta, &linspace(lo, hi, points), tol)?;
    let verdict_text = if verdict.passed { "pass" } else { "fail" };
    Ok(Report {
        command: "check-pseudo",
        inputs: json!({
            "potential": potential_inputs(&spec, s),
            "theta_source": source,
            "grid": { "x_min": lo, "x_max": hi, "n_points": points },
            "tol": tol,
        }),
        results: json!({
            "theta": verdict.theta_used,
            "max_residual": verdict.max_residual,
            "relative_residual": verdict.relative_residual(),
            "passed": verdict.passed,
        }),
        diagnostics: json!({ "scale": verdict.scale, "worst_x": verdict.worst_x }),
        headers: vec!["theta", "max_residual", "relative_residual", "tol", "worst_x", "verdict"],
        rows: vec![vec![
            format!("{theta:.15}"),
            sci(verdict.max_residual),
            sci(verdict.relative_residual()),
            sci(tol),
            fixed(verdict.worst_x),
            verdict_text.into(),
        ]],
        summary: vec![("potential", spec.name().into()), ("theta source", source.into())],
        exit_code: if verdict.passed { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}

fn orthogonality(s: &Settings) -> Result<Report, Failure> {
    let spec = potential(s)?;
    let tol = positive(s.tol, GRAM_PASS_TOL, "--tol")?;
    let pairing_arg = s.pairing.unwrap_or(PairingArg::Eta);
    let pairing = Pairing::from(pairing_arg);
    let k = match s.k {
        Some(0) => return Err(Failure::invalid("--k must be at least 1")),
        Some(k) => k,
        None if matches!(spec.family(), Family::HarmonicShifted { .. }) => HO_DEFAULT_GRAM_STATES,
        None => usize::MAX,
    };
    let states = exact_spectrum(&spec, k - 1)?;
    if states.is_empty() {
        return Err(Failure::invalid(format!("{} has no bound states", spec.name())));
    }
    let report = orthogonality_matrix(&spec, &states, pairing)?;
    // η applies to every catalog member with a shift; PT and the plain pairing
    // only promise orthogonality for PT-symmetric and real potentials.
    let asserted = match pairing {
        Pairing::EtaBilinear => true,
        Pairing::PtBilinear => spec.is_pt_symmetric(),
        Pairing::PlainBilinear => spec.is_real(),
    };
    let passed = report.off_diag_max_rel <= tol;
    let verdict = match (asserted, passed) {
        (false, _) => "not asserted",
        (true, true) => "pass",
        (true, false) => "fail",
    };
    let mut rows = Vec::new();
    for (i, row) in report.gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            rows.push(vec![
                report.states[i].to_string(),
                report.states[j].to_string(),
                format!("{:.16e}", g.re),
                format!("{:.16e}", g.im),
                sci(g.norm()),
            ]);
        }
    }
    Ok(Report {
        command: "orthogonality",
        inputs: json!({
            "potential": potential_inputs(&spec, s),
            "pairing": pairing.label(),
            "k": states.len(),
            "tol": tol,
        }),
        results: json!({
            "states": report.states,
            "gram": report.gram.iter().map(|r| r.iter().map(|&z| complex(z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "off_diag_max_rel": report.off_diag_max_rel,
            "asserted": asserted,
            "passed": asserted.then_some(passed),
        }),
        diagnostics: json!({ "theta": report.theta, "min_diag": report.min_diag, "norms": report.norms }),
        headers: vec!["m", "n", "Re", "Im", "abs"],
        rows,
        summary: vec![
            ("potential", spec.name().into()),
            ("pairing", pairing.label().into()),
            ("off_diag_max_rel", sci(report.off_diag_max_rel)),
            ("verdict", format!("{verdict} (tol {tol:e})")),
        ],
        exit_code: if asserted && !passed { EXIT_CHECK_FAILED } else { EXIT_OK },
    })
}

fn laguerre_integral(s: &Settings) -> Result<Report, Failure> {
    let (m, n, c) = match (s.m, s.n, s.c) {
        (Some(m), Some(n), Some(c)) => (m, n, c),
        _ => return Err(Failure::invalid("laguerre-integral needs --m, --n and --c")),
    };
    let tol = positive(s.tol, OVERLAP_PASS_TOL, "--tol")?;
    let cmp = compare_overlap(m, n, c)?;
    let agree = cmp.relative_difference <= tol;
    let off_diag_rel = (m != n).then(|| cmp.quadrature.value.norm().max(cmp.exact.value.norm()) / cmp.diagonal_min);
    let orthogonal = off_diag_rel.is_none_or(|r| r <= tol);
    let passed = agree && orthogonal;
    let row = |name: &str, r: &crate::quadrature::IntegralResult| {
        vec![
            name.to_string(),
            format!("{:.16e}", r.value.re),
            format!("{:.16e}", r.value.im),
            sci(r.abs_error_estimate),
            r.evaluations.to_string(),
        ]
    };
    let mut summary = vec![
        ("relative_difference", sci(cmp.relative_difference)),
        ("diagonal_min", format!("{:.16e}", cmp.diagonal_min)),
    ];
    if let Some(r) = off_diag_rel {
        summary.push(("|I(m,n)|/diagonal_min", sci(r)));
    }
    if cmp.untrusted {
        summary.push(("note", "Gamma expansion is badly conditioned for this entry".into()));
    }
    summary.push(("verdict", format!("{} (tol {tol:e})", if passed { "pass" } else { "fail" })));
    Ok(Report {
        command: "laguerre-integral",
        inputs: json!({ "m": m, "n": n, "c": c, "tol": tol }),
        results: json!({
            "quadrature": to_value(&cmp.quadrature),
            "gamma_expansion": to_value(&cmp.exact),
            "relative_difference": cmp.relative_difference,
            "off_diagonal_relative": off_diag_rel,
            "passed": passed,
        }),
        diagnostics: json!({
            "scale": cmp.scale,
            "diagonal_min": cmp.diagonal_min,
            "untrusted": cmp.untrusted,
        }),
        headers: vec!["method", "Re", "Im", "abs_error_estimate", "terms_or_evaluations"],
        rows: vec![row("quadrature", &cmp.quadrature), row("gamma-expansion", &cmp.exact)],
        summary,
        exit_code: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}

fn converge(s: &Settings) -> Result<Report, Failure> {
    let spec = potential(s)?;
    let base = discretization(&spec, s, CONVERGE_DEFAULT_POINTS)?;
    let refinements = s.refinements.unwrap_or(CONVERGE_DEFAULT_REFINEMENTS);
    let levels = s.levels.unwrap_or(1);
    let table = convergence_study(&spec, &base, refinements, levels)?;
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"));
    let mut rows = Vec::new();
    for r in &table.rows {
        for (level, e) in r.energies.iter().enumerate() {
            rows.push(vec![
                r.n_points.to_string(),
                format!("{:.6e}", r.h),
                level.to_string(),
                complex_text(*e),
                sci(r.errors[level]),
                opt(r.ratios[level]),
                opt(r.orders[level]),
            ]);
        }
    }
    let mut summary = vec![
        ("potential", spec.name().to_string()),
        ("nominal order", table.nominal_order.to_string()),
        ("empirical order", opt(table.empirical_order)),
        ("plateau", table.plateau.to_string()),
    ];
    if let Some(w) = base.domain_warning(&spec) {
        summary.push(("note", w));
    }
    Ok(Report {
        command: "converge",
        inputs: json!({
            "potential": potential_inputs(&spec, s),
            "discretization": to_value(&base),
            "refinements": refinements,
            "levels": levels,
        }),
        results: to_value(&table),
        diagnostics: json!({ "domain_warning": base.domain_warning(&spec) }),
        headers: vec!["n_points", "h", "level", "E_grid", "error", "ratio", "order"],
        rows,
        summary,
        exit_code: EXIT_OK,
    })
}

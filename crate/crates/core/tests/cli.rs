use std::path::PathBuf;
use std::process::{Command, Output};

fn pseudospec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pseudospec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn float(v: &serde_json::Value) -> f64 {
    v.as_f64().unwrap_or_else(|| v.to_string().parse().unwrap())
}

#[test]
fn morse_both_methods_default_grid() {
    let o = pseudospec(&["spectrum", "--potential", "morse-complex", "--A", "3", "--B", "4", "--C", "5", "--method", "both", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let states = v["results"]["states"].as_array().unwrap();
    assert_eq!(states.len(), 5);
    for (n, s) in states.iter().enumerate() {
        let exact = -((n as f64 - 5.0).powi(2));
        assert_eq!(float(&s["E_exact"][0]), exact);
        let grid = float(&s["E_grid"][0]);
        assert!((grid - exact).abs() <= 1e-6 * exact.abs(), "n={n}: {grid}");
        assert!(float(&s["abs_im_E_grid"]) <= 1e-6);
    }
    assert_eq!(v["inputs"]["discretization"]["n_points"], 1600);
    assert_eq!(v["inputs"]["discretization"]["order"], "fd4");
}

#[test]
fn oscillator_table_rows() {
    let o = pseudospec(&["spectrum", "--potential", "ho-shifted", "--beta", "1", "--gamma", "0.7", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,E_exact,E_grid,|Im E_grid|,bound,|dE|"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 6);
    for (n, r) in rows.iter().enumerate() {
        let exact: f64 = r[1].parse().unwrap();
        assert_eq!(exact, n as f64 + 0.5);
        let grid: f64 = r[2].parse().unwrap();
        assert!((grid - exact).abs() < 1e-6, "{r:?}");
    }
}

#[test]
fn negative_a_is_rejected_with_branch_message() {
    let o = pseudospec(&["spectrum", "--potential", "morse-complex", "--A", "-1", "--B", "4", "--C", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("branch anchor"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn validation_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["spectrum", "--potential", "nope"],
        &["spectrum", "--potential", "ho-shifted", "--alpha", "3"],
        &["spectrum", "--potential", "ho-shifted", "--kappa", "1"],
        &["spectrum", "--potential", "ho-shifted", "--n-points", "4"],
        &["converge", "--potential", "ho-shifted", "--pairing", "eta"],
        &["laguerre-integral", "--m", "1"],
        &["laguerre-integral", "--m", "3", "--n", "3", "--c", "2"],
        &["check-pseudo", "--potential", "ho-shifted", "--tol", "-1"],
        &["spectrum", "--potential", "khare-mandal", "--zeta", "2", "--M", "1", "--method", "exact"],
        &["frobnicate"],
        &[],
    ];
    for args in cases {
        let o = pseudospec(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn khare_mandal_passes_at_quarter_turn() {
    let o = pseudospec(&["check-pseudo", "--potential", "khare-mandal", "--zeta", "2", "--M", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(float(&v["results"]["theta"]), std::f64::consts::FRAC_PI_2);
    assert_eq!(v["results"]["passed"], true);
    assert_eq!(v["inputs"]["grid"]["n_points"], 2001);
}

#[test]
fn wrong_angle_fails_with_exit_1() {
    let o = pseudospec(&["check-pseudo", "--potential", "morse-complex", "--A", "1", "--B", "1", "--C", "3", "--theta-override", "0.3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("fail"));
}

#[test]
fn real_potential_passes_with_zero_shift() {
    let o = pseudospec(&["check-pseudo", "--potential", "ho-shifted", "--beta", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(float(&v["results"]["theta"]), 0.0);
    assert_eq!(float(&v["results"]["max_residual"]), 0.0);
}

#[test]
fn incompatible_general_morse_exits_4() {
    let o = pseudospec(&["check-pseudo", "--potential", "morse-general", "--V1", "1,1", "--V2", "1,0"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("no known pseudo-Hermiticity shift"));
    // An explicit angle sidesteps the lookup and simply fails.
    let o = pseudospec(&["check-pseudo", "--potential", "morse-general", "--V1", "1,1", "--V2", "1,0", "--theta-override", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn eta_gram_for_morse() {
    let o = pseudospec(&["orthogonality", "--potential", "morse-complex", "--A", "3", "--B", "4", "--C", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert!(float(&v["results"]["off_diag_max_rel"]) <= 1e-8);
    assert_eq!(v["results"]["gram"].as_array().unwrap().len(), 5);
    assert_eq!(v["inputs"]["pairing"], "eta");
}

#[test]
fn pt_pairing_without_pt_symmetry_is_only_reported() {
    let o = pseudospec(&["orthogonality", "--potential", "ho-shifted", "--beta", "1", "--gamma", "0.7", "--pairing", "pt", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["results"]["asserted"], false);
    assert_eq!(v["results"]["passed"], serde_json::Value::Null);
    assert!(float(&v["results"]["off_diag_max_rel"]) > 1e-3);
}

#[test]
fn plain_pairing_on_complex_oscillator_is_not_asserted_but_tight_tol_fails_eta() {
    let o = pseudospec(&["orthogonality", "--potential", "ho-shifted", "--beta", "0", "--gamma", "0.7", "--pairing", "plain"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not asserted"));
    let o = pseudospec(&["orthogonality", "--potential", "ho-shifted", "--gamma", "0.7", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn laguerre_cancellation() {
    let o = pseudospec(&["laguerre-integral", "--m", "0", "--n", "1", "--c", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    for key in ["quadrature", "gamma_expansion"] {
        let re = float(&v["results"][key]["value"][0]);
        assert!(re.abs() <= 1e-11, "{key}: {re}");
    }
}

#[test]
fn near_divergent_overlap_still_agrees() {
    // Exponent 2c − 1 = −0.9999998: nearly all the mass sits next to z = 0.
    let o = pseudospec(&["laguerre-integral", "--m", "0", "--n", "0", "--c", "1e-7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn laguerre_disagreement_threshold_exits_1() {
    // Asking for agreement beyond double precision must fail honestly.
    let o = pseudospec(&["laguerre-integral", "--m", "2", "--n", "2", "--c", "4", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn quadrature_failure_exits_3() {
    // Degree-150 Laguerre products overflow f64 inside the integration range.
    let o = pseudospec(&["laguerre-integral", "--m", "150", "--n", "150", "--c", "160"]);
    assert_eq!(o.status.code(), Some(3), "stdout {} stderr {}", stdout(&o), stderr(&o));
}

#[test]
fn converge_reports_orders() {
    let o = pseudospec(&["converge", "--potential", "ho-shifted", "--order", "fd2", "--refinements", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let p = float(&v["results"]["empirical_order"]);
    assert!((1.8..2.2).contains(&p), "{p}");
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["results"]["plateau"], false);
}

#[test]
fn job_file_matches_flags_and_flags_win() {
    let job = scratch("ho_job.json");
    std::fs::write(
        &job,
        r#"{"command": "check-pseudo",
            "potential": {"name": "ho-shifted", "params": {"beta": 1, "gamma": 0.7}},
            "tolerances": {"tol": 1e-10},
            "output": {"format": "json"}}"#,
    )
    .unwrap();
    let from_job = pseudospec(&["--job", job.to_str().unwrap()]);
    let from_flags = pseudospec(&["check-pseudo", "--potential", "ho-shifted", "--beta", "1", "--gamma", "0.7", "--tol", "1e-10", "--format", "json"]);
    assert_eq!(from_job.status.code(), Some(0));
    assert_eq!(from_job.stdout, from_flags.stdout);

    let overridden = pseudospec(&["check-pseudo", "--job", job.to_str().unwrap(), "--theta-override", "1"]);
    assert_eq!(overridden.status.code(), Some(1));
    assert_eq!(json(&overridden)["inputs"]["theta_source"], "override");
}

#[test]
fn job_file_errors_exit_2() {
    let unknown = scratch("unknown_key.json");
    std::fs::write(&unknown, r#"{"command": "check-pseudo", "potential": {"name": "ho-shifted", "params": {"delta": 1}}}"#).unwrap();
    let o = pseudospec(&["--job", unknown.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("delta"));

    let mismatch = scratch("mismatch.json");
    std::fs::write(&mismatch, r#"{"command": "converge"}"#).unwrap();
    let o = pseudospec(&["spectrum", "--job", mismatch.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = pseudospec(&["--job", scratch("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_output_is_byte_identical() {
    let args = ["orthogonality", "--potential", "eckart-shifted", "--alpha", "6", "--beta", "0.5", "--gamma", "0.4", "--format", "json"];
    let a = pseudospec(&args);
    let b = pseudospec(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    for key in ["command", "inputs", "results", "diagnostics"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    // Non-integer numbers carry 17 significant digits.
    let text = stdout(&a);
    let off = text.lines().find(|l| l.contains("off_diag_max_rel")).unwrap();
    let mantissa = off.split(':').nth(1).unwrap().trim().trim_end_matches(',').split('e').next().unwrap();
    assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 17, "{off}");
}

#[test]
fn plot_data_columns() {
    let path = scratch("ho_plot.csv");
    let o = pseudospec(&[
        "spectrum", "--potential", "ho-shifted", "--gamma", "0.7", "--k", "2", "--n-points", "200", "--plot-data", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut r = csv::Reader::from_path(&path).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["n", "x", "ReV", "ImV", "RePsi", "ImPsi"]);
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 400);
    let h = 24.0 / 201.0;
    let norm: f64 = rows[..200]
        .iter()
        .map(|r| {
            let re: f64 = r[4].parse().unwrap();
            let im: f64 = r[5].parse().unwrap();
            re * re + im * im
        })
        .sum::<f64>()
        * h;
    assert!((norm - 1.0).abs() < 1e-12, "{norm}");
    // V = (x − iγ)²/2, so Im V = −γx.
    let x: f64 = rows[10][1].parse().unwrap();
    let im_v: f64 = rows[10][3].parse().unwrap();
    assert!((im_v + 0.7 * x).abs() < 1e-12);
}

#[test]
fn help_exits_0() {
    let o = pseudospec(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("check-pseudo"));
}

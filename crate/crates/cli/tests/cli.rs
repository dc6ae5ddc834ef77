use std::process::{Command, Output};

use serde_json::Value;

fn prolate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prolate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn identity_spectrum_json() {
    let out = prolate(&[
        "spectrum",
        "--a",
        "1",
        "--unitary",
        "identity",
        "--modes",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["method"], "galerkin");
    let ev: Vec<f64> = v["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["lambda"].as_f64().unwrap())
        .collect();
    assert_eq!(ev.len(), 5);
    assert!(ev[0] > 0.0);
    assert!(ev.windows(2).all(|w| w[1] > w[0]));
    // independent of the CLI: the ground state lies strictly between the Legendre
    // bound 0 and mu_0 + a^2 = 1
    assert!(ev[0] < 1.0);
}

#[test]
fn non_unitary_is_rejected() {
    let out = prolate(&["spectrum", "--unitary", "1,0,0,0,1,1,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(out.stderr.split(|&b| b == b'\n').next().unwrap()).unwrap();
    assert_eq!(err["error"], "NotUnitary");
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_arguments_exit_two() {
    for args in [
        &["spectrum", "--a", "-1"][..],
        &["spectrum", "--modes", "0"],
        &["spectrum", "--tol", "bogus=1"],
        &["nonsense"],
    ] {
        assert_eq!(prolate(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(prolate(&["--help"]).status.code(), Some(0));
}

#[test]
fn csv_errors_are_plain_text() {
    let out = prolate(&["spectrum", "--unitary", "1,0,0,0,1,1,0,0", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn output_is_deterministic() {
    let args = ["spectrum", "--a", "1.3", "--unitary", "swap", "--modes", "4"];
    let (x, y) = (prolate(&args), prolate(&args));
    assert_eq!(x.status.code(), Some(0));
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn shooting_spectrum_for_neg_identity() {
    let v = json(&prolate(&["spectrum", "--unitary", "neg-identity", "--modes", "3"]));
    assert_eq!(v["method"], "shooting");
    let e = v["eigenvalues"].as_array().unwrap();
    assert_eq!(e.len(), 3);
    assert!(e[0]["lambda"].as_f64().unwrap() < 0.0);
    for x in e {
        assert!(x["boundary_residual"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn explicit_range() {
    let v = json(&prolate(&[
        "spectrum",
        "--unitary",
        "swap",
        "--range-min",
        "-5",
        "--range-max",
        "10",
    ]));
    let ev: Vec<f64> = v["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["lambda"].as_f64().unwrap())
        .collect();
    assert!(!ev.is_empty());
    assert!(ev.iter().all(|&l| (-5.0..=10.0).contains(&l)));
    let v = json(&prolate(&["spectrum", "--range-min", "0", "--range-max", "15"]));
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 4);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("spec.csv");
    std::fs::write(&cfg, "# sweep point\na = 2\nmodes = 7\nformat = csv\n").unwrap();
    let r = prolate(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--modes",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(0));
    assert!(r.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,lambda,multiplicity,boundary_residual");
    assert_eq!(lines.len(), 4);
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(
        prolate(&["spectrum", "--config", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn pswf_table() {
    let v = json(&prolate(&["pswf", "--modes", "3"]));
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 3);
    let t = v["t"].as_array().unwrap();
    let f = v["eigenfunctions"].as_array().unwrap();
    assert_eq!(f.len(), 3);
    assert_eq!(f[0].as_array().unwrap().len(), t.len());
    // trapezoid norm of chi_1 on the equispaced samples
    let h = 2.0 / (t.len() - 1) as f64;
    let vals: Vec<f64> = f[0].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let n2 = h * (vals.iter().map(|x| x * x).sum::<f64>() - 0.5 * (vals[0].powi(2) + vals[vals.len() - 1].powi(2)));
    assert!((n2 - 1.0).abs() < 1e-3, "{n2}");
    let csv = String::from_utf8(prolate(&["pswf", "--modes", "2", "--format", "csv"]).stdout).unwrap();
    assert!(csv.starts_with("k,lambda,t,chi\n"));
    assert_eq!(csv.lines().count(), 1 + 2 * 201);
}

#[test]
fn boundary_of_sampled_logarithms() {
    // x = ln(a + t) + 2 ln(a - t) + 3: b = (1, 2), c = -(3 + 2 ln 2a, 3 + ln 2a)
    let a: f64 = 1.5;
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("x.csv");
    let mut text = String::from("t,re,im\n");
    let n = 3000;
    for k in 1..n {
        let t = -a + 2.0 * a * k as f64 / n as f64;
        let x = (a + t).ln() + 2.0 * (a - t).ln() + 3.0;
        text.push_str(&format!("{t},{x},{}\n", -x));
    }
    std::fs::write(&file, text).unwrap();
    let v = json(&prolate(&["boundary", file.to_str().unwrap(), "--a", "1.5"]));
    let z = |k: &str| {
        let p = v["boundary_values"][k].as_array().unwrap();
        (p[0].as_f64().unwrap(), p[1].as_f64().unwrap())
    };
    let l = (2.0 * a).ln();
    for (k, re) in [
        ("b_minus", 1.0),
        ("b_plus", 2.0),
        ("c_minus", -(3.0 + 2.0 * l)),
        ("c_plus", -(3.0 + l)),
    ] {
        let (x, y) = z(k);
        assert!((x - re).abs() < 1e-7 && (y + re).abs() < 1e-7, "{k}: {x} {y}");
    }
    let out = prolate(&["boundary", dir.path().join("missing.csv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_swap() {
    let v = json(&prolate(&["classify", "--unitary", "swap"]));
    assert!(v["self_orthogonality_residual"].as_f64().unwrap() < 1e-12);
    let b = v["boundary_matrix"].as_array().unwrap();
    assert_eq!(b.len(), 2);
    assert_eq!(b[0].as_array().unwrap().len(), 4);
    // B(swap) = [[1, -i, 1, i], [1, i, 1, -i]]
    let z = |r: usize, c: usize| (b[r][c][0].as_f64().unwrap(), b[r][c][1].as_f64().unwrap());
    assert_eq!(
        [z(0, 0), z(0, 1), z(0, 2), z(0, 3)],
        [(1.0, 0.0), (0.0, -1.0), (1.0, 0.0), (0.0, 1.0)]
    );
    assert_eq!(
        [z(1, 0), z(1, 1), z(1, 2), z(1, 3)],
        [(1.0, 0.0), (0.0, 1.0), (1.0, 0.0), (0.0, -1.0)]
    );
}

#[test]
fn verify_passes() {
    let out = prolate(&["verify", "--a", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    for module in [
        "boundary_algebra.",
        "endpoint_forms.",
        "legendre_backend.",
        "extension_solver.",
        "fourier_commutator.",
    ] {
        assert!(
            checks.iter().any(|c| c["id"].as_str().unwrap().starts_with(module)),
            "{module}"
        );
    }
}

#[test]
fn unconverged_truncation_exits_three() {
    let out = prolate(&["spectrum", "--a", "3", "--modes", "6", "--truncation", "16"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(out.stderr.split(|&b| b == b'\n').next().unwrap()).unwrap();
    assert_eq!(err["error"], "NotConverged");
    assert_eq!(err["exit_code"], 3);
}

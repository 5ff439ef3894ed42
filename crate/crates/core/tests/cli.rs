use std::process::{Command, Output};

fn asymtop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asymtop"))
        .args(args)
        .env_remove("ASYMTOP_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn spectrum_k1_rows() {
    let o = asymtop(&["spectrum", "--alpha", "1,2,3", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("k,species,g0,g1,g2,index,lambda,nu_tilde_over_mu\n"));
    assert!(!out.contains('\r'));
    let lambda = column(&out, "lambda");
    for (a, b) in lambda.iter().zip([3.0, 4.0, 5.0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn spectrum_k0_single_row() {
    let o = asymtop(&["spectrum", "--alpha", "1,2,3", "--k", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(column(&stdout(&o), "lambda"), vec![0.0]);
}

#[test]
fn spectrum_json_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let o = asymtop(&[
        "spectrum", "--alpha", "1,2,3", "--k", "2", "--format", "json", "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["lines"].as_array().unwrap().len(), 5);
    assert_eq!(v["lines"][1]["lambda"].as_f64().unwrap(), 9.0);
}

#[test]
fn weyl_violation_exits_2() {
    let o = asymtop(&["spectrum", "--alpha", "3,2,1", "--k", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Λ³"));
}

#[test]
fn verify_passes_and_reports() {
    let o = asymtop(&["verify", "--alpha", "1,2,3", "--kmax", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    let degrees = v["degrees"].as_array().unwrap();
    assert_eq!(degrees.len(), 41);
    for d in degrees {
        assert!(d["oracle_max_rel_dev"].as_f64().unwrap() <= 1e-8);
        assert_eq!(d["count_ok"], true);
        assert_eq!(d["vanvleck_ok"], true);
    }
    assert!(degrees[2]["trace_rel_err"].as_f64().unwrap() < 1e-15);
}

#[test]
fn verify_detects_corrupted_recurrence() {
    let o = asymtop(&["verify", "--alpha", "1,2,3", "--kmax", "6", "--inject-fault", "flip-c-correction"]);
    assert_eq!(o.status.code(), Some(4));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["first_failing_k"].as_u64().is_some());
    assert!(String::from_utf8_lossy(&o.stderr).contains("k = "));
}

#[test]
fn dos_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = asymtop(&[
        "dos", "--alpha", "1,2,3", "--k", "2", "--bins", "5", "--plateau", "0.5:3:0.1",
        "--bumps", "1.5:0.3", "--out-dir", d,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let hist = std::fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    let counts: Vec<f64> = column(&hist, "count");
    assert_eq!(counts.len(), 5);
    assert_eq!(counts.iter().sum::<f64>(), 5.0);
    let tf = std::fs::read_to_string(dir.path().join("test_functions.csv")).unwrap();
    assert!(tf.starts_with("k,kind,c,w,empirical,limit_resolved,limit_printed,abs_err_resolved,abs_err_printed\n"));
    let empirical = column(&tf, "empirical");
    assert_eq!(empirical[1], 1.0);
    assert!(!dir.path().join("discrimination.json").exists());
}

#[test]
fn dos_discrimination_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = asymtop(&[
        "dos", "--alpha", "1,2,3", "--k", "100,400", "--variant", "resolved",
        "--bumps", "0.8:0.1,1.2:0.1,1.6:0.1", "--out-dir", d,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let tf = std::fs::read_to_string(dir.path().join("test_functions.csv")).unwrap();
    let ks = column(&tf, "k");
    let errs = column(&tf, "abs_err_resolved");
    for (k, e) in ks.iter().zip(&errs) {
        if *k == 400.0 {
            assert!(*e <= 0.05);
        }
    }
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("discrimination.json")).unwrap()).unwrap();
    assert_eq!(v["winner"], "resolved");
}

#[test]
fn dos_rejects_bad_bump() {
    let dir = tempfile::tempdir().unwrap();
    let o = asymtop(&["dos", "--alpha", "1,2,3", "--k", "4", "--bumps", "0.1:0.2", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn moments_rows() {
    let o = asymtop(&["moments", "--alpha", "1,2,3", "--m", "400", "--nmax", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let limit = column(&out, "limit");
    assert_eq!(limit[0], 0.0);
    assert!((limit[1] - 4.0 / 15.0).abs() < 1e-15);
    assert!(column(&out, "abs_err").iter().all(|e| *e <= 0.01));

    let o = asymtop(&["moments", "--alpha", "1,2,3", "--m", "1", "--nmax", "1"]);
    assert_eq!(column(&stdout(&o), "empirical"), vec![0.0]);
}

#[test]
fn jobs_from_environment() {
    let a = asymtop(&["spectrum", "--alpha", "0.5,2,7", "--k", "30"]);
    let b = Command::new(env!("CARGO_BIN_EXE_asymtop"))
        .args(["spectrum", "--alpha", "0.5,2,7", "--k", "30"])
        .env("ASYMTOP_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.status.code(), Some(0));
}

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use fbelief_cli::report::Report;

fn fbelief(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbelief")).args(args).output().unwrap()
}

fn scenario(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    dir.join(name).to_str().unwrap().to_string()
}

fn structured(args: &[&str]) -> Report {
    let mut all = vec!["--output", "structured"];
    all.extend_from_slice(args);
    let out = fbelief(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn bundled_scenarios_evaluate() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        let mut args = vec!["evaluate", path.to_str().unwrap()];
        if name.contains("large") {
            args.insert(0, "--float");
        }
        let out = fbelief(&args);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stderr_of(&out));
        seen += 1;
    }
    assert!(seen >= 8);
}

#[test]
fn cold_case_values() {
    let r = structured(&["evaluate", &scenario("island-cold.scenario")]);
    assert_eq!(r.format, "fbelief-report/1");
    assert_eq!(r.rows[0].belief.value, "1/8");
    assert_eq!(r.rows[0].classical.as_ref().unwrap().value, "2/5");
    assert_eq!(r.rows[1].belief.value, "1/4");
    let r = structured(&["evaluate", &scenario("island-search.scenario")]);
    assert_eq!(r.rows[0].belief.value, "4/15");
}

#[test]
fn ledger_and_custom_values() {
    let r = structured(&["evaluate", &scenario("ledger-single-test.scenario")]);
    assert_eq!(r.ledger.unwrap().guilty.value, "16/25");
    let r = structured(&["evaluate", &scenario("ledger-mixed.scenario")]);
    let l = r.ledger.unwrap();
    assert_eq!((l.guilty.value, l.not_guilty.value, l.ignorance.value), ("1/2".into(), "2/5".into(), "1/10".into()));
    let r = structured(&["condition", &scenario("father-mother-son.scenario")]);
    let mass = r.conditioned_mass.unwrap();
    let pairs: Vec<(String, String)> = mass.into_iter().map(|f| (f.set, f.mass.value)).collect();
    assert_eq!(pairs, vec![("{Father}".into(), "9/10".into()), ("{Son}".into(), "1/10".into())]);
}

#[test]
fn float_backend_for_large_populations() {
    let out = fbelief(&["evaluate", &scenario("island-cold-large.scenario")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("--float"));
    let r = structured(&["--float", "evaluate", &scenario("island-cold-large.scenario")]);
    assert_eq!(r.backend, "float");
    let belief: f64 = r.rows[0].belief.value.parse().unwrap();
    assert!((belief - (-1.0f64).exp()).abs() < 1e-3);
}

#[test]
fn structured_output_round_trips_and_is_deterministic() {
    let args = ["--output", "structured", "verify", "--max-pop", "4"];
    let a = fbelief(&args);
    let b = fbelief(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let report = Report::from_json(&text).unwrap();
    assert_eq!(report.to_json(), text);
    let v = report.verification.unwrap();
    assert!(v.passed && v.mismatches.is_empty());
    assert_eq!(v.max_population, 4);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "scenario = parental\nN = 2\np0 = 1/3\np1 = one third\n").unwrap();
    let out = fbelief(&["evaluate", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("line 4, column 6"), "{}", stderr_of(&out));
    assert!(out.stdout.is_empty());

    let out = fbelief(&["evaluate", "/nonexistent/file.scenario"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_argument_errors() {
    let out = fbelief(&["verify", "--max-pop", "20"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("20"), "{}", stderr_of(&out));
    let out = fbelief(&["--float", "verify"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fbelief(&["verify", "--grid", "pop=2..3", "--inject-perturbation", "no-such-scenario"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn perturbation_is_reported_in_structured_output() {
    let out = fbelief(&[
        "--output",
        "structured",
        "verify",
        "--grid",
        "pop=2..4; only=parental",
        "--inject-perturbation",
        "parental/two-allele/belief@N+1=3,p0=1/4,p1=1/2,|B|=1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let v = report.verification.unwrap();
    assert_eq!(v.mismatches.len(), 1);
    let m = &v.mismatches[0];
    assert_eq!(m.scenario, "parental/two-allele/belief");
    assert_eq!(m.point["N+1"], "3");
    assert_eq!(m.failed_checks, vec!["closed form = oracle".to_string()]);
}

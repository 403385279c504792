use std::path::Path;
use std::process::{Command, Output};

use polarize_cli::report::{Fields, Report, Val};
use polarize_cli::{analyze_text, builtin, BUILTIN};
use proptest::prelude::*;

const BIN: &str = env!("CARGO_BIN_EXE_polarize");

fn polarize(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn json_report(args: &[&str]) -> (Output, Report) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let mut full: Vec<&str> = args.to_vec();
    let out_s = out.to_string_lossy().into_owned();
    full.extend(["--json", &out_s]);
    let o = polarize(&full);
    let r = Report::from_json(&std::fs::read_to_string(&out).expect("report written")).unwrap();
    (o, r)
}

fn scalar(f: &Fields, key: &str) -> String {
    match f.get(key) {
        Some(Val::Exact(t)) => t.exact.clone(),
        Some(Val::Text(s)) => s.clone(),
        other => panic!("{key}: {other:?}"),
    }
}

#[test]
fn ex1_is_polarized_at_six() {
    let (o, r) = json_report(&["examples", "ex1"]);
    assert!(o.status.success());
    assert_eq!(r.verdict, "Polarized");
    let Some(Val::Map(p)) = r.body.get("pullback") else { panic!() };
    assert_eq!(scalar(p, "q"), "6");
    assert_eq!(scalar(p, "spectral_radius"), "6");
    assert_eq!(scalar(p, "deg_f"), "36");
    assert!(String::from_utf8_lossy(&o.stdout).contains("verdict:  Polarized"));
}

#[test]
fn ex_xu_variants() {
    let (_, r) = json_report(&["examples", "ex-xu-4-3"]);
    assert_eq!(r.verdict, "Terminal");
    assert_eq!(scalar(&r.body, "min_age_nontrivial"), "9/4");
    assert_eq!(scalar(&r.body, "q"), "4");
    assert_eq!(scalar(&r.body, "deg_f"), "4096");
    let (_, alias) = json_report(&["examples", "ex-xu"]);
    assert_eq!(alias.body, r.body);
    let (_, six) = json_report(&["examples", "ex-xu-6-1"]);
    assert_eq!(six.verdict, "Terminal");
    assert_eq!(scalar(&six.body, "dim_x"), "6");
}

#[test]
fn ex2_image_is_not_ample() {
    let (_, r) = json_report(&["examples", "ex2"]);
    assert_eq!(r.verdict, "ImageNotAmple");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{ not json");
    let o = polarize(&["analyze", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());

    let float = write(
        dir.path(),
        "float.json",
        r#"{"schema_version": 1, "kind": "cone_dynamics", "map": [[0.5]],
            "cone": {"type": "polyhedral", "generators": [[1]]}}"#,
    );
    assert_eq!(polarize(&["analyze", &float]).status.code(), Some(2));
    assert_eq!(polarize(&["analyze", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(polarize(&["examples", "nope"]).status.code(), Some(2));

    let line = write(
        dir.path(),
        "line.json",
        r#"{"schema_version": 1, "kind": "cone_dynamics", "map": [[1, 0], [0, 1]],
            "cone": {"type": "polyhedral", "generators": [[1, 0], [-1, 0]]}}"#,
    );
    assert_eq!(polarize(&["analyze", &line]).status.code(), Some(2));

    let big = write(
        dir.path(),
        "big.json",
        r#"{"schema_version": 1, "kind": "age_check", "order": 4, "abelian_weights": [1, 1, 1],
            "projective_m": 4, "scale_r": 2}"#,
    );
    assert_eq!(polarize(&["analyze", &big, "--max-dim", "4"]).status.code(), Some(2));
    assert_eq!(polarize(&["analyze", &big]).status.code(), Some(0));
}

#[test]
fn verdicts_do_not_change_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "diag.json",
        r#"{"schema_version": 1, "kind": "cone_dynamics", "map": [[2, 0], [0, 3]],
            "cone": {"type": "polyhedral", "generators": [[1, 0], [0, 1]]}}"#,
    );
    let (o, r) = json_report(&["analyze", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(r.verdict, "NotPolarized");
    let g = write(
        dir.path(),
        "shear.json",
        r#"{"schema_version": 1, "kind": "cone_dynamics", "map": [[1, -1], [0, 1]],
            "cone": {"type": "polyhedral", "generators": [[1, 0], [0, 1]]}}"#,
    );
    let (_, r) = json_report(&["analyze", &g]);
    assert_eq!(r.verdict, "NotInvariant");
    let h = write(
        dir.path(),
        "irr.json",
        r#"{"schema_version": 1, "kind": "cone_dynamics", "map": [[0, 2], [1, 0]],
            "cone": {"type": "polyhedral", "generators": [[1, 0], [0, 1]]}}"#,
    );
    let (_, r) = json_report(&["analyze", &h]);
    assert_eq!(r.verdict, "IrrationalCandidateOnly");
}

#[test]
fn shipped_scenarios_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let o = polarize(&["analyze", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", p.display());
    }
    let (_, r) = json_report(&["analyze", concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/descent.json")]);
    assert_eq!(r.verdict, "NoInvariantSubvariety");
    let (_, r) = json_report(&["analyze", concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/half-scaling.json")]);
    let Some(Val::Map(c)) = r.body.get("certificate") else { panic!() };
    assert_eq!(scalar(c, "q"), "3/2");
}

#[test]
fn timing_only_on_request() {
    let (_, plain) = json_report(&["examples", "ex2"]);
    assert!(plain.timing_ms.is_none());
    let (_, timed) = json_report(&["examples", "ex2", "--timing"]);
    assert!(timed.timing_ms.is_some());
}

#[test]
fn selftest_lines() {
    let o = polarize(&["selftest", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().count() >= 5);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn approximations_stay_out_of_verdicts() {
    for (name, _) in BUILTIN {
        let r = analyze_text(builtin(name).unwrap(), name, 0, 8).unwrap();
        assert!(!r.verdict.contains('~') && !r.verdict.chars().any(|c| c == '.'));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn builtin_reports_round_trip_for_any_seed(seed in any::<u64>()) {
        for (name, text) in BUILTIN {
            let r = analyze_text(text, name, seed, 8).unwrap();
            prop_assert_eq!(Report::from_json(&r.to_json()).unwrap(), r.clone());
            prop_assert_eq!(analyze_text(text, name, seed, 8).unwrap().to_json(), r.to_json());
        }
    }

    #[test]
    fn cone_reports_round_trip(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3) {
        let doc = format!(
            r#"{{"schema_version": 1, "kind": "cone_dynamics", "map": [[{a}, {b}], [{c}, {d}]],
                 "cone": {{"type": "polyhedral", "generators": [[1, 0], [0, 1]]}}}}"#
        );
        match analyze_text(&doc, "p", 1, 8) {
            Ok(r) => prop_assert_eq!(Report::from_json(&r.to_json()).unwrap(), r),
            Err(e) => prop_assert_eq!(e.exit_code(), 2, "{}", e),
        }
    }
}

use std::path::PathBuf;
use std::process::Command;

use sc_obstruction::cli::{run, EXIT_FAILED, EXIT_INPUT, EXIT_OK};
use sc_obstruction::io;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn invoke(args: &[&str]) -> (u8, String, String) {
    let mut argv = vec!["sc-obstruction".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sc-obstruction-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_codes_on_fixture_corpus() {
    let cases: Vec<(Vec<String>, u8)> = vec![
        (
            vec!["trivialize".into(), "--group".into(), "2".into(), "--cocycle".into(), fixture("super.json")],
            EXIT_FAILED,
        ),
        (vec!["from-form".into(), "--group".into(), "2".into(), "--form".into(), fixture("trivial.json")], EXIT_OK),
        (vec!["from-form".into(), "--form".into(), fixture("semion.json")], EXIT_OK),
        (vec!["cocycle-check".into(), "--cocycle".into(), fixture("super.json")], EXIT_OK),
        (vec!["cocycle-check".into(), "--cocycle".into(), fixture("not_a_cocycle.json")], EXIT_FAILED),
        (vec!["cocycle-trace".into(), "--cocycle".into(), fixture("not_a_cocycle.json")], EXIT_FAILED),
        (vec!["trivialize".into(), "--cocycle".into(), fixture("malformed.json")], EXIT_INPUT),
        (
            vec!["trivialize".into(), "--group".into(), "3".into(), "--cocycle".into(), fixture("super.json")],
            EXIT_INPUT,
        ),
        (vec!["algebra-analyze".into(), fixture("z3_twisted.json")], EXIT_OK),
        (vec!["algebra-analyze".into(), fixture("z5_twisted.json")], EXIT_OK),
        (vec!["algebra-analyze".into(), fixture("exterior_c3.json")], EXIT_FAILED),
        (vec!["algebra-analyze".into(), fixture("truncated_polynomial.json")], EXIT_OK),
        (vec!["algebra-analyze".into(), fixture("symmetric_pair.json")], EXIT_FAILED),
        (vec!["algebra-verify".into(), fixture("exterior_c3.json")], EXIT_FAILED),
        (vec!["algebra-verify".into(), fixture("truncated_polynomial.json")], EXIT_OK),
        (vec!["algebra-verify".into(), fixture("z3_twisted.json")], EXIT_FAILED),
        (vec!["algebra-extend".into(), fixture("exterior_c3.json")], EXIT_FAILED),
        (vec!["algebra-verify".into(), fixture("missing.json")], EXIT_INPUT),
        (vec!["forms-enumerate".into(), "--group".into(), "4".into()], EXIT_OK),
        (vec!["forms-enumerate".into(), "--group".into(), "64".into()], EXIT_INPUT),
        (vec!["series-verify".into(), "--exponents".into(), "1,2".into()], EXIT_INPUT),
        (vec!["no-such-command".into()], EXIT_INPUT),
    ];
    for (args, expected) in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out, err) = invoke(&refs);
        assert_eq!(code, expected, "{args:?}\nstdout: {out}\nstderr: {err}");
    }
}

#[test]
fn documented_invocations() {
    let (code, out, _) = invoke(&["trivialize", "--group", "2", "--cocycle", &fixture("super.json")]);
    assert_eq!(code, 1);
    assert_eq!(out, "obstructed at i=1, Q(1)=-1\n");

    let (code, out, _) = invoke(&["from-form", "--group", "2", "--form", &fixture("trivial.json"), "--json"]);
    assert_eq!(code, 0);
    let report = io::parse_json(&out).unwrap();
    let c = io::cochain3_from_json(&report["cocycle"], None).unwrap();
    assert!(c.is_trivial());

    let (code, out, _) = invoke(&["algebra", "analyze", &fixture("z3_twisted.json"), "--json"]);
    assert_eq!(code, 0);
    let report = io::parse_json(&out).unwrap();
    assert_eq!(report["extendable"], true);
    let lambda = io::cochain2_from_json(&report["lambda"], None).unwrap();
    assert!(!lambda.is_trivial());

    let (code, out, _) =
        invoke(&["series", "verify", "--diagram", "star", "--exponents", "1,-1,0,-1,1,-2", "--frontier", "8"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("star:"));
}

#[test]
fn reports_round_trip() {
    let (_, out, _) = invoke(&["cocycle-trace", "--cocycle", &fixture("super.json"), "--json"]);
    let q = io::form_from_json(&io::parse_json(&out).unwrap()["trace"], None).unwrap();
    assert_eq!(io::form_to_json(&q), io::parse_json(&out).unwrap()["trace"]);

    let (_, out, _) = invoke(&["algebra-analyze", &fixture("exterior_c3.json"), "--json"]);
    let report = io::parse_json(&out).unwrap();
    let c = io::cochain3_from_json(&report["cocycle"], None).unwrap();
    assert_eq!(c.omega_at(1, 1), sc_obstruction::Scalar::minus_one());
    assert_eq!(report["parity"]["(1)"], "odd");

    let out_path = temp_path("extended.json");
    let (code, _, _) = invoke(&["algebra-extend", &fixture("z3_twisted.json"), "-o", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let extended =
        io::algebra_from_json(&io::parse_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap()).unwrap();
    assert!(sc_obstruction::testbed::verify_extension(&extended).ok());
    let (code, _, _) = invoke(&["algebra-verify", out_path.to_str().unwrap()]);
    assert_eq!(code, 0);

    let form_path = temp_path("cocycle.json");
    let (code, _, _) = invoke(&["from-form", "--form", &fixture("semion.json"), "-o", form_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, out, _) = invoke(&["cocycle-trace", "--cocycle", form_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("Q(1) = 1/1@1/4"), "{out}");
}

#[test]
fn subgroup_flag_builds_coset_modules() {
    let (code, out, _) = invoke(&["algebra-analyze", &fixture("z4_parity_wedge.json"), "--subgroup", "2", "--json"]);
    assert_eq!(code, 1);
    let report = io::parse_json(&out).unwrap();
    assert_eq!(report["cosets"]["phi_trivial"], true);
    assert_eq!(report["cosets"]["psi_trivial"], true);
    let (code, _, err) = invoke(&["algebra-analyze", &fixture("z4_parity_wedge.json"), "--subgroup", "1"]);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("trace is not trivial on the subgroup"), "{err}");
}

#[test]
fn output_is_deterministic() {
    let args = ["algebra-analyze", &fixture("z5_twisted.json"), "--json"];
    assert_eq!(invoke(&args), invoke(&args));
}

#[test]
fn binary_honours_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_sc-obstruction");
    let status = Command::new(bin)
        .args(["trivialize", "--group", "2", "--cocycle", &fixture("super.json")])
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(1));
    let status = Command::new(bin)
        .args(["from-form", "--group", "2", "--form", &fixture("trivial.json")])
        .output()
        .unwrap()
        .status;
    assert_eq!(status.code(), Some(0));
    let status = Command::new(bin).args(["cocycle-check"]).output().unwrap().status;
    assert_eq!(status.code(), Some(2));
}

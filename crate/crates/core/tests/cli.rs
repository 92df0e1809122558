use std::io::Write;
use std::process::{Command, Output, Stdio};

fn conformal(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_conformal"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const CONSTRUCT: &[&str] =
    &["construct-bilinear", "--n", "2", "--signature", "2,0", "--k", "1", "--lambda", "1/4", "--mu", "1/4"];

#[test]
fn construct_is_deterministic_in_every_format() {
    for format in ["json", "latex", "text"] {
        let args: Vec<&str> = CONSTRUCT.iter().copied().chain(["--format", format]).collect();
        let a = conformal(&args, "");
        let b = conformal(&args, "");
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn construct_output_formats() {
    let args: Vec<&str> = CONSTRUCT.iter().copied().chain(["--format", "text"]).collect();
    let text = stdout(&conformal(&args, ""));
    assert!(text.contains("-1/2  Rxx^1 Rxe^0 Ree^0"), "{text}");
    assert!(text.contains("   1  Rxx^0 Rxe^1 Ree^0"), "{text}");
    let args: Vec<&str> = CONSTRUCT.iter().copied().chain(["--format", "latex"]).collect();
    let latex = stdout(&conformal(&args, ""));
    assert_eq!(latex, "-\\frac{1}{2} R_{\\xi\\xi} + R_{\\xi\\eta} - \\frac{1}{2} R_{\\eta\\eta}\n");
    let b0 = stdout(&conformal(
        &["construct-bilinear", "--n", "3", "--k", "0", "--lambda", "1", "--mu", "2", "--format", "latex"],
        "",
    ));
    assert_eq!(b0, "1\n");
}

#[test]
fn construct_pipes_into_verify() {
    let args: Vec<&str> = CONSTRUCT.iter().copied().chain(["--format", "json"]).collect();
    let json = stdout(&conformal(&args, ""));
    let out = conformal(&["verify", "--oracle"], &json);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("status ok\nhomogeneity true\n"));
}

#[test]
fn perturbed_file_is_not_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("op.json");
    let args: Vec<&str> =
        CONSTRUCT.iter().copied().chain(["--format", "json", "--output", path.to_str().unwrap()]).collect();
    let out = conformal(&args, "");
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap().replace("\"nu\": \"3/2\"", "\"nu\": \"8/5\"");
    std::fs::write(&path, text).unwrap();
    let out = conformal(&["verify", "--input", path.to_str().unwrap(), "--format", "json"], "");
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("\"status\": \"not-invariant\""));
    assert!(stdout(&out).contains("\"homogeneity\": false"));
}

#[test]
fn exit_codes() {
    let resonant = conformal(
        &["construct-bilinear", "--n", "2", "--signature", "2,0", "--k", "1", "--lambda", "0", "--mu", "1/4"],
        "",
    );
    assert_eq!(resonant.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&resonant.stderr).contains("2+n(2λ-1)"));
    let empty = conformal(&["classify-linear", "--n", "2", "--lambda", "1/3", "--mu", "1"], "");
    assert_eq!(empty.status.code(), Some(5));
    assert_eq!(
        conformal(&["construct-bilinear", "--n", "2", "--k", "1", "--lambda", "0.5", "--mu", "1"], "").status.code(),
        Some(2)
    );
    assert_eq!(conformal(&["verify", "--input", "/no/such/file"], "").status.code(), Some(6));
    assert_eq!(conformal(&["verify"], "{}").status.code(), Some(2));
}

#[test]
fn classify_linear_example() {
    let out = conformal(
        &[
            "classify-linear",
            "--n",
            "2",
            "--signature",
            "1,1",
            "--lambda",
            "0",
            "--mu",
            "1",
            "--max-order",
            "6",
            "--format",
            "json",
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["dimension"], 1);
    assert_eq!(doc["basis"][0], serde_json::json!([{"k": 1, "c": "1"}]));
}

#[test]
fn scan_finds_only_even_levels() {
    let out = conformal(
        &["scan", "--signature", "1,1", "--lambda", "1/3", "--mu", "2/7", "--k-max", "2", "--format", "json"],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    let dims: Vec<u64> = rows.iter().map(|r| r["dimension"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 0, 1, 0, 1]);
}

#[test]
fn apply_and_transvectant() {
    let out = conformal(
        &["apply", "--signature", "2,0", "--k", "1", "--lambda", "1/4", "--mu", "1/4", "--f", "x1^2", "--g", "x2^2"],
        "",
    );
    assert_eq!(stdout(&out), "-x1^2 - x2^2\n");
    let out = conformal(&["transvectant", "--k", "1", "--lambda", "1/3", "--mu", "-2/5", "--format", "json"], "");
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["coefficients"], serde_json::json!(["2/3", "4/5"]));
}

#[test]
fn timing_goes_to_stderr_only() {
    let args: Vec<&str> = ["--timing"].into_iter().chain(CONSTRUCT.iter().copied()).collect();
    let timed = conformal(&args, "");
    let plain = conformal(CONSTRUCT, "");
    assert_eq!(timed.stdout, plain.stdout);
    assert!(String::from_utf8_lossy(&timed.stderr).starts_with("elapsed: "));
}

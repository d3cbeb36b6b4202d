use std::io::Write;
use std::process::{Command, Output, Stdio};

fn psiparam(args: &[&str], stdin: &str, env: Option<(&str, &str)>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_psiparam"));
    cmd.args(args).env_remove("PSIPARAM_TOLERANCE").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    if let Some((k, v)) = env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn reads_stdin_by_default_and_with_dash() {
    let a = psiparam(&["encode"], r#"{"p":[0.5,0.5]}"#, None);
    let b = psiparam(&["encode", "-i", "-"], r#"{"p":[0.5,0.5]}"#, None);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn file_input_and_output() {
    let dir = std::env::temp_dir().join(format!("psiparam-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("in.json");
    let output = dir.join("out.json");
    std::fs::write(&input, r#"{"amplitudes":[0.6,0.8]}"#).unwrap();
    let out = psiparam(&["decode", "-i", input.to_str().unwrap(), "-o", output.to_str().unwrap()], "", None);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&output).unwrap(), "{\"p\":[0.36,0.6400000000000001]}\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(code(&psiparam(&[], "", None)), 2);
    assert_eq!(code(&psiparam(&["encode", "decode"], "", None)), 2);
    assert_eq!(code(&psiparam(&["clock", "--t-start", "0", "--t-end", "0", "--samples", "4"], "", None)), 2);
    assert_eq!(code(&psiparam(&["clock", "--t-start", "0", "--t-end", "1"], "", None)), 2);
    assert_eq!(code(&psiparam(&["encode"], r#"{"p":[0.5,-0.5,1.0]}"#, None)), 3);
    assert_eq!(code(&psiparam(&["encode"], "not json", None)), 3);
    assert_eq!(code(&psiparam(&["check-det"], r#"{"matrix":[[2,0],[0,1]]}"#, None)), 3);
    assert_eq!(code(&psiparam(&["decode", "-i", "/nonexistent/in.json"], "", None)), 4);
    let out = psiparam(&["decode", "-o", "/nonexistent/dir/out.json"], r#"{"theta":[]}"#, None);
    assert_eq!(code(&out), 4);
    assert_eq!(code(&psiparam(&["--help"], "", None)), 0);
}

#[test]
fn errors_name_the_problem() {
    let out = psiparam(&["encode"], "{\n  \"p\": [0.5,\n", None);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
    let out = psiparam(&["encode"], r#"{"p":[0.5,0.6]}"#, None);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("sum to"), "{err}");
}

#[test]
fn tolerance_env_var() {
    let args = ["clock", "--t-start", "0", "--t-end", "1", "--samples", "4"];
    let default = psiparam(&args, "", None);
    let loose = psiparam(&args, "", Some(("PSIPARAM_TOLERANCE", "1e-6")));
    assert_eq!(code(&default), 0);
    assert_eq!(default.stdout, loose.stdout);
    assert_eq!(code(&psiparam(&args, "", Some(("PSIPARAM_TOLERANCE", "zero")))), 2);
    // cos(π/3) rounds to 0.5000000000000001 while √0.25 is exact, so a
    // tolerance below one ulp rejects the output
    let quarter = r#"{"p":[0.25,0.75]}"#;
    assert_eq!(code(&psiparam(&["encode"], quarter, None)), 0);
    assert_eq!(code(&psiparam(&["encode"], quarter, Some(("PSIPARAM_TOLERANCE", "1e-300")))), 3);
}

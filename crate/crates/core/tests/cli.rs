use std::process::{Command, Output};

fn softdec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_softdec")).args(args).env_remove("SOFTDEC_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn encode_small_code() {
    let o = softdec(&["codec", "encode", "--q", "5", "--k", "2", "1 2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "3 0 2 4\n");
}

#[test]
fn hard_decoders_correct_one_error() {
    for dec in ["bm", "gs"] {
        let o = softdec(&["codec", "decode", "--q", "5", "--k", "2", "--decoder", dec, "1 0 2 4"]);
        assert!(o.status.success(), "{dec}");
        assert_eq!(json(&o)["selected"], "3 0 2 4", "{dec}");
    }
}

#[test]
fn soft_decoder_on_typewriter_channel() {
    let enc = softdec(&["codec", "encode", "--q", "16", "--k", "3", "1 2 3"]);
    let cw = stdout(&enc).trim().to_string();
    let mut syms: Vec<u32> = cw.split(' ').map(|t| u32::from_str_radix(t, 16).unwrap()).collect();
    for j in [0, 3, 6, 9, 12] {
        syms[j] ^= 2;
    }
    let y = syms.iter().map(|s| format!("{s:x}")).collect::<Vec<_>>().join(" ");
    let o = softdec(&["codec", "decode", "--q", "16", "--k", "3", "--decoder", "asd", "--channel", "typewriter:0.8", "--lambda", "20", &y]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["selected"], cw.as_str());
    assert_eq!(v["message"], "1 2 3");
}

#[test]
fn input_from_file_and_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("word.txt");
    let out = dir.path().join("out.json");
    std::fs::write(&input, "1 2\n").unwrap();
    let o = softdec(&["codec", "encode", "--q", "5", "--k", "2", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "3 0 2 4\n");
}

#[test]
fn bad_inputs_exit_with_usage_code() {
    let cases: [&[&str]; 5] = [
        &["codec", "encode", "--q", "6", "--k", "2", "1 2"],
        &["codec", "encode", "--q", "5", "--k", "2", "1 9"],
        &["codec", "decode", "--q", "5", "--k", "2", "1 2 3"],
        &["simulate", "/nonexistent/spec.json"],
        &["curves", "--bounds", "nonsense"],
    ];
    for args in cases {
        let o = softdec(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn malformed_spec_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, r#"{"k": 2, "lambda": 10, "trials": 5, "channel": {"p": [0.5, 0.5]}, "extra": 1}"#).unwrap();
    assert_eq!(softdec(&["simulate", spec.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&spec, r#"{"k": 2, "lambda": 10, "trials": 5, "channel": {"p": [0.5, 0.6, 0.0]}}"#).unwrap();
    assert_eq!(softdec(&["simulate", spec.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn simulate_reports_and_seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"k": 2, "channel": {"preset": "typewriter", "p_correct": 0.8, "q": 16}, "lambda": 30, "trials": 40, "seed": 3}"#,
    )
    .unwrap();
    let path = spec.to_str().unwrap();
    let o = softdec(&["simulate", path]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["spec"]["seed"], 3);
    assert_eq!(v["conditions"][0]["on_list"], 40);
    assert!(v["elapsed_seconds"].is_number());

    let env = Command::new(env!("CARGO_BIN_EXE_softdec")).args(["simulate", path]).env("SOFTDEC_SEED", "11").output().unwrap();
    assert_eq!(json(&env)["spec"]["seed"], 11);
    let flag = Command::new(env!("CARGO_BIN_EXE_softdec"))
        .args(["simulate", path, "--seed", "12"])
        .env("SOFTDEC_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(json(&flag)["spec"]["seed"], 12);
}

#[test]
fn curves_custom_channel_file() {
    let dir = tempfile::tempdir().unwrap();
    let ch = dir.path().join("channel.json");
    std::fs::write(&ch, r#"{"p": [0.7, 0.1, 0.1, 0.1]}"#).unwrap();
    let o = softdec(&["curves", "--channel", ch.to_str().unwrap(), "--lambda", "50", "--rate-grid", "0.1:0.9:0.1", "--bounds", "bm,gs,asd"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "rate,tau_bm,tau_gs,tau_asd");
    assert_eq!(rows.len(), 10);
    assert!(text.contains("# lambda: 50"));
}

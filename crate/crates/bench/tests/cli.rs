use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_backscatter"))
}

#[test]
fn describe_prints_defaults() {
    let out = bin().args(["describe"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("spreading factor N = 50"));
    assert!(text.contains("frame bits I = 100"));
    assert!(text.contains("pilot bits P = 20"));
    assert!(text.contains("7 dB -> 5.0119 linear"));
}

#[test]
fn unknown_sweep_parameter_lists_valid_names() {
    let out = bin().args(["describe", "--sweep", "jammer_power=1,2"]).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("jammer_power"));
    assert!(err.contains("alpha_jr_db") && err.contains("theta0"));
}

#[test]
fn ber_from_config_file_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        "antennas = 2\nspreading_factor = 4\nframe_bits = 12\npilot_bits = 4\nsweep = \"alpha_jr_db=3,6\"\n",
    )
    .unwrap();
    let csv = dir.path().join("ber.csv");
    let status = bin()
        .args(["ber", "--trials", "5", "--seed", "3", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&csv)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "swept_name,swept_value,metric,value,stderr,trials,seed,wall_time_s"
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&first[..3], &["alpha_jr_db", "3.0", "ber"]);
    assert_eq!(&first[5..7], &["5", "3"]);
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn dl_detector_requires_checkpoint() {
    let out = bin().args(["ber", "--detector", "dl", "--trials", "1"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("checkpoint"));
}

#[test]
fn zero_trials_is_rejected() {
    let out = bin().args(["ber", "--trials", "0"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn train_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("t.toml");
    std::fs::write(
        &cfg,
        "antennas = 2\nspreading_factor = 4\nframe_bits = 16\npilot_bits = 6\nhidden = 4\nepochs = 2\ntrain_frames = 10\ntrain_symbols_per_frame = 3\n",
    )
    .unwrap();
    let ck = dir.path().join("m.json");
    let status = bin().arg("train").arg("--config").arg(&cfg).arg("--checkpoint").arg(&ck).status().unwrap();
    assert!(status.success());
    assert!(ck.exists());
    assert!(dir.path().join("m.log.csv").exists());
    let out = bin()
        .args(["eval", "--trials", "3", "--config"])
        .arg(&cfg)
        .arg("--checkpoint")
        .arg(&ck)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ber_ml") && text.contains("ber_dl"));
}

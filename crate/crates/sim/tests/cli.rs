use std::process::Command;

fn prs4d() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prs4d"))
}

#[test]
fn export_constellation_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let status = prs4d()
        .args(["export-constellation", "--set", "format=4d64prs", "--output_path"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("constellation_4d64prs.csv")).unwrap();
    assert_eq!(text.lines().count(), 65);
    assert!(text.starts_with("index,label_bits,s1,s2,s3,s4\n"));
}

#[test]
fn unknown_key_fails_with_one_line() {
    let out = prs4d().args(["export-constellation", "--set", "colour=red"]).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.contains("colour"));
}

#[test]
fn missing_config_fails() {
    let out = prs4d().args(["simulate", "--config", "/nonexistent/prs4d.toml"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("does not exist"));
}

#[test]
fn config_file_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "format = \"pm8qam\"\nn_channels = 1\nn_symbols = 4096\nn_spans = 1\nstep_km = 10.0\nlaunch_dbm = [-4.0, 0.0]\ndemapper = \"iid\"\n",
    )
    .unwrap();
    let status = prs4d()
        .args(["sweep-power", "--plot", "--config"])
        .arg(&cfg)
        .arg("--output_path")
        .arg(dir.path())
        .env("PRS4D_WORKERS", "2")
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("sweep_power.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "launch_dbm,distance_km,n_channels,format,demapper,gmi_bit4d,ndr_gbps,seed,runtime_s");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("-4,80,1,pm8qam,iid,"));
    let svg = std::fs::read_to_string(dir.path().join("sweep_power.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
}

#[test]
fn gmi_awgn_covers_all_formats() {
    let dir = tempfile::tempdir().unwrap();
    let status = prs4d()
        .args(["gmi-awgn", "--snr", "-2,10", "--size", "4", "--output_path"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("gmi_awgn.csv")).unwrap();
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn bad_worker_count_fails() {
    let out = prs4d().args(["export-constellation"]).env("PRS4D_WORKERS", "0").output().unwrap();
    assert!(!out.status.success());
}

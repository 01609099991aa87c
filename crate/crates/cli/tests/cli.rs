use std::fs;
use std::process::Command;

fn pmrsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pmrsim"))
}

const FAST: [&str; 8] = ["--channel", "awgn", "--code", "cyclic-15-7", "--max_frames", "200", "--decoders", "bp,rvcm:3"];

#[test]
fn sweep_writes_a_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let status = pmrsim()
        .arg("sweep")
        .args(FAST)
        .args(["--snr_db", "0,3", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(pmr_core::harness::CSV_HEADER));
    assert_eq!(lines.count(), 4);

    // Same config from a file gives the same bytes.
    let cfg = dir.path().join("exp.cfg");
    fs::write(
        &cfg,
        "channel = awgn\ncode = cyclic-15-7\nmax_frames = 200\ndecoders = bp, rvcm:3\nsnr_db = 0, 3\n",
    )
    .unwrap();
    let again = dir.path().join("again.csv");
    let status = pmrsim().args(["sweep", "-c"]).arg(&cfg).arg("-o").arg(&again).status().unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn config_errors_exit_with_one() {
    let bad_value = pmrsim().arg("simulate").args(["--bp_iters", "lots"]).output().unwrap();
    assert_eq!(bad_value.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_value.stderr).contains("bp_iters"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "snr_db = 1\nno_such_key = 3\n").unwrap();
    let bad_file = pmrsim().args(["simulate", "-c"]).arg(&cfg).output().unwrap();
    assert_eq!(bad_file.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_file.stderr).contains("line 2"));

    let missing = pmrsim().args(["simulate", "-c"]).arg(dir.path().join("absent.cfg")).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn decode_trace_and_gen_code() {
    let out = pmrsim().arg("decode-trace").args(FAST).args(["--snr_db=-1", "--early_exit", "false"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some(pmr_core::harness::TRACE_HEADER));
    assert_eq!(text.lines().count(), 1 + 1 + 6);

    let dir = tempfile::tempdir().unwrap();
    let status = pmrsim()
        .args(["gen-code", "--name", "hamming-7-4", "--out-dir"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let h = pmr_core::ldpc::load_alist(dir.path().join("hamming-7-4.alist")).unwrap();
    assert_eq!(h, pmr_core::codes::builtin("hamming-7-4").unwrap());
}

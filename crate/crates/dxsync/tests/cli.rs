use std::process::{Command, Output};

fn dxsync(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dxsync"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_all_passes() {
    let o = dxsync(&["verify", "all", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn verify_catches_broken_modulus_search() {
    let o = dxsync(&["verify", "labeling", "--mutate-modulus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("modulus separates: random set"));
}

#[test]
fn verify_rejects_unknown_suite() {
    assert_eq!(dxsync(&["verify", "wires"]).status.code(), Some(2));
}

#[test]
fn sync_five_substring_pair() {
    let o = dxsync(&["sync", "--x", "11100010100110", "--y", "111010011100110", "--k", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("decoded   11100010100110"));
}

#[test]
fn sync_without_edits() {
    let o = dxsync(&["sync", "--n", "40", "--t", "0", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = |p: &str| text.lines().find(|l| l.starts_with(p)).unwrap()[10..].to_string();
    assert_eq!(line("x "), line("y "));
}

#[test]
fn sync_reads_x_from_file_and_writes_wire() {
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("x.txt");
    let wire = dir.path().join("enc.bin");
    std::fs::write(&x, "0110100110010110\n").unwrap();
    let o = dxsync(&[
        "sync",
        "--x-file",
        x.to_str().unwrap(),
        "--t",
        "2",
        "--scheme",
        "average",
        "--delta",
        "6",
        "--wire-out",
        wire.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let bytes = std::fs::read(&wire).unwrap();
    assert_eq!(&bytes[..6], b"DXSE\x01\x01");
}

#[test]
fn sync_rejects_corrupted_wire() {
    for c in ["magic", "version", "scheme"] {
        let o = dxsync(&["sync", "--n", "16", "--corrupt", c]);
        assert_eq!(o.status.code(), Some(1));
        assert!(stderr(&o).contains("deserialize failed"), "{}", stderr(&o));
    }
}

#[test]
fn sync_with_hash_labeling_reports_seed() {
    let o = dxsync(&["sync", "--n", "24", "--labeling", "hash:12", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("labeling  hash:12 (seed "));
}

#[test]
fn ball_census_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = dxsync(&[
            "ball-census",
            "--n-grid",
            "6,8",
            "--samples",
            "5",
            "--seed",
            "11",
            "--oracle",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 11);
    for row in text.lines().skip(1) {
        assert!(row.ends_with(",true"), "{row}");
    }
}

#[test]
fn ball_census_zero_string() {
    let o = dxsync(&["ball-census", "--x", "0000"]);
    assert_eq!(stdout(&o).lines().nth(1), Some("4,1,1,0000,54,1080,,12,11,false"));
}

#[test]
fn ball_census_budget_exit_codes() {
    assert_eq!(
        dxsync(&["ball-census", "--n-grid", "13", "--oracle"]).status.code(),
        Some(3)
    );
    assert_eq!(
        dxsync(&["ball-census", "--n-grid", "30", "--budget", "100"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn density_census_full_window_count() {
    let o = dxsync(&["density-census", "--n-grid", "4,5,6", "--full-window", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(rows[0], "4,01,4,16,true,5,0.3125,0.0,0.5625,true");
    assert_eq!(rows.len(), 3);
}

#[test]
fn density_census_config_errors() {
    let o = dxsync(&["density-census", "--pattern", "0011", "--delta", "3", "--n-grid", "16"]);
    assert_eq!(o.status.code(), Some(2));
    let o = dxsync(&["density-census", "--delta", "3", "--full-window"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_degenerate_grid_warns() {
    let o = dxsync(&["bench", "--n-grid", "20", "--t", "0", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("slope fit skipped"));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn bench_json_has_slope() {
    let o = dxsync(&["bench", "--n-grid", "16,32", "--trials", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["slope"].is_number());
    assert_eq!(v["records"].as_array().unwrap().len(), 2);
}

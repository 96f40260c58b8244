use std::fs;
use std::process::{Command, Output};

fn st_forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_st-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_smallest_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = st_forge(&[
        "generate", "--k", "2", "--N", "1", "--M", "1", "--format", "csv", "--out", out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let a = fs::read_to_string(dir.path().join("A.csv")).unwrap();
    let rows: Vec<&str> = a.lines().skip(1).collect();
    assert_eq!(rows, ["-1,-1", "0,-1", "-1,0", "0,0"]);
    assert!(dir.path().join("S.csv").exists());
    assert!(dir.path().join("L.csv").exists());
}

#[test]
fn generate_json_sets() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = st_forge(&["generate", "--side", "4", "--M", "4", "--out", out]);
    assert!(o.status.success());
    let s: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("S.json")).unwrap()).unwrap();
    assert_eq!(s["schema_version"], 1);
    assert_eq!(s["rows"].as_array().unwrap().len(), 78);
    let l: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("L.json")).unwrap()).unwrap();
    assert_eq!(l["rows"].as_array().unwrap().len(), 13814);
}

#[test]
fn square_radicand_is_rejected() {
    let o = st_forge(&["verify", "--k", "4", "--side", "4", "--M", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("non-square"));
}

#[test]
fn slope_scale_above_grid_scale_is_rejected() {
    let o = st_forge(&["verify", "--N", "4", "--M", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = st_forge(&["verify", "--N", "4", "--r", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lattice_diagonal() {
    let o = st_forge(&["lattice", "--n", "3", "--p", "1", "--q", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["size"], 5);
    let o = st_forge(&["lattice", "--n", "3", "--p", "2", "--q", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_with_oracle() {
    let o = st_forge(&[
        "verify",
        "--side",
        "4",
        "--M",
        "4",
        "--oracle",
        "--per-line",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["oracle_agreement"], true);
    assert_eq!(v["oracle_lines_checked"], 100);
    assert_eq!(v["card_s"], 78);
    assert_eq!(v["card_l"], 13814);
    assert_eq!(v["per_line"].as_array().unwrap().len(), 13814);
    assert_eq!(v["richness"]["r_min"], 3);
    assert_eq!(v["sharpness"]["ratio"], "186489/8407040");
}

#[test]
fn sweep_csv_layout() {
    let o = st_forge(&["sweep", "--side", "2,4", "--M", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    assert_eq!(
        lines.next().unwrap(),
        "k,s,N_eff,M,c,card_A,card_S,pairs_raw,card_L,r_min,r_max,mean_richness_num,mean_richness_den,st_bound_num,st_bound_den,ratio_num,ratio_den"
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["sweep", "--side", "4,6", "--M", "4,9"];
    let a = st_forge(&args);
    let mut threaded = vec!["--threads", "3"];
    threaded.extend(args);
    let b = st_forge(&threaded);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(st_forge(&args).stdout, a.stdout);
}

#[test]
fn energy_and_projection_reports() {
    let o = st_forge(&["energy", "--side", "2", "--M", "4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["per_slope"].as_array().unwrap().len(), 78);
    let o = st_forge(&["project", "--side", "2", "--M", "4", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 79);
}

#[test]
fn narrow_window_warns() {
    let o = st_forge(&["verify", "--side", "4", "--M", "4", "--c", "0.95"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn work_cap_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_st-forge"))
        .args(["verify", "--side", "8", "--M", "4"])
        .env("ST_FORGE_MAX_CELLS", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(6));
}

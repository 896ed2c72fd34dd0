use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn capforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capforge"))
        .args(args)
        .env_remove("CAPFORGE_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn text(o: &Output) -> String {
    format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    )
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn construct_writes_graph_and_sidecar_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.col");
    let args = [
        "construct",
        "--nu",
        "2",
        "--n",
        "2",
        "--seed",
        "7",
        "--out",
        p(&g),
    ];
    let o = capforge(&args);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let meta_path = dir.path().join("g.col.meta.json");
    let first = (fs::read(&g).unwrap(), fs::read(&meta_path).unwrap());
    let meta = json(&meta_path);
    assert_eq!(meta["construction"], "canonical");
    assert_eq!(meta["N"], 4);
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["removed_edges"].as_array().unwrap().len(), 4);
    assert_eq!(meta["config"]["seed"], 7);

    assert_eq!(code(&capforge(&args)), 0);
    assert_eq!(
        first,
        (fs::read(&g).unwrap(), fs::read(&meta_path).unwrap())
    );
}

#[test]
fn simple_construction_edge_count() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("s.col");
    let o = capforge(&[
        "construct",
        "--simple",
        "--nu",
        "3",
        "--n",
        "3",
        "--seed",
        "1",
        "--out",
        p(&g),
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let header = fs::read_to_string(&g)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert_eq!(header, "p edge 9 33");
}

#[test]
fn multi_construction_records_factors_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("m.col");
    let o = capforge(&[
        "construct",
        "--multi",
        "--nus",
        "2,3",
        "--n1",
        "2",
        "--alpha",
        "1.5",
        "--seed",
        "4",
        "--out",
        p(&g),
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let meta = json(&dir.path().join("m.col.meta.json"));
    assert_eq!(meta["nu_list"], serde_json::json!([2, 3]));
    assert_eq!(meta["N1"], 4);
    assert_eq!(meta["N"], 96);
    let factors = meta["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 2);
    assert_eq!(factors[0]["N"], 4);
    assert_eq!(factors[1]["N"], 24);
    assert_eq!(factors[1]["seed"], 5);

    let o = capforge(&["verify", p(&g)]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("PASS certificate_k3"));
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"construction": "simple", "nu": 3, "n": 4, "seed": 11}"#,
    )
    .unwrap();
    let (a, b) = (dir.path().join("a.col"), dir.path().join("b.col"));
    assert_eq!(
        code(&capforge(&[
            "construct",
            "--config",
            p(&cfg),
            "--out",
            p(&a)
        ])),
        0
    );
    let o = capforge(&[
        "construct",
        "--simple",
        "--nu",
        "3",
        "--n",
        "4",
        "--seed",
        "11",
        "--out",
        p(&b),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let multi = dir.path().join("multi.json");
    fs::write(
        &multi,
        r#"{"construction": "product", "nus": [2, 3], "N1": 4, "alpha": 1.5, "seeds": [1, 2]}"#,
    )
    .unwrap();
    let m = dir.path().join("m.col");
    assert_eq!(
        code(&capforge(&[
            "construct",
            "--config",
            p(&multi),
            "--out",
            p(&m)
        ])),
        0
    );
    assert_eq!(
        json(&dir.path().join("m.col.meta.json"))["seeds"],
        serde_json::json!([1, 2])
    );

    fs::write(&cfg, r#"{"nu": 2, "n": 2, "colour": 3}"#).unwrap();
    assert_eq!(
        code(&capforge(&[
            "construct",
            "--config",
            p(&cfg),
            "--out",
            p(&a)
        ])),
        1
    );
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&capforge(&["--help"])), 0);
    assert_eq!(code(&capforge(&["--version"])), 0);
    assert_eq!(code(&capforge(&["frobnicate"])), 1);
    assert_eq!(
        code(&capforge(&[
            "construct",
            "--nu",
            "1",
            "--n",
            "2",
            "--out",
            "/tmp/x.col"
        ])),
        1
    );
    assert_eq!(code(&capforge(&["construct", "--nu", "2", "--n", "2"])), 1);
    assert_eq!(code(&capforge(&["series", "/nonexistent/g.col"])), 1);
}

#[test]
fn cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("m.col");
    let o = Command::new(env!("CARGO_BIN_EXE_capforge"))
        .args([
            "construct",
            "--multi",
            "--nus",
            "2,3",
            "--n1",
            "2",
            "--alpha",
            "1.5",
            "--out",
            p(&g),
        ])
        .env("CAPFORGE_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(text(&o).contains("cap of 50"), "{}", text(&o));
}

#[test]
fn tampered_metadata_fails_with_class_id() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.col");
    assert_eq!(
        code(&capforge(&[
            "construct",
            "--nu",
            "2",
            "--n",
            "4",
            "--seed",
            "3",
            "--out",
            p(&g)
        ])),
        0
    );
    assert_eq!(code(&capforge(&["verify", p(&g)])), 0);

    let meta_path = dir.path().join("g.col.meta.json");
    let mut meta = json(&meta_path);
    let removed = meta["removed_edges"].as_array_mut().unwrap();
    // the shift partner of the class-0 removal also lies in class 0
    let (x, y) = (
        removed[0][0].as_u64().unwrap(),
        removed[0][1].as_u64().unwrap(),
    );
    let (a, b) = ((x + 4) % 8, (y + 4) % 8);
    removed[1] = serde_json::json!([a.min(b), a.max(b)]);
    fs::write(&meta_path, serde_json::to_string(&meta).unwrap()).unwrap();

    let o = capforge(&["verify", p(&g)]);
    assert_eq!(code(&o), 2, "{}", text(&o));
    assert!(text(&o).contains("FAIL one_edge_per_class"), "{}", text(&o));
    assert!(text(&o).contains("hit more than once: 0"), "{}", text(&o));
}

#[test]
fn series_reports_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.col");
    assert_eq!(
        code(&capforge(&[
            "construct",
            "--nu",
            "2",
            "--n",
            "2",
            "--seed",
            "1",
            "--out",
            p(&g)
        ])),
        0
    );
    let out = dir.path().join("r.json");
    let o = capforge(&[
        "series",
        p(&g),
        "--k-max",
        "2",
        "--mode",
        "exact",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let r = json(&out);
    let entries = r["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert!(entries[1]["alpha_lower"].as_u64().unwrap() >= 4);
    assert_eq!(r["monotone_violations"], serde_json::json!([]));
    assert_eq!(r["config"]["k_max"], 2);
    assert_eq!(r["graph_meta"]["construction"], "canonical");
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("k,alpha_lower,alpha_upper"));
}

#[test]
fn series_on_complete_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("k5.col");
    let edges: String = (1..=5)
        .flat_map(|u| (u + 1..=5).map(move |v| format!("e {u} {v}\n")))
        .collect();
    fs::write(&g, format!("p edge 5 10\n{edges}")).unwrap();
    let o = capforge(&["series", p(&g), "--k-max", "1"]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let r = json(&dir.path().join("k5.col.series.json"));
    assert_eq!(r["entries"][0]["a_k_lower"], 1.0);
    assert_eq!(r["entries"][0]["alpha_exact"], 1);
}

#[test]
fn exhausted_exact_series_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.col");
    assert_eq!(
        code(&capforge(&[
            "construct",
            "--nu",
            "2",
            "--n",
            "10",
            "--out",
            p(&g)
        ])),
        0
    );
    let o = capforge(&[
        "series",
        p(&g),
        "--k-max",
        "2",
        "--mode",
        "exact",
        "--budget-nodes",
        "1",
    ]);
    assert_eq!(code(&o), 3, "{}", text(&o));
}

#[test]
fn mc_alpha_single_trial() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mc.json");
    let o = capforge(&[
        "mc-alpha",
        "--trials",
        "1",
        "--vertices",
        "16",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let r = json(&out);
    assert_eq!(r["histogram"].as_object().unwrap().len(), 1);
    assert_eq!(r["short_pairs_always_non_edges"], true);
    assert!(r["s_star"].as_u64().is_some());
}

#[test]
fn jump_demo_small_n_prints_caveat() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("demo.json");
    let o = capforge(&[
        "jump-demo",
        "--vertices",
        "16",
        "--seed",
        "2",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let r = json(&out);
    assert_eq!(r["certificate_size"], 16);
    assert_eq!(r["certificate_verified"], true);
    assert_eq!(r["a_nu_lower"], 4.0);
    assert!(r["caveat"].is_string());
    assert!(!r["first_moment"].as_array().unwrap().is_empty());
}

#[test]
fn multi_jump_reports_each_jump() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("multi.json");
    let o = capforge(&[
        "multi-jump",
        "--nus",
        "2,3",
        "--n1",
        "2",
        "--alpha",
        "1.5",
        "--mode",
        "certificate-only",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let r = json(&out);
    assert_eq!(r["sizes"], serde_json::json!([4, 24]));
    assert_eq!(r["jumps"].as_array().unwrap().len(), 2);
    assert_eq!(r["series"]["entries"][2]["alpha_lower"], 96);
}

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn flatstrata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatstrata"))
        .args(args)
        .env_remove("FLATSTRATA_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", stderr(o));
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn info_octagon() {
    let v = json(&flatstrata(&["info", "regular_octagon"]));
    assert_eq!(v["genus"], 2);
    assert_eq!(v["stratum"], "H_0(2)");
    assert!((v["area"].as_f64().unwrap() - 2.0 * (1.0 + 2f64.sqrt())).abs() < 1e-9);
    assert_eq!(v["systole"].as_f64().unwrap(), 1.0);
    assert_eq!(v["dimension"], 4);
}

#[test]
fn gen_then_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("slit.json");
    let p = path.to_str().unwrap();
    let o = flatstrata(&["gen", "--family", "slit_tori(0.3)", "--out", p]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&flatstrata(&["validate", p]));
    assert_eq!(v["valid"], true);
    assert_eq!(v["stratum"], "H_0(1,1)");
    assert_eq!(v["dimension"], 5);
}

#[test]
fn broken_gluing_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = r#"{
        "polygons": [[[0,0],[1,0],[1,1],[0,1.5]]],
        "gluings": [[[0,0],[0,2]], [[0,1],[0,3]]],
        "marked": [{"vertex": [0,0], "order": 0, "free": true}],
        "n": 1
    }"#;
    fs::write(&path, text).unwrap();
    let o = flatstrata(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NonTranslationGluing"), "{}", stderr(&o));
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    fs::write(&path, "{ not json").unwrap();
    let o = flatstrata(&["info", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: Parse"));
}

#[test]
fn missing_surface_exits_1() {
    let o = flatstrata(&["info", "/nonexistent/surface.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = flatstrata(&["saddles", "regular_octagon", "--max-length", "40", "--budget", "10000"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("BudgetExceeded"));
}

#[test]
fn budget_env_is_read() {
    let o = Command::new(env!("CARGO_BIN_EXE_flatstrata"))
        .args(["saddles", "regular_octagon", "--max-length", "40"])
        .env("FLATSTRATA_BUDGET", "10000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_flatstrata"))
        .args(["info", "square_torus"])
        .env("FLATSTRATA_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("InvalidConfig"));
}

#[test]
fn saddles_csv_square_torus() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = flatstrata(&["saddles", "square_torus", "--max-length", "2.3", "--csv", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("length,re,im,start,end"));
    assert_eq!(lines.count(), 16);
}

#[test]
fn saddles_json_format() {
    let v = json(&flatstrata(&["saddles", "square_torus", "--max-length", "1.2", "--format", "json"]));
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn periods_csv_and_json() {
    let o = flatstrata(&["periods", "regular_octagon"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("cycle_id,re,im\n"));
    assert_eq!(text.lines().count(), 5);
    let v = json(&flatstrata(&["periods", "regular_octagon", "--format", "json"]));
    assert_eq!(v["basis"].as_array().unwrap().len(), 4);
    assert_eq!(v["period_vector"].as_array().unwrap().len(), 4);
}

#[test]
fn functional_values() {
    let v = json(&flatstrata(&["functional", "square_torus", "--name", "exhm"]));
    assert!((v["value"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-9);
    let v = json(&flatstrata(&["functional", "marked_slit_tori(0.1,0.2)", "--name", "rsigma", "--sigma", "1,2,3"]));
    assert_eq!(v["name"], "rsigma");
    let o = flatstrata(&["functional", "square_torus", "--name", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hessian_area_signature() {
    let v = json(&flatstrata(&["hessian", "regular_octagon", "--functional", "area"]));
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["signature"]["n_plus"], 2);
    assert_eq!(v["signature"]["n_minus"], 2);
    let v = json(&flatstrata(&["hessian", "regular_octagon", "--functional", "logarea", "--step", "1e-3", "--tol", "1e-5"]));
    assert_eq!(v["step"].as_f64().unwrap(), 1e-3);
    assert_eq!(v["signature"]["n_zero"], 1);
    // Radical spans all marked points, free ones included: n + k - 1.
    let v = json(&flatstrata(&["hessian", "two_point_torus(0.3)", "--functional", "area"]));
    assert_eq!(v["signature"]["n_zero"], 1);
}

#[test]
fn sweep_slit_slope() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let o = flatstrata(&[
        "sweep", "--family", "slit", "--from", "1e-4", "--to", "1e-1", "--steps", "7", "--functional", "ell2",
        "--csv", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("param,value,flags\n"));
    let slope: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# slope,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 2.0).abs() < 0.05, "slope {slope}");
}

#[test]
fn sweep_unknown_family() {
    let o = flatstrata(&["sweep", "--family", "spiral", "--from", "1", "--to", "2", "--steps", "3", "--functional", "area"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("UnknownFamily"));
}

#[test]
fn bounds_json() {
    let v = json(&flatstrata(&["bounds", "--genus", "3", "--marked", "0"]));
    assert_eq!(v["moduli_bound"], 4);
    assert_eq!(v["hodge_bound"], 6);
    assert_eq!(v["strata_bound"], 3);
    assert_eq!(v["depth"], 3);
    assert_eq!(v["harer"], 7);
    assert_eq!(v["looijenga_conjecture"], 1);
    let o = flatstrata(&["bounds", "--genus", "1", "--marked", "0"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("GenusTooSmall"));
}

#[test]
fn strata_table() {
    let o = flatstrata(&["strata", "--genus", "2", "--marked", "0"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "depth,signature,aut_order,proj_dimension\n0,\"(1,1)\",2,4\n1,(2),1,3\n"
    );
    let v = json(&flatstrata(&["strata", "--genus", "2", "--marked", "0", "--format", "json"]));
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn json_only_report_rejects_csv() {
    let o = flatstrata(&["info", "square_torus", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("UnsupportedFormat"));
}

#[test]
fn config_file_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "budget = 10000\nformat = \"json\"\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = flatstrata(&["--config", c, "strata", "--genus", "2", "--marked", "0"]);
    assert!(serde_json::from_str::<Value>(&stdout(&o)).is_ok());
    let o = flatstrata(&["--config", c, "saddles", "regular_octagon", "--max-length", "40"]);
    assert_eq!(o.status.code(), Some(3));
    fs::write(&cfg, "tolerance = 1\n").unwrap();
    let o = flatstrata(&["--config", c, "info", "square_torus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let runs: [&[&str]; 4] = [
        &["info", "slit_tori(0.2)"],
        &["functional", "regular_octagon", "--name", "exhm"],
        &["saddles", "regular_octagon", "--max-length", "4"],
        &["hessian", "square_torus", "--functional", "ell2"],
    ];
    for args in runs {
        let a = flatstrata(args);
        let b = flatstrata(args);
        assert!(a.status.success(), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_single_criterion() {
    let o = flatstrata(&["verify", "--criterion", "9"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("[PASS]"));
    let o = flatstrata(&["verify", "--criterion", "11"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let o = flatstrata(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

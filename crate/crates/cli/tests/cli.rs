use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toric-ding"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json output")
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Self { dir: TempDir::new().unwrap() }
    }

    fn write(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn corpus(&self, name: &str) -> PathBuf {
        let o = run(&["corpus", name]);
        assert!(o.status.success());
        self.write(&format!("{name}.json"), &stdout(&o))
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const HINGE: &str = r#"{"affines": [{"gradient": [0], "constant": 0}, {"gradient": [-1], "constant": 0}]}"#;

#[test]
fn analyze_reports_extremal_data() {
    let f = Files::new();
    let p2 = json(&run(&["analyze", "--polytope", s(&f.corpus("P2"))]));
    assert_eq!(p2["vartheta"], "0");
    assert_eq!(p2["verdict"]["verdict"], "obstruction vanishes");
    let bl = json(&run(&["analyze", "--polytope", s(&f.corpus("Bl1P2"))]));
    assert_eq!(bl["barycenter"], serde_json::json!(["-1/12", "-1/12"]));
    assert_eq!(bl["vartheta"], "5/11");
    assert_eq!(bl["degree"], "8");
    assert_eq!(bl["verdict"]["verdict"], "necessary condition satisfied");
}

#[test]
fn analyze_accepts_vertex_form() {
    let f = Files::new();
    let p = f.write("v.json", r#"{"vertices": [["-1", "-1"], [2, -1], [-1, "2"]]}"#);
    assert_eq!(json(&run(&["analyze", "--polytope", s(&p)]))["volume"], "9/2");
}

#[test]
fn destabilized_example() {
    let f = Files::new();
    let v = json(&run(&["analyze", "--polytope", s(&f.corpus("P123"))]));
    assert_eq!(v["vartheta"], "2");
    assert_eq!(v["verdict"]["verdict"], "destabilized");
    assert!(v["verdict"]["witness"]["d_z_na"].as_str().unwrap().starts_with('-'));
}

#[test]
fn tc_eval_examples() {
    let f = Files::new();
    let p1 = f.corpus("P1");
    let hinge = f.write("hinge.json", HINGE);
    let v = json(&run(&["tc-eval", "--polytope", s(&p1), "--tc", s(&hinge), "--rho", "1"]));
    assert_eq!(v["e_na"], "-1/4");
    assert_eq!(v["j_na"], "1/4");
    assert_eq!(v["d_na"], "1/4");
    assert_eq!(v["d_z_na"], "1/4");
    assert_eq!(v["inner_products"][0]["value"], "-1/6");
    assert_eq!(v["dh"]["atoms"][0]["mass"], "1/2");

    let zero = f.write("zero.json", r#"{"affines": [{"gradient": [0, 0], "constant": "0"}]}"#);
    let v = json(&run(&["tc-eval", "--polytope", s(&f.corpus("P2")), "--tc", s(&zero)]));
    for k in ["e_na", "j_na", "d_na", "d_z_na"] {
        assert_eq!(v[k], "0");
    }
    assert_eq!(v["dh"]["atoms"][0]["location"], "0");
    assert_eq!(v["dh"]["atoms"][0]["mass"], "1");

    let product = f.write("prod.json", r#"{"affines": [{"gradient": [1, 0], "constant": 0}]}"#);
    let v = json(&run(&["tc-eval", "--polytope", s(&f.corpus("P2")), "--tc", s(&product)]));
    assert_eq!(v["d_z_na"], "0");
}

#[test]
fn tc_dimension_mismatch_is_usage_error() {
    let f = Files::new();
    let o = run(&["tc-eval", "--polytope", s(&f.corpus("P2")), "--tc", s(&f.write("h.json", HINGE))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dimension mismatch"));
}

#[test]
fn reduce_emits_reduction_keys_and_segment() {
    let f = Files::new();
    let plot = f.dir.path().join("seg.csv");
    let o = run(&[
        "reduce",
        "--polytope",
        s(&f.corpus("P1")),
        "--tc",
        s(&f.write("h.json", HINGE)),
        "--segment",
        "-1:2",
        "--samples",
        "4",
        "--emit-plot-data",
        s(&plot),
    ]);
    let v = json(&o);
    assert_eq!(v["j_na"], "1/4");
    assert_eq!(v["j_t_na"], "1/4");
    assert_eq!(v["rho_star"], serde_json::json!(["0"]));
    assert_eq!(v["candidates_used"], 3);
    let csv = fs::read_to_string(plot).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("series,x,y"));
}

#[test]
fn normal_cone_report_and_csv() {
    let f = Files::new();
    let bl = f.corpus("Bl1P2");
    let v = json(&run(&["normal-cone", "--polytope", s(&bl), "--grid", "1/8,1/4,1/2"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["leading_coefficient"], "1/44");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    let o = run(&["normal-cone", "--polytope", s(&bl), "--grid", "1/2", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("c,j_na,j_t_na,d_na,extremal_pairing,d_z_na"));
    assert!(text.contains("1/2,1/192,1/192,1/192,"));
    let bad = run(&["normal-cone", "--polytope", s(&bl), "--grid", "5"]);
    assert_eq!(bad.status.code(), Some(1));
    let idx = run(&["normal-cone", "--polytope", s(&bl), "--vertex", "0", "--grid", "1/4"]);
    assert!(idx.status.success());
}

#[test]
fn oracle_table_and_tolerance() {
    let f = Files::new();
    let p1 = f.corpus("P1");
    let hinge = f.write("h.json", HINGE);
    let o = run(&["oracle", "--polytope", s(&p1), "--tc", s(&hinge), "--k-ladder", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("2,5,-3/10,"), "{row}");

    let zero = f.write("z.json", r#"{"affines": [{"gradient": [0], "constant": 0}]}"#);
    let o = run(&["oracle", "--polytope", s(&p1), "--tc", s(&zero), "--k-ladder", "1,3,9", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["final_max_error"], "0");
    for r in v["rows"].as_array().unwrap() {
        assert_eq!(r["mean_error"], "0");
    }

    let strict = run(&["oracle", "--polytope", s(&p1), "--tc", s(&hinge), "--k-ladder", "2,4", "--tol", "1/1000"]);
    assert_eq!(strict.status.code(), Some(2));
    let bad = run(&["oracle", "--polytope", s(&p1), "--tc", s(&hinge), "--k-ladder", "4,2"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn oracle_product_gabor_errors_shrink() {
    let f = Files::new();
    let prod = f.write("p.json", r#"{"affines": [{"gradient": ["1/2", "-1/3"], "constant": "1/3"}]}"#);
    let o = run(&[
        "oracle",
        "--polytope",
        s(&f.corpus("P2")),
        "--tc",
        s(&prod),
        "--k-ladder",
        "1,2,4,8",
        "--rho",
        "1,0",
        "--format",
        "json",
        "--tol",
        "1",
    ]);
    let v = json(&o);
    let errs: Vec<f64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let (n, d) =
                r["inner_error"].as_str().unwrap().split_once('/').unwrap_or((r["inner_error"].as_str().unwrap(), "1"));
            n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn malformed_inputs_exit_with_one() {
    let f = Files::new();
    let zero_den = f.write(
        "z.json",
        "{\"dim\": 1,\n \"facets\": [{\"normal\": [1], \"rhs\": \"1/0\"}, {\"normal\": [-1], \"rhs\": 1}]}",
    );
    let o = run(&["analyze", "--polytope", s(&zero_den)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let not_fano =
        f.write("nf.json", r#"{"dim": 1, "facets": [{"normal": [-1], "rhs": 0}, {"normal": [1], "rhs": 2}]}"#);
    let o = run(&["analyze", "--polytope", s(&not_fano)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("right-hand side"));
    assert_eq!(run(&["analyze"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "--polytope", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let f = Files::new();
    let bl = f.corpus("Bl1P2");
    let tc = f.write(
        "tc.json",
        r#"{"affines": [{"gradient": [0, 0], "constant": 0}, {"gradient": ["-1/2", 1], "constant": "1/3"}, {"gradient": [1, 0], "constant": "1/2"}]}"#,
    );
    for args in [
        vec!["analyze", "--polytope", s(&bl)],
        vec!["tc-eval", "--polytope", s(&bl), "--tc", s(&tc), "--rho", "1,-1"],
        vec!["reduce", "--polytope", s(&bl), "--tc", s(&tc)],
        vec!["normal-cone", "--polytope", s(&bl)],
        vec!["oracle", "--polytope", s(&bl), "--tc", s(&tc), "--k-ladder", "2,4", "--tol", "1"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exact_values_round_trip_through_json() {
    let f = Files::new();
    let v = json(&run(&["analyze", "--polytope", s(&f.corpus("Bl1P3"))]));
    let text = v["vartheta"].as_str().unwrap();
    let q = toric_ding::rat::parse_rat(text).unwrap();
    assert_eq!(toric_ding::rat::format_rat(&q), text);
    assert_eq!(text, "55/97");
}

#[test]
fn plot_data_for_density() {
    let f = Files::new();
    let plot = f.dir.path().join("dh.csv");
    let o = run(&[
        "tc-eval",
        "--polytope",
        s(&f.corpus("P1")),
        "--tc",
        s(&f.write("h.json", HINGE)),
        "--emit-plot-data",
        s(&plot),
        "--precision",
        "3",
    ]);
    assert!(o.status.success());
    let csv = fs::read_to_string(plot).unwrap();
    assert!(csv.contains("atom,0.000,0.500"));
    assert!(csv.contains("density,-1.000,0.500"));
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BASIS: &str = r#"{
  "dimension": 2,
  "kind": "hyperplane",
  "families": [
    {"name": "A", "elements": [{"f": [1, 0], "y": 1}]},
    {"name": "B", "elements": [{"f": [0, 1], "y": 1}]}
  ]
}"#;

const REMARK: &str = r#"{
  "dimension": 2,
  "kind": "hyperplane",
  "families": [
    {"name": "mu0", "elements": [{"f": [1, 0], "y": 0}]},
    {"name": "mu1", "elements": [{"f": [1, 0], "y": 1}]}
  ]
}"#;

const SYMMETRIC: &str = r#"{
  "dimension": 2,
  "kind": "points",
  "families": [
    {"name": "A", "elements": [{"v": [0, 0]}, {"v": [2, 0]}]},
    {"name": "B", "elements": [{"v": [1, 1]}, {"v": [1, -1]}]}
  ]
}"#;

struct Scratch(TempDir);

impl Scratch {
    fn new() -> Self {
        Scratch(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn hamcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamcut"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn solution_doc(kind: &str, entries: &str) -> String {
    format!(
        r#"{{"kind": "{kind}", "dimension": 2, "status": "certified", "solutions": [{entries}]}}"#
    )
}

const EXACT: &str = r#""per_family": [], "method": "exact2d", "certificate": {"type": "exact"}"#;

#[test]
fn basis_instance_lists_three_solutions() {
    let dir = Scratch::new();
    let inst = dir.file("basis.json", BASIS);
    let sol = dir.path("sol.json");
    let out = hamcut(&["solve", s(&inst), "-o", s(&sol)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&sol);
    assert_eq!(doc["status"], "certified");
    let sols = doc["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 3);
    let vs: Vec<&Value> = sols.iter().map(|e| &e["v"]).collect();
    assert!(vs.contains(&&serde_json::json!(["1", "1"])));
    assert_eq!(sols[0]["certificate"]["type"], "exact");
    assert_eq!(code(&hamcut(&["verify", s(&inst), s(&sol)])), 0);
}

#[test]
fn extra_family_is_infeasible() {
    let dir = Scratch::new();
    let body = BASIS.replace(
        "\n  ]\n}",
        ",\n    {\"name\": \"X\", \"elements\": [{\"f\": [1, 1], \"y\": 0}]}\n  ]\n}",
    );
    let inst = dir.file("extra.json", &body);
    let sol = dir.path("sol.json");
    let out = hamcut(&["solve", s(&inst), "-o", s(&sol)]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&sol)["status"], "infeasible");
    assert_eq!(code(&hamcut(&["verify", s(&inst), s(&sol)])), 2);
}

#[test]
fn input_errors_exit_one() {
    let dir = Scratch::new();
    let bad = dir.file("bad.json", &BASIS.replace("[1, 0]", "[1, 0, 0]"));
    let out = hamcut(&["solve", s(&bad)]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("family 0") && err.contains("element 0"),
        "{err}"
    );

    let broken = dir.file("broken.json", "{\n  \"dimension\": 2,\n  \"kind\": \n}");
    let err = String::from_utf8_lossy(&hamcut(&["solve", s(&broken)]).stderr).to_string();
    assert!(err.contains("line 4"), "{err}");

    let basis = dir.file("basis.json", BASIS);
    assert_eq!(
        code(&hamcut(&["solve", s(&basis), "--mode", "classical"])),
        1
    );
    assert_eq!(code(&hamcut(&["solve", s(&dir.path("missing.json"))])), 1);
    let g3 = dir.path("g3.json");
    hamcut(&["gen", "--dim", "3", "-o", s(&g3)]);
    assert_eq!(code(&hamcut(&["solve", s(&g3), "--method", "exact2d"])), 1);
}

#[test]
fn verify_reports_perturbed_parameter() {
    let dir = Scratch::new();
    let inst = dir.file("basis.json", BASIS);
    let good = dir.file(
        "good.json",
        &solution_doc(
            "hyperplane",
            &format!(r#"{{"e": [1, 1], "x": 1, {EXACT}}}"#),
        ),
    );
    assert_eq!(code(&hamcut(&["verify", s(&inst), s(&good)])), 0);
    let bad = dir.file(
        "bad.json",
        &solution_doc(
            "hyperplane",
            &format!(r#"{{"e": [1, 1], "x": "1.1", {EXACT}}}"#),
        ),
    );
    let out = hamcut(&["verify", s(&inst), s(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAILED"));
}

#[test]
fn remark_kernel_line_holds_for_any_x() {
    let dir = Scratch::new();
    let inst = dir.file("remark.json", REMARK);
    for x in ["0", "-7/3", "1000000"] {
        let sol = dir.file(
            "sol.json",
            &solution_doc(
                "hyperplane",
                &format!(r#"{{"e": [0, 1], "x": "{x}", {EXACT}}}"#),
            ),
        );
        assert_eq!(code(&hamcut(&["verify", s(&inst), s(&sol)])), 0, "x = {x}");
    }
    let sol = dir.path("solved.json");
    assert_eq!(code(&hamcut(&["solve", s(&inst), "-o", s(&sol)])), 0);
    let doc = json(&sol);
    assert_eq!(doc["solutions"][0]["method"], "degenerate");
    assert_eq!(
        doc["solutions"][0]["range"],
        serde_json::json!(["-inf", "+inf"])
    );
}

#[test]
fn classical_symmetric_instance() {
    let dir = Scratch::new();
    let inst = dir.file("sym.json", SYMMETRIC);
    let sol = dir.path("sol.json");
    assert_eq!(
        code(&hamcut(&[
            "solve",
            s(&inst),
            "--mode",
            "classical",
            "-o",
            s(&sol)
        ])),
        0
    );
    assert_eq!(code(&hamcut(&["verify", s(&inst), s(&sol)])), 0);
    let cut = dir.file(
        "cut.json",
        &solution_doc("points", &format!(r#"{{"f": [1, 0], "y": 1, {EXACT}}}"#)),
    );
    assert_eq!(code(&hamcut(&["verify", s(&inst), s(&cut)])), 0);
    let off = dir.file(
        "off.json",
        &solution_doc("points", &format!(r#"{{"f": [1, 0], "y": 3, {EXACT}}}"#)),
    );
    assert_eq!(code(&hamcut(&["verify", s(&inst), s(&off)])), 2);
    // a hyperplane solution does not fit a point instance
    let basis_sol = dir.file(
        "wrong.json",
        &solution_doc(
            "hyperplane",
            &format!(r#"{{"e": [1, 0], "x": 1, {EXACT}}}"#),
        ),
    );
    assert_eq!(code(&hamcut(&["verify", s(&inst), s(&basis_sol)])), 1);
}

#[test]
fn gen_is_deterministic_and_flags_guarantee() {
    let a = hamcut(&[
        "gen",
        "--dim",
        "2",
        "--families",
        "2",
        "--per-family",
        "3",
        "--seed",
        "7",
    ]);
    let b = hamcut(&[
        "gen",
        "--dim",
        "2",
        "--families",
        "2",
        "--per-family",
        "3",
        "--seed",
        "7",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let c = hamcut(&[
        "gen",
        "--dim",
        "3",
        "--families",
        "3",
        "--per-family",
        "5",
        "--seed",
        "1",
    ]);
    let doc: Value = serde_json::from_slice(&c.stdout).unwrap();
    let count: usize = doc["families"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["elements"].as_array().unwrap().len())
        .sum();
    assert_eq!(count, 15);
    assert_eq!(doc["guaranteed"], true);

    let d = hamcut(&["gen", "--families", "4", "--dim", "3"]);
    let doc: Value = serde_json::from_slice(&d.stdout).unwrap();
    assert_eq!(doc["guaranteed"], false);
}

#[test]
fn obstruction_reports() {
    let run = |args: &[&str]| {
        let out = hamcut(args);
        assert_eq!(code(&out), 0);
        String::from_utf8(out.stdout).unwrap()
    };
    let r = run(&[
        "obstruction",
        "--m",
        "2",
        "--l",
        "3",
        "--trunc",
        "0",
        "--wE",
        "1",
    ]);
    assert!(
        r.contains("e(H)^3 = 0") && r.contains("fw_applicable: false"),
        "{r}"
    );
    let r = run(&[
        "obstruction",
        "--m",
        "1",
        "--l",
        "2",
        "--trunc",
        "2",
        "--wE",
        "1,a",
    ]);
    assert!(
        r.contains("e(H)^2 = a*T") && r.contains("fw_applicable: true"),
        "{r}"
    );
    let r = run(&[
        "obstruction",
        "--m",
        "2",
        "--l",
        "2",
        "--trunc",
        "0",
        "--wE",
        "1",
    ]);
    assert!(
        r.contains("e(H)^2 = T^2") && r.contains("fw_applicable: true"),
        "{r}"
    );
    assert_eq!(
        code(&hamcut(&[
            "obstruction",
            "--m",
            "1",
            "--l",
            "2",
            "--wE",
            "x"
        ])),
        1
    );
}

#[test]
fn plot_draws_lines_and_point() {
    let dir = Scratch::new();
    let inst = dir.file("basis.json", BASIS);
    let sol = dir.path("sol.json");
    hamcut(&["solve", s(&inst), "-o", s(&sol)]);
    let svg = dir.path("basis.svg");
    assert_eq!(
        code(&hamcut(&[
            "plot",
            s(&inst),
            s(&sol),
            "--index",
            "1",
            "--out",
            s(&svg)
        ])),
        0
    );
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches(r#"class="family""#).count(), 2);
    assert_eq!(text.matches(r#"class="solution""#).count(), 1);
    assert_eq!(text.matches(r#"class="point""#).count(), 1);
    // same inputs, same bytes
    let again = dir.path("again.svg");
    hamcut(&[
        "plot",
        s(&inst),
        s(&sol),
        "--index",
        "1",
        "--out",
        s(&again),
    ]);
    assert_eq!(text, std::fs::read_to_string(&again).unwrap());

    let remark = dir.file("remark.json", REMARK);
    let rsol = dir.path("rsol.json");
    hamcut(&["solve", s(&remark), "-o", s(&rsol)]);
    let rsvg = dir.path("remark.svg");
    assert_eq!(
        code(&hamcut(&["plot", s(&remark), s(&rsol), "--out", s(&rsvg)])),
        0
    );
    let text = std::fs::read_to_string(&rsvg).unwrap();
    // every drawn line is vertical: the families and L are parallel
    for line in text.lines().filter(|l| l.starts_with("<line")) {
        let attr = |name: &str| {
            let start = line.find(&format!(" {name}=\"")).unwrap() + name.len() + 3;
            line[start..].split('"').next().unwrap().to_string()
        };
        assert_eq!(attr("x1"), attr("x2"), "{line}");
    }

    let g3 = dir.path("g3.json");
    hamcut(&["gen", "--dim", "3", "-o", s(&g3)]);
    let out = hamcut(&["plot", s(&g3), s(&sol), "--out", s(&dir.path("x.svg"))]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension 2"));
}

#[test]
fn solve_then_verify_exits_zero_on_generated_instances() {
    let dir = Scratch::new();
    for (dim, fams, kind) in [
        (2, 2, "hyperplane"),
        (2, 3, "hyperplane"),
        (3, 3, "hyperplane"),
        (2, 2, "points"),
    ] {
        for seed in 0..6 {
            let inst = dir.path("inst.json");
            let sol = dir.path("sol.json");
            let seed = seed.to_string();
            let (dim_s, fams_s) = (dim.to_string(), fams.to_string());
            let gen = hamcut(&[
                "gen",
                "--dim",
                &dim_s,
                "--families",
                &fams_s,
                "--per-family",
                "4",
                "--seed",
                &seed,
                "--kind",
                kind,
                "-o",
                s(&inst),
            ]);
            assert_eq!(code(&gen), 0);
            let solved = code(&hamcut(&["solve", s(&inst), "-o", s(&sol)]));
            assert!(solved == 0 || solved == 2, "solve exit {solved}");
            if fams <= dim {
                assert_eq!(
                    solved, 0,
                    "guaranteed instance {dim}/{fams}/{seed} not solved"
                );
            }
            let verified = code(&hamcut(&["verify", s(&inst), s(&sol)]));
            assert_eq!(verified, if solved == 0 { 0 } else { 2 });
        }
    }
}

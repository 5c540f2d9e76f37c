use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use thermo_order::formats::{parse_state_exact, parse_witness, state_json, witness_json};
use thermo_order_core::work_extraction::WorkExtraction;
use thermo_order_core::{gibbs_state, tensor, thermal_lorenz, BlockState, JointCatalyst, Rational};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_thermo-order"));
    cmd.env_remove("THERMO_ORDER_MODE");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let f = Self {
            dir: tempfile::tempdir().unwrap(),
        };
        let inst = WorkExtraction::default();
        let (a, b) = (inst.initial().unwrap(), inst.target().unwrap());
        f.put("initial.json", &a);
        f.put("final.json", &b);
        f.put("gibbs.json", &gibbs_state(a.ham()));
        f
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn put(&self, name: &str, s: &BlockState<f64>) -> String {
        self.write(name, &state_json(s, None))
    }

    fn write(&self, name: &str, text: &str) -> String {
        let path = self.path(name);
        fs::write(&path, text).unwrap();
        path.to_string_lossy().into_owned()
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn check_modes_on_reference_instance() {
    let f = Fixture::new();
    let (i, fin) = (f.arg("initial.json"), f.arg("final.json"));

    let out = run(&["check", &i, &fin, "--mode", "catalytic"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    let listed = text
        .lines()
        .find(|l| l.contains("free energy increases at alpha"))
        .unwrap();
    assert!(
        listed.split(['=', ',']).any(|t| t.trim() == "4"),
        "{listed}"
    );

    assert_eq!(code(&run(&["check", &i, &fin, "--mode", "correlating"])), 0);
    assert_eq!(code(&run(&["check", &i, &fin, "--mode", "plain"])), 1);
    for mode in ["plain", "catalytic", "correlating"] {
        assert_eq!(code(&run(&["check", &i, &i, "--mode", mode])), 0, "{mode}");
    }
    let equal = stdout(&run(&["check", &i, &i, "--mode", "correlating"]));
    assert!(equal.contains("warning: free energies are equal"));
}

#[test]
fn check_writes_comparison_report() {
    let f = Fixture::new();
    let out = f.path("cmp.json");
    let o = run(&[
        "check",
        &f.arg("initial.json"),
        &f.arg("final.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["verdict"], "Crossing");
    assert!(!v["violations"].as_array().unwrap().is_empty());
    assert!(v["violations"][0]["gap"].as_f64().unwrap() < 0.0);
}

#[test]
fn errors_exit_with_two() {
    let f = Fixture::new();
    let other = f.put(
        "qubit.json",
        &BlockState::new(vec![0.5, 0.5], thermo_order_core::Hamiltonian::trivial(2)).unwrap(),
    );
    assert_eq!(code(&run(&["check", &f.arg("initial.json"), &other])), 2);
    assert_eq!(
        code(&run(&[
            "check",
            &f.arg("initial.json"),
            &f.arg("missing.json")
        ])),
        2
    );
    let bad = f.write("bad.json", r#"{"levels": [0, 1], "probs": [1.5, -0.5]}"#);
    assert_eq!(code(&run(&["work", &bad])), 2);
}

#[test]
fn sweep_exports() {
    let f = Fixture::new();
    let csv = f.path("sweep.csv");
    let o = run(&[
        "sweep",
        &f.arg("initial.json"),
        &f.arg("final.json"),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("changes sign"));
    let rows = read_csv(&csv);
    let value = |label: &str| {
        rows.iter().find(|r| r[0] == label).unwrap()[1]
            .parse::<f64>()
            .unwrap()
    };
    assert!(value("1") < 0.0 && value("4") > 0.0);
    assert!(rows.iter().any(|r| r[0] == "inf") && rows.iter().any(|r| r[0] == "-inf"));

    let same = f.path("same.json");
    run(&[
        "sweep",
        &f.arg("final.json"),
        &f.arg("final.json"),
        "--out",
        same.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_str(&fs::read_to_string(same).unwrap()).unwrap();
    for e in v["entries"].as_array().unwrap() {
        assert_eq!(e["delta_f"].as_f64(), Some(0.0), "{e}");
    }

    let toward = f.path("gibbs.csv");
    run(&[
        "sweep",
        &f.arg("final.json"),
        &f.arg("gibbs.json"),
        "--out",
        toward.to_str().unwrap(),
        "--alphas",
        "0,0.5,1,2,inf",
    ]);
    for r in read_csv(&toward) {
        assert!(r[1].parse::<f64>().unwrap() <= 1e-15, "{r:?}");
    }
}

#[test]
fn lorenz_exports() {
    let f = Fixture::new();
    let out = f.path("g.csv");
    assert_eq!(
        code(&run(&[
            "lorenz",
            &f.arg("gibbs.json"),
            "--out",
            out.to_str().unwrap()
        ])),
        0
    );
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 2);
    let last: Vec<f64> = rows[1].iter().map(|x| x.parse().unwrap()).collect();
    assert!((last[1] - 1.0).abs() < 1e-15);

    let ham = thermo_order_core::Hamiltonian::new(vec![0.0, 1.0, 2.0]).unwrap();
    let ground = f.put(
        "ground.json",
        &BlockState::new(vec![1.0, 0.0, 0.0], ham).unwrap(),
    );
    run(&["lorenz", &ground, "--out", out.to_str().unwrap()]);
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][1].parse::<f64>().unwrap(), 1.0);
    assert_eq!(rows[2][1].parse::<f64>().unwrap(), 1.0);

    let inst = WorkExtraction::default();
    let c = JointCatalyst::product(&[vec![0.95, 0.05], vec![0.70, 0.30]]).unwrap();
    let left = tensor(&inst.initial().unwrap(), &c.as_state());
    let path = f.put("left.json", &left);
    run(&["lorenz", &path, "--out", out.to_str().unwrap()]);
    let ys: Vec<f64> = read_csv(&out)
        .iter()
        .map(|r| r[1].parse().unwrap())
        .collect();
    let sloped = ys.windows(2).filter(|w| w[1] > w[0]).count();
    assert_eq!(sloped, 8);
    assert_eq!(thermal_lorenz(&left).segments(), 9);
}

#[test]
fn search_outcomes() {
    let f = Fixture::new();
    let (i, fin) = (f.arg("initial.json"), f.arg("final.json"));
    let out = f.path("found.json");
    let o = run(&["search", &i, &fin, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["found"], true);
    assert!(v["total_correlation"].as_f64().unwrap() > 0.0);
    assert_eq!(v["comparison"]["verdict"], "Above");

    run(&[
        "search",
        &i,
        &f.arg("gibbs.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["total_correlation"], 0.0);

    let o = run(&["search", &fin, &i]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("precondition"));

    let cfg = f.write(
        "cfg.json",
        r#"{"dims": [[2,2]], "marginal_grid": 4, "polytope_grid": 2, "budget_cells": 5}"#,
    );
    let o = run(&["search", &i, &fin, "--config", &cfg]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not found at this resolution"));
}

#[test]
fn witness_outcomes() {
    let f = Fixture::new();
    let (i, g) = (f.arg("initial.json"), f.arg("gibbs.json"));
    let out = f.path("w.json");

    assert_eq!(
        code(&run(&["witness", &i, &i, "--out", out.to_str().unwrap()])),
        0
    );
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let m = v["matrix"].as_array().unwrap();
    for (r, row) in m.iter().enumerate() {
        for (c, x) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(x.as_f64().unwrap(), if r == c { 1.0 } else { 0.0 });
        }
    }
    assert_eq!(v["validated"], true);

    assert_eq!(
        code(&run(&["witness", &i, &g, "--out", out.to_str().unwrap()])),
        0
    );
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let gamma = gibbs_state(WorkExtraction::default().initial().unwrap().ham());
    for (r, row) in v["matrix"].as_array().unwrap().iter().enumerate() {
        for x in row.as_array().unwrap() {
            assert!((x.as_f64().unwrap() - gamma.probs()[r]).abs() < 1e-15);
        }
    }

    let o = run(&["witness", &g, &i]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("below target at x ="));
}

#[test]
fn work_quantities_output() {
    let f = Fixture::new();
    let report = f.path("r.json");
    let o = run(&[
        "work",
        &f.arg("gibbs.json"),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    for key in ["f0", "f1", "finf"] {
        assert!(v["outputs"][key].as_f64().unwrap().abs() < 1e-14, "{key}");
    }
    assert_eq!(v["mode"], "float");
    assert!(v["tolerances"]["normalization"].is_number());
    assert_eq!(v["inputs"][0]["name"], "gibbs.json");

    let rho = f.write("rho.json", r#"{"levels": [0, 1], "probs": [0.73, 0.27]}"#);
    let o = run(&["work", &rho]);
    assert!(stdout(&o).contains("f0   = 0.000000000000e0"));
}

#[test]
fn rational_mode_round_trips() {
    let f = Fixture::new();
    let p = f.write(
        "p.json",
        r#"{"gibbs_weights": ["1", "1/2", "1/4"], "probs": ["1/2", "1/3", "1/6"]}"#,
    );
    let q = f.write(
        "q.json",
        r#"{"gibbs_weights": ["1", "1/2", "1/4"], "probs": ["15/28", "13/42", "13/84"]}"#,
    );
    let out = f.path("w.json");
    let o = bin()
        .env("THERMO_ORDER_MODE", "rational")
        .args(["witness", &p, &q, "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(v["matrix"][0][0].is_string());
    let w = parse_witness::<Rational>(&text).unwrap();
    assert!(w.validated());
    assert_eq!(w.residuals().target, Some(0.0));
    let read = |path: &str| {
        parse_state_exact(&fs::read_to_string(path).unwrap())
            .unwrap()
            .state
    };
    let (pe, qe) = (read(&p), read(&q));
    let written = witness_json(&w, pe.ham(), Some((pe.probs(), qe.probs())));
    assert_eq!(written, text);

    let o = run(&["--numeric", "rational", "check", &p, &q]);
    assert_eq!(code(&o), 0);
    let report = f.path("r.json");
    run(&[
        "--numeric",
        "rational",
        "check",
        &q,
        &p,
        "--report",
        report.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["mode"], "rational");
}

#[test]
fn example_flags() {
    let o = run(&["example"]);
    assert_eq!(code(&o), 0);
    let o = run(&["example", "--x10", "0.3"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text
        .lines()
        .any(|l| l.starts_with("[FAIL]") && l.contains("catalyst construction")));
    let o = run(&["example", "--epsilon", "0.5"]);
    assert!(matches!(code(&o), 0 | 1));
}

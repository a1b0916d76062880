use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use spacetime_currents::chain::{Cell, Chain, Grid, GridFile};
use spacetime_currents::fixtures::square_cycle;
use spacetime_currents::spacetime::{unit_time_grid, SpacetimeChain};
use tempfile::TempDir;

fn stc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stc")).args(args).output().expect("stc runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files { dir: TempDir::new().unwrap() }
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn translated(files: &Files) -> (PathBuf, PathBuf) {
    let g = Grid::unit(&[3, 2]).unwrap();
    (
        files.write("t0.json", &square_cycle(&g, [0, 0]).unwrap().to_json()),
        files.write("t1.json", &square_cycle(&g, [1, 0]).unwrap().to_json()),
    )
}

#[test]
fn variation_of_a_prism_is_zero() {
    let f = Files::new();
    let t = square_cycle(&Grid::unit(&[2, 2]).unwrap(), [0, 0]).unwrap();
    let prism = SpacetimeChain::stationary(&unit_time_grid(2).unwrap(), &t).unwrap();
    let p = f.write("prism.json", &prism.to_json());
    let v = json(&stc(&["var", s(&p), "--interval", "0,1"]));
    assert_eq!(v["value"], "0");
    let half = json(&stc(&["var", s(&p), "--interval", "0,1/2co"]));
    assert_eq!(half["interval"], "[0,1/2)");
}

#[test]
fn equality_on_translated_cycles() {
    let f = Files::new();
    let (t0, t1) = translated(&f);
    let v = json(&stc(&["verify-equality", s(&t0), s(&t1)]));
    assert_eq!(v["value"], "2");
    assert_eq!(v["flat_norm_boundaryless"]["value"], "2");
    assert_eq!(v["dist_lip"]["value"], "2");
}

#[test]
fn distance_witness_feeds_the_chain_verbs() {
    let f = Files::new();
    let (t0, t1) = translated(&f);
    let w = f.path("s.json");
    let v = json(&stc(&["distlip", s(&t0), s(&t1), "--time-steps", "2", "--budget", "1", "--witness", s(&w)]));
    assert_eq!(v["value"], "2");
    assert_eq!(json(&stc(&["var", s(&w)]))["value"], "2");
    let proj = f.write("proj.json", &String::from_utf8(stc(&["project", s(&w)]).stdout).unwrap());
    let diff = &Chain::from_json(&std::fs::read_to_string(&t1).unwrap()).unwrap()
        - &Chain::from_json(&std::fs::read_to_string(&t0).unwrap()).unwrap();
    let boundary = stc(&["boundary", s(&proj)]);
    assert_eq!(Chain::from_json(std::str::from_utf8(&boundary.stdout).unwrap()).unwrap(), diff);
    let rev = f.write("r.json", &String::from_utf8(stc(&["reverse", s(&w)]).stdout).unwrap());
    let back = String::from_utf8(stc(&["reverse", s(&rev)]).stdout).unwrap();
    assert_eq!(SpacetimeChain::from_json(&back).unwrap(), SpacetimeChain::from_json(&std::fs::read_to_string(&w).unwrap()).unwrap());
    let loop_ = f.write("loop.json", &String::from_utf8(stc(&["concat", s(&w), s(&rev)]).stdout).unwrap());
    assert_eq!(json(&stc(&["var", s(&loop_)]))["value"], "4");
}

#[test]
fn emitted_chains_reparse() {
    let f = Files::new();
    let (t0, _) = translated(&f);
    let out = stc(&["prism", s(&t0), "--axis", "0"]);
    let w = Chain::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(w.mass(), spacetime_currents::rational::int(2));
    let target = f.path("b.json");
    assert!(stc(&["boundary", s(&t0), "--output", s(&target)]).status.success());
    assert!(Chain::from_json(&std::fs::read_to_string(&target).unwrap()).unwrap().is_zero());
}

#[test]
fn exit_statuses() {
    let f = Files::new();
    let (t0, t1) = translated(&f);
    assert_eq!(stc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(stc(&["mass", s(&t0), "--bogus"]).status.code(), Some(2));
    assert_eq!(stc(&["mass", s(&f.path("missing.json"))]).status.code(), Some(2));
    let garbage = f.write("garbage.json", "{\"k\": 1}");
    assert_eq!(stc(&["mass", s(&garbage)]).status.code(), Some(2));
    let starved = stc(&["distlip", s(&t0), s(&t1), "--time-steps", "1", "--budget", "1"]);
    assert_eq!(starved.status.code(), Some(1));
    assert_eq!(serde_json::from_slice::<Value>(&starved.stdout).unwrap()["status"], "infeasible");
    let g = Grid::unit(&[2, 2]).unwrap();
    let open = f.write("open.json", &Chain::cell(&g, Cell::new(vec![0, 0], vec![0]).unwrap(), 1).unwrap().to_json());
    let err = stc(&["flatnorm0", s(&open)]);
    assert_eq!(err.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&err.stderr).contains("boundary"));
    let line = Grid::unit(&[3]).unwrap();
    let point = f.write("point.json", &Chain::cell(&line, Cell::vertex(vec![1]), 1).unwrap().to_json());
    assert_eq!(stc(&["flatnorm0", s(&point)]).status.code(), Some(1));
    assert_eq!(json(&stc(&["flatnorm", s(&point)]))["value"], "1");
    assert_eq!(stc(&["slice", s(&t0), "--time", "1/2"]).status.code(), Some(2));
}

#[test]
fn decimal_flag_marks_approximations() {
    let f = Files::new();
    let g = Grid::new(vec![spacetime_currents::rational::ratio(1, 3); 2], vec![spacetime_currents::rational::int(0); 2], vec![2, 2]).unwrap();
    let t = f.write("t.json", &square_cycle(&g, [0, 0]).unwrap().to_json());
    let v = json(&stc(&["flatnorm0", s(&t), "--decimal"]));
    assert_eq!(v["value"], "1/9");
    assert!((v["value_decimal"].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-12);
    assert!(json(&stc(&["flatnorm0", s(&t)])).get("value_decimal").is_none());
}

#[test]
fn grid_flag_enlarges_the_box() {
    let f = Files::new();
    let small = Grid::unit(&[1, 1]).unwrap();
    let t = f.write("t.json", &square_cycle(&small, [0, 0]).unwrap().to_json());
    let big = f.write("g.json", &serde_json::to_string(&GridFile::from(&Grid::unit(&[3, 3]).unwrap())).unwrap());
    assert_eq!(json(&stc(&["--grid", s(&big), "mass", s(&t)]))["value"], "4");
    assert_eq!(json(&stc(&["flatnorm0", s(&t), "--grid", s(&big)]))["witness"]["q"]["grid"]["extents"][0], 3);
    let odd = f.write("odd.json", &serde_json::to_string(&GridFile::from(&small.refined(2))).unwrap());
    assert_eq!(stc(&["mass", s(&t), "--grid", s(&odd)]).status.code(), Some(2));
}

#[test]
fn deformation_and_filling() {
    let f = Files::new();
    let g = Grid::unit(&[4, 4]).unwrap();
    let t = f.write("sq.json", &square_cycle(&g, [1, 1]).unwrap().to_json());
    let v = json(&stc(&["deform", s(&t), "--coarsen", "2"]));
    assert_eq!(v["mass_p"], "0");
    assert_eq!(v["variation"], "1");
    let csv = String::from_utf8(stc(&["deform", s(&t), s(&t), "--coarsen", "2", "--csv"]).stdout).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(1).unwrap().starts_with("sq,4,2,0,1,1,0,1/8"));
    let fill = json(&stc(&["fill", s(&t)]));
    assert_eq!(fill["variation"], "1");
    assert_eq!(fill["m"], 4);
}

#[test]
fn step_functions_and_sweeps() {
    let f = Files::new();
    let v = json(&stc(&["bv", "--cantor", "2", "--interval", "0,1/3"]));
    assert_eq!(v["variation"], "1/2");
    assert_eq!(v["pointwise_variation"], "1/2");
    let u = f.write("u.json", r#"{"breakpoints": ["0", "1/2", "1"], "values": ["0", "1"]}"#);
    assert_eq!(json(&stc(&["bv", s(&u)]))["variation"], "1");
    assert_eq!(stc(&["bv"]).status.code(), Some(2));

    let g = Grid::unit(&[2, 2]).unwrap();
    let base = square_cycle(&g, [0, 0]).unwrap();
    let fill = -spacetime_currents::fixtures::block(&g, [0, 0], 1, 1).unwrap();
    let plan = spacetime_currents::transform::SweepPlan::single_column(base, fill).unwrap();
    let p = f.write("plan.json", &plan.to_json());
    let swept = f.write("swept.json", &String::from_utf8(stc(&["sweep", s(&p)]).stdout).unwrap());
    assert_eq!(json(&stc(&["var", s(&swept)]))["value"], "1");
    let fine = f.write("fine.json", &String::from_utf8(stc(&["rescale", s(&swept), "--factor", "3"]).stdout).unwrap());
    assert_eq!(json(&stc(&["var", s(&fine)]))["value"], "1");
    let m = json(&stc(&["mass", s(&fine)]));
    assert_eq!(m["spatial"], "1");
    let right = json(&stc(&["slice", s(&swept), "--time", "1", "--side", "left"]));
    assert_eq!(right["cells"].as_array().unwrap().len(), 0);
}

#[test]
fn check_is_deterministic() {
    let args = ["check", "--seed", "42", "--criteria", "1,6,10,11"];
    let a = stc(&args);
    let b = stc(&[&args[..], &["--exec", "sequential"]].concat());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("check seed=42\n"));
    assert!(text.ends_with("4/4 criteria passed\n"));
    assert_eq!(stc(&["check", "--criteria", "0"]).status.code(), Some(2));
}

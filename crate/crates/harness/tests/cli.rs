use std::path::Path;
use std::process::{Command, Output};

fn secretary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secretary")).args(args).output().unwrap()
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("secretary-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_is_byte_identical() {
    let (a, b) = (tmp("a.sys"), tmp("b.sys"));
    for p in [&a, &b] {
        let out = secretary(&["generate", "intersection", "--k", "2", "--n", "10", "--seed", "7", "--out", s(p)]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn separation_classifies_as_growth_but_not_circuit_bounded() {
    let f = tmp("sep.sys");
    assert!(secretary(&["generate", "separation", "--k", "2", "--out", s(&f)]).status.success());
    let out = secretary(&["classify", s(&f), "--kmax", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("4 elements"), "{text}");
    let row = |class: &str| {
        text.lines()
            .find(|l| l.starts_with(class))
            .map(|l| l.split_whitespace().last().unwrap().to_string())
    };
    assert_eq!(row("k-growth").as_deref(), Some("2"));
    assert_ne!(row("k-circuit-bounded").as_deref(), Some("2"));
}

#[test]
fn run_edge_csv_is_reproducible() {
    let sys = tmp("g.sys");
    assert!(secretary(&["generate", "graphic", "--n", "10", "--seed", "3", "--out", s(&sys)]).status.success());
    let (a, b) = (tmp("a.csv"), tmp("b.csv"));
    for p in [&a, &b] {
        let out = secretary(&["run-edge", "--alg", "matroid", "--system", s(&sys), "--trials", "500", "--seed", "11", "--out", s(p)]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("trial,seed,w_alg,w_opt,ratio,selected,bound_ok"));
    assert_eq!(text.lines().count(), 501);
}

#[test]
fn config_file_drives_a_run() {
    let sys = tmp("c.sys");
    let json = tmp("c.json");
    assert!(secretary(&["generate", "path", "--len", "6", "--out", s(&sys)]).status.success());
    let cfg = tmp("c.cfg");
    std::fs::write(
        &cfg,
        format!("algorithm = general\nsource = {}\np = paper-optimal\ntrials = 300\nbound = 0.01\nout_json = {}\n", s(&sys), s(&json)),
    )
    .unwrap();
    let out = secretary(&["run-edge", "--config", s(&cfg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["trials"], 300);
    assert_eq!(v["estimate"]["mode"], "utility");
}

#[test]
fn zero_trials_is_rejected() {
    let sys = tmp("z.sys");
    assert!(secretary(&["generate", "uniform", "--n", "5", "--out", s(&sys)]).status.success());
    let out = secretary(&["run-edge", "--alg", "matroid", "--system", s(&sys), "--trials", "0"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
}

#[test]
fn agent_and_assignment_commands_run() {
    let bi = tmp("bi.txt");
    let hy = tmp("hy.txt");
    assert!(secretary(&["generate", "bipartite", "--seed", "2", "--out", s(&bi)]).status.success());
    assert!(secretary(&["generate", "hypergraph", "--k", "2", "--seed", "2", "--out", s(&hy)]).status.success());
    let out = secretary(&["run-agent", "--instance", s(&bi), "--oocs", "partition", "--p", "0.75", "--trials", "200"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = secretary(&["run-agent", "--instance", s(&bi), "--core-sim", "--p", "paper-optimal", "--trials", "200"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = secretary(&["run-assignment", "--instance", s(&hy), "--trials", "200"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

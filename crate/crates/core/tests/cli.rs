use std::path::Path;
use std::process::{Command, Output};

use collapse_lab::experiments::{ExperimentReport, COUNTS_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_collapse-lab"))
}

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut c = bin();
    c.args(args);
    if let Some(t) = threads {
        c.env("COLLAPSE_LAB_THREADS", t);
    }
    c.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn same_config_gives_byte_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "experiment = \"chsh-quantum\"\nseed = 11\nruns = 2000\n").unwrap();
    let out = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let o = run(
            &["chsh-quantum", "--config", cfg.to_str().unwrap(), "--out", path.to_str().unwrap()],
            Some(threads),
        );
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(path).unwrap()
    };
    let a = out("a.json", "1");
    let b = out("b.json", "3");
    let c = out("c.json", "3");
    assert_eq!(a, b);
    assert_eq!(b, c);
    let report = ExperimentReport::from_json(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(report.seed, 11);
    assert_eq!(report.counts.len(), 16);
}

#[test]
fn flags_without_config_file() {
    let o = run(&["conservation", "--seed", "3", "--runs", "100", "--format", "csv"], None);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), format!("{COUNTS_HEADER}\n"));

    let o = run(&["nosignal", "--seed", "3", "--runs", "100", "--format", "csv"], None);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some(COUNTS_HEADER));
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["teleportation", "--seed", "1"], None)), 2);
    assert_eq!(code(&run(&["born"], None)), 2);
    assert_eq!(code(&run(&["born", "--seed", "1", "--format", "xml"], None)), 2);
    assert_eq!(code(&run(&["born", "--seed", "1", "--runs", "10"], Some("zero"))), 2);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "experiment = \"born\"\nseed = 1\nspeling_error = 3\n").unwrap();
    let o = run(&["born", "--config", cfg.to_str().unwrap()], None);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("speling_error"));

    let table = dir.path().join("v.txt");
    std::fs::write(&table, "0 1\n1 nan\n").unwrap();
    let cfg = dir.path().join("trace.toml");
    std::fs::write(
        &cfg,
        format!(
            "experiment = \"collapse-trace\"\nseed = 1\ntrace.mode = \"scattering\"\ntrace.potential = {:?}\n",
            table.to_str().unwrap()
        ),
    )
    .unwrap();
    assert_eq!(code(&run(&["collapse-trace", "--config", cfg.to_str().unwrap()], None)), 3);

    let missing = Path::new("/nonexistent-dir/out.json");
    assert_eq!(code(&run(&["born", "--seed", "1", "--runs", "10", "--out", missing.to_str().unwrap()], None)), 4);
    assert_eq!(code(&run(&["born", "--config", "/nonexistent-dir/c.toml"], None)), 4);
}

#[test]
fn trace_csv_lists_weights() {
    let o = run(&["collapse-trace", "--seed", "2", "--runs", "2", "--format", "csv"], None);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("run_index,step_index,w"));
    assert_eq!(lines.next(), Some("0,0,3.00000000000e-1"));
}

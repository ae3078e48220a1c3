use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn lsminit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsminit")).args(args).output().unwrap()
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data_rows(path: &Path) -> usize {
    std::fs::read_to_string(path).unwrap().lines().count() - 1
}

#[test]
fn metric_of_identical_trains_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    std::fs::write(&a, "!window 0 100\n1\n20.5\n60\n").unwrap();
    std::fs::write(&b, "!window 0 100\n1\n").unwrap();
    for kind in ["vp", "vr"] {
        let o = lsminit(&["metric", kind, "--a", a.to_str().unwrap(), "--b", a.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o).trim(), "0");
    }
    // Two extra spikes cost one deletion each.
    let o = lsminit(&["metric", "vp", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn exit_codes() {
    assert_eq!(lsminit(&[]).status.code(), Some(1));
    assert_eq!(lsminit(&["sweep", "--bogus"]).status.code(), Some(1));
    assert_eq!(lsminit(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "[sweep]\nepochs = 2\nranges = 9:3\n").unwrap();
    let o = lsminit(&["sweep", "--config", bad.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let missing = dir.path().join("none.txt");
    let o = lsminit(&["metric", "vp", "--a", missing.to_str().unwrap(), "--b", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn print_defaults_matches_bundled_default() {
    let o = lsminit(&["sweep", "--print-defaults"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), std::fs::read_to_string(configs().join("default.conf")).unwrap());
}

#[test]
fn small_sweep_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("small.conf");
    std::fs::write(
        &conf,
        "[simulation]\nduration_ms = 200\n\n[topology]\nkind = layered\nlayers = 2, 2\n\n\
         [init]\nmethod = uniform, erdos_renyi\n\n[sweep]\nranges = 1:10, 10:20\nepochs = 2\nseeds = 0..3\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = lsminit(&["sweep", "--config", conf.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(data_rows(&out.join("records.csv")), 2 * 2 * 2 * 3);
    assert_eq!(data_rows(&out.join("summary.csv")), 4);
    for svg in ["vp.svg", "vr.svg"] {
        let text = std::fs::read_to_string(out.join(svg)).unwrap();
        assert_eq!(text.matches("<circle").count(), 24);
    }
    assert!(!out.join("failures.csv").exists());

    // Sequential rerun writes the same bytes.
    let again = dir.path().join("again");
    let o = lsminit(&["sweep", "--config", conf.to_str().unwrap(), "--out", again.to_str().unwrap(), "--sequential"]);
    assert!(o.status.success());
    for f in ["records.csv", "summary.csv", "vp.svg", "vr.svg"] {
        assert_eq!(std::fs::read(out.join(f)).unwrap(), std::fs::read(again.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn default_sweep_has_full_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = lsminit(&["sweep", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    // 4 ranges x 3 methods x 20 seeds x 30 epochs.
    assert_eq!(data_rows(&dir.path().join("records.csv")), 7200);
    assert_eq!(data_rows(&dir.path().join("summary.csv")), 12);
}

#[test]
fn simulate_dumps_trains_and_topology() {
    let dir = tempfile::tempdir().unwrap();
    let o = lsminit(&["simulate", "--out", dir.path().to_str().unwrap(), "--seed", "3", "--range", "1:10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let trains: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("neuron_"))
        .collect();
    assert!(!trains.is_empty());
    assert!(dir.path().join("topology.csv").exists());
    let o = lsminit(&["simulate", "--out", dir.path().to_str().unwrap(), "--range", "nonsense"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn graph_command_writes_edges_and_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let o = lsminit(&["graph", "ba", "--n", "30", "--m", "2", "--seed", "5", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(dir.path().join("edges.txt")).unwrap().lines().count(), 56);
    assert_eq!(data_rows(&dir.path().join("degrees.csv")), 30);
    let o = lsminit(&["graph", "er", "--n", "30", "--p", "1.5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qlayout::layout::LayoutMap;
use qlayout::qasm::parse_qasm;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qlayout"))
}

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn single_file_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let (qasm, layout, metrics) = (dir.path().join("out.qasm"), dir.path().join("l.json"), dir.path().join("m.json"));
    let input = data("circuits/graycode6_47.qasm");
    let device = data("devices/kolkata.json");
    let out = run(&[
        "--input", s(&input), "--device", s(&device), "--method", "gsf",
        "--output", s(&qasm), "--layout-out", s(&layout), "--metrics-out", s(&metrics),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let remapped = parse_qasm(&fs::read_to_string(&qasm).unwrap()).unwrap();
    assert_eq!(remapped.num_qubits(), 27);
    assert_eq!(remapped.gates.len(), 5);
    let (map, device_name) = LayoutMap::from_json(&fs::read_to_string(&layout).unwrap()).unwrap();
    assert_eq!(device_name, "ibm_kolkata");
    assert_eq!(map.len(), 6);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&metrics).unwrap()).unwrap();
    assert_eq!(report["baseline"], "identity");
    assert_eq!(report["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn builtin_device_and_stdout() {
    let out = run(&["--input", s(&data("circuits/graycode6_47.qasm")), "--device", "manhattan", "--method", "ss"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("OPENQASM 2.0;"));
    assert!(text.contains("qreg q[65];"));
}

#[test]
fn bogus_method_is_a_usage_error() {
    let out = run(&["--input", s(&data("circuits/graycode6_47.qasm")), "--device", "kolkata", "--method", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_device_file_is_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let dev = dir.path().join("dev.json");
    fs::write(&dev, r#"{"name": "x", "width": 2, "edges": [[0, 5]]}"#).unwrap();
    let out = run(&["--input", s(&data("circuits/graycode6_47.qasm")), "--device", s(&dev)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn batch_skips_bad_files_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = dir.path().join("in");
    fs::create_dir(&inputs).unwrap();
    fs::copy(data("circuits/graycode6_47.qasm"), inputs.join("a.qasm")).unwrap();
    fs::write(inputs.join("b.qasm"), "OPENQASM 2.0;\nqreg q[3];\ncx q[0],q[5];\n").unwrap();
    let mut rng = qlayout::synth::rng(5);
    let c = qlayout::synth::repeated_block_circuit(&mut rng, "c", 9, 20, 8);
    let text = qlayout::qasm::emit_qasm(&c, &LayoutMap::identity(0..9), 9).unwrap();
    fs::write(inputs.join("c.qasm"), text).unwrap();

    let mut layouts = Vec::new();
    for round in 0..2 {
        let out_dir = dir.path().join(format!("layouts{round}"));
        let out = run(&[
            "--input", s(&inputs), "--device", "kolkata", "--method", "gsf",
            "--layout-out", s(&out_dir), "--metrics-out", s(&out_dir), "--compare-baselines",
            "--workers", "2",
        ]);
        assert_eq!(out.status.code(), Some(1), "one input is broken");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("b.qasm"), "{err}");
        assert!(err.contains("total mapping time"), "{err}");
        assert!(!out_dir.join("b.layout.json").exists());
        let metrics: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out_dir.join("c.metrics.json")).unwrap()).unwrap();
        assert_eq!(metrics["rows"].as_array().unwrap().len(), 4);
        layouts.push((
            fs::read(out_dir.join("a.layout.json")).unwrap(),
            fs::read(out_dir.join("c.layout.json")).unwrap(),
        ));
    }
    assert_eq!(layouts[0], layouts[1]);
}

#[test]
fn verbose_traces_rounds() {
    let out = run(&[
        "--input", s(&data("circuits/graycode6_47.qasm")), "--device", "kolkata", "--method", "gsf", "--verbose",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("SS round 1"), "{err}");
    assert!(err.contains("GlobalFrequency step"), "{err}");
}

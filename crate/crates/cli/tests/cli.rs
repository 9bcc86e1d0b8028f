use std::path::Path;
use std::process::{Command, Output};

fn qwvd(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwvd")).args(args).current_dir(dir).env_remove("QWVD_OUT").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn numbers(line: &str) -> Vec<f64> {
    line.split_whitespace().map(|v| v.parse().unwrap()).collect()
}

#[test]
fn determinant_violation_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwvd(dir.path(), &["verify", "all", "--A1", "1,2,1,1,0.5,-0.7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("determinant"));
    assert!(!dir.path().join("qwvd-out").exists());
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["verify", "everything"][..], &["wvd", "--t", "0,0"], &["qolct", "--u", "1"], &["frobnicate"]] {
        assert_eq!(qwvd(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("file"), "").unwrap();
    let o = qwvd(dir.path(), &["verify", "inversion", "--n", "12", "--out", "file/sub"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn transform_of_unit_gaussian_at_origin() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwvd(dir.path(), &["qolct", "--u", "0,0"]);
    assert!(o.status.success());
    let v = numbers(stdout(&o).trim());
    let c = 0.25 / std::f64::consts::PI;
    for (got, want) in v.iter().zip([c, -c, -c, c]) {
        assert!((got - want).abs() < 1e-6, "{v:?}");
    }
}

#[test]
fn distribution_peak_and_slice_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwvd(dir.path(), &["wvd", "--t", "0,0", "--u", "0,0"]);
    let v = numbers(stdout(&o).trim());
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!((norm - 1.0 / std::f64::consts::PI).abs() < 1e-6, "{v:?}");

    let o = qwvd(dir.path(), &["wvd", "--slice", "t=0,0", "--heatmap", "peak.pgm", "--n", "12", "--out", "o"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let pgm = std::fs::read_to_string(dir.path().join("o/peak.pgm")).unwrap();
    assert!(pgm.starts_with("P2\n12 12\n255\n"));
    let csv = std::fs::read_to_string(dir.path().join("o/wvd_slice.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 144);
    assert!(dir.path().join("o/meta.json").exists());
}

#[test]
fn sweep_over_variants_writes_four_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwvd(dir.path(), &["sweep", "--theorem", "convolution", "--sweep-variants", "--n", "16", "--out", "s"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let reports = std::fs::read_dir(dir.path().join("s/scale-1")).unwrap().filter(|e| {
        let name = e.as_ref().unwrap().file_name();
        let name = name.to_string_lossy();
        name.starts_with("convolution_") && name.ends_with(".json")
    });
    assert_eq!(reports.count(), 4);
    let sweep = std::fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 5);
    assert!(sweep.lines().skip(1).all(|l| l.ends_with(",false,true")), "{sweep}");
}

#[test]
fn failed_identity_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwvd(dir.path(), &["verify", "reconstruction", "--signal-g", "shift=10,10", "--n", "12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("reconstruction undefined"));
}

#[test]
fn timing_is_kept_out_of_serial_runs() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qwvd"))
        .args(["verify", "plancherel", "--n", "16"])
        .current_dir(dir.path())
        .env("QWVD_OUT", "from-env")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("from-env/timing.csv").exists());
    assert!(dir.path().join("from-env/plancherel.json").exists());

    let o = qwvd(dir.path(), &["verify", "plancherel", "--n", "16", "--serial", "--out", "serial"]);
    assert!(o.status.success());
    assert!(!dir.path().join("serial/timing.csv").exists());
    let json = std::fs::read_to_string(dir.path().join("serial/plancherel.json")).unwrap();
    assert!(json.contains("\"runtime_seconds\": null"));
}

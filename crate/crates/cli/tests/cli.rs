use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cst"))
        .args(args)
        .env_remove("CST_THREADS")
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn synth_wave(path: &Path) {
    let o = cst(&[
        "synth",
        "--kind",
        "wave",
        "--theta",
        "30",
        "--size",
        "64x48",
        "--out",
        p(path),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
}

fn npy_shape(path: &Path) -> String {
    let bytes = fs::read(path).unwrap();
    let header_len = u16::from_le_bytes([bytes[8], bytes[9]]) as usize;
    let header = std::str::from_utf8(&bytes[10..10 + header_len]).unwrap();
    header
        .split("'shape': ")
        .nth(1)
        .unwrap()
        .split(')')
        .next()
        .unwrap()
        .to_string()
        + ")"
}

#[test]
fn extract_defaults_to_four_channel_preset() {
    let tmp = tempfile::tempdir().unwrap();
    let img = tmp.path().join("wave.pgm");
    let out = tmp.path().join("wave.npy");
    synth_wave(&img);
    let o = cst(&["extract", "--input", p(&img), "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(npy_shape(&out), "(4, 48, 64)");
    let labels = fs::read_to_string(tmp.path().join("wave.npy.labels")).unwrap();
    assert_eq!(labels.lines().count(), 4);
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 4);
}

#[test]
fn preset_and_explicit_channels() {
    let tmp = tempfile::tempdir().unwrap();
    let img = tmp.path().join("wave.pgm");
    synth_wave(&img);
    let out = tmp.path().join("a.npy");
    let o = cst(&[
        "extract",
        "--input",
        p(&img),
        "--out",
        p(&out),
        "--preset",
        "row8",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(npy_shape(&out), "(4, 48, 64)");
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("BW"));

    let out = tmp.path().join("b.npy");
    let o = cst(&[
        "extract",
        "--input",
        p(&img),
        "--out",
        p(&out),
        "--orders",
        "1,2",
        "--channels",
        "RE1,IM1,RE2,IM2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(npy_shape(&out), "(4, 48, 64)");
}

#[test]
fn rejects_orders_outside_cli_range() {
    let tmp = tempfile::tempdir().unwrap();
    let img = tmp.path().join("wave.pgm");
    synth_wave(&img);
    let o = cst(&[
        "extract",
        "--input",
        p(&img),
        "--out",
        p(&tmp.path().join("x.npy")),
        "--orders",
        "4",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("InvalidOrderRange"), "{}", stderr(&o));
}

#[test]
fn missing_input_is_reported() {
    let o = cst(&[
        "extract",
        "--input",
        "/nonexistent/x.png",
        "--out",
        "/tmp/never.npy",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("FileNotFound"), "{}", stderr(&o));
}

#[test]
fn viz_requires_requested_order() {
    let tmp = tempfile::tempdir().unwrap();
    let img = tmp.path().join("wave.pgm");
    synth_wave(&img);
    let o = cst(&[
        "viz",
        "--input",
        p(&img),
        "--out",
        p(&tmp.path().join("v.png")),
        "--order",
        "2",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("MissingOrder"), "{}", stderr(&o));

    let png = tmp.path().join("v2.png");
    let o = cst(&[
        "viz",
        "--input",
        p(&img),
        "--out",
        p(&png),
        "--orders",
        "1,2",
        "--order",
        "2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(fs::read(&png).unwrap().starts_with(b"\x89PNG"));
}

#[test]
fn constant_image_renders_black_png() {
    let tmp = tempfile::tempdir().unwrap();
    let img = tmp.path().join("flat.pgm");
    let mut bytes = b"P5\n32 32\n255\n".to_vec();
    bytes.extend(std::iter::repeat_n(128u8, 32 * 32));
    fs::write(&img, bytes).unwrap();
    let png = tmp.path().join("flat.png");
    let o = cst(&["viz", "--input", p(&img), "--out", p(&png)]);
    assert!(o.status.success(), "{}", stderr(&o));

    // decode via the library's RGB-to-luma path: all-black RGB gives all-zero luma
    let gray = cst_core::load_gray(&png).unwrap();
    assert!(gray.data().iter().all(|&v| v == 0.0));
}

#[test]
fn synth_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b, c) = (
        tmp.path().join("a.pgm"),
        tmp.path().join("b.pgm"),
        tmp.path().join("c.pgm"),
    );
    for (path, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        let o = cst(&[
            "synth",
            "--kind",
            "noise",
            "--seed",
            seed,
            "--depth",
            "16",
            "--out",
            p(path),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn validate_quick_passes_and_fault_is_detected() {
    let o = cst(&["validate", "--quick"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));

    let o = cst(&["validate", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

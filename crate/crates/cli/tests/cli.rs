use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mmbebhe::imgio::{parse_map_file, read_pgm, write_pgm};
use mmbebhe::GrayImage;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mmbebhe"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn mmbebhe")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_image(dir: &Path, name: &str, img: &GrayImage) -> String {
    let p = dir.join(name);
    fs::write(&p, write_pgm(img)).unwrap();
    p.to_str().unwrap().to_owned()
}

fn e1() -> GrayImage {
    GrayImage::new(8, 1, vec![0, 0, 0, 50, 50, 100, 200, 200]).unwrap()
}

#[test]
fn threshold_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_image(dir.path(), "e1.pgm", &e1());
    let o = run(&["threshold", &p]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "threshold=50 smbe=-32\n");
}

#[test]
fn enhance_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_image(dir.path(), "e1.pgm", &e1());
    let out = dir.path().join("out.pgm");
    let map = dir.path().join("map.txt");
    let hist = dir.path().join("hist.csv");
    let o = run(&[
        "enhance", &p, "-o", out.to_str().unwrap(),
        "--emit-map", map.to_str().unwrap(),
        "--emit-hist", hist.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{o:?}");
    let img = read_pgm(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(img.pixels(), &[30, 30, 30, 50, 50, 119, 255, 255]);

    let m = parse_map_file(&fs::read_to_string(&map).unwrap()).unwrap();
    assert_eq!((m.threshold(), m.get(100)), (50, 119));

    let csv = fs::read_to_string(&hist).unwrap();
    assert_eq!(csv.lines().count(), 257);
    assert!(csv.starts_with("value,frequency\n0,3\n"));
    assert!(csv.contains("\n200,2\n"));
}

#[test]
fn enhance_constant_image_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let img = GrayImage::filled(5, 3, 140).unwrap();
    let p = write_image(dir.path(), "c.pgm", &img);
    let out = dir.path().join("out.pgm");
    assert!(run(&["enhance", &p, "-o", out.to_str().unwrap()]).status.success());
    assert_eq!(fs::read(&out).unwrap(), fs::read(&p).unwrap());
}

#[test]
fn compare_table() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_image(dir.path(), "e1.pgm", &e1());
    let o = run(&["compare", &p]);
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1], ["HE", "163.375", "88.375"]);
    assert_eq!(rows[2], ["MMBEBHE", "102.375", "27.375"]);
    assert_eq!(rows[3], ["identity", "75", "0"]);
}

#[test]
fn simulate_table_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_image(dir.path(), "e1.pgm", &e1());
    let csv = dir.path().join("t.csv");
    let o = run(&["simulate", &p, "--csv", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("CalculateSmbe") && l.ends_with("2.5700")));
    let csv = fs::read_to_string(csv).unwrap();
    assert!(csv.starts_with("stage,iterations,cycles,micros\nGenerateHist,8,8,"));

    let o = run(&["simulate", &p, "--clock-mhz", "100"]);
    assert!(stdout(&o).lines().any(|l| l.starts_with("FindThreshold") && l.ends_with("7.7100")));
    let o = run(&["simulate", &p, "--clock-mhz", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_image(dir.path(), "e1.pgm", &e1());
    let o = run(&["verify", &p]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn errors_and_usage() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.pgm");
    fs::write(&bad, b"P5 1 1 65535\n\0\0").unwrap();
    let o = run(&["threshold", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("maxval 65535"));

    assert_eq!(run(&["threshold", "/definitely/missing.pgm"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["enhance", "x.pgm"]).status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let img = GrayImage::new(16, 16, (0..=255).collect()).unwrap();
    let p = write_image(dir.path(), "ramp.pgm", &img);
    let mut outs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("o{i}.pgm"));
        let map = dir.path().join(format!("m{i}.txt"));
        run(&["enhance", &p, "-o", out.to_str().unwrap(), "--emit-map", map.to_str().unwrap()]);
        outs.push((fs::read(out).unwrap(), fs::read(map).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
}

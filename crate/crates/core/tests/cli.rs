use std::path::Path;
use std::process::{Command, Output};

fn adderlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adderlab")).args(args).output().unwrap()
}

fn gen(dir: &Path, adder: &str, width: &str, lib: &str) -> String {
    let path = dir.join(format!("{adder}{width}_{lib}.net"));
    let p = path.to_str().unwrap().to_string();
    let o = adderlab(&["gen", "--adder", adder, "--width", width, "--library", lib, "--out", &p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn gen_writes_parseable_netlist() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen(dir.path(), "rca", "1", "cmos");
    let n = adderlab::parse_netlist(&std::fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!(n.transistor_count(), 42);
    assert_eq!(n.cells.len(), 5);
}

#[test]
fn gen_usage_and_write_errors() {
    let o = adderlab(&["gen", "--adder", "rca", "--width", "0", "--library", "gdi", "--out", "x.net"]);
    assert_eq!(o.status.code(), Some(2));
    let o = adderlab(&["gen", "--adder", "rca", "--width", "4", "--library", "gdi", "--out", "/nonexistent/dir/x.net"]);
    assert_eq!(o.status.code(), Some(1));
    let o = adderlab(&["gen", "--adder", "rca", "--width", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exhaustive_and_deterministic_random() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen(dir.path(), "cpa", "4", "gdi");
    let o = adderlab(&["verify", "--netlist", &p, "--adder", "cpa", "--width", "4", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("512/512 pass"));

    let p = gen(dir.path(), "rca", "8", "cmos");
    let args = ["verify", "--netlist", &p, "--adder", "rca", "--width", "8", "--random", "10000", "--seed", "7"];
    let first = adderlab(&args);
    let second = adderlab(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&first.stdout).contains("10000/10000 pass"));
}

#[test]
fn verify_reports_failures_and_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen(dir.path(), "rca", "2", "cmos");
    let text = std::fs::read_to_string(&p).unwrap();

    // duplicate driver on an internal net
    let dup = dir.path().join("dup.net");
    std::fs::write(&dup, format!("{text}cell extra CMOS_NOT a=A[0] out=G[0]\n")).unwrap();
    let o = adderlab(&["verify", "--netlist", dup.to_str().unwrap(), "--adder", "rca", "--width", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("multiple-drivers"));

    // functional bug: AND becomes OR
    let bug = dir.path().join("bug.net");
    std::fs::write(&bug, text.replacen("CMOS_AND2", "CMOS_OR2", 1)).unwrap();
    let o = adderlab(&["verify", "--netlist", bug.to_str().unwrap(), "--adder", "rca", "--width", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("counterexample"));
}

#[test]
fn report_columns() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen(dir.path(), "cpa", "4", "gdi");
    let o = adderlab(&["report", "--netlist", &p, "--random", "300", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# report ") && lines[0].contains("seed=5"));
    let header: Vec<&str> = lines[1].split(',').collect();
    let row: Vec<&str> = lines[2].split(',').collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("area_um2"), "9.7200");
    assert_eq!(col("cell_depth_carry"), "2");
    assert_eq!(col("transistors"), "100");
    assert!(!o.stderr.is_empty());

    let p = gen(dir.path(), "cpa", "4", "cmos");
    let vec_file = dir.path().join("const.vec");
    let nets = "A[0] A[1] A[2] A[3] B[0] B[1] B[2] B[3] C0";
    std::fs::write(&vec_file, format!("nets: {nets}\n101010101\n101010101\n101010101\n")).unwrap();
    let o = adderlab(&["report", "--netlist", &p, "--vectors", vec_file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = String::from_utf8(o.stdout).unwrap();
    let row: Vec<&str> = out.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(row[8], "0.0000");
    assert_eq!(row[5], "2");
}

#[test]
fn compare_is_deterministic() {
    let args = [
        "compare", "--designs", "rca,cpa", "--widths", "4,8", "--libraries", "gdi,cmos", "--random", "500", "--seed", "11",
    ];
    let a = adderlab(&args);
    let b = adderlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = String::from_utf8(a.stdout).unwrap();
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 9);
    assert!(out.contains("# ratio cpa-4 gdi/cmos: area=0.3333"));

    let o = adderlab(&["compare", "--designs", "", "--widths", "4", "--libraries", "gdi"]);
    assert_eq!(o.status.code(), Some(2));
}

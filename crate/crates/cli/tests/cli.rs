use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn seppath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seppath")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

const K3: &str = "0 1\n0 2\n1 2\n";

#[test]
fn gen_shapes() {
    let out = seppath(&["gen", "--family", "complete(5)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 10);
    assert_eq!(stdout(&seppath(&["gen", "--family", "path(2)"])), "0 1\n");
}

#[test]
fn gen_random_is_reproducible() {
    let a = seppath(&["gen", "--family", "gnp(100,0.3)", "--seed", "1"]);
    let b = seppath(&["gen", "--family", "gnp(100,0.3)", "--seed", "1"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&seppath(&["gen", "--family", "gnp(100,0.3)"])), 2);
    assert_eq!(code(&seppath(&["gen", "--family", "gnp(100)", "--seed", "1"])), 2);
}

#[test]
fn gen_writes_file() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "g.txt");
    assert_eq!(code(&seppath(&["gen", "--family", "cycle(4)", "--out", &out])), 0);
    assert_eq!(fs::read_to_string(&out).unwrap(), "0 1\n0 3\n1 2\n2 3\n");
}

#[test]
fn separate_triangle() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3", K3);
    let sys = path(&dir, "sys");
    let rep = path(&dir, "rep.csv");
    let out = seppath(&["separate", "--input", &g, "--seed", "1", "--out-system", &sys, "--out-report", &rep]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&sys).unwrap();
    let paths: usize = text.lines().find_map(|l| l.strip_prefix("paths ")).unwrap().parse().unwrap();
    assert!(paths <= 3);
    assert!(fs::read_to_string(&rep).unwrap().starts_with("level,stage_tag,"));
    // The exit status agrees with an independent verify run.
    assert_eq!(code(&seppath(&["verify", "--graph", &g, "--system", &sys])), 0);
}

#[test]
fn separate_empty_and_malformed() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty", "");
    let out = seppath(&["separate", "--input", &empty, "--seed", "0"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("paths 0"));
    let bad = write(&dir, "bad", "0 1\n1 x\n");
    assert_eq!(code(&seppath(&["separate", "--input", &bad, "--seed", "0"])), 3);
    let missing = path(&dir, "missing");
    assert_eq!(code(&seppath(&["separate", "--input", &missing, "--seed", "0"])), 3);
}

#[test]
fn separate_flags() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3", K3);
    assert_eq!(code(&seppath(&["separate", "--input", &g])), 2, "seed is required");
    assert_eq!(code(&seppath(&["separate", "--input", &g, "--seed", "0", "--no_such_key=1"])), 2);
    assert_eq!(code(&seppath(&["separate", "--input", &g, "--seed", "0", "--epsilon=0.5"])), 2);
    assert_eq!(code(&seppath(&["separate", "--input", &g, "--seed", "0", "--s_dense=3", "--t_mode=full"])), 0);
}

#[test]
fn separate_is_deterministic_on_dense_input() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g");
    assert_eq!(code(&seppath(&["gen", "--family", "gnp(80,0.4)", "--seed", "3", "--out", &g])), 0);
    let run = |tag: &str| {
        let (s, r) = (path(&dir, &format!("s{tag}")), path(&dir, &format!("r{tag}")));
        let out = Command::new(env!("CARGO_BIN_EXE_seppath"))
            .args(["separate", "--input", &g, "--seed", "9", "--out-system", &s, "--out-report", &r])
            .env("SEPPATH_THREADS", tag)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        (fs::read(&s).unwrap(), fs::read(&r).unwrap())
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn verify_cases() {
    let dir = TempDir::new().unwrap();
    let k3 = write(&dir, "k3", K3);
    let singles = write(&dir, "s", "seppath-system 1\nmode strong\npaths 3\n0 1\n0 2\n1 2\n");
    assert_eq!(code(&seppath(&["verify", "--graph", &k3, "--system", &singles])), 0);
    assert_eq!(code(&seppath(&["verify", "--graph", &k3, "--system", &singles, "--mode", "weak"])), 0);

    let p3 = write(&dir, "p3", "0 1\n1 2\n");
    let whole = write(&dir, "w", "seppath-system 1\nmode strong\npaths 1\n0 1 2\n");
    let out = seppath(&["verify", "--graph", &p3, "--system", &whole]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not separating"));

    let foreign = write(&dir, "f", "seppath-system 1\nmode strong\npaths 1\n0 2\n");
    assert_eq!(code(&seppath(&["verify", "--graph", &p3, "--system", &foreign])), 1);
    let garbage = write(&dir, "x", "hello\n");
    assert_eq!(code(&seppath(&["verify", "--graph", &p3, "--system", &garbage])), 3);
}

#[test]
fn oracle_values() {
    let dir = TempDir::new().unwrap();
    let size = |text: &str| -> usize {
        let g = write(&dir, "g", text);
        let out = seppath(&["oracle", "--graph", &g]);
        assert_eq!(code(&out), 0);
        stdout(&out).lines().next().unwrap().rsplit(' ').next().unwrap().parse().unwrap()
    };
    assert_eq!(size(K3), 3);
    assert_eq!(size("0 1\n"), 1);
    assert_eq!(size("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"), 5);
    let big = write(&dir, "big", &stdout(&seppath(&["gen", "--family", "complete(8)"])));
    assert_eq!(code(&seppath(&["oracle", "--graph", &big])), 2);
}

fn bench(dir: &TempDir, name: &str) -> String {
    let out = path(dir, name);
    let res = seppath(&[
        "bench", "--families", "gnp:0.3,random_regular:4,grid", "--sizes", "20,30,40", "--seeds", "0,1,2", "--out", &out,
    ]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    fs::read_to_string(Path::new(&out)).unwrap()
}

#[test]
fn bench_rows_and_determinism() {
    let dir = TempDir::new().unwrap();
    let a = bench(&dir, "a.csv");
    let b = bench(&dir, "b.csv");
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines.len(), 28);
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    for line in &lines[1..] {
        let f: Vec<&str> = line.split(',').collect();
        for name in ["size_over_n", "size_over_n_logstar"] {
            let v: f64 = f[col(name)].parse().unwrap();
            assert!(v.is_finite() && v > 0.0, "{line}");
        }
        assert_eq!(f[col("runtime_ms")], "");
    }
}

use std::path::Path;
use std::process::{Command, Output};

use desitter_cli::report::Status;
use desitter_cli::VerificationReport;

const BIN: &str = env!("CARGO_BIN_EXE_desitter");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL: &str = "[sweep]\nhubble = linspace(0.2, 2, 7)\nalpha = -1, -inf, -4\n";

#[test]
fn fig2_is_deterministic_and_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.ini", SMALL);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&["fig2", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert!(!bytes.contains(&b'\r'));
    let text = String::from_utf8(bytes).unwrap();
    let alphas: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(alphas.len(), 21);
    assert_eq!(&alphas[..8], ["-inf"; 7].iter().chain(["-4"].iter()).copied().collect::<Vec<_>>().as_slice());
    assert_eq!(alphas[20], "-1");
}

#[test]
fn stdout_and_config_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let cfg = write(
        dir.path(),
        "c.ini",
        &format!("{SMALL}[output]\npath = {}\n", out.display()),
    );
    let o = run(&["sweep", "--config", &cfg]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("H,k,alpha,n_max,q,fidelity_closed_form,"));
    let o = run(&["fig2", "--config", &cfg, "--out", dir.path().join("x.csv").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn cavity_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.ini", "[cavity]\nmode = 2\nhubble = 0.05, 0.1\nsamples = 50\n");
    let o = run(&["cavity", "--config", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(&f[1..3], &[0.0, 0.0]);
        assert!(f[3].abs() < 1e-9 && f[4].abs() < 1e-9);
        assert_eq!(f[7], 0.0);
        assert!((f[8] - 2.0 / 3.0).abs() < 1e-4);
    }

    let o = run(&["cavity"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let (ca, cn) = ((f[1], f[2]), (f[3], f[4]));
        let scale = ca.0.hypot(ca.1);
        assert!((ca.0 - cn.0).hypot(ca.1 - cn.1) <= 1e-6 * scale);
        assert!((0.0..=1.0).contains(&f[7]));
        assert!(f[8] > 2.0 / 3.0 - 1e-9 && f[8] <= 1.0 + 1e-12);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["verify", "--config", "/no/such/file.ini"]).status.code(), Some(2));
    let typo = write(dir.path(), "t.ini", "[sweep]\nhubbel = 1\n");
    let o = run(&["fig2", "--config", &typo]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(run(&["fig2", "--tolerance", "0"]).status.code(), Some(2));
    let cfg = write(dir.path(), "c.ini", SMALL);
    assert_eq!(run(&["fig2", "--config", &cfg, "--nmax", "2"]).status.code(), Some(2));
    let o = run(&["fig2", "--config", &cfg, "--out", "/no/such/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn impossible_tolerance_fails_and_reports_agree() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let o = run(&["verify", "--tolerance", "0", "--out", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report = VerificationReport::from_json(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert!(report.failures() > 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), report.checks.len() + 1);
    for (line, check) in lines.iter().zip(&report.checks) {
        let mut words = line.split_whitespace();
        assert_eq!(words.next(), Some(check.status.label()));
        assert_eq!(words.next(), Some(check.name.as_str()));
    }
    assert!(report.checks.iter().any(|c| c.status == Status::Info));
}

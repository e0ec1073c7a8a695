use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_graded-heat"));
    cmd.env_remove("GRADED_HEAT_OUT");
    cmd
}

fn default_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/default.toml")
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(["--config", default_config().to_str().unwrap(), "--out", out.to_str().unwrap()]).args(args).output().unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn verify_all_on_default_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "all"], dir.path());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("10 of 10 criteria passed"), "{stdout}");
    let csv = fs::read_to_string(dir.path().join("verify.csv")).unwrap();
    assert_eq!(column(&csv, "passed"), vec!["true"; 10]);
}

#[test]
fn config_command_is_used_without_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "command = \"algebra-selftest\"\n").unwrap();
    let o = bin().args(["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("algebra.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4 + 16 + 64);
    assert!(csv.contains("index,2,c1c2,0.0000000000000000e0,-2.0000000000000000e0"));
}

#[test]
fn missing_input_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["theta", "--input", "/definitely/not/here.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let missing = dir.path().join("absent.toml");
    let o = bin().args(["--config", missing.to_str().unwrap(), "verify"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_config_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[sweep]\np = [4, 8]\nt = \"soon\"\n").unwrap();
    let o = bin().args(["--config", cfg.to_str().unwrap(), "verify"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("t"), "{err}");

    fs::write(&cfg, "[sweep]\nq = [4]\n").unwrap();
    let o = bin().args(["--config", cfg.to_str().unwrap(), "verify"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown field"));
}

#[test]
fn bk_sweep_error_shrinks() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bk-asymptotics"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("bk.csv")).unwrap();
    assert_eq!(column(&csv, "tag"), vec!["limit"; 3]);
    assert_eq!(column(&csv, "p"), vec!["4", "8", "16"]);
    let errs: Vec<f64> = column(&csv, "rel_err").iter().map(|v| v.parse().unwrap()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn tight_tolerance_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["odd-asymptotics", "--tolerance", "1e-6"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(dir.path().join("odd.csv").exists());
}

#[test]
fn identical_config_gives_identical_csv() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for cmd in ["oracle-lattice", "mehler-eval", "index-density"] {
        assert_eq!(run(&[cmd], a.path()).status.code(), Some(0), "{cmd}");
        assert_eq!(run(&[cmd], b.path()).status.code(), Some(0), "{cmd}");
    }
    for name in ["lattice.csv", "mehler.csv", "index.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let index = fs::read_to_string(a.path().join("index.csv")).unwrap();
    assert_eq!(column(&index, "exact"), vec!["-3/4+0i"]);
    assert_eq!(column(&index, "pi_power"), vec!["-1"]);
}

#[test]
fn theta_dump_and_grading_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["theta", "--j", "2", "--d", "6"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let dump = fs::read_to_string(dir.path().join("theta.toml")).unwrap();
    assert_eq!(dump.matches("[[thetas]]").count(), 3);
    let csv = fs::read_to_string(dir.path().join("theta.csv")).unwrap();
    assert!(column(&csv, "tag").iter().all(|t| t == "hkrec"));
    assert!(String::from_utf8_lossy(&o.stdout).contains("pi^-1"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin().env("GRADED_HEAT_OUT", dir.path()).args(["algebra-selftest"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("algebra.csv").exists());
}

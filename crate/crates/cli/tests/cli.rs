//! End-to-end tests of the `tzhu` binary: exit codes, report shape,
//! determinism, and option resolution (flags vs config file vs environment).

use assert_cmd::Command;
use predicates::prelude::*;

fn tzhu() -> Command {
    let mut cmd = Command::cargo_bin("tzhu").unwrap();
    cmd.env_remove("TZHU_SCHEDULE");
    cmd
}

#[test]
fn verify_identities_passes_with_exit_zero() {
    tzhu()
        .args(["verify", "identities", "--max-s", "6"])
        .assert()
        .success()
        .stdout(
            predicate::str::contains("summary total=")
                .and(predicate::str::contains("status=pass"))
                .and(predicate::str::contains("status=fail").not()),
        );
}

#[test]
fn product_bullet_prints_exact_state() {
    tzhu()
        .args([
            "product", "--family", "heis", "--g", "neg1", "--T", "2", "--n", "0/2", "--op",
            "bullet", "--u", "[1]", "--v", "[1]",
        ])
        .assert()
        .success()
        .stdout(predicate::str::starts_with("heis:"));
}

#[test]
fn bad_twist_denominator_is_a_usage_error() {
    tzhu()
        .args([
            "product", "--family", "heis", "--g", "neg1", "--T", "2", "--n", "1/3", "--op",
            "bullet", "--u", "[1]", "--v", "[1]",
        ])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("error:"));
}

#[test]
fn unknown_verify_suite_is_a_usage_error() {
    tzhu()
        .args(["verify", "nonsense"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("unknown verify suite"));
}

#[test]
fn starved_schedule_reports_inconclusive_with_exit_three() {
    tzhu()
        .args([
            "verify", "assoc", "--family", "heis", "--g", "neg1", "--T", "2", "--n", "1/2",
            "--seed", "7", "--schedule", "2",
        ])
        .assert()
        .code(3)
        .stdout(
            predicate::str::contains("status=inconclusive")
                .and(predicate::str::contains("status=fail").not()),
        );
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let run = || {
        tzhu()
            .args([
                "verify", "skew", "--family", "vir", "--c", "1/2", "--seed", "5", "--wt", "3",
            ])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    let first = run();
    let second = run();
    assert!(!first.is_empty());
    assert_eq!(first, second);
}

#[test]
fn timing_goes_to_stderr_not_stdout() {
    let assert = tzhu().args(["verify", "identities", "--max-s", "2"]).assert().success();
    let out = assert.get_output();
    assert!(!String::from_utf8_lossy(&out.stdout).contains("elapsed"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("elapsed"));
}

#[test]
fn config_file_supplies_options_and_flags_win() {
    let dir = tempdir();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "family=heis\ng=neg1\nT=2\nn=1/2\nwt=2\n").unwrap();

    // config alone: every check label carries the configured twist n=1/2
    tzhu()
        .args(["verify", "skew"])
        .arg("--config")
        .arg(&cfg)
        .assert()
        .success()
        .stdout(
            predicate::str::contains("n=1/2").and(predicate::str::contains("n=0/2").not()),
        );

    // the --n flag overrides the config file's n=1/2
    tzhu()
        .args(["verify", "skew", "--n", "0/2"])
        .arg("--config")
        .arg(&cfg)
        .assert()
        .success()
        .stdout(
            predicate::str::contains("n=0/2").and(predicate::str::contains("n=1/2").not()),
        );
}

#[test]
fn schedule_env_var_sets_default_and_flag_overrides_it() {
    let base = [
        "ideal-span", "--family", "heis", "--g", "neg1", "--T", "2", "--n", "1/2",
    ];
    let from_env = tzhu()
        .args(base)
        .env("TZHU_SCHEDULE", "2,4")
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let from_flag = tzhu()
        .args(base)
        .env("TZHU_SCHEDULE", "2,4")
        .args(["--schedule", "6,8"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let env_text = String::from_utf8(from_env).unwrap();
    let flag_text = String::from_utf8(from_flag).unwrap();
    assert!(env_text.contains("level=2"));
    assert!(flag_text.contains("level=6"));
    assert_ne!(env_text, flag_text);
}

#[test]
fn export_writes_structure_constant_csv() {
    let dir = tempdir();
    let out = dir.join("constants.csv");
    tzhu()
        .args([
            "export", "--kind", "classic", "--family", "heis", "--g", "id", "--T", "1", "--n",
            "0", "--lambda", "0", "--window", "2",
        ])
        .arg("--out")
        .arg(&out)
        .assert()
        .success();
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("# quotient approximation kind=classic"));
    assert!(csv.lines().any(|l| l.starts_with("i,j,k,")));
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("tzhu-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

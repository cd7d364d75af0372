//! End-to-end runs of the `codepth` binary: exit codes, output formats and
//! the slice cache.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn codepth(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_codepth"));
    cmd.args(args).env_remove("CODEPTH_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("CODEPTH_CACHE_DIR", dir);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_scenario(dir: &Path, body: &str) -> String {
    let path = dir.join("s.scn");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const CI_HEAD: &str = r#""schema": "codepth-scenario/1", "name": "t", "ring": {"vars": ["x", "y", "z", "w"]}, "ideal": ["x", "y"], "window": {"box": [-2, 1]}"#;

#[test]
fn passing_scenario_exits_zero() {
    let o = codepth(&["run", corpus().join("cyclic-cover.scn").to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("alpha = x^-1*y^-3 + x^-3*y^-1"), "{text}");
    assert!(text.ends_with("exit 0\n"));
}

#[test]
fn malformed_scenarios_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(dir.path(), "{ \"schema\": ");
    let o = codepth(&["run", &p], None);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let p = write_scenario(dir.path(), &format!("{{{CI_HEAD}, \"steps\": [{{\"command\": \"lc\", \"bogus\": 1}}]}}"));
    assert_eq!(codepth(&["run", &p], None).status.code(), Some(4));
    let p = write_scenario(dir.path(), &format!("{{{CI_HEAD}, \"steps\": []}}"));
    assert_eq!(codepth(&["run", &p], None).status.code(), Some(4));
    let p = write_scenario(
        dir.path(),
        &format!("{{{CI_HEAD}, \"steps\": [{{\"command\": \"coreg\", \"args\": {{\"seq\": [\"z\"], \"module\": {{\"kind\": \"local-cohomology\", \"index\": 2}}}}}}]}}"),
    );
    // z is not in the ideal
    assert_eq!(codepth(&["run", &p], None).status.code(), Some(4));
}

#[test]
fn expectation_mismatch_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(dir.path(), &format!("{{{CI_HEAD}, \"steps\": [{{\"command\": \"lc\", \"expect\": {{\"H2\": \"vanishes\"}}}}]}}"));
    let o = codepth(&["run", &p, "--format", "json"], None);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("\"key\": \"lc.H2\""), "{text}");
    assert!(text.contains("\"actual\": \"nonzero\""), "{text}");
}

#[test]
fn unsettled_slices_with_require_conclusive_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scenario(
        dir.path(),
        r#"{"schema": "codepth-scenario/1", "name": "u", "ring": {"vars": ["x", "y", "z", "w"]},
            "ideal": ["x*z - y^2", "y*w - z^2", "x*w - y*z"],
            "window": {"total": {"degrees": [-3, -3], "span": 0}}, "budget": {"max_level": 4},
            "steps": [{"command": "lc", "args": {"indices": [2]}}], "require_conclusive": true}"#,
    );
    assert_eq!(codepth(&["run", &p], None).status.code(), Some(3));
}

#[test]
fn window_and_field_overrides() {
    let path = corpus().join("complete-intersection.scn");
    let o = codepth(&["run", path.to_str().unwrap(), "--box", "-1:0", "--field", "fp:101", "--format", "json"], None);
    let text = stdout(&o);
    assert!(text.contains("\"field\": \"F_101\""), "{text}");
    assert!(text.contains("box [-1,0]"), "{text}");
    // the expected count belongs to the scenario's own window
    assert_eq!(o.status.code(), Some(2));
    let o = codepth(&["run", path.to_str().unwrap(), "--field", "r"], None);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let scn = corpus().join("complete-intersection.scn");
    let scn = scn.to_str().unwrap();
    let cold = codepth(&["run", scn, "--format", "json"], Some(&cache));
    let warm = codepth(&["run", scn, "--format", "json"], Some(&cache));
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(stdout(&cold), stdout(&warm));
    let golden = std::fs::read_to_string(corpus().join("golden/complete-intersection.json")).unwrap();
    assert_eq!(stdout(&warm), golden);

    let stats = stdout(&codepth(&["cache", "stats", "--cache-dir", cache.to_str().unwrap()], None));
    assert!(stats.contains("modules 3"), "{stats}");
    assert!(!stats.contains("entries 0\n"), "{stats}");

    let export = codepth(
        &["cache", "export", "--module", "H^2", "--key", "(-1,-2,0,1)@0"],
        Some(&cache),
    );
    let want = std::fs::read_to_string(corpus().join("golden/complete-intersection-h2.slice")).unwrap();
    assert_eq!(stdout(&export), want);

    let cleared = stdout(&codepth(&["cache", "clear"], Some(&cache)));
    assert!(cleared.starts_with("cleared "), "{cleared}");
    let stats = stdout(&codepth(&["cache", "stats"], Some(&cache)));
    assert!(stats.contains("entries 0\n"), "{stats}");
}

#[test]
fn slice_dumps_are_appended() {
    let o = codepth(&["run", corpus().join("cyclic-cover.scn").to_str().unwrap(), "--dump-slices"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\nslice "), "{}", stdout(&o));
}

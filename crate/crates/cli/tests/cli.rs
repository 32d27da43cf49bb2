use std::path::Path;
use std::process::{Command, Output};

fn weylwalk(args: &[&str], cache: &Path, envs: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_weylwalk"));
    c.args(args).arg("--cache").arg(cache);
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("WEYLWALK_")) {
        c.env_remove(k);
    }
    for (k, v) in envs {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fixture_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylwalk(&["fixture", "s16", "--emit", "json"], dir.path(), &[]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lattice"]["rank"], 17);
    assert_eq!(v["discriminant"], "(Z/2)^4+(Z/4)");
    assert_eq!(v["complement_roots"], "6A1+A3");
    assert_eq!(v["embedding"].as_array().unwrap().len(), 17);
}

#[test]
fn long_curve_degrees_need_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylwalk(&["curves", "s16"], dir.path(), &[("WEYLWALK_MAX_DEGREE", "13")]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--long"));
}

#[test]
fn curves_low_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylwalk(&["curves", "s16", "--max-degree", "5", "--format", "json"], dir.path(), &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let counts: Vec<u64> = v["curves"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![32, 0, 0, 0, 480]);
    assert_eq!(v["pass"], true);
}

/// The s16 wall pipeline passes, fills the cache, and reruns from the cache
/// with a byte-identical JSON report.
#[test]
fn s16_pipeline_is_cached_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = weylwalk(&["pipeline", "s16-walls", "--format", "json"], dir.path(), &[("WEYLWALK_JOBS", "1")]);
    assert!(a.status.success(), "{}{}", stdout(&a), String::from_utf8_lossy(&a.stderr));
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let b = weylwalk(&["pipeline", "s16-walls", "--format", "json"], dir.path(), &[]);
    assert!(b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["name"] == "walls" && c["computed"] == "316"));

    // a corrupted entry is reported, not silently recomputed
    let path = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let text = std::fs::read_to_string(&path).unwrap();
    let i = text.find("\"walls\"").unwrap();
    let corrupted = format!("{}{}", &text[..i], text[i..].replacen("-2", "-3", 1));
    std::fs::write(&path, corrupted).unwrap();
    let c = weylwalk(&["walls", "s16"], dir.path(), &[]);
    assert!(!c.status.success());
    assert!(String::from_utf8_lossy(&c.stderr).contains("content hash"));
}

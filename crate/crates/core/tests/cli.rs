use std::process::Command;

fn mgn(args: &[&str], cache: Option<&std::path::Path>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mgn"));
    cmd.args(args).env_remove("MGN_CACHE");
    if let Some(path) = cache {
        cmd.env("MGN_CACHE", path);
    }
    let out = cmd.output().expect("run mgn");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn compute_outputs() {
    assert_eq!(mgn(&["compute", "psi", "--genus", "1", "--d", "1"], None), (0, "1/24\n".into(), String::new()));
    assert_eq!(mgn(&["compute", "psi", "--genus", "2", "--d", "2,3"], None).1, "29/5760\n");
    assert_eq!(mgn(&["compute", "kappa", "--genus", "2", "--b", "1:3"], None).1, "43/2880\n");
    assert_eq!(mgn(&["compute", "psi", "--genus", "0", "--d", "0,0"], None).1, "0\n");
    let (code, out, _) = mgn(&["compute", "pure-kappa", "--genus", "2", "--b", "3:1", "--format", "json"], None);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["value"], "1/1152");
}

#[test]
fn exit_codes() {
    assert_eq!(mgn(&["compute", "psi", "--genus", "1"], None).0, 2);
    assert_eq!(mgn(&["verify", "virasoro", "--k", "-3"], None).0, 2);
    assert_eq!(mgn(&["denom", "--genus", "1", "--script-d"], None).0, 2);
    assert_eq!(mgn(&["verify", "thm8", "--gmax", "2"], None).0, 0);
    assert_eq!(mgn(&["verify", "conj13", "--gmax", "3"], None).0, 0);
    assert_eq!(mgn(&["verify", "virasoro", "--k", "-1..2", "--gmax", "2"], None).0, 0);
    assert_eq!(mgn(&["--help"], None).0, 0);
}

#[test]
fn warm_cache_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.txt");
    let args = ["verify", "all", "--gmax", "2", "--nmax", "3", "--format", "json"];
    let cold = mgn(&args, Some(&cache));
    assert_eq!(cold.0, 0, "{}", cold.2);
    let stored = std::fs::read_to_string(&cache).unwrap();
    assert!(stored.lines().count() > 10);
    let warm1 = mgn(&args, Some(&cache));
    let warm2 = mgn(&args, Some(&cache));
    assert_eq!(cold.1, warm1.1);
    assert_eq!(warm1.1, warm2.1);
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), stored);
}

#[test]
fn corrupted_cache_is_a_disagreement() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.txt");
    std::fs::write(&cache, "1|1||1/12\n").unwrap();
    let (code, _, err) = mgn(&["compute", "psi", "--genus", "1", "--d", "1"], Some(&cache));
    assert_eq!(code, 1);
    assert!(err.contains("disagreement"), "{err}");
    // left untouched
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), "1|1||1/12\n");

    std::fs::write(&cache, "1|1||1/24\nnot a record\n").unwrap();
    let (code, _, err) = mgn(&["compute", "psi", "--genus", "1", "--d", "1"], Some(&cache));
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn fixture_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orders.txt");
    std::fs::write(&path, "48 # GL(2,3)\n7\n").unwrap();
    let (code, out, _) = mgn(&["denom", "--genus", "2", "--fixture", path.to_str().unwrap()], None);
    // 7 does not divide script-D_2 = 5760
    assert_eq!(code, 3);
    assert!(out.contains("holds  48 | script-D_2"));
    assert!(out.contains("fails  7 | script-D_2"));
}

use alcoves_cli::run;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut full = vec!["alcoves"];
    full.extend_from_slice(args);
    let code = run(full, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn tmp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("alcoves-cli-{}-{name}", std::process::id()))
}

#[test]
fn gkm_failure_exits_one() {
    let (code, out) = call(&["roots", "--type", "G2", "--p", "3"]);
    assert_eq!(code, 1);
    assert!(out.contains("GKM fails over F_3"), "{out}");
    assert!(out.contains("dependent"));
    assert_eq!(call(&["roots", "--type", "G2", "--p", "7"]).0, 0);
}

#[test]
fn dot_export_has_one_node_per_alcove() {
    let path = tmp("h.dot");
    let (code, _) = call(&[
        "order",
        "--type",
        "A2",
        "--p",
        "5",
        "--inverted",
        "none",
        "--window",
        "1",
        "--dot",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let dot = std::fs::read_to_string(&path).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 6);
    std::fs::remove_file(path).ok();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["bogus"]).0, 2);
    assert_eq!(call(&["verify", "--suite", "nope"]).0, 2);
    assert_eq!(call(&["roots", "--type", "E8"]).0, 2);
    assert_eq!(call(&["order", "--inverted", "zz"]).0, 2);
    assert_eq!(call(&["presheaf"]).0, 2);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let path = tmp("cfg.txt");
    std::fs::write(&path, "type=A2\np=3\n").unwrap();
    let (code, out) = call(&["--config", path.to_str().unwrap(), "roots", "--p", "7"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# type=A2 p=7"), "{out}");
    std::fs::remove_file(path).ok();
}

#[test]
fn presheaf_and_wallcross_objects() {
    let obj = "alcoves-object/1 sum(sky(e),shift(-2,structure))";
    let (code, out) = call(&["presheaf", "--object", obj, "--window", "2"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = call(&["wallcross", "--object", obj, "--window", "2", "--s", "1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS"));
    assert_eq!(call(&["wallcross", "--object", obj, "--s", "5"]).0, 2);
}

#[test]
fn full_verify_example() {
    let (code, out) =
        call(&["verify", "--type", "A1", "--p", "5", "--window", "6", "--max-deg", "4", "--suite", "all"]);
    assert_eq!(code, 0, "{}", out.lines().filter(|l| l.starts_with("FAIL")).collect::<Vec<_>>().join("\n"));
}

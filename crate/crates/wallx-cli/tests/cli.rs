use std::path::PathBuf;
use std::process::{Command, Output};

fn wallx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wallx"))
        .args(args)
        .env_remove("WALLX_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("wallx-cli-test-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

/// σ for rows (4,2) as in the worked divisor example: cells ½..11/2 map to
/// (7/2,0), (3/2,1), (5/2,0), (3/2,0), (1/2,1), (1/2,0).
const SIGMA_4_2: &str = r#"[{"x2":7,"y":0},{"x2":3,"y":1},{"x2":5,"y":0},{"x2":3,"y":0},{"x2":1,"y":1},{"x2":1,"y":0}]"#;

#[test]
fn divisor_f_plus_4() {
    let dir = scratch("sigma");
    let f = dir.join("sigma.json");
    std::fs::write(&f, SIGMA_4_2).unwrap();
    let o = wallx(&["divisors", "--N0", "4", "--N1", "2", "--sigma", f.to_str().unwrap(), "--kind", "F+", "--index", "4"]);
    let v = json(&o);
    assert_eq!(v["result"]["divisor"]["row1"], serde_json::json!([0, 0, 1]));
    assert_eq!(v["result"]["divisor"]["row0"], serde_json::json!([0, 0, 1, 2, 3]));
    assert_eq!(v["result"]["support_function"]["upper_convex"], true);
    assert_eq!(v["provenance"]["orientation"], "beta_minus");
    assert_eq!(v["provenance"]["geometry_hash"].as_str().unwrap().len(), 16);

    // Same geometry through the preset and inline σ.
    let named = wallx(&["divisors", "--geom", "4-2", "--kind", "F+", "--index", "4"]);
    assert_eq!(stdout(&named), stdout(&o));
    let inline = wallx(&["divisors", "--N0", "4", "--N1", "2", "--sigma", SIGMA_4_2, "--kind", "F+", "--index", "4"]);
    assert_eq!(stdout(&inline), stdout(&o));

    let text = wallx(&["divisors", "--geom", "4-2", "--kind", "F+", "--index", "4", "--format", "text"]);
    assert!(stdout(&text).starts_with("0 0 1\n0 0 1 2 3\n"));
}

#[test]
fn zfun_oracle_matches_crystal() {
    let z = json(&wallx(&[
        "zfun", "--geom", "conifold", "--zeta", "-1,-1", "--degree", "4", "--mode", "absolute_with_oracle", "--flavor", "euler",
    ]));
    let c = json(&wallx(&["crystal", "--geom", "conifold", "--degree", "4"]));
    assert_eq!(z["result"]["series"], c["result"]["series"]);
    assert_eq!(z["provenance"]["mode"], "absolute_with_oracle");
    assert_eq!(z["provenance"]["dtpt_used"], false);

    let d = json(&wallx(&[
        "zfun", "--geom", "conifold", "--zeta", "-1,-1", "--degree", "4", "--mode", "absolute_with_dtpt",
    ]));
    assert_eq!(d["result"]["series"], c["result"]["series"]);
    assert_eq!(d["provenance"]["dtpt_used"], true);
}

#[test]
fn path_output() {
    let v = json(&wallx(&["path", "--geom", "conifold", "--zeta", "-5,39/10"]));
    let r = &v["result"];
    assert_eq!(r["side"], "negative");
    assert_eq!(r["k_sequence"], serde_json::json!([1, 0, 1, 0]));
    let cs: Vec<&str> = r["crossings"].as_array().unwrap().iter().map(|c| c["c"].as_str().unwrap()).collect();
    assert_eq!(cs, ["39/10", "14/15", "17/50", "3/35"]);

    // −5·4 + 4·5 = 0: on the wall of (4,5).
    let o = wallx(&["path", "--geom", "conifold", "--zeta", "-5,4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wall"));
}

#[test]
fn exit_codes() {
    // Usage errors.
    for args in [
        &["bogus"][..],
        &["zfun", "--geom", "conifold"][..],
        &["quiver"][..],
        &["quiver", "--geom", "conifold", "--N0", "1"][..],
        &["quiver", "--geom", "nowhere"][..],
        &["zfun", "--geom", "conifold", "--zeta", "-1,1", "--degree", "2", "--mode", "sideways"][..],
        &["ext", "--geom", "conifold", "--e", "/nonexistent/e.json", "--f", "/nonexistent/f.json"][..],
    ] {
        assert_eq!(wallx(args).status.code(), Some(1), "{args:?}");
    }
    // Domain errors.
    for args in [
        &["zfun", "--geom", "conifold", "--zeta", "-0.5,1", "--degree", "2"][..],
        &["zfun", "--geom", "conifold", "--zeta", "-1,1,1", "--degree", "2"][..],
        &["zfun", "--geom", "conifold", "--zeta", "-1,1", "--degree", "13"][..],
        &["zfun", "--geom", "conifold", "--zeta", "-1,-1", "--degree", "2", "--mode", "relative_to_trivial"][..],
        &["path", "--geom", "conifold", "--zeta", "-1,1"][..],
        &["divisors", "--geom", "conifold", "--kind", "E+", "--index", "2"][..],
        &["divisors", "--N0", "2", "--N1", "0", "--sigma", r#"[{"x2":1,"y":0},{"x2":1,"y":0}]"#, "--kind", "H", "--index", "1/2"][..],
    ] {
        let o = wallx(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
    assert_eq!(wallx(&["--help"]).status.code(), Some(0));
    assert_eq!(wallx(&["crystal", "--geom", "c3", "--degree", "13", "--max-degree", "13"]).status.code(), Some(0));
}

#[test]
fn decimals_rejected() {
    let o = wallx(&["path", "--geom", "conifold", "--zeta", "-5,3.9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("3.9"));
}

#[test]
fn output_is_byte_stable() {
    let args = ["zfun", "--geom", "2-1b", "--zeta", "-3/2,1/3,1/5", "--degree", "4", "--flavor", "signed"];
    let a = wallx(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, wallx(&args).stdout);
    let t = ["gv", "--geom", "4-2", "--format", "text"];
    assert_eq!(wallx(&t).stdout, wallx(&t).stdout);
}

#[test]
fn crystal_cache_round_trip() {
    let dir = scratch("cache");
    let run = |extra: &[&str]| {
        let mut args = vec!["crystal", "--geom", "2-0", "--degree", "6"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_wallx")).args(&args).env("WALLX_CACHE_DIR", &dir).output().unwrap()
    };
    let first = run(&[]);
    assert_eq!(first.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    assert_eq!(run(&[]).stdout, first.stdout);

    // A corrupt entry is recomputed rather than trusted.
    std::fs::write(&files[0], "{not json").unwrap();
    assert_eq!(run(&[]).stdout, first.stdout);
    assert_eq!(run(&["--no-cache"]).stdout, first.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ext_from_files() {
    let dir = scratch("ext");
    let s1 = dir.join("s1.json");
    std::fs::write(&s1, r#"{"framed":false,"dims":[0,1],"arrows":[]}"#).unwrap();
    let v = json(&wallx(&["ext", "--geom", "conifold", "--e", s1.to_str().unwrap(), "--f", s1.to_str().unwrap()]));
    assert_eq!(v["result"], serde_json::json!({"hom": 1, "ext1": 0, "ext2": 0, "ext3": 1}));

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"framed":false,"dims":[1,1],"arrows":[{"id":"h+1/2","matrix":[["1","2"]]}]}"#).unwrap();
    let o = wallx(&["ext", "--geom", "conifold", "--e", bad.to_str().unwrap(), "--f", s1.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn roots_and_gv() {
    let v = json(&wallx(&["roots", "--N", "3", "--max-height", "2"]));
    assert_eq!(v["result"].as_array().unwrap().len(), 6);
    let g = json(&wallx(&["gv", "--geom", "4-2"]));
    assert_eq!(g["result"].as_array().unwrap().len(), 15);
    let q = json(&wallx(&["quiver", "--geom", "4-2"]));
    assert_eq!(q["result"]["geometry"]["sigma"], serde_json::from_str::<serde_json::Value>(SIGMA_4_2).unwrap());
}

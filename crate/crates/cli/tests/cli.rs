use std::path::Path;
use std::process::{Command, Output};

fn stackdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stackdist"))
        .args(args)
        .env_remove("STACKDIST_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_rows() {
    let o = stackdist(&["count", "--k", "2", "--tau", "3", "--n", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,t,count\n9,0,1\n9,1,1\n");
    let o = stackdist(&["count", "--k", "2", "--tau", "3", "--n", "5"]);
    assert_eq!(stdout(&o), "n,t,count\n5,0,1\n");
    let o = stackdist(&["count", "--k", "2", "--tau", "3", "--n", "9", "--t", "2"]);
    assert_eq!(stdout(&o), "n,t,count\n9,2,0\n");
}

#[test]
fn count_json_and_ranges() {
    let o = stackdist(&["count", "--k", "2", "--tau", "3", "--n", "8..9", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 3);
    assert_eq!(rows[2]["count"], "1");
}

#[test]
fn dist_rows() {
    let o = stackdist(&["dist", "--k", "2", "--tau", "3", "--n", "9"]);
    assert_eq!(stdout(&o), "t,probability_num,probability_den,float\n0,1,2,0.5\n1,1,2,0.5\n");
    let o = stackdist(&["dist", "--k", "2", "--tau", "3", "--n", "5"]);
    assert_eq!(stdout(&o), "t,probability_num,probability_den,float\n0,1,1,1.0\n");
}

#[test]
fn dist_floats_sum_to_one() {
    let o = stackdist(&["dist", "--k", "3", "--tau", "3", "--n", "80"]);
    let text = stdout(&o);
    let total: f64 = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn clt_json() {
    let o = stackdist(&["clt", "--k", "3", "--tau", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["mu"].as_f64().unwrap() - 0.115473).abs() < 5e-6);
    assert_eq!(v["unverified_regime"], false);
    let o = stackdist(&["clt", "--k", "12", "--tau", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["unverified_regime"], true);
}

#[test]
fn table1_block() {
    let o = stackdist(&["table1", "--k", "3..4", "--tau", "3..7"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        if f[8] == "false" {
            assert!(f[6].parse::<f64>().unwrap() <= 5e-6, "{r}");
            assert!(f[7].parse::<f64>().unwrap() <= 5e-6, "{r}");
        }
    }
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "oracle", "--k", "2,3", "--tau", "3,4", "--n-max", "12"][..],
        &["verify", "series", "--k", "3", "--tau", "3", "--n-max", "60"],
        &["verify", "identities", "--k", "2", "--tau", "3", "--n-max", "30"],
        &["verify", "normal", "--k", "3", "--tau", "3", "--n", "50,100,150"],
    ] {
        let o = stackdist(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).lines().last().unwrap().starts_with("PASS"), "{args:?}");
    }
}

#[test]
fn verification_failure_exit_code() {
    // a different arc-length convention no longer matches the formulas
    let o = stackdist(&["verify", "oracle", "--k", "2", "--tau", "3", "--n-max", "12", "--lambda-min", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn usage_errors() {
    assert_eq!(stackdist(&["count", "--k", "1", "--tau", "3", "--n", "4"]).status.code(), Some(2));
    assert_eq!(stackdist(&["count", "--k", "2", "--n", "4"]).status.code(), Some(2));
    assert_eq!(stackdist(&["count", "--k", "2", "--tau", "3", "--n", "4..2"]).status.code(), Some(2));
    assert_eq!(stackdist(&["clt", "--k", "3", "--tau", "2"]).status.code(), Some(2));
    assert_eq!(stackdist(&["verify", "oracle", "--n-max", "20", "--bf-cap", "14"]).status.code(), Some(2));
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn out_file_sidecar_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = stackdist(&["count", "--k", "3", "--tau", "3", "--n", "20..30", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(read(&a), read(&b));
    let meta: serde_json::Value = serde_json::from_str(&read(&dir.path().join("a.csv.meta.json"))).unwrap();
    assert_eq!(meta["command"], "count");
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["count", "--k", "3", "--tau", "4", "--n", "40"];
    let cold = stdout(&stackdist(&args));
    let with_cache = |extra: &[&str]| {
        let mut all = args.to_vec();
        all.extend_from_slice(extra);
        stdout(&stackdist(&all))
    };
    let c = cache.to_str().unwrap();
    assert_eq!(with_cache(&["--cache-dir", c]), cold);
    assert_eq!(with_cache(&["--cache-dir", c]), cold);

    let info = stdout(&stackdist(&["cache", "info", "--cache-dir", c]));
    assert!(info.contains("k=3"), "{info}");
    let cleared = stdout(&stackdist(&["cache", "clear", "--cache-dir", c]));
    assert!(cleared.contains("removed 1"));

    // env variable supplies the directory when the flag is absent
    let o = Command::new(env!("CARGO_BIN_EXE_stackdist"))
        .args(args)
        .env("STACKDIST_CACHE", c)
        .output()
        .unwrap();
    assert_eq!(stdout(&o), cold);
    assert!(stdout(&stackdist(&["cache", "info", "--cache-dir", c])).contains("k=3"));
}

#[test]
fn series_dump_matches_count() {
    let dump = stdout(&stackdist(&["series-dump", "--k", "2", "--tau", "3", "--n-max", "12"]));
    let count = stdout(&stackdist(&["count", "--k", "2", "--tau", "3", "--n", "0..12"]));
    assert_eq!(dump, count);
}

#[test]
fn normal_pmf_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("fig.csv");
    let o = stackdist(&["verify", "normal", "--k", "3", "--tau", "3", "--n", "40,80", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = read(&p);
    assert!(text.starts_with("n,t,exact_pmf,normal_pmf\n"));
    assert_eq!(text.lines().count(), 1 + 21 + 41);
}

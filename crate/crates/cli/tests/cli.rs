use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rankin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankin")).args(args).env_remove("RANKIN_WORKERS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/zeta_zeros_100.txt").to_string_lossy().into_owned()
}

#[test]
fn sigma_below_threshold_exits_3() {
    let o = rankin(&["products", "--mode", "thm12", "--rep", "gl2w12", "--sigma", "0.5", "--limit", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("threshold"));
}

#[test]
fn missing_zero_file_exits_2() {
    let o = rankin(&["correlation", "--zeros", "no/such/zeros.txt", "--m", "2", "--beta", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(rankin(&["coeffs", "--rep", "gl2w12", "--limit", "10", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(rankin(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(rankin(&["coeffs", "--rep", "gl9", "--limit", "10"]).status.code(), Some(2));
    assert_eq!(rankin(&["numfield", "primes", "--field", "Qsqrt6", "--limit", "10"]).status.code(), Some(2));
}

#[test]
fn primes_csv() {
    let o = rankin(&["numfield", "primes", "--field", "Qi", "--limit", "13"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("# field=Qi\n"));
    let body: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        body,
        [
            "norm,residue_char,split_tag",
            "2,2,ramified",
            "5,5,split",
            "5,5,split",
            "9,3,inert",
            "13,13,split",
            "13,13,split"
        ]
    );
}

#[test]
fn tau_coefficients() {
    let o = rankin(&["coeffs", "--rep", "gl2w12", "--limit", "3"]);
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    // τ(2)/2^{11/2} = -24/2^{5.5}
    assert_eq!(rows[2], "2,-0.53033008589,0");
}

#[test]
fn csv_is_reproducible_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, w) in [(&a, "1"), (&b, "4")] {
        let o = rankin(&[
            "--workers",
            w,
            "products",
            "--mode",
            "thm12a",
            "--rep",
            "unitary:3:11",
            "--sigma",
            "0.95",
            "--limit",
            "5000",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (x, y) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(!x.is_empty());
    assert_eq!(x, y);
    assert!(!x.contains(&b'\r'));
}

#[test]
fn correlation_json_has_sorted_keys_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let fx = fixture();
    let o = rankin(&[
        "correlation",
        "--zeros",
        &fx,
        "--m",
        "2",
        "--beta",
        "0.5",
        "--T",
        "auto",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for k in ["r_m", "prediction", "ratio", "window_stats", "config"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert_eq!(v["config"]["m"], 2);
    let top_level: Vec<&str> = text.lines().filter(|l| l.starts_with("  \"")).collect();
    assert!(top_level.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn sieve_weights_columns() {
    let o = rankin(&["sieve", "weights", "--field", "Q", "--k", "2", "--P", "100", "--limit", "50", "--avoid", "1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut body = s.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(body.next(), Some("n,char_sum_re,char_sum_im,weight"));
    assert_eq!(body.count(), 50);
}

#[test]
fn smo_reports_first_disagreement() {
    let o = rankin(&["smo", "--rep1", "gl2w12", "--rep2", "gl2w16", "--limit", "1000"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("# first_disagreement=2\n"));
    let same = rankin(&["smo", "--rep1", "gl2w12", "--rep2", "gl2w12", "--limit", "1000"]);
    assert!(stdout(&same).contains("# first_disagreement=0\n"));
}

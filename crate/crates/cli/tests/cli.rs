use std::io::Write;
use std::process::{Command, Output};

fn shadiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shadiv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_five_primes() {
    let o = shadiv(&["analyze", "--curve", "0,-1,1,-7,10", "--primes", "3,5,7,11,13"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let last = &rows[4];
    assert_eq!(last["p"], 13);
    assert_eq!(last["outcome"], "Guaranteed");
    assert_eq!(last["chain"][0]["theorem"], "large-prime");
    for r in rows {
        for key in ["curve", "p", "outcome", "chain", "evidence"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        for step in r["chain"].as_array().unwrap() {
            for key in ["theorem", "quote_tag", "inputs", "rigor"] {
                assert!(step.get(key).is_some(), "missing {key}");
            }
        }
    }
}

#[test]
fn json_is_byte_stable_and_round_trips() {
    let args = ["analyze", "--embedded", "11a1", "--primes", "3,5,7"];
    let a = stdout(&shadiv(&args));
    let b = stdout(&shadiv(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", a);
    assert_eq!(v[1]["outcome"], "CriterionFails");
}

#[test]
fn mathematical_outcomes_exit_zero() {
    let o = shadiv(&["analyze", "--embedded", "11a1", "--primes", "5", "--format", "tsv"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("CriterionFails"));
}

#[test]
fn parse_errors_report_position() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# comment\nok: 0,0,0,-1,0\nbad: 0,0,zz,1,0").unwrap();
    let o = shadiv(&["analyze", "--file", f.path().to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3, column 10"), "{err}");
}

#[test]
fn curve_file_order_is_preserved() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "b: 0,-1,1,-10,-20\na: 0,0,0,-1,0").unwrap();
    let o = shadiv(&["analyze", "--file", f.path().to_str().unwrap(), "--primes", "5,13", "--format", "tsv"]);
    let lines: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split('\t').take(2).collect::<Vec<_>>().join(" ")).collect();
    assert_eq!(lines, vec!["b 5", "b 13", "a 5", "a 13"]);
}

#[test]
fn tables_pass() {
    for which in ["p11", "nv3", "bounds"] {
        let o = shadiv(&["tables", "--which", which]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(!text.contains("FAIL"), "{text}");
        assert!(text.contains("PASS"));
    }
    let nv3 = stdout(&shadiv(&["tables", "--which", "nv3"]));
    assert!(nv3.contains("12,2,4,12,20,22,12"));
}

#[test]
fn groupcrit_exhaustive_and_sampled() {
    let o = shadiv(&["groupcrit-verify", "--p", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["checked"], 55);
    assert_eq!(v["mismatches"], 0);
    let args = ["groupcrit-verify", "--p", "5", "--mode", "sampled", "--count", "40", "--seed", "1"];
    let a = stdout(&shadiv(&args));
    assert_eq!(a, stdout(&shadiv(&args)));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["mismatches"], 0);
    assert!(!shadiv(&["groupcrit-verify", "--p", "5", "--mode", "sampled"]).status.success());
    assert!(!shadiv(&["groupcrit-verify", "--p", "11"]).status.success());
}

#[test]
fn selmer_example_json() {
    let o = shadiv(&["selmer-example"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let flags: Vec<bool> = v["sections"].as_array().unwrap().iter().map(|s| s["coordinate_section_point"].as_bool().unwrap()).collect();
    assert_eq!(flags, vec![true, false, false, false]);
    assert!(v["steps"].as_array().unwrap().iter().any(|s| s["kind"] == "cited"));
}

#[test]
fn twist_scan_single_row_and_cap() {
    let o = shadiv(&["twist-scan", "--embedded", "11a1", "--p", "5", "--dmax", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["rows"][0]["d"], 1);
    let o = shadiv(&["twist-scan", "--embedded", "selmer-jacobian", "--p", "3", "--dmax", "100"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["failures"].as_u64().unwrap() <= v["cap"].as_u64().unwrap());
}

#[test]
fn thread_env_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_shadiv")).arg("curves").env("SHA_DIV_THREADS", "two").output().unwrap();
    assert!(!o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_shadiv")).arg("curves").env("SHA_DIV_THREADS", "1").output().unwrap();
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().contains("121-C2"));
}

#[test]
fn even_prime_is_an_error() {
    assert!(!shadiv(&["analyze", "--embedded", "legendre", "--primes", "2"]).status.success());
}

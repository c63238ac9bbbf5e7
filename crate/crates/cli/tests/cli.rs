use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

struct Sandbox {
    dir: tempfile::TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn cache(&self) -> PathBuf {
        self.path("cache")
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_qconstell"))
            .args(args)
            .current_dir(self.dir.path())
            .env("QCONSTELL_CACHE_DIR", self.cache())
            .output()
            .unwrap()
    }

    fn write(&self, name: &str, v: &Value) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, serde_json::to_vec_pretty(v).unwrap()).unwrap();
        p
    }
}

fn read(p: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn validator() -> jsonschema::Validator {
    let text = include_str!("../../../docs/result.schema.json");
    jsonschema::validator_for(&serde_json::from_str(text).unwrap()).unwrap()
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = validator().iter_errors(v).map(|e| format!("{e} at {}", e.instance_path())).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

fn result_path(o: &Output) -> PathBuf {
    let line = stdout(o).lines().find_map(|l| l.strip_prefix("result: ").map(str::to_string)).expect("result line");
    PathBuf::from(line)
}

fn hesse(sb: &Sandbox) -> PathBuf {
    let out = sb.path("hesse.json");
    let o = sb.run(&["construct", "--problem", "sic", "--dim", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // keep only the bare state so the raw matrix schema is exercised
    let state = read(&out)["object"].clone();
    sb.write("hesse.json", &state)
}

#[test]
fn verify_hesse_fiducial() {
    let sb = Sandbox::new();
    let f = hesse(&sb);
    let out = sb.path("v.json");
    let o = sb.run(&["verify", "--problem", "sic", "--dim", "3", "--input", f.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = read(&out);
    assert_valid(&r);
    assert_eq!(r["status"], "passed");
    assert!(r["report"]["max_residual"].as_f64().unwrap() < 1e-10);
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn werner_state_passes_the_dichotomic_check() {
    let sb = Sandbox::new();
    let o = sb.run(&["construct", "--problem", "werner", "--dim", "4", "--alpha", "-0.5", "--out", "w.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let w = read(&sb.path("w.json"));
    assert_valid(&w);
    assert!(w["labels"].as_array().unwrap().iter().any(|l| l == "NPT"));
    let o = sb.run(&["verify", "--problem", "dichotomic", "--input", "w.json", "--out", "d.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_valid(&read(&sb.path("d.json")));
}

#[test]
fn two_copy_distill_search_is_open() {
    let sb = Sandbox::new();
    let o = sb.run(&["search", "--problem", "distill", "--dim", "4", "--alpha", "-0.5", "--copies", "2", "--seed", "7", "--budget", "200", "--restarts", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = read(&result_path(&o));
    assert_valid(&r);
    let cert = &r["certificate"];
    assert_eq!(cert["verdict"], "open");
    assert!(cert["best_value"].is_number());
    assert_eq!(cert["problem"], json!({"problem": "distill", "d": 4, "alpha": -0.5, "copies": 2}));
    assert!(stdout(&o).contains("best value"));
    // the best probe is decoded into the matrix schema
    assert_eq!(r["object"]["p"]["rows"], 2);
    assert_eq!(r["object"]["p"]["cols"], 16);
}

#[test]
fn failed_verification_exits_one() {
    let sb = Sandbox::new();
    let basis = sb.write("basis.json", &json!({"rows": 3, "cols": 1, "re": [1.0, 0.0, 0.0], "im": [0.0, 0.0, 0.0], "dims": [3]}));
    let o = sb.run(&["verify", "--problem", "sic", "--input", basis.to_str().unwrap(), "--out", "f.json"]);
    assert_eq!(o.status.code(), Some(1));
    let r = read(&sb.path("f.json"));
    assert_valid(&r);
    assert_eq!(r["status"], "failed");
    assert_eq!(r["report"]["passed"], false);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn usage_and_input_errors_exit_two_with_distinct_messages() {
    let sb = Sandbox::new();
    let f = hesse(&sb);

    let unknown = sb.run(&["verify", "--problem", "octonion", "--input", "x.json"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stderr(&unknown).contains("octonion"));

    std::fs::write(sb.path("bad.json"), b"{ not json").unwrap();
    let malformed = sb.run(&["verify", "--problem", "sic", "--input", "bad.json", "--out", "m.json"]);
    assert_eq!(malformed.status.code(), Some(2));
    assert!(stderr(&malformed).contains("malformed input file"));

    let wrong_shape = sb.write("shape.json", &json!({"rows": 2, "cols": 2, "re": [1.0], "im": [0.0]}));
    let shape = sb.run(&["verify", "--problem", "hadamard", "--input", wrong_shape.to_str().unwrap(), "--out", "s.json"]);
    assert_eq!(shape.status.code(), Some(2));
    assert!(stderr(&shape).contains("malformed input file"));

    let mismatch = sb.run(&["verify", "--problem", "sic", "--dim", "4", "--input", f.to_str().unwrap(), "--out", "dm.json"]);
    assert_eq!(mismatch.status.code(), Some(2));
    assert!(stderr(&mismatch).contains("dimension mismatch"), "{}", stderr(&mismatch));

    let missing = sb.run(&["verify", "--problem", "sic", "--input", "nowhere.json", "--out", "io.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("I/O error"));

    let no_input = sb.run(&["verify", "--problem", "sic", "--out", "u.json"]);
    assert_eq!(no_input.status.code(), Some(2));
    assert!(stderr(&no_input).contains("usage error"));

    let messages = [&malformed, &mismatch, &missing, &no_input].map(stderr);
    for (i, a) in messages.iter().enumerate() {
        for b in &messages[i + 1..] {
            assert_ne!(a, b);
        }
    }
    // errors past argument parsing still leave a valid result file
    for name in ["m.json", "s.json", "dm.json", "io.json", "u.json"] {
        let r = read(&sb.path(name));
        assert_valid(&r);
        assert_eq!(r["status"], "error");
        assert_eq!(r["exit_code"], 2);
    }
}

#[test]
fn verify_is_pure() {
    let sb = Sandbox::new();
    let f = hesse(&sb);
    let args = |out: &str| ["verify", "--problem", "sic", "--input", f.to_str().unwrap(), "--out", out].map(String::from);
    let a = sb.run(&args("a.json").iter().map(String::as_str).collect::<Vec<_>>());
    let b = sb.run(&args("b.json").iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let (ra, rb) = (read(&sb.path("a.json")), read(&sb.path("b.json")));
    assert_eq!(ra["report"], rb["report"]);
    assert_eq!(ra["run"]["input_sha256"], rb["run"]["input_sha256"]);
}

#[test]
fn results_are_content_addressed_in_the_cache_dir() {
    let sb = Sandbox::new();
    let a = sb.run(&["search", "--problem", "sic", "--dim", "2", "--seed", "1", "--restarts", "2"]);
    let b = sb.run(&["search", "--problem", "sic", "--dim", "2", "--seed", "2", "--restarts", "2"]);
    let again = sb.run(&["search", "--problem", "sic", "--dim", "2", "--seed", "1", "--restarts", "2"]);
    let (pa, pb, pc) = (result_path(&a), result_path(&b), result_path(&again));
    assert_eq!(pa.parent().unwrap(), sb.cache());
    let name = pa.file_name().unwrap().to_str().unwrap();
    let hash = name.strip_prefix("search-sic-").unwrap().strip_suffix(".json").unwrap();
    assert_eq!(hash.len(), 16);
    assert!(hash.chars().all(|c| c.is_ascii_hexdigit()));
    assert_ne!(pa, pb);
    assert_eq!(pa, pc);
    let entries = std::fs::read_dir(sb.cache()).unwrap().count();
    assert_eq!(entries, 2, "no temporary files are left behind");
    let r = read(&pa);
    assert_valid(&r);
    assert_eq!(r["run"]["output"], pa.display().to_string());
    assert_eq!(r["run"]["seed"], 1);
    assert_eq!(r["run"]["parameters"], json!({"dim": 2}));
}

#[test]
fn tolerance_overrides_are_echoed() {
    let sb = Sandbox::new();
    let f = hesse(&sb);
    let o = sb.run(&["verify", "--problem", "sic", "--tol", "1e-14", "--input", f.to_str().unwrap(), "--out", "t.json"]);
    let r = read(&sb.path("t.json"));
    assert_eq!(r["run"]["tolerances"], json!({"verify": 1e-14}));
    assert_eq!(r["report"]["tolerance_used"], 1e-14);
    assert_eq!(o.status.code().unwrap(), r["exit_code"].as_i64().unwrap() as i32);
}

#[test]
fn replay_is_bit_identical_and_detects_tampering() {
    let sb = Sandbox::new();
    let o = sb.run(&["search", "--problem", "mub", "--dim", "3", "--bases", "2", "--seed", "3", "--restarts", "3", "--threads", "2", "--out", "m.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = sb.run(&["replay", "--input", "m.json", "--out", "r.json"]);
    assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
    let rr = read(&sb.path("r.json"));
    assert_valid(&rr);
    assert_eq!(rr["status"], "reproduced");
    assert_eq!(rr["replay"]["identical"], true);
    assert_eq!(rr["certificate"]["best_value_bits"], read(&sb.path("m.json"))["certificate"]["best_value_bits"]);

    let mut cert = read(&sb.path("m.json"))["certificate"].clone();
    cert["best_value_bits"] = json!("0x3ff0000000000000");
    cert["best_value"] = json!(1.0);
    sb.write("tampered.json", &cert);
    let t = sb.run(&["replay", "--input", "tampered.json", "--out", "t.json"]);
    assert_eq!(t.status.code(), Some(1));
    let tr = read(&sb.path("t.json"));
    assert_valid(&tr);
    assert_eq!(tr["status"], "diverged");
}

#[test]
fn every_construction_validates() {
    let sb = Sandbox::new();
    let cases: &[&[&str]] = &[
        &["--problem", "sic", "--dim", "2"],
        &["--problem", "mub", "--dim", "5"],
        &["--problem", "hadamard", "--dim", "6"],
        &["--problem", "latin", "--dim", "4"],
        &["--problem", "oqls", "--dim", "3"],
        &["--problem", "two-unitary", "--dim", "3"],
        &["--problem", "ame", "--dim", "3"],
        &["--problem", "werner", "--dim", "3", "--alpha", "0.25"],
        &["--problem", "distill", "--dim", "4", "--alpha", "-0.6"],
        &["--problem", "ksum"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let out = format!("c{k}.json");
        let mut full = vec!["construct"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["--out", &out]);
        let o = sb.run(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let r = read(&sb.path(&out));
        assert_valid(&r);
        assert_eq!(r["status"], "constructed");
        // constructions verify through the same command, with the same parameters
        let mut check = vec!["verify"];
        check.extend_from_slice(args);
        check.extend_from_slice(&["--input", &out, "--out", "check.json"]);
        let v = sb.run(&check);
        assert_eq!(v.status.code(), Some(0), "{args:?}: {}", stderr(&v));
        assert_valid(&read(&sb.path("check.json")));
    }
    let latin6 = sb.run(&["construct", "--problem", "latin", "--dim", "6", "--out", "l6.json"]);
    assert_eq!(latin6.status.code(), Some(2));
    assert_valid(&read(&sb.path("l6.json")));
}

#[test]
fn help_exits_zero() {
    let sb = Sandbox::new();
    let o = sb.run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("--problem"));
}

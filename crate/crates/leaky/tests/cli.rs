use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use leaky::bench::{gen_leakage, gen_random_game, LeakMode};
use leaky::io::InstanceFile;
use serde_json::Value;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn leaky(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leaky")).args(args).output().expect("binary runs")
}

fn leaky_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leaky")).args(args).env(key, value).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_instance(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn random_instance(dir: &TempDir, n: usize, k: usize, q: f64) -> PathBuf {
    let g = gen_random_game(n, k, 21).unwrap();
    let m = gen_leakage(n, q, &(0..n).collect::<Vec<_>>(), LeakMode::Dirichlet, 22).unwrap();
    let text = serde_json::to_string(&InstanceFile::from_model(&g, &m)).unwrap();
    write_instance(dir, "random.json", &text)
}

#[test]
fn solve_example_methods() {
    let ex = data("example.json");
    for method in ["opt-colgen", "opt-full"] {
        let v = stdout_json(&leaky(&["solve", path_str(&ex), "--method", method]));
        assert!((v["utility"].as_f64().unwrap() + 1.0 / 3.0).abs() <= 1e-7, "{method}: {v}");
        assert!(v["iterations"].is_u64());
    }
    let v = stdout_json(&leaky(&["solve", path_str(&ex), "--method", "baseline"]));
    assert!(v["utility"].as_f64().unwrap().abs() <= 1e-9);
}

#[test]
fn solve_output_round_trips_through_evaluate() {
    let dir = TempDir::new().unwrap();
    let ex = data("example.json");
    let rand = random_instance(&dir, 7, 3, 0.6);
    for inst in [ex, rand] {
        for method in ["opt-colgen", "opt-full"] {
            let out = dir.path().join(format!("{method}.json"));
            let solved = stdout_json(&leaky(&["solve", path_str(&inst), "--method", method, "--out", path_str(&out)]));
            let eval = stdout_json(&leaky(&["evaluate", path_str(&inst), "--strategy", path_str(&out)]));
            let (a, b) = (solved["utility"].as_f64().unwrap(), eval["utility"].as_f64().unwrap());
            assert!((a - b).abs() <= 1e-9, "{method}: {a} vs {b}");
            assert_eq!(eval["mode"], "exact");
            assert!(eval["stderr"].is_null());
        }
    }
}

#[test]
fn malformed_input_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    let bad = write_instance(&dir, "bad.json", "{\"n\": 4, \"k\": ");
    let out = dir.path().join("s.json");
    let r = leaky(&["solve", path_str(&bad), "--out", path_str(&out)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(!r.stderr.is_empty());
    assert!(r.stdout.is_empty());
    assert!(!out.exists());
    assert_eq!(leaky(&["solve", "/nonexistent/instance.json"]).status.code(), Some(2));
    assert_eq!(leaky(&["solve", path_str(&data("example.json")), "--method", "magic"]).status.code(), Some(2));
}

#[test]
fn size_guard_exits_3() {
    let dir = TempDir::new().unwrap();
    let inst = random_instance(&dir, 30, 15, 0.5);
    let out = dir.path().join("s.json");
    let r = leaky(&["solve", path_str(&inst), "--method", "opt-full", "--out", path_str(&out)]);
    assert_eq!(r.status.code(), Some(3));
    assert!(!out.exists());
    let r = leaky(&["evaluate", path_str(&inst), "--method", "unics", "--mode", "exact"]);
    assert_eq!(r.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&r.stderr).contains("exact"));
}

#[test]
fn iteration_cap_exits_4_without_output() {
    let dir = TempDir::new().unwrap();
    let inst = random_instance(&dir, 8, 4, 0.7);
    let out = dir.path().join("s.json");
    let r = leaky(&["solve", path_str(&inst), "--max-iters", "1", "--out", path_str(&out)]);
    assert_eq!(r.status.code(), Some(4));
    assert!(!out.exists());
}

#[test]
fn sampling_is_reproducible() {
    let ex = data("example.json");
    let args = ["sample", path_str(&ex), "--method", "maxent", "--count", "3", "--seed", "7"];
    let a = leaky(&args);
    let b = leaky(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    for line in text.lines() {
        let s: Vec<usize> = serde_json::from_str(line).unwrap();
        assert_eq!(s.len(), 2);
    }
}

#[test]
fn comb_samples_stay_in_support() {
    let ex = data("example.json");
    let out = leaky(&["sample", path_str(&ex), "--method", "comb", "--count", "300", "--seed", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut seen = std::collections::BTreeSet::new();
    for line in text.lines() {
        let s: Vec<usize> = serde_json::from_str(line).unwrap();
        assert!([vec![0, 1], vec![0, 2], vec![1, 3]].contains(&s), "{s:?}");
        seen.insert(s);
    }
    assert_eq!(seen.len(), 3);
}

#[test]
fn zero_samples_print_nothing() {
    let out = leaky(&["sample", path_str(&data("example.json")), "--method", "indep", "--count", "0"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn evaluate_example_strategies() {
    let ex = data("example.json");
    for (file, want) in [("fragile.json", -4.0 / 3.0), ("spread.json", -8.0 / 9.0)] {
        let v = stdout_json(&leaky(&["evaluate", path_str(&ex), "--strategy", path_str(&data(file))]));
        assert!((v["utility"].as_f64().unwrap() - want).abs() <= 1e-9, "{file}: {v}");
    }
    let v = stdout_json(&leaky(&[
        "evaluate",
        path_str(&ex),
        "--strategy",
        path_str(&data("fragile.json")),
        "--mode",
        "mc",
        "--samples",
        "20000",
        "--seed",
        "3",
    ]));
    assert_eq!(v["mode"], "mc");
    assert!(v["stderr"].as_f64().unwrap() > 0.0);
}

#[test]
fn evaluate_without_leakage_gives_plain_utility() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(data("example.json"))
        .unwrap()
        .replace("\"p0\": 0, \"p\": [1, 0, 0, 0]", "\"p0\": 1, \"p\": [0, 0, 0, 0]");
    let inst = write_instance(&dir, "noleak.json", &text);
    for file in ["fragile.json", "spread.json"] {
        let v = stdout_json(&leaky(&["evaluate", path_str(&inst), "--strategy", path_str(&data(file))]));
        assert!(v["utility"].as_f64().unwrap().abs() <= 1e-9);
    }
}

#[test]
fn evaluate_needs_exactly_one_source() {
    let ex = data("example.json");
    assert_eq!(leaky(&["evaluate", path_str(&ex)]).status.code(), Some(2));
    let both = leaky(&["evaluate", path_str(&ex), "--method", "comb", "--strategy", path_str(&data("fragile.json"))]);
    assert_eq!(both.status.code(), Some(2));
}

const SWEEP: &str = r#"{"n": 6, "k": 3, "games": 2, "grid": [0, 0.5], "algorithms": ["traditional", "opt"], "seed": 4, "timing": false}"#;

#[test]
fn sweep_writes_rows_and_summary() {
    let dir = TempDir::new().unwrap();
    let cfg = write_instance(&dir, "cfg.json", SWEEP);
    let csv = dir.path().join("out.csv");
    let summary = stdout_json(&leaky(&["sweep", path_str(&cfg), "--out", path_str(&csv)]));
    assert_eq!(summary["failed_cells"], 0);
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header.join(","),
        "game_seed,n,k,model,support_mode,one_minus_p0,algorithm,utility,stderr,basis_utility,runtime_ms,status"
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 8);
    for r in rows.iter().filter(|r| &r[5] == "0") {
        let (u, b): (f64, f64) = (r[7].parse().unwrap(), r[9].parse().unwrap());
        assert!((u - b).abs() <= 1e-6);
        assert_eq!(&r[11], "ok");
    }
    let (opt, trad) = (&summary["means"]["opt"], &summary["means"]["traditional"]);
    for i in 0..2 {
        assert!(opt[i].as_f64().unwrap() >= trad[i].as_f64().unwrap() - 1e-6);
    }
}

#[test]
fn sweep_is_byte_identical_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let cfg = write_instance(
        &dir,
        "cfg.json",
        &SWEEP.replace("\"traditional\", \"opt\"", "\"traditional\", \"opt\", \"unics\", \"maxent\", \"indep\""),
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(leaky(&["sweep", path_str(&cfg), "--out", path_str(&a)]).status.success());
    assert!(leaky_env(&["sweep", path_str(&cfg), "--out", path_str(&b)], "LEAKY_THREADS", "1").status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sweep_config_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("out.csv");
    for text in [
        SWEEP.replace("\"games\": 2", "\"games\": 2, \"color\": 1"),
        SWEEP.replace("[0, 0.5]", "[1.5]"),
        "[]".to_string(),
    ] {
        let cfg = write_instance(&dir, "cfg.json", &text);
        let r = leaky(&["sweep", path_str(&cfg), "--out", path_str(&csv)]);
        assert_eq!(r.status.code(), Some(2), "{text}");
        assert!(!csv.exists());
    }
    let cfg = write_instance(&dir, "cfg.json", SWEEP);
    let r = leaky_env(&["sweep", path_str(&cfg), "--out", path_str(&csv)], "LEAKY_THREADS", "zero");
    assert_eq!(r.status.code(), Some(2));
    assert!(!csv.exists());
}

#[test]
fn selftest_levels_and_fault_injection() {
    let start = Instant::now();
    let quick = leaky(&["selftest"]);
    assert!(quick.status.success());
    assert!(start.elapsed() < Duration::from_secs(10));
    let text = String::from_utf8(quick.stdout).unwrap();
    assert!(text.contains("fixtures") && text.contains("oracle-equivalence"));

    let broken = leaky(&["selftest", "--corrupt-oracle"]);
    assert_eq!(broken.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&broken.stderr).contains("oracle-equivalence"));

    let start = Instant::now();
    let full = leaky(&["selftest", "--level", "full"]);
    assert!(full.status.success(), "{}", String::from_utf8_lossy(&full.stderr));
    assert!(start.elapsed() < Duration::from_secs(300));
    let text = String::from_utf8(full.stdout).unwrap();
    for name in ["colgen-vs-full-lp", "moment-matrix", "maxent-residual"] {
        assert!(text.contains(name), "{name}");
    }
}

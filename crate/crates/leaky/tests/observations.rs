use std::io::Write;

use leaky::bench::{run_sweep, summarize, ExperimentConfig};

fn config(extra: &str) -> ExperimentConfig {
    serde_json::from_str(&format!(
        r#"{{"n": 10, "k": 5, "games": 20, "grid": [0.3, 0.6, 0.9], "seed": 31, "timing": false{extra}}}"#
    ))
    .unwrap()
}

#[test]
fn small_leakage_support_costs_less() {
    let full = config(r#", "algorithms": ["opt"]"#);
    let small = config(r#", "algorithms": ["opt"], "support": {"random": 5}"#);
    let sf = summarize(&full, &run_sweep(&full).unwrap());
    let ss = summarize(&small, &run_sweep(&small).unwrap());
    for i in 0..3 {
        let loss_full = sf.basis[i] - sf.means["opt"][i].unwrap();
        let loss_small = ss.basis[i] - ss.means["opt"][i].unwrap();
        assert!(loss_small < loss_full, "1 - p0 = {}: {loss_small} vs {loss_full}", sf.grid[i]);
    }
}

#[test]
fn independent_sampling_against_traditional() {
    let cfg: ExperimentConfig = serde_json::from_str(
        r#"{"n": 10, "k": 5, "games": 20, "grid": [0.1, 0.2, 0.3, 0.4, 0.5], "seed": 32, "timing": false,
            "algorithms": ["traditional", "indep"]}"#,
    )
    .unwrap();
    let s = summarize(&cfg, &run_sweep(&cfg).unwrap());
    let mut err = std::io::stderr().lock();
    for (i, q) in s.grid.iter().enumerate() {
        let (t, d) = (s.means["traditional"][i].unwrap(), s.means["indep"][i].unwrap());
        let _ = writeln!(err, "1 - p0 = {q}: traditional {t:.4}, indep {d:.4}");
    }
    let last = s.grid.len() - 1;
    assert!(s.means["indep"][last].unwrap() > s.means["traditional"][last].unwrap());
}

use std::process::Command;

use catbell::ExperimentConfig;

const PIPELINE: &str = r#"{
  "protocol": "full-pipeline",
  "encoding": {"alpha": 2, "beta": 2, "cutoff_a": 24, "cutoff_b": 24, "leak_tol": 1e-4},
  "noise": {"gamma_a": 0.025, "heating": "trajectories", "trajectories": 64},
  "bell": {"mode": "sampled", "shots": 2000},
  "seed": 2024
}"#;

fn run_with_threads(config: &ExperimentConfig, threads: usize) -> String {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    pool.install(|| catbell::protocols::run_protocol(config).unwrap().to_csv())
}

#[test]
fn identical_across_runs_and_thread_counts() {
    let config = ExperimentConfig::from_json(PIPELINE).unwrap();
    let a = run_with_threads(&config, 1);
    let b = run_with_threads(&config, 1);
    let c = run_with_threads(&config, 4);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn binary_output_independent_of_rayon_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.json");
    std::fs::write(&cfg, PIPELINE).unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let out = dir.path().join(threads);
        let status = Command::new(env!("CARGO_BIN_EXE_catbell"))
            .env("RAYON_NUM_THREADS", threads)
            .arg("run")
            .arg(&cfg)
            .arg("--output")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        files.push(std::fs::read(out.join("full-pipeline.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

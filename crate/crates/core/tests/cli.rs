use std::path::Path;
use std::process::{Command, Output};

fn rstre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rstre"))
        .args(args)
        .output()
        .expect("spawn rstre")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_and_sample_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let env_path = dir.path().join("env.txt");
    let o = rstre(&["gen", "--n", "7", "--seed", "3", "--out", path_arg(&env_path)]);
    assert_eq!(code(&o), 0);
    let env = rstre::env::Environment::read_text(std::fs::File::open(&env_path).map(std::io::BufReader::new).unwrap()).unwrap();
    assert_eq!(env, rstre::env::gen_environment(7, 3).unwrap());

    for (sampler, beta) in [("wilson", "boundary"), ("exact", "high"), ("mst", "0")] {
        let tree_path = dir.path().join(format!("{sampler}.txt"));
        let o = rstre(&[
            "sample", "--sampler", sampler, "--beta", beta, "--n", "20", "--seed", "1", "--out",
            path_arg(&tree_path),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(&tree_path).unwrap();
        let t = rstre::tree::SpanningTree::read_text(text.as_bytes()).unwrap();
        assert_eq!(t.n(), 20);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&rstre(&["sample", "--sampler", "bogus", "--n", "5"])), 2);
    assert_eq!(code(&rstre(&["sample", "--n", "1"])), 2);
    assert_eq!(code(&rstre(&["sample", "--beta", "-3", "--n", "5"])), 2);
    assert_eq!(code(&rstre(&["gen"])), 2);
    assert_eq!(code(&rstre(&["sample", "--sampler", "exact", "--n", "40", "--exact-cap", "10"])), 3);
    // the walk is trapped at this disorder
    assert_eq!(code(&rstre(&["sample", "--sampler", "wilson", "--beta", "high", "--n", "20", "--seed", "1"])), 3);
    assert_eq!(code(&rstre(&["walk-stats", "--n", "600", "--beta", "1", "--alpha", "0.1"])), 3);
    assert_eq!(code(&rstre(&["verify", "--level", "medium"])), 2);
    assert_eq!(code(&rstre(&["fit", "--csv", "/nonexistent/file.csv"])), 2);
}

#[test]
fn sweep_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    let csv = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        format!(
            "master_seed = 5\nn_list = 30, 60, 120\nbeta = high\nsampler = mst\nreplicates = 10\np0 = critical:1\nout = {}\n",
            csv.display()
        ),
    )
    .unwrap();
    let o = rstre(&["sweep", "--config", path_arg(&cfg), "--threads", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let first = std::fs::read(&csv).unwrap();
    let o = rstre(&["sweep", "--config", path_arg(&cfg), "--threads", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(&csv).unwrap(), first);

    let o = rstre(&[
        "fit", "--csv", path_arg(&csv), "--filter", "sampler=mst", "--regime", "mst=n>0",
        "--report-dir", path_arg(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["slope"].as_f64().unwrap().is_finite());
    assert!(dir.path().join("mst.dat").exists());

    let o = rstre(&["fit", "--csv", path_arg(&csv), "--filter", "n>100"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("insufficient data"));

    std::fs::write(&cfg, "n_list = 30\nreplicates = zero\n").unwrap();
    assert_eq!(code(&rstre(&["sweep", "--config", path_arg(&cfg)])), 2);
}

#[test]
fn er_and_walk_stats() {
    let o = rstre(&["er-stats", "--n", "2000", "--p", "0.0006", "--seeds", "2", "--top", "2"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("seed,rank,size,excess,diameter,diameter_exact,longest_path,longest_path_exact")
    );
    assert_eq!(lines.count(), 4);

    let o = rstre(&["walk-stats", "--n", "64", "--beta", "low:1/72", "--alpha", "0.05"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["balanced"].as_bool().unwrap());
    assert!(v["tmix"].as_u64().unwrap() >= 1);
}

#[test]
fn verify_fast_passes() {
    let o = rstre(&["verify", "--level", "fast"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
    assert!(v["checks"].as_array().unwrap().len() >= 5);
}

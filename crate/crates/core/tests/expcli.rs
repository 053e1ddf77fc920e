use std::process::Command;

use serde_json::Value;
use wstlab::expcli::{parse_beta_grid, row_seed, ExperimentConfig, GraphSpec};

fn wstlab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wstlab")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn beta_grids() {
    assert_eq!(parse_beta_grid("2,0,1,2").unwrap(), vec![0.0, 1.0, 2.0]);
    let g = parse_beta_grid("1:100:3:log").unwrap();
    assert_eq!(g.len(), 3);
    assert!((g[1] - 10.0).abs() < 1e-9);
    assert_eq!(parse_beta_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
    assert!(parse_beta_grid("-1").is_err());
    assert!(parse_beta_grid("0:1:3:log").is_err());
}

#[test]
fn graph_specs_round_trip() {
    for s in ["complete:10", "complete:10:2.5", "path:7", "triangle-chain:4", "expander:3:2:1", "random:20:5"] {
        let g: GraphSpec = s.parse().unwrap();
        assert_eq!(g.to_string().parse::<GraphSpec>().unwrap(), g);
        assert!(g.build(3).unwrap().vertex_count() > 1);
    }
    assert!("cube:3".parse::<GraphSpec>().is_err());
}

#[test]
fn config_hash_tracks_the_experiment_not_the_output() {
    let mut a = ExperimentConfig::default();
    let base = a.hash();
    a.out = Some("x.csv".into());
    a.set("format", "json").unwrap();
    assert_eq!(a.hash(), base);
    a.set("seed", "2").unwrap();
    assert_ne!(a.hash(), base);
    assert!(a.set("replicas", "0").is_ok() && a.validate().is_err());
    assert!(a.set("colour", "blue").is_err());
    assert_ne!(row_seed(1, 1.0), row_seed(1, 2.0));
}

#[test]
fn sweeps_are_byte_identical_across_runs() {
    let args = ["overlap-sweep", "--graph", "complete:15", "--beta", "0,2,50", "--replicas", "4", "--seed", "9"];
    let (code, first, _) = wstlab(&args);
    assert_eq!(code, 0);
    let (_, second, _) = wstlab(&args);
    assert_eq!(first, second);
    assert!(first.starts_with("# wstlab "));
    assert!(first.contains("beta,estimate,std_error,replicas,row_seed,status"));
    assert!(!first.contains("wall_time"));

    let (code, json, _) = wstlab(&["length-sweep", "--graph", "path:6", "--beta", "1", "--replicas", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert!(v["rows"][0]["small_beta_formula"].is_null());
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# comment\ngraph = complete:8\nbeta = 3\nreplicas = 5\n").unwrap();
    let out = dir.path().join("out.csv");
    let (code, stdout, _) = wstlab(&[
        "census",
        "--config",
        cfg.to_str().unwrap(),
        "--replicas",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# graph=complete:8"));
    assert!(text.contains("# replicas=7"));
    assert!(text.contains("observations=7"));
    assert!(text.contains("# tree=wst\npattern_encoding,"));
}

#[test]
fn gen_sample_edges_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("net.txt");
    let (code, net, _) = wstlab(&["gen", "--graph", "random:12:6", "--seed", "3"]);
    assert_eq!(code, 0);
    std::fs::write(&file, &net).unwrap();
    let spec = format!("file:{}", file.display());

    let (code, tree, _) = wstlab(&["sample", "--graph", &spec]);
    assert_eq!(code, 0);
    assert_eq!(tree.lines().filter(|l| !l.starts_with('#')).count(), 11);

    let (code, table, _) = wstlab(&["edges", "--graph", &spec]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "u,v,c,reff,kirchhoff_p");
    let total: f64 = rows[1..].iter().map(|r| r.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 11.0).abs() < 1e-9);

    let (code, report, err) = wstlab(&["verify", "association"]);
    assert_eq!(code, 0, "{err}");
    assert!(report.contains("suite,check,subject,measured,bound,pass"));
    assert!(!report.contains(",false"));

    let (code, _, err) = wstlab(&["verify", "nothing"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
}

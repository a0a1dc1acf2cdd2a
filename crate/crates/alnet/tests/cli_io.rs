use std::fs;
use std::path::{Path, PathBuf};

use alnet::config::{BondDoc, BondKindDoc, SimDoc, SolitonDoc, SweepDoc, TopologyDoc};
use alnet::{run_cli, run_config, write_outputs, Experiment, Report, RunConfig};
use proptest::prelude::*;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn load(name: &str) -> RunConfig {
    RunConfig::load(&configs().join(name)).unwrap()
}

fn cli(args: &[&str]) -> i32 {
    let mut argv = vec!["alnet"];
    argv.extend_from_slice(args);
    run_cli(argv)
}

#[test]
fn shipped_configs_parse() {
    for entry in fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        RunConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn empty_report_writes_summary_only() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_outputs(&Report::default(), dir.path()).unwrap();
    assert_eq!(m.files, vec![dir.path().join("summary.json")]);
    assert_eq!(fs::read_to_string(&m.files[0]).unwrap(), "{}\n");
}

#[test]
fn fig4_partial_norms_end_at_predicted_fractions() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = load("fig4.json");
    cfg.out_dir = dir.path().to_path_buf();
    let m = run_config(&cfg).unwrap();
    let csv_path = dir.path().join("partial_norms.csv");
    assert!(m.files.contains(&csv_path));
    assert!(m
        .files
        .contains(&dir.path().join("snapshots/t_200.0000.csv")));

    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (f2, f3) = (col("fraction_11"), col("fraction_12"));
    let last = rdr.records().last().unwrap().unwrap();
    let t2: f64 = last[f2].parse().unwrap();
    let t3: f64 = last[f3].parse().unwrap();
    assert!((t2 - 2.0 / 3.0).abs() < 1e-3, "{t2}");
    assert!((t3 - 1.0 / 3.0).abs() < 1e-3, "{t3}");

    // snapshot rows carry every site
    let snap = fs::read_to_string(dir.path().join("snapshots/t_0.0000.csv")).unwrap();
    assert!(snap.starts_with("bond_label,paper_site_index,re,im\n"));
    assert_eq!(snap.lines().count(), 1 + 3 * 400);
}

#[test]
fn sweep_rows_follow_grid_and_are_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = load("sweep.json");
    cfg.out_dir = dir.path().to_path_buf();
    cfg.sweep.ratios = vec![0.2, 0.5, 0.8];
    run_config(&cfg).unwrap();
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    let rows = summary["sweep"].as_array().unwrap();
    let ratios: Vec<f64> = rows.iter().map(|r| r["ratio"].as_f64().unwrap()).collect();
    assert_eq!(ratios, vec![0.2, 0.5, 0.8]);
    let t2: Vec<f64> = rows.iter().map(|r| r["t2"].as_f64().unwrap()).collect();
    assert!(t2.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn conserved_audit_from_cli() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cfg = configs().join("fig4.json");
    let code = cli(&[
        "conserved-audit",
        "--config",
        cfg.to_str().unwrap(),
        "--m-max",
        "3",
        "--out",
        out,
    ]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_path(dir.path().join("drift.csv")).unwrap();
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers,
        ["time", "N", "ReZ", "ImZ", "E", "J", "ReC2", "ImC2", "ReC3", "ImC3"]
    );
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    let first = &rows[0];
    for row in &rows {
        for k in [1, 4, 5] {
            assert!((row[k] - first[k]).abs() / first[k].abs() < 1e-6);
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(cli(&["bifurcation", "--config", "/no/such/file.json"]), 1);
    assert_eq!(cli(&["nonsense"]), 1);

    let fig4 = configs().join("fig4.json");
    let fig4 = fig4.to_str().unwrap();
    assert_eq!(
        cli(&[
            "bifurcation",
            "--config",
            fig4,
            "--t-final",
            "50",
            "--out",
            out
        ]),
        3
    );
    assert_eq!(
        cli(&[
            "simulate",
            "--config",
            fig4,
            "--dt",
            "2.5",
            "--t-final",
            "100",
            "--out",
            out
        ]),
        2
    );
    assert_eq!(
        cli(&["simulate", "--config", fig4, "--dt=-1", "--out", out]),
        1
    );

    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"topology": {"bonds": [{"label": "2", "gamma": 1.0, "kind": "incoming"}]}}"#,
    )
    .unwrap();
    assert_eq!(cli(&["simulate", "--config", bad.to_str().unwrap()]), 1);
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(cli(&["simulate", "--config", bad.to_str().unwrap()]), 1);
}

#[test]
fn internal_bond_without_length_is_rejected() {
    let text = r#"{"topology": {"bonds": [
        {"label": "1", "gamma": 1.0, "kind": "incoming"},
        {"label": "11", "gamma": 2.0, "kind": "internal"},
        {"label": "111", "gamma": 2.0, "kind": "leaf"}]}}"#;
    assert!(RunConfig::from_json(text).is_err());
}

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

prop_compose! {
    fn any_config()(
        g in prop::collection::vec(0.1..10.0f64, 3),
        truncation in 10usize..500,
        alpha in finite(),
        beta in 1e-3..2.0f64,
        n0 in -500.0..0.0f64,
        phi0 in finite(),
        dt in 1e-4..0.1f64,
        t_final in 0.0..500.0f64,
        stride in 1usize..1000,
        m_max in 2usize..8,
        times in prop::collection::vec(0.0..500.0f64, 0..4),
        ratios in prop::collection::vec(0.01..0.99f64, 0..5),
        seed in prop::option::of(any::<u64>()),
        experiment in prop::sample::select(vec![
            Experiment::Simulate, Experiment::Bifurcation, Experiment::Sweep,
            Experiment::BrokenRule, Experiment::ConservedAudit,
        ]),
    ) -> RunConfig {
        let bond = |label: &str, gamma, kind| BondDoc { label: label.into(), gamma, length: None, kind };
        RunConfig {
            experiment,
            topology: TopologyDoc {
                bonds: vec![
                    bond("1", g[0], BondKindDoc::Incoming),
                    BondDoc { length: Some(7), ..bond("11", g[1], BondKindDoc::Internal) },
                    bond("111", g[2], BondKindDoc::Leaf),
                    bond("112", g[2], BondKindDoc::Leaf),
                    bond("12", g[1], BondKindDoc::Leaf),
                ],
                truncation,
            },
            soliton: SolitonDoc { alpha, beta, n0, phi0 },
            sim: SimDoc { dt, t_final, output_stride: stride },
            out_dir: PathBuf::from("some/where"),
            m_max,
            snapshot_times: times,
            sweep: SweepDoc { ratios },
            seed,
        }
    }
}

proptest! {
    #[test]
    fn config_round_trips(cfg in any_config()) {
        let back = RunConfig::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

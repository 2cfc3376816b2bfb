mod common;

use std::collections::BTreeSet;
use std::process::Output;

use valuesift::corpus::{parse_labels, Level};
use valuesift::ensemble::{parse_class_predictions, parse_descriptor_predictions, LabelSpace};
use valuesift::pairgen::read_pairs;

use common::{sha256_file, Fixture};

fn ok(out: &Output) {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn row_sets(path: &std::path::Path, fx: &Fixture) -> Vec<(String, BTreeSet<String>)> {
    let m = parse_labels(std::fs::File::open(path).unwrap(), Level::L2, &fx.taxonomy, "Argument ID").unwrap();
    m.ids().map(|id| (id.to_string(), m.positives(id).map(str::to_string).collect())).collect()
}

fn stub_all(fx: &Fixture, mode: &str) {
    ok(&fx.run(&["stub-predict", "--split", "dev", "--stub-mode", mode]));
}

fn combine(fx: &Fixture, scheme: &str) -> Output {
    let (e, b, r) = (fx.out("entail-dev.tsv"), fx.out("baseline-dev.tsv"), fx.out("reduced-dev.tsv"));
    fx.run(&[
        "combine", "--split", "dev", "--scheme", scheme,
        "--entail", e.to_str().unwrap(),
        "--baseline", b.to_str().unwrap(),
        "--reduced", r.to_str().unwrap(),
    ])
}

#[test]
fn make_pairs_is_deterministic_and_order_independent() {
    let fx = Fixture::new(40, 3);
    ok(&fx.run(&["make-pairs", "--split", "dev"]));
    let first = sha256_file(&fx.out("pairs-dev.tsv"));
    let manifest = std::fs::read_to_string(fx.out("pairs-dev.manifest.json")).unwrap();
    ok(&fx.run(&["make-pairs", "--split", "dev"]));
    assert_eq!(sha256_file(&fx.out("pairs-dev.tsv")), first);
    assert_eq!(std::fs::read_to_string(fx.out("pairs-dev.manifest.json")).unwrap(), manifest);

    let text = std::fs::read_to_string(fx.path("arguments-dev.tsv")).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines[1..].reverse();
    std::fs::write(fx.path("arguments-dev.tsv"), lines.join("\n") + "\n").unwrap();
    ok(&fx.run(&["make-pairs", "--split", "dev"]));
    assert_eq!(sha256_file(&fx.out("pairs-dev.tsv")), first);

    let json: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(json["pair_file_sha256"], first.as_str());
    let pairs = read_pairs(std::fs::File::open(fx.out("pairs-dev.tsv")).unwrap(), &fx.taxonomy).unwrap();
    assert_eq!(json["counts"]["total"], pairs.len());
    assert!(fx.out("config.make-pairs.json").exists());
}

#[test]
fn a_different_seed_changes_negatives_only() {
    let fx = Fixture::new(30, 4);
    ok(&fx.run(&["make-pairs", "--split", "dev", "--seed", "1"]));
    let a = read_pairs(std::fs::File::open(fx.out("pairs-dev.tsv")).unwrap(), &fx.taxonomy).unwrap();
    ok(&fx.run(&["make-pairs", "--split", "dev", "--seed", "2"]));
    let b = read_pairs(std::fs::File::open(fx.out("pairs-dev.tsv")).unwrap(), &fx.taxonomy).unwrap();
    let positives = |v: &[valuesift::pairgen::EntailmentPair]| -> Vec<_> {
        v.iter().filter(|p| p.label).cloned().collect()
    };
    assert_eq!(positives(&a), positives(&b));
    assert_eq!(a.len(), b.len());
    assert_ne!(a, b);
}

#[test]
fn usage_and_data_errors_use_distinct_exit_codes() {
    let fx = Fixture::new(5, 1);
    assert_eq!(fx.run(&["make-pairs"]).status.code(), Some(1));
    assert_eq!(fx.run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fx.run(&["make-pairs", "--split", "test"]).status.code(), Some(1));

    let bad_threshold = fx.run(&[
        "combine", "--split", "dev", "--scheme", "rs1", "--entail-threshold", "1.5", "--entail", "x",
    ]);
    assert_eq!(bad_threshold.status.code(), Some(1));
    assert!(stderr(&bad_threshold).contains("outside [0, 1]"));

    std::fs::write(fx.path("arguments-dev.tsv"), "Argument ID\tConclusion\tStance\n").unwrap();
    let out = fx.run(&["make-pairs", "--split", "dev"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Premise"), "{}", stderr(&out));
}

#[test]
fn missing_config_paths_are_reported() {
    let fx = Fixture::new(5, 1);
    std::fs::remove_file(fx.path("labels-dev.tsv")).unwrap();
    let out = fx.run(&["stats", "--split", "dev"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("labels-dev.tsv"));
}

#[test]
fn combine_names_the_missing_input() {
    let fx = Fixture::new(10, 2);
    stub_all(&fx, "lexical_overlap");
    let e = fx.out("entail-dev.tsv");
    let out = fx.run(&["combine", "--split", "dev", "--scheme", "rs3", "--entail", e.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--reduced"), "{}", stderr(&out));
    let out = fx.run(&["combine", "--split", "dev", "--scheme", "rs4", "--entail", e.to_str().unwrap()]);
    assert!(stderr(&out).contains("--baseline"));
}

#[test]
fn schemes_nest_row_by_row() {
    let fx = Fixture::new(60, 5);
    ok(&fx.run(&["stub-predict", "--split", "dev", "--noise-seed", "9"]));
    for s in ["rs1", "rs2", "rs3", "rs4"] {
        ok(&combine(&fx, s));
    }
    let load = |s: &str| row_sets(&fx.out(&format!("run-{s}-dev.tsv")), &fx);
    let (r1, r2, r3, r4) = (load("rs1"), load("rs2"), load("rs3"), load("rs4"));
    assert_eq!(r1.len(), 60);
    for i in 0..r1.len() {
        assert_eq!(r1[i].0, r2[i].0);
        assert!(r3[i].1.is_subset(&r1[i].1));
        assert!(r1[i].1.is_subset(&r4[i].1));
        assert!(r4[i].1.is_subset(&r2[i].1));
    }
}

#[test]
fn stub_outputs_parse_in_every_mode() {
    for mode in ["lexical_overlap", "constant", "oracle_from_gold"] {
        let fx = Fixture::new(15, 6);
        let mut args = vec!["stub-predict", "--split", "dev", "--stub-mode", mode];
        if mode == "constant" {
            args.extend(["--constant", "0.7"]);
        }
        ok(&fx.run(&args));
        let d = parse_descriptor_predictions(std::fs::File::open(fx.out("entail-dev.tsv")).unwrap(), &fx.taxonomy).unwrap();
        assert_eq!(d.len(), 15 * fx.taxonomy.descriptor_count());
        for (file, space) in [("baseline-dev.tsv", LabelSpace::L2), ("reduced-dev.tsv", LabelSpace::Reduced)] {
            let p = parse_class_predictions(std::fs::File::open(fx.out(file)).unwrap(), space, &fx.taxonomy, "Argument ID").unwrap();
            assert_eq!(p.rows.len(), 15);
        }
    }
}

#[test]
fn constant_mode_requires_a_value() {
    let fx = Fixture::new(3, 1);
    let out = fx.run(&["stub-predict", "--split", "dev", "--stub-mode", "constant"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gold_scored_against_itself_is_perfect() {
    let fx = Fixture::new(200, 7);
    assert!(fx.all_categories_populated());
    let gold = fx.path("labels-dev.tsv");
    let out = fx.run(&["score", "--split", "dev", "--run", gold.to_str().unwrap()]);
    ok(&out);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fx.out("score-labels-dev.json")).unwrap()).unwrap();
    assert_eq!(report["overall_f1"], 1.0);
    assert_eq!(report["per_category"].as_object().unwrap().len(), 20);
    let text = std::fs::read_to_string(fx.out("score-labels-dev.txt")).unwrap();
    assert!(text.contains("All"));
}

#[test]
fn malformed_run_file_reports_its_line() {
    let fx = Fixture::new(4, 1);
    let gold = std::fs::read_to_string(fx.path("labels-dev.tsv")).unwrap();
    let mut lines: Vec<String> = gold.lines().map(str::to_string).collect();
    lines[2] = lines[2].replacen("\t0", "\tyes", 1);
    std::fs::write(fx.path("bad.tsv"), lines.join("\n") + "\n").unwrap();
    let out = fx.run(&["score", "--split", "dev", "--run", fx.path("bad.tsv").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn several_runs_produce_a_comparison() {
    let fx = Fixture::new(50, 8);
    stub_all(&fx, "lexical_overlap");
    ok(&combine(&fx, "rs1"));
    ok(&combine(&fx, "rs2"));
    let (a, b) = (fx.out("run-rs1-dev.tsv"), fx.out("run-rs2-dev.tsv"));
    ok(&fx.run(&["score", "--split", "dev", "--run", a.to_str().unwrap(), "--run", b.to_str().unwrap()]));
    let table = std::fs::read_to_string(fx.out("comparison.txt")).unwrap();
    assert!(table.starts_with("Model"));
    assert!(table.contains("run-rs1-dev") && table.contains("run-rs2-dev"));
}

#[test]
fn export_mapping_lists_every_category_once() {
    let fx = Fixture::new(1, 1);
    ok(&fx.run(&["export-mapping"]));
    let text = std::fs::read_to_string(fx.out("reduced-mapping.tsv")).unwrap();
    let rows: Vec<(&str, &str)> = text.lines().skip(1).map(|l| l.split_once('\t').unwrap()).collect();
    assert_eq!(rows.len(), 20);
    assert_eq!(rows.iter().map(|r| r.1).collect::<BTreeSet<_>>().len(), 12);
}

#[test]
fn stats_prints_prevalence() {
    let fx = Fixture::new(20, 1);
    let out = fx.run(&["stats", "--split", "dev"]);
    ok(&out);
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.contains("20 categories, 54 values"));
    assert!(s.contains("official shape"));
}

#[test]
fn rerunning_a_command_is_byte_identical() {
    let fx = Fixture::new(30, 9);
    stub_all(&fx, "lexical_overlap");
    ok(&combine(&fx, "rs4"));
    let h = sha256_file(&fx.out("run-rs4-dev.tsv"));
    stub_all(&fx, "lexical_overlap");
    ok(&combine(&fx, "rs4"));
    assert_eq!(sha256_file(&fx.out("run-rs4-dev.tsv")), h);
}

#[test]
fn oracle_pipeline_scores_one() {
    let fx = Fixture::new(200, 7);
    assert!(fx.all_categories_populated());
    stub_all(&fx, "oracle_from_gold");
    for s in ["rs1", "rs2", "rs3", "rs4"] {
        ok(&combine(&fx, s));
        let run = fx.out(&format!("run-{s}-dev.tsv"));
        ok(&fx.run(&["score", "--split", "dev", "--run", run.to_str().unwrap()]));
        let report: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(fx.out(&format!("score-run-{s}-dev.json"))).unwrap(),
        )
        .unwrap();
        assert_eq!(report["overall_f1"], 1.0, "{s}");
    }
}

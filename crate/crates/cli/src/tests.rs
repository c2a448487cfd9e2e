use clap::Parser;

use super::*;

fn run_args(args: &[String]) -> (String, i32) {
    let cli = Cli::try_parse_from(args).expect("arguments parse");
    let mut buf = Vec::new();
    let code = run(&cli, &mut buf).expect("command runs");
    (String::from_utf8(buf).expect("utf-8 output"), code)
}

fn args(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

#[test]
fn bundled_examples_match_fixtures() {
    let bless = std::env::var("SHIFTLAB_BLESS").is_ok_and(|v| v == "1");
    for b in bundled::BUNDLED {
        let (text, code) = run_args(&bundled_args(b));
        assert_eq!(code, 0, "{}", b.name);
        if bless {
            let path = format!("{}/bundled/expected/{}.jsonl", env!("CARGO_MANIFEST_DIR"), b.name);
            std::fs::write(path, &text).expect("write fixture");
        } else {
            assert_eq!(text, b.expected, "fixture for {}", b.name);
        }
    }
}

#[test]
fn two_runs_are_byte_identical() {
    for b in bundled::BUNDLED {
        let a = bundled_args(b);
        assert_eq!(run_args(&a).0, run_args(&a).0, "{}", b.name);
    }
}

#[test]
fn golden_mean_entropy_ends_near_0_7057() {
    let (text, _) = run_args(&args(&["shiftlab", "entropy", "--config", "bundled:golden_mean", "--windows", "1..20"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 20);
    let last: Value = serde_json::from_str(lines[19]).unwrap();
    assert_eq!(last["payload"]["count"], json!(17711));
    let est = last["payload"]["estimate"].as_f64().unwrap();
    assert!((est - 17711f64.log2() / 20.0).abs() < 1e-12);
    assert!((est - 0.7057).abs() < 1e-4);
}

#[test]
fn paper_map_goe_is_consistent() {
    let (text, code) = run_args(&args(&["shiftlab", "goe", "--config", "bundled:paper_map"]));
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["payload"]["surjectivity"]["verdict"], "surjective-up-to");
    assert_eq!(v["payload"]["pre_injectivity"]["verdict"], "pre-injective-up-to");
    assert_eq!(v["payload"]["injectivity"]["verdict"], "not-injective");
    assert_eq!(v["payload"]["consistency"], "consistent");
}

#[test]
fn record_fields_keep_their_order() {
    let (text, _) = run_args(&args(&["shiftlab", "check-step", "--config", "bundled:even"]));
    let line = text.lines().next().unwrap();
    let c = line.find("\"command\"").unwrap();
    let h = line.find("\"config_hash\"").unwrap();
    let t = line.find("\"tool_version\"").unwrap();
    let p = line.find("\"payload\"").unwrap();
    assert!(c < h && h < t && t < p);
}

#[test]
fn examples_lists_every_bundled_config() {
    let (text, _) = run_args(&args(&["shiftlab", "examples"]));
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let names: Vec<&str> = rows.iter().map(|r| r["payload"]["name"].as_str().unwrap()).collect();
    for n in ["golden_mean", "even", "gg_mean", "alt_00_11", "f010_111", "paper_map", "dinf_symmetric_rule"] {
        assert!(names.contains(&n), "{n}");
    }
    let even = rows.iter().find(|r| r["payload"]["name"] == "even").unwrap();
    assert_eq!(even["payload"]["finite_type"], json!(false));
    let golden = rows.iter().find(|r| r["payload"]["name"] == "golden_mean").unwrap();
    assert_eq!(golden["payload"]["finite_type"], json!(true));
}

#[test]
fn empty_config_is_a_schema_error() {
    let dir = std::env::temp_dir().join(format!("shiftlab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty.toml");
    std::fs::write(&path, "").unwrap();
    let cli = Cli::try_parse_from(["shiftlab", "entropy", "--config", path.to_str().unwrap()]).unwrap();
    let err = run(&cli, &mut Vec::new()).unwrap_err();
    assert!(matches!(err, CliError::Config { .. }), "{err}");
    assert!(err.to_string().contains("space"), "{err}");
}

#[test]
fn unknown_bundled_name_is_reported() {
    let cli = Cli::try_parse_from(["shiftlab", "goe", "--config", "bundled:nope"]).unwrap();
    let err = run(&cli, &mut Vec::new()).unwrap_err();
    assert!(err.to_string().contains("nope"));
}

#[test]
fn goe_without_rule_names_the_problem() {
    let cli = Cli::try_parse_from(["shiftlab", "goe", "--config", "bundled:golden_mean"]).unwrap();
    let err = run(&cli, &mut Vec::new()).unwrap_err();
    assert!(err.to_string().contains("[rule]"));
}

#[test]
fn tile_on_z_has_spacing_five() {
    let (text, code) = run_args(&args(&[
        "shiftlab", "tile", "--space", "Z", "--theta", "1", "--kappa", "2", "--radius", "20",
    ]));
    assert_eq!(code, 0);
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let points: Vec<i64> = rows[..rows.len() - 1]
        .iter()
        .map(|r| r["payload"]["point"].as_str().unwrap().parse().unwrap())
        .collect();
    let mut sorted = points.clone();
    sorted.sort();
    assert_eq!(sorted, (-4..=4).map(|k| 5 * k).collect::<Vec<i64>>());
    let verdict = &rows.last().unwrap()["payload"];
    assert_eq!(verdict["passes"], json!(true));
    assert_eq!(verdict["theta_prime"], json!(8));
}

#[test]
fn glue_replaces_the_piece() {
    let (text, _) = run_args(&args(&[
        "shiftlab", "glue", "--config", "bundled:golden_mean", "--kappa", "1", "--base", "000000000", "--piece",
        "4@000010000",
    ]));
    let v: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["payload"]["result"], "0:000010000");
    assert_eq!(v["payload"]["locally_admissible"], json!(true));
}

#[test]
fn table_output_is_aligned() {
    let cli = Cli::try_parse_from(["shiftlab", "--out", "table", "entropy", "--config", "bundled:golden_mean", "--windows", "1..4"])
        .unwrap();
    let mut buf = Vec::new();
    run(&cli, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("count"));
    let col = lines[0].find("estimate").unwrap();
    for l in &lines[1..] {
        assert_ne!(l.as_bytes()[col], b' ');
        assert_eq!(l.as_bytes()[col - 1], b' ');
    }
}

//! End-to-end tests of the mvhr binary: exit codes, report files, exact
//! output.

use std::path::PathBuf;
use std::process::Command;

fn mvhr() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mvhr"))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mvhr-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const SQUARE: &str = r#"{"dim":2,"kind":"zonotope","data":[["1","0"],["0","1"]]}"#;
const SEG_E1: &str = r#"{"dim":2,"kind":"zonotope","data":[["1","0"]]}"#;
const SEG_E2: &str = r#"{"dim":2,"kind":"zonotope","data":[["0","1"]]}"#;
const SEG_DIAG: &str = r#"{"dim":2,"kind":"zonotope","data":[["1","1"]]}"#;

#[test]
fn mv_square_repeated_is_one() {
    let out = mvhr()
        .args(["mv", "--body", SQUARE, "--mult", "2", "--body", SQUARE, "--mult", "0"])
        .output()
        .unwrap();
    // zero multiplicity is invalid input
    assert_eq!(out.status.code(), Some(2));

    let out = mvhr()
        .args(["mv", "--body", SQUARE, "--mult", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("1"));
    assert_eq!(lines.next(), Some("1"));
}

#[test]
fn mv_unit_segments_give_one_half() {
    let out = mvhr()
        .args(["mv", "--body", SEG_E1, "--body", SEG_E2])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("1/2\n0.5\n"), "{stdout}");
}

#[test]
fn mv_square_with_diagonal_segment() {
    let out = mvhr()
        .args(["mv", "--body", SQUARE, "--body", SEG_DIAG])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("1\n"), "{stdout}");
    assert!(stdout.contains("polarization agrees"), "{stdout}");
}

#[test]
fn mv_reads_body_files() {
    let path = write_temp("square.json", SQUARE);
    let out = mvhr()
        .args(["mv", "--body", path.to_str().unwrap(), "--mult", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn measure_identical_and_swapped_tuples_are_equal() {
    let k1 = r#"{"dim":4,"kind":"zonotope","data":[["1","0","0","0"],["0","1","0","0"],["1","1","1","0"],["0","0","1","1"]]}"#;
    let k2 = r#"{"dim":4,"kind":"zonotope","data":[["0","0","1","0"],["0","1","1","0"],["1","0","0","1"],["0","0","0","1"]]}"#;
    let out = mvhr()
        .args([
            "measure", "--left", k1, "--left", k2, "--right", k2, "--right", k1, "--n", "4",
            "--m", "5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "equal");
}

#[test]
fn measure_detects_rescaling_with_differing_atom() {
    let k = r#"{"dim":2,"kind":"zonotope","data":[["1","0"],["0","1"]]}"#;
    let k2 = r#"{"dim":2,"kind":"zonotope","data":[["2","0"],["0","2"]]}"#;
    let out = mvhr()
        .args(["measure", "--left", k, "--right", k2, "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("unequal"), "{stdout}");
    assert!(stdout.contains("direction"), "{stdout}");
}

#[test]
fn suite_empty_checks_list_reports_nothing() {
    let config = r#"{"n":2,"m":[4,8],"seed":1,"checks":[]}"#;
    let path = write_temp("empty.json", config);
    let out = mvhr()
        .args(["suite", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("0 checks"), "{stdout}");
}

#[test]
fn suite_rejects_decreasing_resolutions() {
    let config = r#"{"n":2,"m":[16,8],"seed":1,"checks":[]}"#;
    let path = write_temp("decreasing.json", config);
    let out = mvhr()
        .args(["suite", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("config field m"), "{stderr}");
}

#[test]
fn suite_rejects_unknown_check_id() {
    let config = r#"{"n":2,"m":[8],"seed":1,"checks":[{"id":"no-such-check"}]}"#;
    let path = write_temp("unknown.json", config);
    let out = mvhr()
        .args(["suite", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("checks"), "{stderr}");
}

#[test]
fn suite_writes_matching_json_and_csv_reports() {
    let outdir = std::env::temp_dir().join(format!("mvhr-suite-out-{}", std::process::id()));
    let config = format!(
        r#"{{"n":2,"m":[4,6],"seed":7,"checks":[{{"id":"odd-reflection"}},{{"id":"even-sum"}}],"out":{:?},"format":"both"}}"#,
        outdir.to_str().unwrap()
    );
    let path = write_temp("small.json", &config);
    let out = mvhr()
        .args(["suite", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(outdir.join("report.json")).unwrap())
            .unwrap();
    let results = json["results"].as_array().unwrap();
    let csv = std::fs::read_to_string(outdir.join("report.csv")).unwrap();
    let csv_rows: Vec<&str> = csv.lines().skip(1).filter(|l| !l.is_empty()).collect();
    assert_eq!(results.len(), csv_rows.len());
    // identical numeric content between formats
    for (r, row) in results.iter().zip(&csv_rows) {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(r["id"].as_str().unwrap(), cells[0]);
        assert_eq!(r["lhs"].as_str().unwrap(), cells[5]);
        assert_eq!(r["rhs"].as_str().unwrap(), cells[6]);
        assert_eq!(r["deficit"].as_str().unwrap(), cells[7]);
        assert_eq!(r["tolerance"].as_str().unwrap(), cells[8]);
        assert_eq!(r["verdict"].as_str().unwrap(), cells[9]);
    }
}

#[test]
fn suite_reports_are_reproducible_for_a_seed() {
    let run = |dir: &str| {
        let outdir = std::env::temp_dir().join(format!(
            "mvhr-repro-{}-{dir}",
            std::process::id()
        ));
        let config = format!(
            r#"{{"n":2,"m":[4,6],"seed":11,"checks":[{{"id":"even-sum"}}],"out":{:?},"format":"json"}}"#,
            outdir.to_str().unwrap()
        );
        let path = write_temp(&format!("repro-{dir}.json"), &config);
        let out = mvhr()
            .args(["suite", "--config", path.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        let mut json: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(outdir.join("report.json")).unwrap())
                .unwrap();
        // strip the timing fields, the only nondeterministic content
        json.as_object_mut().unwrap().remove("total_millis");
        for r in json["results"].as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("millis");
        }
        json
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn check_subcommand_runs_single_check() {
    let out = mvhr()
        .args(["check", "odd-reflection", "--n", "2", "--m", "6", "--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("odd-reflection"), "{stdout}");
    assert!(stdout.contains("verdict=pass"), "{stdout}");
}

#[test]
fn check_subcommand_rejects_bad_dimension() {
    let out = mvhr()
        .args(["check", "measure-equality", "--n", "3", "--m", "6"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn workers_flag_does_not_change_output() {
    let run = |workers: &str| {
        let out = mvhr()
            .args([
                "--workers", workers, "mv", "--body", SQUARE, "--body", SEG_DIAG,
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("1"), run("8"));
}

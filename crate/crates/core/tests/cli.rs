use std::process::{Command, Output};

fn tvq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvq"))
        .args(args)
        .env_remove("TVQ_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_sphere_table() {
    let o = tvq(&["compute", "--manifold", "S3", "--r", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let row = out.lines().find(|l| l.starts_with("3 ")).unwrap();
    let cells: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(cells, ["3", "1", "=1.000", "0", "=0.000", "0", "=0.000", "0.500"]);
}

#[test]
fn default_range_is_three_to_seven() {
    let out = stdout(&tvq(&["compute", "--manifold", "S3", "--format", "csv"]));
    let rs: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(rs, ["3", "4", "5", "6", "7"]);
}

#[test]
fn compute_rp3_csv() {
    let o = tvq(&["compute", "--manifold", "RP3", "--r", "6", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut rdr = out.lines();
    let header: Vec<&str> = rdr.next().unwrap().split(',').collect();
    let row: Vec<&str> = rdr.next().unwrap().split(',').collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("TV_1"), "2q^3-4q");
    assert_eq!(col("TV_1_value"), "-3.464");
    assert_eq!(col("TV_0"), "4");
}

#[test]
fn json_lines_round_trip() {
    let o = tvq(&[
        "compute",
        "--manifold",
        "L(5,2)",
        "--r-range",
        "3:6",
        "--format",
        "json",
        "--workers",
        "2",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    let csv = stdout(&tvq(&[
        "compute",
        "--manifold",
        "L(5,2)",
        "--r-range",
        "3:6",
        "--format",
        "csv",
    ]));
    for (line, row) in lines.iter().zip(csv.lines().skip(1)) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["manifold"], "L(5,2)");
        let tv0 = v["invariants"]["TV_0"]["value_re"].as_f64().unwrap();
        let printed: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!((tv0 - printed).abs() <= 5e-4);
        assert!(v["checks"].as_object().unwrap().values().all(|b| b == true));
        let c = &v["colorings"];
        assert!(c["adm0"].as_u64().unwrap() <= c["admE"].as_u64().unwrap());
    }
}

#[test]
fn bad_triangulation_file_is_a_validation_error() {
    let dir = std::env::temp_dir().join(format!("tvq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("open.tri");
    std::fs::write(&path, "tetrahedra 1\n").unwrap();
    let o = tvq(&["compute", "--input", path.to_str().unwrap(), "--r", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("not glued"), "{err}");

    std::fs::write(&path, "tetrahedra 1\nglue 0 0 0 01x3\n").unwrap();
    let o = tvq(&["compute", "--input", path.to_str().unwrap(), "--r", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 2, column 12"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(
        tvq(&["compute", "--manifold", "S3", "--r", "3", "--r-range", "3:4"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(tvq(&["compute", "--manifold", "S3", "--r", "2"]).status.code(), Some(1));
    assert_eq!(
        tvq(&["compute", "--manifold", "nowhere", "--r", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(tvq(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(tvq(&["--help"]).status.code(), Some(0));
}

#[test]
fn catalog_listing() {
    let o = tvq(&["catalog"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let names: Vec<&str> = out
        .lines()
        .skip(1)
        .filter_map(|l| l.split_whitespace().next())
        .collect();
    for n in ["S3", "RP3", "L(3,1)", "L(13,5)", "S3/Q8"] {
        assert!(names.contains(&n), "{n}");
    }
    let l31 = out.lines().find(|l| l.starts_with("L(3,1)")).unwrap();
    assert!(l31.contains("Z/3"));
    let pos = |n: &str| names.iter().position(|x| *x == n).unwrap();
    assert!(pos("L(3,1)") < pos("L(10,3)"));

    let json = stdout(&tvq(&["catalog", "--format", "json"]));
    assert_eq!(json.lines().count(), names.len());
    for line in json.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
}

#[test]
fn verify_flags_the_misprinted_entries() {
    let o = tvq(&["verify", "--manifold", "L31", "--r-range", "3:7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("FLAG L(3,1) r=7")));
    assert!(out.lines().last().unwrap().ends_with("checks passed"));
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let args = |w: &'static str| ["tables", "--r-range", "3:5", "--workers", w];
    let a = tvq(&args("1"));
    let b = tvq(&args("4"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tables_json_has_one_object_per_line() {
    let o = tvq(&["tables", "--r", "3", "--format", "json"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let objs: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(objs.len() >= 16);
    assert!(objs.iter().all(|v| v["r"] == 3));
}

//! Command-line contract: examples, exit codes, serialization and config handling.

use fracsum::cli::{
    run, EXIT_DOMAIN, EXIT_INSUFFICIENT, EXIT_OK, EXIT_USAGE, PRECISION_CAP_VAR, TABLE_COLUMNS,
};
use fracsum::real::Real;
use num_rational::BigRational;
use proptest::prelude::*;
use serde_json::Value;
use std::io::Write as _;
use std::process::Command;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fracsum").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    out
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn table(text: &str) -> Vec<csv::StringRecord> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().clone();
    assert_eq!(header.iter().collect::<Vec<_>>(), TABLE_COLUMNS);
    reader.records().map(Result::unwrap).collect()
}

fn num(field: &str) -> f64 {
    field.parse().unwrap()
}

#[test]
fn compute_examples() {
    assert_eq!(
        ok(&["compute", "--kind", "f", "--n", "10", "--s", "0", "--mode", "exact"]),
        "577/252\n"
    );
    assert_eq!(
        ok(&["compute", "--kind", "phi", "--n", "1", "--s", "3"]),
        "0\n"
    );
    assert_eq!(
        ok(&["compute", "--kind", "t", "--n", "10", "--s", "0"]),
        "27\n"
    );
    assert_eq!(
        ok(&["compute", "--kind", "poussin", "--n", "10", "--w", "3"]),
        "13/14\n"
    );
    assert_eq!(
        ok(&["compute", "--kind", "pill", "--n", "10", "--beta", "2"]),
        "11/18\n"
    );
    assert_eq!(
        ok(&["compute", "--kind", "phi", "--n", "10", "--s", "2"]),
        "5975/252\n"
    );
    assert_eq!(
        ok(&["compute", "--kind", "f", "--n", "10", "--s", "1", "--mode", "fast"]),
        "13\n"
    );
}

#[test]
fn compute_real_mode_agrees_with_exact() {
    let exact = ok(&["compute", "--kind", "f", "--n", "10", "--s", "0"]);
    assert_eq!(exact.trim(), "577/252");
    let real = ok(&[
        "compute",
        "--kind",
        "f",
        "--n",
        "10",
        "--s",
        "0",
        "--mode",
        "real",
        "--precision",
        "30",
    ]);
    let oracle = Real::from_rational(&BigRational::new(577.into(), 252.into()), 30);
    assert_eq!(real.trim(), oracle.to_decimal_string());
    let v = json(&[
        "compute",
        "--kind",
        "t",
        "--n",
        "10000000000",
        "--s",
        "1",
        "--format",
        "json",
    ]);
    assert!(v["value"].is_string(), "{v}");
}

#[test]
fn verify_dirichlet_at_a_million() {
    let rows = table(&ok(&[
        "verify", "--kind", "f", "--s", "0", "--n", "1000000",
    ]));
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][0], "1000000");
    assert!((num(&rows[0][2]) - 0.4227843351).abs() <= 1e-3);
}

#[test]
fn verify_transform_grid() {
    let rows = table(&ok(&[
        "verify",
        "--kind",
        "phi",
        "--s",
        "2",
        "--grid",
        "10,100,1000",
    ]));
    assert_eq!(
        rows.iter().map(|r| r[0].to_string()).collect::<Vec<_>>(),
        ["10", "100", "1000"]
    );
    let errors: Vec<f64> = rows
        .iter()
        .map(|r| (num(&r[2]) - num(&r[3])).abs())
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    // Exact values are emitted as reduced fractions.
    assert_eq!(&rows[0][1], "5975/252");
    for r in &rows {
        assert!((num(&r[4]) - (num(&r[2]) - num(&r[3]))).abs() < 1e-12);
        let n = num(&r[0]);
        assert!((num(&r[5]) - num(&r[4]) * n.sqrt()).abs() < 1e-9 * n);
    }
}

#[test]
fn verify_progression() {
    let rows = table(&ok(&[
        "verify", "--kind", "poussin", "--w", "3", "--n", "1000000",
    ]));
    assert!((num(&rows[0][2]) - 0.4227843351).abs() <= 1e-2);
}

#[test]
fn verify_json_carries_the_law() {
    let v = json(&[
        "verify", "--kind", "phi", "--s", "3", "--grid", "10,100", "--format", "json",
    ]);
    assert_eq!(v["normalization_exponent"], 3.0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert!(v["rows"][0]["value"].as_str().unwrap().contains('/'));
}

#[test]
fn verify_writes_the_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let p = path.to_str().unwrap();
    let out = ok(&[
        "verify", "--kind", "f", "--s", "1", "--n-min", "10", "--n-max", "1000", "--output", p,
    ]);
    assert!(out.is_empty());
    let rows = table(&std::fs::read_to_string(&path).unwrap());
    let ns: Vec<&str> = rows.iter().map(|r| r.get(0).unwrap()).collect();
    assert_eq!(ns, ["10", "20", "40", "80", "160", "320", "640"]);
}

#[test]
fn fit_examples() {
    let v = json(&[
        "fit", "--kind", "f", "--s", "0", "--n-min", "1024", "--n-max", "4194304",
    ]);
    let theta = v["theta_hat"].as_f64().unwrap();
    assert!(theta > 0.1 && theta < 0.45, "{v}");
    assert_eq!(v["grid"].as_array().unwrap().len(), 13);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixture.csv");
    let mut file = std::fs::File::create(&path).unwrap();
    writeln!(file, "n,residual").unwrap();
    for n in [100u64, 1000, 10_000, 100_000, 1_000_000] {
        let r = if n % 2 == 0 { -2.0 } else { 2.0 } * (n as f64).sqrt();
        writeln!(file, "{n},{r}").unwrap();
    }
    drop(file);
    let v = json(&["fit", "--fixture", path.to_str().unwrap()]);
    assert!(
        (v["theta_hat"].as_f64().unwrap() - 0.5).abs() < 1e-12,
        "{v}"
    );
    assert!((v["log_c"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);

    assert_eq!(call(&["fit", "--grid", "1024,2048"]).0, EXIT_INSUFFICIENT);
    assert_eq!(
        call(&["fit", "--n-min", "1024", "--n-max", "2048"]).0,
        EXIT_INSUFFICIENT
    );
}

#[test]
fn bench_examples() {
    let v = json(&["bench", "--n", "10", "--s", "0"]);
    assert_eq!(v["results_equal"], true);
    assert_eq!(v["value"], 27);
    assert!(v["naive"]["wall_seconds"].is_number());

    let v = json(&["bench", "--kind", "t", "--s", "0", "--n", "1000000000"]);
    assert!(v["naive"].is_null());
    assert!(v["naive_note"].as_str().unwrap().contains("skipped"));
    assert!(v["fast"]["wall_seconds"].as_f64().unwrap() < 1.0, "{v}");

    assert_eq!(call(&["bench", "--kind", "f", "--n", "10"]).0, EXIT_DOMAIN);
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["compute", "--kind", "f", "--n", "0"]).0, EXIT_DOMAIN);
    assert_eq!(
        call(&["compute", "--kind", "phi", "--n", "10", "--s", "0", "--mode", "fast"]).0,
        EXIT_DOMAIN
    );
    assert_eq!(
        call(&["compute", "--kind", "poussin", "--n", "10", "--w", "0"]).0,
        EXIT_DOMAIN
    );
    assert_eq!(call(&["compute", "--n", "10", "--beta", "2"]).0, EXIT_USAGE);
    assert_eq!(
        call(&["compute", "--kind", "f", "--n", "ten"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        call(&["verify", "--n", "10", "--grid", "10,20"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        call(&["verify", "--n-min", "100", "--n-max", "10"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        call(&[
            "verify",
            "--n-min",
            "10",
            "--n-max",
            "100",
            "--grid-ratio",
            "1"
        ])
        .0,
        EXIT_USAGE
    );
    assert_eq!(call(&["constants", "--precision", "5"]).0, EXIT_USAGE);
    assert_eq!(call(&["constants", "--s", "2"]).0, EXIT_USAGE);
    assert_eq!(call(&[]).0, EXIT_USAGE);
    let (code, _, err) = call(&[
        "verify",
        "--kind",
        "phi",
        "--s",
        "3",
        "--n",
        "1000000",
        "--precision",
        "20",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("precision"), "{err}");
}

#[test]
fn constants_listing() {
    let text = ok(&["constants", "--precision", "30"]);
    assert!(text
        .lines()
        .any(|l| l.trim_start().starts_with("gamma") && l.contains("0.57721566490153286060")));
    assert!(text
        .lines()
        .any(|l| l.trim_start().starts_with("zeta(2)") && l.contains("1.6449340668482264364")));
    let single = ok(&["constants", "--kind", "f", "--s", "1", "--precision", "20"]);
    assert!(single.contains("0.17753296657588678"), "{single}");
    let v = json(&["constants", "--format", "json", "--precision", "20"]);
    assert_eq!(v["precision"], 20);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let runs = [
        &[
            "verify",
            "--kind",
            "phi",
            "--s",
            "2",
            "--grid",
            "10,100,1000",
            "--format",
            "json",
        ][..],
        &[
            "verify",
            "--kind",
            "pill",
            "--beta",
            "3",
            "--grid",
            "100,10000,1000000",
        ][..],
        &[
            "fit", "--kind", "f", "--s", "0", "--n-min", "1024", "--n-max", "65536",
        ][..],
        &["constants", "--format", "json"][..],
    ];
    for args in runs {
        assert_eq!(ok(args), ok(args), "{args:?}");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# defaults\nkind = phi\ns = 2\nn = 10\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(ok(&["compute", "--config", p]), "5975/252\n");
    assert_eq!(ok(&["compute", "--config", p, "--s", "1"]), "577/252\n");
    assert_eq!(ok(&["compute", "--n", "1", "--config", p]), "0\n");
    std::fs::write(&path, "kind phi\n").unwrap();
    assert_eq!(call(&["compute", "--config", p]).0, EXIT_USAGE);
    assert_eq!(
        call(&["compute", "--config", "/nonexistent/fracsum.conf"]).0,
        EXIT_USAGE
    );
}

#[test]
fn binary_honours_the_precision_cap() {
    let bin = env!("CARGO_BIN_EXE_fracsum");
    let capped = Command::new(bin)
        .args(["constants", "--precision", "80"])
        .env(PRECISION_CAP_VAR, "60")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("60"));
    let fine = Command::new(bin)
        .args(["constants", "--precision", "50"])
        .env(PRECISION_CAP_VAR, "60")
        .output()
        .unwrap();
    assert_eq!(fine.status.code(), Some(EXIT_OK));
    let domain = Command::new(bin)
        .args(["compute", "--kind", "f", "--n", "0"])
        .output()
        .unwrap();
    assert_eq!(domain.status.code(), Some(EXIT_DOMAIN));
    assert!(domain.stdout.is_empty());
}

fn reparse(field: &str, digits: u32) -> String {
    if field.contains('/') || !field.contains('.') && !field.contains('e') {
        let q: BigRational = field.parse().unwrap();
        q.to_string()
    } else {
        Real::parse(field, digits + 10)
            .unwrap()
            .to_significant(digits)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn csv_round_trips(
        kind in prop::sample::select(vec!["f", "phi", "poussin", "pill"]),
        ns in prop::collection::btree_set(2u64..3000, 1..4),
        p in 1u32..4,
    ) {
        let grid = ns.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let flag = match kind { "poussin" => "--w", "pill" => "--beta", _ => "--s" };
        let p = if kind == "pill" { p + 1 } else { p };
        let text = ok(&["verify", "--kind", kind, flag, &p.to_string(), "--grid", &grid, "--precision", "30"]);
        for row in table(&text) {
            prop_assert!(row[0].parse::<u64>().is_ok());
            for field in row.iter().skip(1) {
                let digits = field.trim_start_matches('-').trim_start_matches("0.").trim_start_matches('0')
                    .chars().take_while(|c| c.is_ascii_digit() || *c == '.').filter(char::is_ascii_digit).count();
                prop_assert_eq!(reparse(field, digits.max(1) as u32), field.to_string());
            }
        }
    }
}

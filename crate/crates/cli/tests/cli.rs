use std::process::{Command, Output};

use serde_json::Value;

/// Splits a command line on whitespace.
fn w(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

fn dcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcat"))
        .args(args)
        .output()
        .expect("dcat runs")
}

fn ok(args: &[&str]) -> String {
    let out = dcat(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    dcat(args).status.code().unwrap()
}

fn json_rows(args: &[&str]) -> Vec<Value> {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    ok(&a)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn f(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("{key} missing in {v}"))
}

fn lambdas(v: &Value) -> Vec<f64> {
    (0..)
        .map_while(|i| v.get(format!("lambda_{i}")).and_then(Value::as_f64))
        .collect()
}

#[test]
fn d2_curve_peaks_at_unit_modulus() {
    let rows = json_rows(&w(
        "grid --dim 2 --particles 6 --traced 1 --range 0:10 --points 101",
    ));
    assert_eq!(rows.len(), 101);
    let at_one = &rows[10];
    assert_eq!(f(at_one, "coord_1"), 1.0);
    assert!((f(at_one, "vonneumann") - 1.0).abs() < 1e-12);
    assert!(rows.iter().all(|r| f(r, "vonneumann") <= 1.0 + 1e-12));
}

#[test]
fn d3_grid_corners() {
    let rows = json_rows(&w(
        "grid --dim 3 --particles 6 --traced 1 --parity 00 --range 0:2 --points 3",
    ));
    assert_eq!(rows.len(), 9);
    assert_eq!((f(&rows[0], "coord_1"), f(&rows[0], "coord_2")), (0.0, 0.0));
    assert_eq!(f(&rows[0], "vonneumann"), 0.0);
    assert_eq!((f(&rows[4], "coord_1"), f(&rows[4], "coord_2")), (1.0, 1.0));
    assert!((f(&rows[4], "vonneumann") - 1.0).abs() < 1e-12);
    // row-major: the last axis varies fastest
    assert_eq!(f(&rows[1], "coord_2"), 1.0);
    assert_eq!(f(&rows[1], "coord_1"), 0.0);
}

#[test]
fn two_point_grid_schema() {
    let text = ok(&w(
        "grid --dim 4 --particles 5 --traced 2 --parity 101 --points 2",
    ));
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let mut want = vec!["coord_1", "coord_2", "coord_3", "c"];
    let lam: Vec<String> = (0..8).map(|i| format!("lambda_{i}")).collect();
    want.extend(lam.iter().map(String::as_str));
    want.extend(["linear", "vonneumann", "rank", "colormap"]);
    assert_eq!(header, want);
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    for r in &rows {
        assert_eq!(r.len(), header.len());
        assert_eq!(r[3], "101");
        let sum: f64 = r[4..12].iter().map(|x| x.parse::<f64>().unwrap()).sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert_eq!(*r.last().unwrap(), "");
    }
}

#[test]
fn json_keys_match_csv_header() {
    let args = ["grid", "--dim", "3", "--points", "2", "--colormap", "dist"];
    let header: Vec<String> = ok(&args)
        .lines()
        .next()
        .unwrap()
        .split(',')
        .map(String::from)
        .collect();
    let rows = json_rows(&args);
    let keys: Vec<String> = rows[0].as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, header);
    // distance to the origin by default
    let last = rows.last().unwrap();
    assert!((f(last, "colormap") - 8f64.sqrt()).abs() < 1e-15);
}

#[test]
fn angular_needs_three_levels() {
    assert_eq!(code(&["angular", "--dim", "2"]), 1);
}

#[test]
fn angular_d4_map() {
    let rows = json_rows(&w("angular --dim 4 --radius 10 --points 5"));
    assert_eq!(rows.len(), 25);
    assert!(rows[0].get("coord_2").is_some() && rows[0].get("coord_3").is_none());
    for r in &rows {
        assert!((lambdas(r).iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn angular_axis_limit_is_a_product_state() {
    let rows = json_rows(&w(
        "angular --dim 3 --particles 6 --traced 2 --points 3 --exact",
    ));
    assert_eq!(f(&rows[0], "coord_1"), 0.0);
    assert!(f(&rows[0], "exact_vonneumann").abs() < 1e-12);
    assert!(f(&rows[2], "exact_vonneumann").abs() < 1e-12);
}

#[test]
fn angular_exact_column_matches_large_radius() {
    let rows = json_rows(&w(
        "angular --dim 3 --particles 6 --traced 1 --points 21 --radius 1000 --exact",
    ));
    let worst = rows
        .iter()
        .filter(|r| !r["exact_vonneumann"].is_null())
        .map(|r| (f(r, "vonneumann") - f(r, "exact_vonneumann")).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{worst:e}");
}

#[test]
fn infodiag_bounds_and_seed() {
    assert_eq!(code(&w("infodiag --dim 3 --samples 10")), 1);
    let rows = json_rows(&w(
        "infodiag --dim 3 --particles 6 --traced 1 --parity 00 --samples 10000 --seed 5",
    ));
    assert_eq!(rows.len(), 10000);
    for r in &rows {
        for key in ["linear", "vonneumann"] {
            let x = f(r, key);
            assert!((0.0..=1.0 + 1e-12).contains(&x), "{key} = {x}");
        }
        for key in ["coord_1", "coord_2"] {
            assert!((0.0..2.0).contains(&f(r, key)));
        }
    }
}

#[test]
fn infodiag_pure_corner_and_sphere() {
    let rows = json_rows(&w("infodiag --dim 3 --range 0:0 --samples 3 --seed 1"));
    assert!(rows
        .iter()
        .all(|r| f(r, "linear") == 0.0 && f(r, "vonneumann") == 0.0));
    let rows = json_rows(&w(
        "infodiag --dim 4 --radius 2 --samples 50 --seed 1 --colormap angle",
    ));
    for r in &rows {
        let norm = (1..=3)
            .map(|i| f(r, &format!("coord_{i}")).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!((norm - 2.0).abs() < 1e-12);
        assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&f(r, "colormap")));
    }
}

#[test]
fn chi2_ranks_span_the_dimension() {
    let rows = json_rows(&w("infodiag --chi2 5 --samples 20000 --seed 3"));
    let mut seen = [0usize; 6];
    for r in &rows {
        let rank = r["rank"].as_u64().unwrap() as usize;
        seen[rank] += 1;
        assert_eq!(lambdas(r).len(), 5);
        assert!((lambdas(r).iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
    assert_eq!(seen[0], 0);
    assert!(seen[1..].iter().all(|n| *n > 3000), "{seen:?}");
}

#[test]
fn rescaled_limit_examples() {
    let rows = json_rows(&w(
        "limit --kind rstl --eta 0.5 --dim 3 --parity 11 --range 2:2 --points 2",
    ));
    for r in &rows {
        assert!(lambdas(r).iter().all(|l| (l - 0.25).abs() < 1e-15));
        assert!((f(r, "vonneumann") - 1.0).abs() < 1e-15);
    }
    let rows = json_rows(&w(
        "limit --kind rstl --eta 0.5 --dim 3 --parity 10 --range 0:3 --points 4",
    ));
    // horizontal isentropic lines: nothing depends on alpha_1
    for r in &rows[4..] {
        let base = &rows[(r["coord_2"].as_f64().unwrap() as usize).min(3)];
        assert_eq!(lambdas(r), lambdas(base));
    }
    assert_eq!(code(&w("limit --kind rstl --dim 3")), 1);
    assert_eq!(code(&w("limit --kind rstl --eta 1.0")), 1);
    assert_eq!(code(&w("limit --kind rstl --eta 0.4")), 1);
}

#[test]
fn thermodynamic_limit_at_origin_is_pure() {
    let rows = json_rows(&w(
        "limit --kind tl --dim 3 --traced 2 --range 0:1 --points 2",
    ));
    assert_eq!(f(&rows[0], "vonneumann"), 0.0);
    assert_eq!(rows[0]["rank"], 1);
    let rows = json_rows(&w("limit --kind dtl --dim 2 --range 0:1 --points 2"));
    assert!((lambdas(&rows[1]).iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn oracle_check_exit_codes() {
    let text = ok(&["oracle-check"]);
    assert_eq!(text.lines().count(), 51);
    assert_eq!(code(&w("oracle-check --cases 5 --corrupt")), 2);
    let rows = json_rows(&w("oracle-check --dim 2 --particles 6 --traced 3 --z 1"));
    assert_eq!(rows.len(), 1);
    assert!(f(&rows[0], "max_deviation") <= 1e-9);
    let z = ["0.5"; 9].join(",");
    let cmd = format!("oracle-check --dim 10 --particles 9 --traced 8 --z {z}");
    assert_eq!(code(&w(&cmd)), 3);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["grid", "--bogus"]), 1);
    assert_eq!(code(&w("grid --dim 3 --parity 1")), 1);
    assert_eq!(code(&["grid", "--parity", "x"]), 1);
    assert_eq!(code(&["grid", "--traced", "6"]), 1);
    assert_eq!(code(&["grid", "--points", "1"]), 1);
    assert_eq!(code(&["grid", "--range", "3:1"]), 1);
    assert_eq!(code(&w("grid --dim 3 --ref 1,2,3 --colormap dist")), 1);
    assert_eq!(code(&w("grid --dim 5 --points 100")), 3);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&[]), 1);
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("sweep.conf");
    std::fs::write(
        &conf,
        "# map\ndim = 3\nparticles = 6\npoints = 2\nformat = json\ncolormap = dist\nref = 5,5\n",
    )
    .unwrap();
    let conf = conf.to_str().unwrap();
    let rows: Vec<Value> = ok(&["grid", "--config", conf])
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!((f(&rows[0], "colormap") - 50f64.sqrt()).abs() < 1e-12);
    let text = ok(&[
        "grid", "--config", conf, "--ref", "0,0", "--format", "csv", "--points", "3",
    ]);
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().nth(1).unwrap().ends_with(",0.0"));
    assert_eq!(code(&["grid", "--config", "/nonexistent.conf"]), 1);
}

#[test]
fn output_file_and_worker_independence() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = [
        "angular", "--dim", "3", "--points", "40", "--exact", "--out",
    ];
    let mut one = args.to_vec();
    one.extend([a.to_str().unwrap(), "--workers", "1"]);
    let mut many = args.to_vec();
    many.extend([b.to_str().unwrap(), "--workers", "6"]);
    assert_eq!(ok(&one), "");
    ok(&many);
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert_eq!(code(&["grid", "--workers", "0"]), 1);
}

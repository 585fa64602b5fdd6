#![allow(clippy::excessive_precision)]

use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspquad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, String) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    (serde_json::from_str(text.trim()).unwrap(), text)
}

fn samples(csv: &str) -> Vec<[f64; 3]> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect()
}

#[test]
fn table_row_refined_and_json_round_trip() {
    let (v, text) = json(&[
        "modulus", "--alpha", "pi/5", "--j", "3", "--refine", "--json",
    ]);
    let m = v["modulus"].as_f64().unwrap();
    assert!((m - 0.79679236427334).abs() < 1e-8, "{m}");
    assert_eq!(v["input"]["refined"], Value::Bool(true));
    assert!(v["wall_time_ms"].is_null());
    let again = serde_json::to_string(&v).unwrap();
    assert_eq!(again, text.trim());
}

#[test]
fn identical_runs_serialize_identically() {
    let args = ["modulus", "--alpha", "2*pi/10", "--j", "3", "--json"];
    let (_, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(a, b);
    let (_, c) = json(&[
        "modulus",
        "--alpha",
        "0.6283185307179586",
        "--j",
        "3",
        "--json",
    ]);
    assert_eq!(a, c);
}

#[test]
fn symmetric_circles_give_one() {
    let (v, _) = json(&[
        "modulus",
        "--t",
        "1.41421356",
        "--s",
        "1.41421356",
        "--r1",
        "1",
        "--r2",
        "1",
        "--json",
    ]);
    assert_eq!(v["modulus"].as_f64().unwrap(), 1.0);
}

#[test]
fn published_listing_inputs() {
    let (v, _) = json(&[
        "modulus",
        "--t",
        "2.0174131664886366",
        "--s",
        "1.1416407864998739",
        "--r1",
        "1.642663833605752",
        "--r2",
        "0.6753740370343625",
        "--json",
    ]);
    assert!((v["modulus"].as_f64().unwrap() - 1.25503).abs() < 1e-4);
    assert!((v["beta"].as_f64().unwrap() - 1.02791).abs() < 1e-4);
    assert!((v["gamma"].as_f64().unwrap() - 0.440765).abs() < 1e-4);
    assert_eq!(v["iterations"]["swapped"], Value::Bool(true));

    let (c, _) = json(&[
        "modulus",
        "--t",
        "2.0174131664886366",
        "--s",
        "1.1416407864998739",
        "--r1",
        "1.642663833605752",
        "--r2",
        "0.6753740370343625",
        "--conjugate",
        "--json",
    ]);
    assert!((c["modulus"].as_f64().unwrap() - 0.79679236427334).abs() < 1e-6);
}

#[test]
fn invalid_geometry_exits_2_naming_the_invariant() {
    let o = run(&["modulus", "--t", "1", "--s", "1", "--r1", "1", "--r2", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("tangency"), "{}", stderr(&o));

    let o = run(&["modulus", "--t", "1", "--alpha", "pi/5", "--j", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["modulus", "--alpha", "pi/5", "--j", "6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["modulus", "--alpha", "pi/x", "--j", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_is_validated_and_applied() {
    let dir = std::env::temp_dir().join(format!("cuspquad-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let bad = dir.join("bad.toml");
    std::fs::File::create(&bad)
        .unwrap()
        .write_all(b"iters_beta = 0\n")
        .unwrap();
    let o = run(&[
        "modulus",
        "--alpha",
        "pi/5",
        "--j",
        "3",
        "--config",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    let unknown = dir.join("unknown.toml");
    std::fs::File::create(&unknown)
        .unwrap()
        .write_all(b"iters_delta = 3\n")
        .unwrap();
    let o = run(&[
        "modulus",
        "--alpha",
        "pi/5",
        "--j",
        "3",
        "--config",
        unknown.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));

    // Seeds that cannot straddle the sign change of S: a solver failure.
    let seeds = dir.join("seeds.toml");
    std::fs::File::create(&seeds)
        .unwrap()
        .write_all(b"gamma_seed_low = [5.0, 0.0]\n")
        .unwrap();
    let o = run(&[
        "modulus",
        "--alpha",
        "pi/5",
        "--j",
        "3",
        "--config",
        seeds.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));

    // Flags override the file.
    let iters = dir.join("iters.toml");
    std::fs::File::create(&iters)
        .unwrap()
        .write_all(b"iters_beta = 12\n")
        .unwrap();
    let (v, _) = json(&[
        "modulus",
        "--alpha",
        "pi/5",
        "--j",
        "3",
        "--config",
        iters.to_str().unwrap(),
        "--iters-beta",
        "20",
        "--json",
    ]);
    assert_eq!(v["iterations"]["beta"].as_u64(), Some(20));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn ngon_exact_values() {
    let (v, _) = json(&[
        "ngon",
        "--family",
        "hexagon",
        "--vertices",
        "A,B,D,E",
        "--json",
    ]);
    assert!((v["modulus"].as_f64().unwrap() - 0.92401502327430725964).abs() < 1e-12);
    let (v, _) = json(&[
        "ngon",
        "--family",
        "pn",
        "--n",
        "4",
        "--vertices",
        "0,1,2,3",
        "--json",
    ]);
    assert!((v["modulus"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let (v, _) = json(&[
        "ngon",
        "--family",
        "pn",
        "--n",
        "6",
        "--vertices",
        "0,2,4,5",
        "--json",
    ]);
    assert!((v["modulus"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    for bad in [
        vec![
            "ngon",
            "--family",
            "pn",
            "--n",
            "6",
            "--vertices",
            "0,2,4,9",
        ],
        vec![
            "ngon",
            "--family",
            "pn",
            "--n",
            "6",
            "--vertices",
            "2,0,4,5",
        ],
        vec!["ngon", "--family", "pn", "--vertices", "0,1,2,3"],
        vec!["ngon", "--family", "hexagon", "--vertices", "A,D,B,E"],
        vec!["ngon", "--family", "hexagon", "--vertices", "A,B,G,E"],
        vec!["ngon", "--family", "hexagon", "--vertices", "A,B,D"],
    ] {
        assert_eq!(run(&bad).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn render_header_only_for_zero_samples() {
    let o = run(&["render", "--beta", "pi/4", "--gamma", "0", "--samples", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "theta,re_f,im_f\n");
}

#[test]
fn render_symmetric_case_has_fourfold_symmetry() {
    let o = run(&["render", "--alpha", "pi/4", "--j", "5", "--samples", "64"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let pts = samples(&stdout(&o));
    // θ = kπ/32: none of these lies near the directions ±π/4 + kπ except the
    // exact ones, which are excluded.
    assert_eq!(pts.len(), 60);
    let at = |theta: f64| {
        pts.iter()
            .find(|p| (p[0] - theta).abs() < 1e-12)
            .map(|p| (p[1], p[2]))
    };
    let mut checked = 0;
    for p in &pts {
        if let Some((re, im)) = at(p[0] + std::f64::consts::FRAC_PI_2) {
            // f(iz) = i f(z).
            assert!(
                (re + p[2]).abs() < 1e-8 && (im - p[1]).abs() < 1e-8,
                "{p:?}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 40);
}

#[test]
fn render_right_arc_is_one_circle() {
    let o = run(&[
        "render",
        "--t",
        "1.224744871391589",
        "--s",
        "1.7320508075688772",
        "--r1",
        "0.7071067811865476",
        "--r2",
        "1.4142135623730951",
        "--samples",
        "720",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let beta = (1.0_f64 / 3.0).asin();
    let arc: Vec<[f64; 3]> = samples(&stdout(&o))
        .into_iter()
        .filter(|p| {
            let th = if p[0] > std::f64::consts::PI {
                p[0] - 2.0 * std::f64::consts::PI
            } else {
                p[0]
            };
            th.abs() < beta - 2e-3
        })
        .collect();
    assert!(arc.len() > 50);
    // Circumcircle of three spread-out samples.
    let (a, b, c) = (arc[0], arc[arc.len() / 3], arc[2 * arc.len() / 3]);
    let d = 2.0 * (a[1] * (b[2] - c[2]) + b[1] * (c[2] - a[2]) + c[1] * (a[2] - b[2]));
    let n = |p: [f64; 3]| p[1] * p[1] + p[2] * p[2];
    let ux = (n(a) * (b[2] - c[2]) + n(b) * (c[2] - a[2]) + n(c) * (a[2] - b[2])) / d;
    let uy = (n(a) * (c[1] - b[1]) + n(b) * (a[1] - c[1]) + n(c) * (b[1] - a[1])) / d;
    let r = (a[1] - ux).hypot(a[2] - uy);
    let worst = arc
        .iter()
        .map(|p| ((p[1] - ux).hypot(p[2] - uy) - r).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst:e}");
}

#[test]
fn table_parallel_matches_serial() {
    let serial = run(&["table"]);
    let parallel = run(&["table", "--parallel"]);
    assert_eq!(serial.status.code(), Some(0), "{}", stderr(&serial));
    assert_eq!(stdout(&serial), stdout(&parallel));
    let text = stdout(&serial);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.ends_with(",ok")));
    let max_dev: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# max_abs_deviation_standard = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(max_dev <= 1e-6, "{max_dev}");
    // 17 significant digits.
    let first: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(
        first[2]
            .split('e')
            .next()
            .unwrap()
            .replace(['.', '-'], "")
            .len(),
        17
    );
}

#[test]
fn benchmark_passes() {
    let o = run(&["benchmark"]);
    assert_eq!(o.status.code(), Some(0), "{}\n{}", stdout(&o), stderr(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = run(&["benchmark", "--fixtures-json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 45);
}

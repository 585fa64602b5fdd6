use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use cuspquad::benchmarks::{
    exact_case_q4, fixtures_json, hexagon_abde_closed_form, hexagon_case, hexagon_disk_map,
    hexagon_selections, pn_case, HexVertex, HEXAGON_ABDE_MODULUS, TABLE1,
};
use cuspquad::schwarz_ode::{distance_to_singular_direction, solve_ray};
use cuspquad::solver::{error_number, reciprocal_check, refine, solve_beta};
use cuspquad::{ModulusResult, QuadrilateralSpec, SchwarzParams, SolverConfig};
use rayon::prelude::*;

use crate::config::ConfigFile;
use crate::record::{InputEcho, OutputRecord};
use crate::{CliError, Family, SolverArgs, SpecArgs, TableFormat};

/// Relative tangency tolerance for circle data typed on the command line.
const CLI_TANGENCY_TOL: f64 = 1e-6;
/// Half-width of the angular neighbourhoods of the vertex directions left
/// out by `render`.
const RENDER_EXCLUSION: f64 = 1e-3;

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn solver_config(args: &SolverArgs) -> Result<SolverConfig, CliError> {
    let mut c = SolverConfig::default();
    if let Some(path) = &args.config {
        ConfigFile::load(path)
            .map_err(CliError::Input)?
            .apply(&mut c);
    }
    if let Some(tol) = args.tol_ode {
        c.ode_tol.rel_tol = tol;
        c.ode_tol.abs_tol = tol;
    }
    c.iters_beta = args.iters_beta.unwrap_or(c.iters_beta);
    c.iters_gamma = args.iters_gamma.unwrap_or(c.iters_gamma);
    c.iters_bracket = args.iters_bracket.unwrap_or(c.iters_bracket);
    c.refine_eps = args.refine_eps.unwrap_or(c.refine_eps);
    c.validate()?;
    Ok(c)
}

/// The quadrilateral named by the flags, with `(alpha, j)` when given that way.
fn resolve_spec(
    args: &SpecArgs,
) -> Result<(QuadrilateralSpec, Option<f64>, Option<u32>), CliError> {
    let circles = [args.t, args.s, args.r1, args.r2];
    let n_circles = circles.iter().filter(|v| v.is_some()).count();
    match (args.alpha, args.j, n_circles) {
        (Some(alpha), Some(j), 0) => Ok((
            QuadrilateralSpec::from_alpha_j(alpha, j)?,
            Some(alpha),
            Some(j),
        )),
        (None, None, 4) => {
            let [t, s, r1, r2] = circles.map(Option::unwrap);
            Ok((
                QuadrilateralSpec::with_tangency_tol(t, s, r1, r2, CLI_TANGENCY_TOL)?,
                None,
                None,
            ))
        }
        _ => Err(CliError::Input(
            "give either all of --t --s --r1 --r2 or both --alpha and --j".into(),
        )),
    }
}

pub fn modulus(
    spec_args: &SpecArgs,
    solver: &SolverArgs,
    refined: bool,
    conjugate: bool,
    json: bool,
    timing: bool,
) -> Result<(), CliError> {
    let config = solver_config(solver)?;
    let (spec, alpha, j) = resolve_spec(spec_args)?;
    let target = if conjugate { spec.swapped() } else { spec };
    let check = reciprocal_check(&target, &config, refined)?;
    let record = OutputRecord::from_solve(&spec, alpha, j, conjugate, &check, timing);
    if json {
        println!(
            "{}",
            serde_json::to_string(&record).expect("record serializes")
        );
    } else {
        print!("{}", record.to_text());
    }
    Ok(())
}

struct TableRow {
    n: u32,
    j: u32,
    expected: f64,
    outcome: Result<RowValues, String>,
}

struct RowValues {
    standard: ModulusResult,
    refined: Option<ModulusResult>,
    reciprocal_error: f64,
    wall_time_ms: f64,
}

impl RowValues {
    fn reported(&self) -> &ModulusResult {
        self.refined.as_ref().unwrap_or(&self.standard)
    }
}

fn table_row(n: u32, j: u32, config: &SolverConfig, refined: bool) -> Result<RowValues, String> {
    let started = Instant::now();
    let run = || -> cuspquad::Result<RowValues> {
        let spec = QuadrilateralSpec::from_alpha_j(PI / n as f64, j)?;
        let conj = spec.swapped();
        let standard = solve_beta(&spec, config)?;
        let conj_standard = solve_beta(&conj, config)?;
        let (refined, eps_r) = if refined {
            let r = refine(&standard, &spec, config, &config.refined_ode_tol)?;
            let rc = refine(&conj_standard, &conj, config, &config.refined_ode_tol)?;
            let eps = (1.0 - r.modulus * rc.modulus).abs();
            (Some(r), eps)
        } else {
            (None, (1.0 - standard.modulus * conj_standard.modulus).abs())
        };
        Ok(RowValues {
            standard,
            refined,
            reciprocal_error: eps_r,
            wall_time_ms: 0.0,
        })
    };
    let mut values = run().map_err(|e| e.to_string())?;
    values.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(values)
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

pub fn table(
    solver: &SolverArgs,
    refined: bool,
    parallel: bool,
    format: TableFormat,
    timing: bool,
) -> Result<(), CliError> {
    let config = solver_config(solver)?;
    let compute = |&(n, j, expected): &(u32, u32, f64)| TableRow {
        n,
        j,
        expected,
        outcome: table_row(n, j, &config, refined),
    };
    let rows: Vec<TableRow> = if parallel {
        TABLE1.par_iter().map(compute).collect()
    } else {
        TABLE1.iter().map(compute).collect()
    };

    let mut header = vec![
        "alpha",
        "j",
        "modulus_standard",
        "modulus_refined",
        "beta",
        "gamma",
        "reciprocal_error",
        "expected",
        "deviation",
    ];
    if timing {
        header.push("wall_time_ms");
    }
    header.push("status");

    let mut out = String::new();
    let mut failures = 0;
    let mut max_std = 0.0_f64;
    let mut max_ref = 0.0_f64;
    let sep = match format {
        TableFormat::Csv => ",",
        TableFormat::Markdown => " | ",
    };
    let line = |cells: &[String]| match format {
        TableFormat::Csv => format!("{}\n", cells.join(sep)),
        TableFormat::Markdown => format!("| {} |\n", cells.join(sep)),
    };
    out.push_str(&line(
        &header.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    ));
    if format == TableFormat::Markdown {
        out.push_str(&line(&vec!["---".to_string(); header.len()]));
    }
    for row in &rows {
        let alpha = PI / row.n as f64;
        let mut cells = vec![sci(alpha), row.j.to_string()];
        match &row.outcome {
            Ok(v) => {
                let r = v.reported();
                let deviation = (r.modulus - row.expected).abs();
                max_std = max_std.max((v.standard.modulus - row.expected).abs());
                if let Some(rr) = &v.refined {
                    max_ref = max_ref.max((rr.modulus - row.expected).abs());
                }
                cells.extend([
                    sci(v.standard.modulus),
                    v.refined
                        .as_ref()
                        .map(|x| sci(x.modulus))
                        .unwrap_or_default(),
                    sci(r.beta),
                    sci(r.gamma),
                    sci(v.reciprocal_error),
                    sci(row.expected),
                    sci(deviation),
                ]);
                if timing {
                    cells.push(format!("{:.3}", v.wall_time_ms));
                }
                cells.push("ok".into());
            }
            Err(msg) => {
                failures += 1;
                cells.extend(std::iter::repeat_n(String::new(), 5));
                cells.push(sci(row.expected));
                cells.push(String::new());
                if timing {
                    cells.push(String::new());
                }
                cells.push(match format {
                    TableFormat::Csv => csv_quote(msg),
                    TableFormat::Markdown => msg.replace('|', "/"),
                });
            }
        }
        out.push_str(&line(&cells));
    }
    let _ = writeln!(out, "# max_abs_deviation_standard = {}", sci(max_std));
    if refined {
        let _ = writeln!(out, "# max_abs_deviation_refined = {}", sci(max_ref));
    }
    print!("{out}");
    if failures > 0 {
        return Err(CliError::Solver(format!(
            "{failures} of {} rows failed",
            rows.len()
        )));
    }
    Ok(())
}

/// Collects named checks and prints one line per check.
struct Report {
    failed: Vec<String>,
}

impl Report {
    fn check(&mut self, name: &str, error: f64, tol: f64) {
        let ok = error <= tol;
        println!(
            "{} {name}: error {error:.3e} (tolerance {tol:.0e})",
            if ok { "PASS" } else { "FAIL" }
        );
        if !ok {
            self.failed.push(name.to_string());
        }
    }
}

pub fn benchmark(solver: &SolverArgs, refined: bool, fixtures: bool) -> Result<(), CliError> {
    if fixtures {
        println!("{}", fixtures_json());
        return Ok(());
    }
    let config = solver_config(solver)?;
    let mut report = Report { failed: Vec::new() };

    let q4 = exact_case_q4();
    let spec = q4.spec().expect("q4 is a quadrilateral");
    let std_res = solve_beta(spec, &config)?;
    report.check(
        "q4 standard modulus",
        (std_res.modulus - q4.expected_modulus).abs(),
        1e-6,
    );
    report.check(
        "q4 standard sin(beta)",
        (std_res.beta.sin() - 1.0 / 3.0).abs(),
        1e-6,
    );
    report.check("q4 standard gamma", (std_res.gamma - 2.0 / 3.0).abs(), 1e-6);
    if refined {
        let r = refine(&std_res, spec, &config, &config.refined_ode_tol)?;
        report.check(
            "q4 refined modulus",
            (r.modulus - q4.expected_modulus).abs(),
            1e-9,
        );
        report.check(
            "q4 refined sin(beta)",
            (r.beta.sin() - 1.0 / 3.0).abs(),
            1e-9,
        );
        report.check("q4 refined gamma", (r.gamma - 2.0 / 3.0).abs(), 1e-9);
    }

    use HexVertex::*;
    let abde = hexagon_case([A, B, D, E])?;
    let exact = abde.half_plane_modulus().expect("half-plane case")?;
    report.check("hexagon ABDE", (exact - HEXAGON_ABDE_MODULUS).abs(), 1e-12);
    report.check(
        "hexagon ABDE closed form",
        (hexagon_abde_closed_form() - HEXAGON_ABDE_MODULUS).abs(),
        1e-12,
    );
    let conj_worst = hexagon_selections()
        .into_iter()
        .map(|[a, b, c, d]| -> cuspquad::Result<f64> {
            let m = hexagon_case([a, b, c, d])?.expected_modulus;
            let mc = hexagon_case([b, c, d, a])?.expected_modulus;
            Ok((m * mc - 1.0).abs())
        })
        .collect::<cuspquad::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    report.check(
        "hexagon conjugate products (15 selections)",
        conj_worst,
        1e-12,
    );
    let map = hexagon_disk_map();
    let disk_worst = HexVertex::ALL
        .iter()
        .map(|v| {
            let w = map.apply(v.position()).finite().expect("finite image");
            (w - v.disk_image()).norm()
        })
        .fold(0.0, f64::max);
    report.check("hexagon disk images", disk_worst, 1e-14);

    for (n, idx, expected) in [(4, [0, 1, 2, 3], 1.0), (6, [0, 2, 4, 5], 1.0)] {
        let m = pn_case(n, idx)?.expected_modulus;
        report.check(&format!("P{n} {idx:?}"), (m - expected).abs(), 1e-12);
    }

    let started = Instant::now();
    let eps_n = TABLE1
        .par_iter()
        .map(|&(n, j, _)| -> cuspquad::Result<u32> {
            let spec = QuadrilateralSpec::from_alpha_j(PI / n as f64, j)?;
            let a = solve_beta(&spec, &config)?;
            let b = solve_beta(&spec.swapped(), &config)?;
            Ok(error_number((1.0 - a.modulus * b.modulus).abs()))
        })
        .collect::<cuspquad::Result<Vec<u32>>>()?;
    let min_en = eps_n.iter().copied().min().unwrap_or(0);
    let ok = min_en >= 5;
    println!(
        "{} table reciprocal error numbers: min eps_N = {min_en} (required >= 5) in {:.1} s",
        if ok { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    if !ok {
        report.failed.push("table reciprocal error numbers".into());
    }

    if report.failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "failed checks: {}",
            report.failed.join(", ")
        )))
    }
}

pub fn ngon(
    family: Family,
    n: Option<usize>,
    vertices: &[String],
    json: bool,
) -> Result<(), CliError> {
    if vertices.len() != 4 {
        return Err(CliError::Input(format!(
            "expected 4 vertices, got {}",
            vertices.len()
        )));
    }
    let (case, family_name) = match family {
        Family::Hexagon => {
            let sel = vertices
                .iter()
                .map(|v| v.parse::<HexVertex>())
                .collect::<cuspquad::Result<Vec<_>>>()?;
            (hexagon_case([sel[0], sel[1], sel[2], sel[3]])?, "hexagon")
        }
        Family::Pn => {
            let n = n.ok_or_else(|| CliError::Input("--family pn needs --n".into()))?;
            let idx = vertices
                .iter()
                .map(|v| {
                    v.trim().parse::<usize>().map_err(|_| {
                        CliError::Input(format!("vertex index {v:?} is not a non-negative integer"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            (pn_case(n, [idx[0], idx[1], idx[2], idx[3]])?, "pn")
        }
    };
    let modulus = case.expected_modulus;
    let record = OutputRecord {
        input: InputEcho::Ngon {
            family: family_name.into(),
            n: if family == Family::Pn { n } else { None },
            vertices: vertices.iter().map(|v| v.trim().to_string()).collect(),
        },
        beta: None,
        gamma: None,
        modulus,
        conjugate_modulus: 1.0 / modulus,
        residual_ratio_st: None,
        residual_ratio_r: None,
        reciprocal_error: None,
        error_number: None,
        iterations: None,
        wall_time_ms: None,
    };
    if json {
        println!(
            "{}",
            serde_json::to_string(&record).expect("record serializes")
        );
    } else {
        print!("{}", record.to_text());
    }
    Ok(())
}

pub fn render(
    spec_args: &SpecArgs,
    solver: &SolverArgs,
    params: Option<(f64, f64)>,
    samples: usize,
) -> Result<(), CliError> {
    let config = solver_config(solver)?;
    let (beta, gamma) = match params {
        Some(p) => p,
        None => {
            let (spec, _, _) = resolve_spec(spec_args)?;
            let r = solve_beta(&spec, &config)?;
            // Sample the map of the orientation that was actually solved.
            (r.solved_beta(), r.gamma)
        }
    };
    let p = SchwarzParams::new(beta, gamma)?;
    eprintln!("beta = {beta}, gamma = {gamma}");
    let mut out = String::from("theta,re_f,im_f\n");
    for k in 0..samples {
        let theta = 2.0 * PI * k as f64 / samples as f64;
        if distance_to_singular_direction(theta, beta) < RENDER_EXCLUSION {
            continue;
        }
        let f = solve_ray(&p, theta, &config.ode_tol)?.f_end;
        let _ = writeln!(out, "{},{},{}", sci(theta), sci(f.re), sci(f.im));
    }
    print!("{out}");
    Ok(())
}

use cuspquad::solver::ReciprocalCheck;
use cuspquad::{ModulusResult, QuadrilateralSpec};
use serde::{Deserialize, Serialize};

/// The problem as given on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputEcho {
    Quadrilateral {
        t: f64,
        s: f64,
        r1: f64,
        r2: f64,
        alpha: Option<f64>,
        j: Option<u32>,
        refined: bool,
        conjugate: bool,
    },
    Ngon {
        family: String,
        n: Option<usize>,
        vertices: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Iterations {
    pub beta: u32,
    pub gamma: u32,
    pub rays: usize,
    pub swapped: bool,
}

/// One result line of `modulus` or `ngon`. `wall_time_ms` is only filled
/// with `--timing`, so that identical runs serialize identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub input: InputEcho,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub modulus: f64,
    pub conjugate_modulus: f64,
    pub residual_ratio_st: Option<f64>,
    pub residual_ratio_r: Option<f64>,
    pub reciprocal_error: Option<f64>,
    pub error_number: Option<u32>,
    pub iterations: Option<Iterations>,
    pub wall_time_ms: Option<f64>,
}

impl OutputRecord {
    pub fn from_solve(
        spec: &QuadrilateralSpec,
        alpha: Option<f64>,
        j: Option<u32>,
        conjugate: bool,
        check: &ReciprocalCheck,
        timing: bool,
    ) -> Self {
        let r: &ModulusResult = &check.primary;
        Self {
            input: InputEcho::Quadrilateral {
                t: spec.t,
                s: spec.s,
                r1: spec.r1,
                r2: spec.r2,
                alpha,
                j,
                refined: r.diagnostics.refined,
                conjugate,
            },
            beta: Some(r.beta),
            gamma: Some(r.gamma),
            modulus: r.modulus,
            conjugate_modulus: r.conjugate_modulus,
            residual_ratio_st: Some(r.residual_ratio_st),
            residual_ratio_r: Some(r.residual_ratio_r),
            reciprocal_error: Some(check.eps_r),
            error_number: Some(check.eps_n),
            iterations: Some(Iterations {
                beta: r.diagnostics.beta_iterations,
                gamma: r.diagnostics.gamma_iterations,
                rays: r.diagnostics.rays,
                swapped: r.swapped,
            }),
            wall_time_ms: timing.then_some(r.diagnostics.wall_time_ms),
        }
    }

    pub fn to_text(&self) -> String {
        let mut rows: Vec<(&str, String)> = Vec::new();
        match &self.input {
            InputEcho::Quadrilateral {
                t,
                s,
                r1,
                r2,
                alpha,
                j,
                refined,
                conjugate,
            } => {
                rows.push(("input", format!("t={t} s={s} r1={r1} r2={r2}")));
                if let (Some(a), Some(j)) = (alpha, j) {
                    rows.push(("family", format!("alpha={a} j={j}")));
                }
                rows.push(("mode", if *refined { "refined" } else { "standard" }.into()));
                if *conjugate {
                    rows.push(("orientation", "conjugate".into()));
                }
            }
            InputEcho::Ngon {
                family,
                n,
                vertices,
            } => {
                let n = n.map(|n| format!(" n={n}")).unwrap_or_default();
                rows.push((
                    "input",
                    format!("{family}{n} vertices={}", vertices.join(",")),
                ));
            }
        }
        if let Some(b) = self.beta {
            rows.push(("beta", format!("{b:.15}")));
        }
        if let Some(g) = self.gamma {
            rows.push(("gamma", format!("{g:.15}")));
        }
        rows.push(("modulus", format!("{:.15}", self.modulus)));
        rows.push((
            "conjugate_modulus",
            format!("{:.15}", self.conjugate_modulus),
        ));
        for (name, v) in [
            ("residual_ratio_st", self.residual_ratio_st),
            ("residual_ratio_r", self.residual_ratio_r),
            ("reciprocal_error", self.reciprocal_error),
        ] {
            if let Some(x) = v {
                rows.push((name, format!("{x:.3e}")));
            }
        }
        if let Some(n) = self.error_number {
            rows.push(("error_number", n.to_string()));
        }
        if let Some(it) = self.iterations {
            rows.push((
                "iterations",
                format!(
                    "beta={} gamma={} rays={} swapped={}",
                    it.beta, it.gamma, it.rays, it.swapped
                ),
            ));
        }
        if let Some(ms) = self.wall_time_ms {
            rows.push(("wall_time_ms", format!("{ms:.1}")));
        }
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        rows.iter()
            .map(|(k, v)| format!("{k:<width$}  {v}\n"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typed_round_trip_is_byte_identical() {
        let r = OutputRecord {
            input: InputEcho::Ngon {
                family: "pn".into(),
                n: Some(6),
                vertices: vec!["0".into(), "1".into(), "2".into(), "3".into()],
            },
            beta: Some(0.1 + 0.2),
            gamma: None,
            modulus: 0.6806341730599133,
            conjugate_modulus: 1.0 / 0.6806341730599133,
            residual_ratio_st: None,
            residual_ratio_r: Some(1.234568003383174e-13),
            reciprocal_error: None,
            error_number: Some(12),
            iterations: None,
            wall_time_ms: None,
        };
        let a = serde_json::to_string(&r).unwrap();
        let back: OutputRecord = serde_json::from_str(&a).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), a);
    }
}

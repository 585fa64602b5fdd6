//! Solver settings from an optional flat `key = value` file plus flag
//! overrides.

use std::path::Path;

use cuspquad::solver::AffineSeed;
use cuspquad::{OdeTolerance, SolverConfig};
use serde::Deserialize;

/// Keys accepted in a config file; every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub ode_rel_tol: Option<f64>,
    pub ode_abs_tol: Option<f64>,
    pub ode_max_steps: Option<usize>,
    pub refined_rel_tol: Option<f64>,
    pub refined_abs_tol: Option<f64>,
    pub refined_max_steps: Option<usize>,
    pub iters_bracket: Option<u32>,
    pub iters_gamma: Option<u32>,
    pub iters_beta: Option<u32>,
    pub gamma_seed_low: Option<[f64; 2]>,
    pub gamma_seed_low_alt: Option<[f64; 2]>,
    pub gamma_seed_high: Option<[f64; 2]>,
    pub swap_detect_tol: Option<f64>,
    pub refine_eps: Option<f64>,
    pub refine_iters: Option<u32>,
    pub max_swaps: Option<u32>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn apply(&self, c: &mut SolverConfig) {
        let seed = |p: [f64; 2]| AffineSeed::new(p[0], p[1]);
        c.ode_tol = OdeTolerance {
            rel_tol: self.ode_rel_tol.unwrap_or(c.ode_tol.rel_tol),
            abs_tol: self.ode_abs_tol.unwrap_or(c.ode_tol.abs_tol),
            max_steps: self.ode_max_steps.unwrap_or(c.ode_tol.max_steps),
        };
        c.refined_ode_tol = OdeTolerance {
            rel_tol: self.refined_rel_tol.unwrap_or(c.refined_ode_tol.rel_tol),
            abs_tol: self.refined_abs_tol.unwrap_or(c.refined_ode_tol.abs_tol),
            max_steps: self
                .refined_max_steps
                .unwrap_or(c.refined_ode_tol.max_steps),
        };
        c.iters_bracket = self.iters_bracket.unwrap_or(c.iters_bracket);
        c.iters_gamma = self.iters_gamma.unwrap_or(c.iters_gamma);
        c.iters_beta = self.iters_beta.unwrap_or(c.iters_beta);
        c.gamma_seed_low = self.gamma_seed_low.map(seed).unwrap_or(c.gamma_seed_low);
        c.gamma_seed_low_alt = self
            .gamma_seed_low_alt
            .map(seed)
            .unwrap_or(c.gamma_seed_low_alt);
        c.gamma_seed_high = self.gamma_seed_high.map(seed).unwrap_or(c.gamma_seed_high);
        c.swap_detect_tol = self.swap_detect_tol.unwrap_or(c.swap_detect_tol);
        c.refine_eps = self.refine_eps.unwrap_or(c.refine_eps);
        c.refine_iters = self.refine_iters.unwrap_or(c.refine_iters);
        c.max_swaps = self.max_swaps.unwrap_or(c.max_swaps);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_overrides_only_given_keys() {
        let file: ConfigFile =
            toml::from_str("iters_beta = 30\nrefine_eps = 1e-5\ngamma_seed_high = [1.3, -0.9]\n")
                .unwrap();
        let mut c = SolverConfig::default();
        file.apply(&mut c);
        assert_eq!(c.iters_beta, 30);
        assert_eq!(c.refine_eps, 1e-5);
        assert_eq!(c.gamma_seed_high, AffineSeed::new(1.3, -0.9));
        assert_eq!(c.iters_gamma, SolverConfig::default().iters_gamma);
        assert_eq!(c.ode_tol, SolverConfig::default().ode_tol);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<ConfigFile>("iters_delta = 3").is_err());
    }
}

//! The reduced Schwarzian of a disk-to-quadrilateral map and its ray ODEs.
//!
//! For vertex preimages `±e^{±iβ}` and accessory parameter `γ`,
//!
//! ```text
//! ½ S_f(z) = e^{2iβ}/(z² − e^{2iβ})² + e^{−2iβ}/(z² − e^{−2iβ})²
//!          − γ / ((z² − e^{2iβ})(z² − e^{−2iβ}))
//! ```
//!
//! and `f = u/v` where `u`, `v` are the odd and even solutions of
//! `h'' + ½ S_f h = 0`. Along the ray `z = x e^{iθ}` this becomes
//! `h_xx + e^{2iθ}·½S_f(x e^{iθ})·h = 0`, integrated from the origin to the
//! boundary with [`solve_ray`]. [`series_eval`] evaluates the same solutions
//! from their Taylor coefficients and serves as an independent check inside
//! the disk.

mod dop853;
mod series;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use series::{schwarzian_series_coeffs, series_eval, SERIES_MAX_RADIUS};

/// Rays closer than this (in angle) to a vertex preimage direction are
/// rejected when integrated up to the boundary.
pub const SINGULAR_DIRECTION_GUARD: f64 = 1e-6;

/// The accessory-parameter pair `(β, γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchwarzParams {
    beta: f64,
    gamma: f64,
}

impl SchwarzParams {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < FRAC_PI_2) {
            return Err(Error::Domain {
                what: "beta",
                value: beta,
                expected: "0 < beta < pi/2",
            });
        }
        if !gamma.is_finite() {
            return Err(Error::Domain {
                what: "gamma",
                value: gamma,
                expected: "finite",
            });
        }
        Ok(Self { beta, gamma })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Tolerances for the adaptive ray integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeTolerance {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl OdeTolerance {
    pub fn new(rel_tol: f64, abs_tol: f64, max_steps: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && abs_tol > 0.0) || max_steps == 0 {
            return Err(Error::InvalidConfig(format!(
                "ODE tolerance needs rel_tol, abs_tol > 0 and max_steps > 0 \
                 (got {rel_tol}, {abs_tol}, {max_steps})"
            )));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_steps,
        })
    }

    /// `1e-12` relative and absolute.
    pub fn standard() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-12,
            max_steps: 100_000,
        }
    }

    /// `1e-14`, used by the refinement stage.
    pub fn refined() -> Self {
        Self {
            rel_tol: 1e-14,
            abs_tol: 1e-14,
            max_steps: 200_000,
        }
    }

    /// Same tolerance in both slots.
    pub fn uniform(tol: f64) -> Result<Self> {
        Self::new(tol, tol, Self::standard().max_steps)
    }
}

impl Default for OdeTolerance {
    fn default() -> Self {
        Self::standard()
    }
}

/// Integration diagnostics attached to a ray solution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct OdeStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evals: usize,
    /// Accumulated local error estimate of the state `(u, u', v, v')`.
    pub error_budget: f64,
    /// `max |W(x) − W(0)| / |W(0)|` over accepted steps, `W = u'v − uv'`.
    pub wronskian_drift: f64,
}

/// Endpoint data of one probe ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RaySolution {
    pub theta: f64,
    pub x_end: f64,
    pub u_end: Complex64,
    pub v_end: Complex64,
    pub f_end: Complex64,
    pub stats: OdeStats,
}

impl RaySolution {
    /// First-order propagation of the state error budget into `f = u/v`.
    pub fn f_error_estimate(&self) -> f64 {
        self.stats.error_budget * (1.0 + self.f_end.norm()) / self.v_end.norm()
    }
}

/// Precomputed pieces of the ray coefficient for one `(β, γ, θ)`.
#[derive(Debug, Clone, Copy)]
struct RayCoefficient {
    rot: Complex64,
    p: Complex64,
    q: Complex64,
    gamma: f64,
}

impl RayCoefficient {
    fn new(params: &SchwarzParams, theta: f64) -> Self {
        Self {
            rot: Complex64::from_polar(1.0, 2.0 * theta),
            p: Complex64::from_polar(1.0, 2.0 * params.beta),
            q: Complex64::from_polar(1.0, -2.0 * params.beta),
            gamma: params.gamma,
        }
    }

    #[inline]
    fn eval(&self, x: f64) -> Complex64 {
        let w = self.rot * (x * x);
        let dp = w - self.p;
        let dq = w - self.q;
        let inv_p = dp.inv();
        let inv_q = dq.inv();
        // Grouped so that conjugate pairs stay exact conjugates on the real axis.
        self.rot * (self.p * inv_p * inv_p + self.q * inv_q * inv_q - (inv_p * inv_q) * self.gamma)
    }
}

/// `e^{2iθ}·½S_f(x e^{iθ})`, the coefficient of the ray equation.
pub fn schwarzian_coeff(x: f64, theta: f64, params: &SchwarzParams) -> Result<Complex64> {
    let c = RayCoefficient::new(params, theta);
    let w = c.rot * (x * x);
    let pole_tol = 8.0 * f64::EPSILON;
    if (w - c.p).norm() <= pole_tol || (w - c.q).norm() <= pole_tol {
        return Err(Error::Singularity { x, theta });
    }
    Ok(c.eval(x))
}

/// Angular distance from `theta` to the nearest vertex preimage direction
/// `±β + kπ`.
pub fn distance_to_singular_direction(theta: f64, beta: f64) -> f64 {
    let fold = |d: f64| {
        let r = d.rem_euclid(PI);
        r.min(PI - r)
    };
    fold(theta - beta).min(fold(theta + beta))
}

/// Integrates the ray ODEs from the origin to the unit circle.
pub fn solve_ray(params: &SchwarzParams, theta: f64, tol: &OdeTolerance) -> Result<RaySolution> {
    solve_ray_to(params, theta, 1.0, tol)
}

/// Integrates `u'' + F u = 0`, `v'' + F v = 0` on `[0, x_end]` along the ray
/// at angle `theta`, with `u(0) = 0, u'(0) = e^{iθ}, v(0) = 1, v'(0) = 0`.
pub fn solve_ray_to(
    params: &SchwarzParams,
    theta: f64,
    x_end: f64,
    tol: &OdeTolerance,
) -> Result<RaySolution> {
    if !(x_end > 0.0 && x_end <= 1.0) {
        return Err(Error::Domain {
            what: "ray endpoint",
            value: x_end,
            expected: "0 < x_end <= 1",
        });
    }
    if x_end == 1.0 && distance_to_singular_direction(theta, params.beta) < SINGULAR_DIRECTION_GUARD
    {
        return Err(Error::SingularDirection { theta });
    }

    let coeff = RayCoefficient::new(params, theta);
    let rhs = |x: f64, y: &[Complex64; 4]| {
        let f = coeff.eval(x);
        [y[1], -f * y[0], y[3], -f * y[2]]
    };
    let e_theta = Complex64::from_polar(1.0, theta);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let y0 = [zero, e_theta, one, zero];

    let opts = dop853::Dop853Options {
        rel_tol: tol.rel_tol,
        abs_tol: tol.abs_tol,
        max_steps: tol.max_steps,
    };
    let mut drift = 0.0_f64;
    let (y, step_stats) = dop853::integrate(rhs, 0.0, y0, x_end, &opts, |_, y| {
        let w = y[1] * y[2] - y[0] * y[3];
        drift = drift.max((w - e_theta).norm());
    })?;

    let (u_end, v_end) = (y[0], y[2]);
    if !(v_end.norm() >= 1e-12 * u_end.norm()) {
        return Err(Error::PoleOnRay {
            u_abs: u_end.norm(),
            v_abs: v_end.norm(),
        });
    }
    Ok(RaySolution {
        theta,
        x_end,
        u_end,
        v_end,
        f_end: u_end / v_end,
        stats: OdeStats {
            accepted_steps: step_stats.accepted,
            rejected_steps: step_stats.rejected,
            rhs_evals: step_stats.evals,
            error_budget: step_stats.error_budget,
            wronskian_drift: drift,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q4_params() -> SchwarzParams {
        SchwarzParams::new((1.0_f64 / 3.0).asin(), 2.0 / 3.0).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(SchwarzParams::new(0.0, 1.0).is_err());
        assert!(SchwarzParams::new(FRAC_PI_2, 1.0).is_err());
        assert!(SchwarzParams::new(0.3, f64::INFINITY).is_err());
        assert!(SchwarzParams::new(0.3, -5.0).is_ok());
        assert!(OdeTolerance::new(0.0, 1e-12, 10).is_err());
        assert!(OdeTolerance::new(1e-12, 1e-12, 0).is_err());
    }

    #[test]
    fn coefficient_at_origin() {
        for &(beta, gamma, theta) in &[(0.3, 0.1, 0.0), (1.1, -2.0, 0.7), (0.5, 0.4, 2.5)] {
            let p = SchwarzParams::new(beta, gamma).unwrap();
            let c = schwarzian_coeff(0.0, theta, &p).unwrap();
            let expected =
                Complex64::from_polar(1.0, 2.0 * theta) * (2.0 * (2.0 * beta).cos() - gamma);
            assert!((c - expected).norm() < 1e-14, "{c} vs {expected}");
        }
        let c = schwarzian_coeff(0.0, 0.0, &q4_params()).unwrap();
        assert!((c.re - 8.0 / 9.0).abs() < 1e-15 && c.im.abs() < 1e-15);
    }

    #[test]
    fn coefficient_pole_is_an_error() {
        let p = q4_params();
        assert!(matches!(
            schwarzian_coeff(1.0, p.beta(), &p),
            Err(Error::Singularity { .. })
        ));
        assert!(schwarzian_coeff(1.0, -p.beta(), &p).is_err());
        assert!(schwarzian_coeff(1.0, PI - p.beta(), &p).is_err());
        assert!(schwarzian_coeff(0.999, p.beta(), &p).is_ok());
    }

    #[test]
    fn singular_direction_guard() {
        let p = q4_params();
        let tol = OdeTolerance::standard();
        for theta in [p.beta(), -p.beta(), PI + p.beta(), p.beta() + 5e-7] {
            assert!(matches!(
                solve_ray(&p, theta, &tol),
                Err(Error::SingularDirection { .. })
            ));
        }
        // Truncated rays never reach the pole.
        assert!(solve_ray_to(&p, p.beta(), 0.5, &tol).is_ok());
    }

    #[test]
    fn distance_folds_mod_pi() {
        assert!(distance_to_singular_direction(0.3 + PI, 0.3) < 1e-15);
        assert!(distance_to_singular_direction(-0.3 + 2.0 * PI, 0.3) < 1e-14);
        assert!((distance_to_singular_direction(0.0, 0.3) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn odd_map_and_conjugation_symmetry() {
        let p = SchwarzParams::new(0.6, 0.2).unwrap();
        let tol = OdeTolerance::standard();
        for theta in [0.1, 0.3, 1.0, 1.4] {
            let f = solve_ray(&p, theta, &tol).unwrap().f_end;
            let f_opp = solve_ray(&p, theta + PI, &tol).unwrap().f_end;
            let f_conj = solve_ray(&p, -theta, &tol).unwrap().f_end;
            assert!((f + f_opp).norm() < 1e-10 * f.norm(), "{f} {f_opp}");
            assert!((f.conj() - f_conj).norm() < 1e-10 * f.norm());
        }
    }

    #[test]
    fn wronskian_is_conserved() {
        let p = q4_params();
        for theta in [0.0, 0.17, 1.0, FRAC_PI_2] {
            let sol = solve_ray(&p, theta, &OdeTolerance::standard()).unwrap();
            assert!(sol.stats.wronskian_drift < 1e-9, "{:?}", sol.stats);
        }
    }

    #[test]
    fn real_axis_ray_stays_real() {
        let p = q4_params();
        let sol = solve_ray(&p, 0.0, &OdeTolerance::standard()).unwrap();
        assert_eq!(sol.f_end.im, 0.0);
        assert!(sol.f_end.re > 0.0);
    }

    #[test]
    fn endpoint_domain() {
        let p = q4_params();
        let tol = OdeTolerance::standard();
        assert!(solve_ray_to(&p, 0.0, 0.0, &tol).is_err());
        assert!(solve_ray_to(&p, 0.0, 1.5, &tol).is_err());
    }
}

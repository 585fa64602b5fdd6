//! Target quadrilaterals and recovery of the image quadrilateral's circles.
//!
//! A target is described by the circles centred at `±t` (radius `r₁`) and
//! `±is` (radius `r₂`), externally tangent at the four cusps, so
//! `t² + s² = (r₁ + r₂)²`. The image of the unit disk under `f = u/v` is
//! described the same way by the fitted `(T, R₁, S, R₂)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schwarz_ode::{solve_ray, OdeTolerance, RaySolution, SchwarzParams};

/// Relative tolerance on the tangency constraint accepted by
/// [`QuadrilateralSpec::new`].
pub const TANGENCY_REL_TOL: f64 = 1e-9;

/// Relative size of `Im f(1)` and `Re f(i)` above which the ray integration is
/// considered inaccurate.
pub const SYMMETRY_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadrilateralSpec {
    pub t: f64,
    pub s: f64,
    pub r1: f64,
    pub r2: f64,
}

impl QuadrilateralSpec {
    pub fn new(t: f64, s: f64, r1: f64, r2: f64) -> Result<Self> {
        Self::with_tangency_tol(t, s, r1, r2, TANGENCY_REL_TOL)
    }

    /// Like [`new`](Self::new) with a caller-chosen relative tangency
    /// tolerance, for inputs typed with limited digits.
    pub fn with_tangency_tol(t: f64, s: f64, r1: f64, r2: f64, rel_tol: f64) -> Result<Self> {
        for (name, v) in [("t", t), ("s", s), ("r1", r1), ("r2", r2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidGeometry(format!(
                    "{name} = {v} must be positive"
                )));
            }
        }
        let spec = Self { t, s, r1, r2 };
        let rel = spec.tangency_residual() / (r1 + r2).powi(2);
        if !(rel <= rel_tol) {
            return Err(Error::InvalidGeometry(format!(
                "tangency t^2 + s^2 = (r1 + r2)^2 violated (relative residual {rel:e} > {rel_tol:e})"
            )));
        }
        if t <= r1 {
            return Err(Error::InvalidGeometry(format!(
                "t > r1 violated ({t} <= {r1})"
            )));
        }
        if s <= r2 {
            return Err(Error::InvalidGeometry(format!(
                "s > r2 violated ({s} <= {r2})"
            )));
        }
        Ok(spec)
    }

    /// The test family with cusp `e^{iα}` on the unit circle:
    /// `t = 1 + 0.2j(1/cos α − 1)`, `s = t sin α / (t − cos α)`,
    /// `r₁ = |e^{iα} − t|`, `r₂ = |e^{iα} − is|`.
    pub fn from_alpha_j(alpha: f64, j: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha < FRAC_PI_2) {
            return Err(Error::Domain {
                what: "alpha",
                value: alpha,
                expected: "0 < alpha < pi/2",
            });
        }
        if !(1..=5).contains(&j) {
            return Err(Error::Domain {
                what: "j",
                value: j as f64,
                expected: "1 <= j <= 5",
            });
        }
        let (sin_a, cos_a) = alpha.sin_cos();
        let t = 1.0 + 0.2 * j as f64 * (1.0 / cos_a - 1.0);
        if t <= cos_a {
            return Err(Error::Domain {
                what: "t",
                value: t,
                expected: "t > cos(alpha)",
            });
        }
        let s = t * sin_a / (t - cos_a);
        let r1 = (cos_a - t).hypot(sin_a);
        let r2 = cos_a.hypot(sin_a - s);
        Self::new(t, s, r1, r2)
    }

    /// `k = s/t`.
    pub fn center_ratio(&self) -> f64 {
        self.s / self.t
    }

    /// `K = r₂/r₁`.
    pub fn radius_ratio(&self) -> f64 {
        self.r2 / self.r1
    }

    /// `|t² + s² − (r₁ + r₂)²|`.
    pub fn tangency_residual(&self) -> f64 {
        (self.t * self.t + self.s * self.s - (self.r1 + self.r2).powi(2)).abs()
    }

    /// The same domain rotated by a quarter turn: `t ↔ s`, `r₁ ↔ r₂`. Its
    /// modulus is the reciprocal of this one's.
    pub fn swapped(&self) -> Self {
        Self {
            t: self.s,
            s: self.t,
            r1: self.r2,
            r2: self.r1,
        }
    }
}

/// Fitted circle data of the image quadrilateral `f(U)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadGeometry {
    /// Centre `T` of the right boundary circle (on the real axis).
    pub t_center: f64,
    pub r1: f64,
    /// Centre `iS` of the top boundary circle (on the imaginary axis).
    pub s_center: f64,
    pub r2: f64,
    pub probes: [RaySolution; 4],
}

impl QuadGeometry {
    pub fn center_ratio(&self) -> f64 {
        self.s_center / self.t_center
    }

    pub fn radius_ratio(&self) -> f64 {
        self.r2 / self.r1
    }
}

/// Circle centred on the real axis through `(x₁, 0)` and `(x₂, y₂)`:
/// `T = ½(x₁ + x₂ + y₂²/(x₂ − x₁))`, `R₁ = |T − x₁|`.
pub fn fit_circle_real_axis(x1: f64, x2: f64, y2: f64) -> Result<(f64, f64)> {
    let dx = x2 - x1;
    if dx == 0.0 || !dx.is_finite() {
        return Err(Error::Degenerate(format!(
            "circle through ({x1}, 0) and ({x2}, {y2}) centred on the real axis has infinite radius"
        )));
    }
    let center = 0.5 * (x1 + x2 + y2 * y2 / dx);
    Ok((center, (center - x1).abs()))
}

/// Circle centred on the imaginary axis through `(x₃, y₃)` and `(0, y₄)`:
/// `S = ½(y₃ + y₄ + x₃²/(y₃ − y₄))`, `R₂ = |y₄ − S|`.
pub fn fit_circle_imag_axis(x3: f64, y3: f64, y4: f64) -> Result<(f64, f64)> {
    let dy = y3 - y4;
    if dy == 0.0 || !dy.is_finite() {
        return Err(Error::Degenerate(format!(
            "circle through ({x3}, {y3}) and (0, {y4}) centred on the imaginary axis has infinite radius"
        )));
    }
    let center = 0.5 * (y3 + y4 + x3 * x3 / dy);
    Ok((center, (y4 - center).abs()))
}

/// Probe directions: two on the right arc (`θ₁, θ₂ ∈ [0, β)`) and two on the
/// top arc (`θ₃, θ₄ ∈ (β, π/2]`), with `θ₁ = 0` and `θ₄ = π/2` on the axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub theta4: f64,
}

impl ProbeAngles {
    /// `0, β/2, π/4 + β/2, π/2`.
    pub fn standard(beta: f64) -> Self {
        Self {
            theta1: 0.0,
            theta2: 0.5 * beta,
            theta3: FRAC_PI_4 + 0.5 * beta,
            theta4: FRAC_PI_2,
        }
    }
}

fn symmetry_check(component: &'static str, value: f64, f: &RaySolution) -> Result<()> {
    let rel = value.abs() / f.f_end.norm();
    if rel > SYMMETRY_REL_TOL || !rel.is_finite() {
        return Err(Error::SymmetryCheck {
            component,
            value: rel,
        });
    }
    Ok(())
}

/// `(T, R₁)` from rays at `θ₁` and `θ₂`.
pub fn probe_real_circle(
    params: &SchwarzParams,
    angles: &ProbeAngles,
    tol: &OdeTolerance,
) -> Result<(f64, f64, [RaySolution; 2])> {
    let ray1 = solve_ray(params, angles.theta1, tol)?;
    let ray2 = solve_ray(params, angles.theta2, tol)?;
    if angles.theta1 == 0.0 {
        symmetry_check("Im f(1)", ray1.f_end.im, &ray1)?;
    }
    let (t, r1) = fit_circle_real_axis(ray1.f_end.re, ray2.f_end.re, ray2.f_end.im)?;
    Ok((t, r1, [ray1, ray2]))
}

/// `(S, R₂)` from rays at `θ₃` and `θ₄`.
pub fn probe_imag_circle(
    params: &SchwarzParams,
    angles: &ProbeAngles,
    tol: &OdeTolerance,
) -> Result<(f64, f64, [RaySolution; 2])> {
    let ray3 = solve_ray(params, angles.theta3, tol)?;
    let ray4 = solve_ray(params, angles.theta4, tol)?;
    if angles.theta4 == FRAC_PI_2 {
        symmetry_check("Re f(i)", ray4.f_end.re, &ray4)?;
    }
    let (s, r2) = fit_circle_imag_axis(ray3.f_end.re, ray3.f_end.im, ray4.f_end.im)?;
    Ok((s, r2, [ray3, ray4]))
}

/// Integrates the four standard probe rays and fits both boundary circles.
pub fn probe_geometry(params: &SchwarzParams, tol: &OdeTolerance) -> Result<QuadGeometry> {
    probe_geometry_with(params, &ProbeAngles::standard(params.beta()), tol)
}

pub fn probe_geometry_with(
    params: &SchwarzParams,
    angles: &ProbeAngles,
    tol: &OdeTolerance,
) -> Result<QuadGeometry> {
    let (t_center, r1, [p1, p2]) = probe_real_circle(params, angles, tol)?;
    let (s_center, r2, [p3, p4]) = probe_imag_circle(params, angles, tol)?;
    Ok(QuadGeometry {
        t_center,
        r1,
        s_center,
        r2,
        probes: [p1, p2, p3, p4],
    })
}

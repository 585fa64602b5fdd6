//! Identification of `(β, γ)` for a target quadrilateral by nested bisection.
//!
//! For fixed `β` the accessory parameter is bracketed between the two values
//! `A_γ < B_γ` at which one pair of image arcs degenerates into parallel
//! lines (the fitted centre `T` resp. `S` passes through infinity), and
//! `γ(β)` is found by bisection on `S − kT`. The outer bisection on
//! `β ∈ [0, π/4]` then matches `R₂/R₁ = K`. Targets with modulus above one
//! drive `β` to the upper end of the interval; they are solved in the
//! quarter-turned orientation (`t ↔ s`, `r₁ ↔ r₂`) and mapped back with
//! `β ↦ π/2 − β`.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    probe_geometry_with, probe_imag_circle, probe_real_circle, ProbeAngles, QuadGeometry,
    QuadrilateralSpec,
};
use crate::schwarz_ode::{OdeTolerance, SchwarzParams};
use crate::specialfn::modulus_from_beta;

/// Relative tolerance under which `k = K = 1` is treated as the fully
/// symmetric configuration.
const SYMMETRIC_TOL: f64 = 1e-12;

/// Seed endpoint `a + b·β` for the γ brackets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineSeed {
    pub a: f64,
    pub b: f64,
}

impl AffineSeed {
    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn at(&self, beta: f64) -> f64 {
        self.a + self.b * beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub ode_tol: OdeTolerance,
    /// ODE tolerance used by [`refine`] through [`solve`].
    pub refined_ode_tol: OdeTolerance,
    pub iters_bracket: u32,
    pub iters_gamma: u32,
    pub iters_beta: u32,
    /// Lower seed of the `S`-sign bracket (upper end `B_γ`).
    pub gamma_seed_low: AffineSeed,
    /// Lower seed of the `T`-sign bracket (lower end `A_γ`).
    pub gamma_seed_low_alt: AffineSeed,
    pub gamma_seed_high: AffineSeed,
    /// `|Mod − 1|` below which a second boundary hit after swapping is read as
    /// a modulus indistinguishable from one.
    pub swap_detect_tol: f64,
    pub refine_eps: f64,
    pub refine_iters: u32,
    pub max_swaps: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            ode_tol: OdeTolerance::standard(),
            refined_ode_tol: OdeTolerance::refined(),
            iters_bracket: 10,
            iters_gamma: 25,
            iters_beta: 25,
            gamma_seed_low: AffineSeed::new(0.7, -4.0 / PI),
            gamma_seed_low_alt: AffineSeed::new(0.75, -4.0 / PI),
            gamma_seed_high: AffineSeed::new(1.2, -3.0 / PI),
            swap_detect_tol: 1e-5,
            refine_eps: 2e-6,
            refine_iters: 30,
            max_swaps: 1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iters_bracket == 0
            || self.iters_gamma == 0
            || self.iters_beta == 0
            || self.refine_iters == 0
        {
            return Err(Error::InvalidConfig("iteration counts must be >= 1".into()));
        }
        if !(self.refine_eps > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "refine_eps must be positive (got {})",
                self.refine_eps
            )));
        }
        if !(self.swap_detect_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "swap_detect_tol must be positive (got {})",
                self.swap_detect_tol
            )));
        }
        OdeTolerance::new(
            self.ode_tol.rel_tol,
            self.ode_tol.abs_tol,
            self.ode_tol.max_steps,
        )?;
        OdeTolerance::new(
            self.refined_ode_tol.rel_tol,
            self.refined_ode_tol.abs_tol,
            self.refined_ode_tol.max_steps,
        )?;
        Ok(())
    }
}

/// Counters and timing of one solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub beta_iterations: u32,
    pub gamma_iterations: u32,
    pub rays: usize,
    pub refined: bool,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusResult {
    /// Vertex preimage angle of the target in its given orientation.
    pub beta: f64,
    /// Accessory parameter of the orientation actually solved; when
    /// `swapped` is set this belongs to the quarter-turned target (the value
    /// for the given orientation is `−gamma`).
    pub gamma: f64,
    pub modulus: f64,
    pub conjugate_modulus: f64,
    pub swapped: bool,
    /// `|S/T − k|` in the solved orientation.
    pub residual_ratio_st: f64,
    /// `|R₂/R₁ − K|` in the solved orientation.
    pub residual_ratio_r: f64,
    pub reciprocal_error: Option<f64>,
    pub error_number: Option<u32>,
    pub diagnostics: SolveDiagnostics,
}

impl ModulusResult {
    fn from_parts(
        solved_beta: f64,
        gamma: f64,
        swapped: bool,
        residual_st: f64,
        residual_r: f64,
        diagnostics: SolveDiagnostics,
    ) -> Result<Self> {
        let beta = if swapped {
            FRAC_PI_2 - solved_beta
        } else {
            solved_beta
        };
        let modulus = modulus_from_beta(beta)?;
        Ok(Self {
            beta,
            gamma,
            modulus,
            conjugate_modulus: 1.0 / modulus,
            swapped,
            residual_ratio_st: residual_st,
            residual_ratio_r: residual_r,
            reciprocal_error: None,
            error_number: None,
            diagnostics,
        })
    }

    /// `β` in the orientation that was actually solved.
    pub fn solved_beta(&self) -> f64 {
        if self.swapped {
            FRAC_PI_2 - self.beta
        } else {
            self.beta
        }
    }
}

/// Ray evaluations with a shared counter.
struct Prober<'a> {
    tol: &'a OdeTolerance,
    rays: Cell<usize>,
}

impl<'a> Prober<'a> {
    fn new(tol: &'a OdeTolerance) -> Self {
        Self {
            tol,
            rays: Cell::new(0),
        }
    }

    fn params(beta: f64, gamma: f64) -> Result<SchwarzParams> {
        SchwarzParams::new(beta, gamma)
    }

    fn t_center(&self, beta: f64, gamma: f64) -> Result<f64> {
        let p = Self::params(beta, gamma)?;
        self.rays.set(self.rays.get() + 2);
        probe_real_circle(&p, &ProbeAngles::standard(beta), self.tol).map(|r| r.0)
    }

    fn s_center(&self, beta: f64, gamma: f64) -> Result<f64> {
        let p = Self::params(beta, gamma)?;
        self.rays.set(self.rays.get() + 2);
        probe_imag_circle(&p, &ProbeAngles::standard(beta), self.tol).map(|r| r.0)
    }

    fn geometry(&self, beta: f64, gamma: f64) -> Result<QuadGeometry> {
        let p = Self::params(beta, gamma)?;
        self.rays.set(self.rays.get() + 4);
        probe_geometry_with(&p, &ProbeAngles::standard(beta), self.tol)
    }
}

/// Bracket `[A_γ, B_γ]` of admissible accessory parameters for `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaBracket {
    pub a: f64,
    pub b: f64,
}

/// Step of the downward scan for `A_γ` used when the affine seed interval
/// does not straddle the relevant pole of `T`.
const A_SCAN_STEP: f64 = 0.01;
const A_SCAN_MAX_STEPS: u32 = 300;

/// Bisects `[lo, hi]`, replacing `hi` by the midpoint when `moves_hi` holds
/// there and `lo` otherwise.
fn bisect_sign(
    mut lo: f64,
    mut hi: f64,
    iters: u32,
    mut moves_hi: impl FnMut(f64) -> Result<bool>,
) -> Result<(f64, f64)> {
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if moves_hi(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

fn gamma_bracket_with(
    beta: f64,
    config: &SolverConfig,
    prober: &Prober<'_>,
) -> Result<GammaBracket> {
    // B_γ: S jumps from +∞ to −∞; keep the end where S > 0.
    let (lo, hi) = (
        config.gamma_seed_low.at(beta),
        config.gamma_seed_high.at(beta),
    );
    let (s_lo, s_hi) = (prober.s_center(beta, lo)?, prober.s_center(beta, hi)?);
    if !(s_lo > 0.0 && s_hi <= 0.0) {
        return Err(Error::BracketFailure {
            quantity: "S (top circle centre)",
            lo,
            hi,
            f_lo: s_lo,
            f_hi: s_hi,
        });
    }
    let (b, _) = bisect_sign(lo, hi, config.iters_bracket, |g| {
        Ok(prober.s_center(beta, g)? < 0.0)
    })?;

    // A_γ: T jumps from −∞ to +∞; keep the end where T > 0.
    let (lo, hi) = (
        config.gamma_seed_low_alt.at(beta),
        config.gamma_seed_high.at(beta),
    );
    let (t_lo, t_hi) = (prober.t_center(beta, lo)?, prober.t_center(beta, hi)?);
    let a = if t_lo <= 0.0 && t_hi > 0.0 {
        bisect_sign(lo, hi, config.iters_bracket, |g| {
            Ok(prober.t_center(beta, g)? > 0.0)
        })?
        .1
    } else {
        // For small β, T has further poles and a zero below A_γ and the seed
        // interval can start on a branch where T > 0. Walk down from B_γ to
        // the first sign change instead.
        let mut upper = b;
        let mut found = None;
        for _ in 0..A_SCAN_MAX_STEPS {
            let g = upper - A_SCAN_STEP;
            if prober.t_center(beta, g)? <= 0.0 {
                found = Some((g, upper));
                break;
            }
            upper = g;
        }
        let Some((lo_scan, hi_scan)) = found else {
            return Err(Error::BracketFailure {
                quantity: "T (right circle centre)",
                lo,
                hi,
                f_lo: t_lo,
                f_hi: t_hi,
            });
        };
        bisect_sign(lo_scan, hi_scan, config.iters_bracket, |g| {
            Ok(prober.t_center(beta, g)? > 0.0)
        })?
        .1
    };

    if a >= b {
        return Err(Error::Infeasible { a, b });
    }
    Ok(GammaBracket { a, b })
}

/// Locates `A_γ` (sign change of `T`) and `B_γ` (sign change of `S`) by
/// bisection from the affine seeds. Both returned ends lie on the side where
/// the respective centre is positive.
pub fn gamma_bracket(beta: f64, config: &SolverConfig) -> Result<GammaBracket> {
    gamma_bracket_with(beta, config, &Prober::new(&config.ode_tol))
}

/// `γ(β)` together with the image geometry at the returned value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSolution {
    pub gamma: f64,
    pub bracket: GammaBracket,
    pub geometry: QuadGeometry,
}

/// Bisection on the sign of `S − kT` over `[lo, hi]`, after checking that the
/// sign changes from negative to positive across it.
fn bisect_gamma(
    beta: f64,
    k: f64,
    mut lo: f64,
    mut hi: f64,
    iters: u32,
    prober: &Prober<'_>,
) -> Result<(f64, QuadGeometry)> {
    let g_lo = prober.geometry(beta, lo)?;
    let g_hi = prober.geometry(beta, hi)?;
    let (f_lo, f_hi) = (
        g_lo.s_center - k * g_lo.t_center,
        g_hi.s_center - k * g_hi.t_center,
    );
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::BracketFailure {
            quantity: "S - kT",
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }
    let mut last = None;
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let g = prober.geometry(beta, mid)?;
        if k * g.t_center < g.s_center {
            hi = mid;
        } else {
            lo = mid;
        }
        last = Some((mid, g));
    }
    Ok(last.expect("at least one iteration"))
}

fn solve_gamma_with(
    beta: f64,
    k: f64,
    config: &SolverConfig,
    prober: &Prober<'_>,
) -> Result<GammaSolution> {
    let bracket = gamma_bracket_with(beta, config, prober)?;
    let (gamma, geometry) =
        bisect_gamma(beta, k, bracket.a, bracket.b, config.iters_gamma, prober)?;
    Ok(GammaSolution {
        gamma,
        bracket,
        geometry,
    })
}

/// Solves `S(β, γ)/T(β, γ) = k` for `γ` at fixed `β`.
pub fn solve_gamma(beta: f64, k: f64, config: &SolverConfig) -> Result<GammaSolution> {
    solve_gamma_with(beta, k, config, &Prober::new(&config.ode_tol))
}

/// Outcome of the β bisection in one orientation.
#[derive(Debug, Clone)]
struct OrientedSolve {
    beta: f64,
    gamma: f64,
    geometry: QuadGeometry,
    /// The upper end `π/4` was never rejected.
    hit_upper: bool,
    hit_lower: bool,
    residual_history: Vec<f64>,
    gamma_iterations: u32,
}

fn solve_oriented(
    spec: &QuadrilateralSpec,
    config: &SolverConfig,
    prober: &Prober<'_>,
) -> Result<OrientedSolve> {
    let (k, big_k) = (spec.center_ratio(), spec.radius_ratio());
    let (mut lo, mut hi) = (0.0, FRAC_PI_4);
    let mut last = None;
    let mut history = Vec::with_capacity(config.iters_beta as usize);
    let mut gamma_iterations = 0;
    for _ in 0..config.iters_beta {
        let beta = 0.5 * (lo + hi);
        let sol = solve_gamma_with(beta, k, config, prober)?;
        gamma_iterations += config.iters_gamma;
        let ratio = sol.geometry.radius_ratio();
        history.push(ratio - big_k);
        if ratio < big_k {
            hi = beta;
        } else {
            lo = beta;
        }
        last = Some((beta, sol));
    }
    let (beta, sol) = last.expect("iters_beta >= 1");
    Ok(OrientedSolve {
        beta,
        gamma: sol.gamma,
        geometry: sol.geometry,
        hit_upper: hi == FRAC_PI_4,
        hit_lower: lo == 0.0,
        residual_history: history,
        gamma_iterations,
    })
}

fn is_symmetric(spec: &QuadrilateralSpec) -> bool {
    (spec.center_ratio() - 1.0).abs() <= SYMMETRIC_TOL
        && (spec.radius_ratio() - 1.0).abs() <= SYMMETRIC_TOL
}

fn symmetric_result(started: Instant) -> Result<ModulusResult> {
    // Quarter-turn invariance forces β = π/4 and γ = −γ, i.e. γ = 0.
    ModulusResult::from_parts(
        FRAC_PI_4,
        0.0,
        false,
        0.0,
        0.0,
        SolveDiagnostics {
            wall_time_ms: elapsed_ms(started),
            ..Default::default()
        },
    )
}

fn elapsed_ms(started: Instant) -> f64 {
    started.elapsed().as_secs_f64() * 1e3
}

fn oriented_result(
    spec: &QuadrilateralSpec,
    solve: &OrientedSolve,
    swapped: bool,
    prober: &Prober<'_>,
    config: &SolverConfig,
    started: Instant,
) -> Result<ModulusResult> {
    let g = &solve.geometry;
    ModulusResult::from_parts(
        solve.beta,
        solve.gamma,
        swapped,
        (g.center_ratio() - spec.center_ratio()).abs(),
        (g.radius_ratio() - spec.radius_ratio()).abs(),
        SolveDiagnostics {
            beta_iterations: config.iters_beta,
            gamma_iterations: solve.gamma_iterations,
            rays: prober.rays.get(),
            refined: false,
            wall_time_ms: elapsed_ms(started),
        },
    )
}

/// Standard-mode solve: nested bisection for `(β, γ)` and the resulting
/// modulus, including the orientation swap for moduli above one.
pub fn solve_beta(spec: &QuadrilateralSpec, config: &SolverConfig) -> Result<ModulusResult> {
    config.validate()?;
    let started = Instant::now();
    if is_symmetric(spec) {
        return symmetric_result(started);
    }
    let prober = Prober::new(&config.ode_tol);
    let direct = solve_oriented(spec, config, &prober)?;
    if direct.hit_lower {
        return Err(Error::NonConvergence {
            reason: "beta bisection collapsed onto beta = 0".into(),
            history: direct.residual_history,
        });
    }
    if !direct.hit_upper || config.max_swaps == 0 {
        return oriented_result(spec, &direct, false, &prober, config, started);
    }

    let turned = spec.swapped();
    let swapped = solve_oriented(&turned, config, &prober)?;
    if swapped.hit_lower {
        return Err(Error::NonConvergence {
            reason: "beta bisection collapsed onto beta = 0 after swapping".into(),
            history: swapped.residual_history,
        });
    }
    if !swapped.hit_upper {
        return oriented_result(&turned, &swapped, true, &prober, config, started);
    }
    // Both orientations pushed β to π/4: the modulus is one to within the
    // bisection resolution, or the residual maps are not monotone.
    let near_one = modulus_from_beta(direct.beta)?;
    if (near_one - 1.0).abs() < config.swap_detect_tol {
        return oriented_result(spec, &direct, false, &prober, config, started);
    }
    let mut history = direct.residual_history;
    history.extend(swapped.residual_history);
    Err(Error::NonConvergence {
        reason: "beta reached pi/4 in both orientations".into(),
        history,
    })
}

/// Re-solves inside `β₀ ± ε`, `γ₀ ± ε` with more iterations and a tighter ODE
/// tolerance, skipping the bracket search.
pub fn refine(
    seed: &ModulusResult,
    spec: &QuadrilateralSpec,
    config: &SolverConfig,
    tol_refined: &OdeTolerance,
) -> Result<ModulusResult> {
    config.validate()?;
    let started = Instant::now();
    if is_symmetric(spec) {
        let mut r = symmetric_result(started)?;
        r.diagnostics.refined = true;
        return Ok(r);
    }
    let oriented = if seed.swapped { spec.swapped() } else { *spec };
    let (k, big_k) = (oriented.center_ratio(), oriented.radius_ratio());
    let eps = config.refine_eps;
    let beta0 = seed.solved_beta();
    let gamma0 = seed.gamma;
    let prober = Prober::new(tol_refined);

    let (box_lo, box_hi) = (beta0 - eps, beta0 + eps);
    let (mut lo, mut hi) = (box_lo, box_hi);
    let mut last = None;
    for _ in 0..config.refine_iters {
        let beta = 0.5 * (lo + hi);
        let (gamma, geometry) = bisect_gamma(
            beta,
            k,
            gamma0 - eps,
            gamma0 + eps,
            config.refine_iters,
            &prober,
        )
        .map_err(|e| match e {
            Error::BracketFailure { .. } => Error::RefineEscaped(format!(
                "gamma root for beta = {beta} is outside [{}, {}]",
                gamma0 - eps,
                gamma0 + eps
            )),
            other => other,
        })?;
        if geometry.radius_ratio() < big_k {
            hi = beta;
        } else {
            lo = beta;
        }
        last = Some((beta, gamma, geometry));
    }
    if lo == box_lo || hi == box_hi {
        return Err(Error::RefineEscaped(format!(
            "beta root is outside [{box_lo}, {box_hi}]"
        )));
    }
    let (beta, gamma, g) = last.expect("refine_iters >= 1");
    let mut r = ModulusResult::from_parts(
        beta,
        gamma,
        seed.swapped,
        (g.center_ratio() - k).abs(),
        (g.radius_ratio() - big_k).abs(),
        SolveDiagnostics {
            beta_iterations: config.refine_iters,
            gamma_iterations: config.refine_iters * config.refine_iters,
            rays: prober.rays.get(),
            refined: true,
            wall_time_ms: elapsed_ms(started),
        },
    )?;
    r.diagnostics.wall_time_ms += seed.diagnostics.wall_time_ms;
    Ok(r)
}

/// Standard solve, optionally followed by [`refine`] with
/// `config.refined_ode_tol`.
pub fn solve(
    spec: &QuadrilateralSpec,
    config: &SolverConfig,
    refined: bool,
) -> Result<ModulusResult> {
    let seed = solve_beta(spec, config)?;
    if refined {
        refine(&seed, spec, config, &config.refined_ode_tol)
    } else {
        Ok(seed)
    }
}

/// `ε_N = |⌈log₁₀ ε_R⌉|`. Values below machine epsilon are clamped to it,
/// so an exact zero maps to 15.
pub fn error_number(eps_r: f64) -> u32 {
    eps_r.max(f64::EPSILON).log10().ceil().abs() as u32
}

/// Result of solving a target and its quarter-turned conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReciprocalCheck {
    pub eps_r: f64,
    pub eps_n: u32,
    pub primary: ModulusResult,
    pub conjugate: ModulusResult,
}

/// Solves `spec` and `spec.swapped()` independently;
/// `ε_R = |1 − Mod(Q)·Mod(Q̃)|`. Both results carry `ε_R`, `ε_N`.
pub fn reciprocal_check(
    spec: &QuadrilateralSpec,
    config: &SolverConfig,
    refined: bool,
) -> Result<ReciprocalCheck> {
    let mut primary = solve(spec, config, refined)?;
    let mut conjugate = solve(&spec.swapped(), config, refined)?;
    let eps_r = (1.0 - primary.modulus * conjugate.modulus).abs();
    let eps_n = error_number(eps_r);
    for r in [&mut primary, &mut conjugate] {
        r.reciprocal_error = Some(eps_r);
        r.error_number = Some(eps_n);
    }
    Ok(ReciprocalCheck {
        eps_r,
        eps_n,
        primary,
        conjugate,
    })
}

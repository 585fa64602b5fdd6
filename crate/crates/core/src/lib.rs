//! Conformal moduli of circular quadrilaterals with four cusps that are
//! symmetric about both coordinate axes.
//!
//! The conformal map `f` of the unit disk onto such a quadrilateral has a
//! Schwarzian derivative determined by two real parameters: the vertex
//! preimage angle `β` (vertices at `±e^{±iβ}`) and an accessory parameter `γ`.
//! Writing `f = u/v` with `u`, `v` solutions of a linear second-order ODE, the
//! boundary arcs of the image are recovered by integrating along a few rays,
//! and `(β, γ)` are identified by nested bisection so that the image matches
//! a target quadrilateral. The modulus then follows from `β` in closed form.
//!
//! Modules:
//! - [`specialfn`]: elliptic integral `K`, cross-ratios, Möbius maps, exact
//!   half-plane moduli.
//! - [`schwarz_ode`]: the Schwarzian coefficient, ray integration and a
//!   Taylor-series cross-check.
//! - [`geometry`]: target quadrilaterals and circle fitting of image arcs.
//! - [`solver`]: parameter identification, refinement and reciprocal
//!   diagnostics.
//! - [`benchmarks`]: exact and tabulated reference cases.

// Range checks are written as `!(x <= tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmarks;
pub mod error;
pub mod geometry;
pub mod schwarz_ode;
pub mod solver;
pub mod specialfn;

pub use error::{Error, Result};
pub use geometry::{QuadGeometry, QuadrilateralSpec};
pub use schwarz_ode::{OdeTolerance, RaySolution, SchwarzParams};
pub use solver::{ModulusResult, SolverConfig};
pub use specialfn::{ExtendedComplex, MobiusMap};

//! Extended complex plane, Möbius maps, cross-ratios and the exact modulus of
//! a half-plane quadrilateral.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::elliptic::k_from_complementary_modulus;
use crate::error::{Error, Result};

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub fn real(x: f64) -> Self {
        Self::Finite(Complex64::new(x, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            Self::Finite(z) => Some(z),
            Self::Infinity => None,
        }
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        Self::Finite(z)
    }
}

impl From<f64> for ExtendedComplex {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

impl fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(z) if z.im == 0.0 => write!(f, "{}", z.re),
            Self::Finite(z) => write!(f, "{z}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

/// `z ↦ (a z + b)/(c z + d)` with `ad − bc ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(Error::Degenerate(format!(
                "Mobius coefficients have ad - bc = {det}"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn apply(&self, z: ExtendedComplex) -> ExtendedComplex {
        mobius_apply(self, z)
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }
}

/// Evaluates a Möbius map projectively: the pole goes to ∞ and ∞ goes to
/// `a/c` (or stays at ∞ when `c = 0`).
pub fn mobius_apply(map: &MobiusMap, z: ExtendedComplex) -> ExtendedComplex {
    match z {
        ExtendedComplex::Infinity => {
            if map.c == Complex64::new(0.0, 0.0) {
                ExtendedComplex::Infinity
            } else {
                ExtendedComplex::Finite(map.a / map.c)
            }
        }
        ExtendedComplex::Finite(z) => {
            let den = map.c * z + map.d;
            if den == Complex64::new(0.0, 0.0) {
                ExtendedComplex::Infinity
            } else {
                ExtendedComplex::Finite((map.a * z + map.b) / den)
            }
        }
    }
}

/// Cross-ratio `(z₁, z₂; z₃, z₄) = (z₃ − z₁)(z₄ − z₂) / ((z₃ − z₂)(z₄ − z₁))`.
///
/// One of the points may be ∞; the two factors containing it cancel. For
/// pairwise distinct points the result is finite and nonzero.
pub fn cross_ratio(
    z1: ExtendedComplex,
    z2: ExtendedComplex,
    z3: ExtendedComplex,
    z4: ExtendedComplex,
) -> Result<Complex64> {
    let pts = [z1, z2, z3, z4];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(Error::Degenerate(format!(
                    "cross-ratio points {} and {} coincide ({})",
                    i + 1,
                    j + 1,
                    pts[i]
                )));
            }
        }
    }
    use ExtendedComplex::{Finite as F, Infinity as Inf};
    let cr = match (z1, z2, z3, z4) {
        (F(a), F(b), F(c), F(d)) => (c - a) * (d - b) / ((c - b) * (d - a)),
        (Inf, F(b), F(c), F(d)) => (d - b) / (c - b),
        (F(a), Inf, F(c), F(d)) => (c - a) / (d - a),
        (F(a), F(b), Inf, F(d)) => (d - b) / (d - a),
        (F(a), F(b), F(c), Inf) => (c - a) / (c - b),
        _ => unreachable!("distinctness allows at most one point at infinity"),
    };
    Ok(cr)
}

/// The `λ ∈ (0, 1)` for which the ordered quadruple `(−1/λ, −1, 1, 1/λ)` has
/// cross-ratio `cr`, i.e. the root of `(1 + λ)² = 4λ·cr` below one.
pub fn lambda_from_cross_ratio(cr: f64) -> Result<f64> {
    if !(cr > 1.0) || !cr.is_finite() {
        return Err(Error::Domain {
            what: "cross-ratio",
            value: cr,
            expected: "cr > 1 (cr = 1 is the degenerate lambda = 1 case)",
        });
    }
    // Roots of λ² + (2 − 4cr)λ + 1 have product 1; take the small one without
    // the cancellation in (2cr − 1) − √((2cr − 1)² − 1).
    let p = 2.0 * cr - 1.0;
    let disc = (2.0 * (cr - 1.0) * 2.0 * cr).sqrt(); // √(p² − 1) = √(4cr(cr − 1))
    Ok(1.0 / (p + disc))
}

/// Whether four points of the extended real line are in increasing cyclic
/// order along `ℝ ∪ {∞}`.
fn in_cyclic_order(points: &[ExtendedComplex; 4]) -> Result<bool> {
    // Position on the circle: finite x ↦ x, ∞ ↦ +∞ (the top of the circle).
    let mut keys = [0.0_f64; 4];
    for (key, p) in keys.iter_mut().zip(points) {
        *key = match p {
            ExtendedComplex::Infinity => f64::INFINITY,
            ExtendedComplex::Finite(z) if z.im == 0.0 && z.re.is_finite() => z.re,
            ExtendedComplex::Finite(z) => {
                return Err(Error::Domain {
                    what: "half-plane vertex imaginary part",
                    value: z.im,
                    expected: "vertices on the extended real axis",
                })
            }
        };
    }
    let descents = (0..4).filter(|&i| keys[i] >= keys[(i + 1) % 4]).count();
    Ok(descents == 1)
}

/// Exact conformal modulus of the upper half-plane with boundary vertices
/// `p₁, p₂, p₃, p₄` (extended reals in increasing cyclic order).
///
/// The cross-ratio is mapped to the normal form `±1, ±1/λ` and
/// `Mod = K(1 − λ²) / (2K(λ²))` (parameter convention, `m = λ²`).
pub fn half_plane_modulus(
    p1: ExtendedComplex,
    p2: ExtendedComplex,
    p3: ExtendedComplex,
    p4: ExtendedComplex,
) -> Result<f64> {
    let pts = [p1, p2, p3, p4];
    let cr = cross_ratio(p1, p2, p3, p4)?;
    if !in_cyclic_order(&pts)? {
        return Err(Error::Domain {
            what: "half-plane cross-ratio",
            value: cr.re,
            expected: "vertices in increasing cyclic order along the real axis",
        });
    }
    let lambda = lambda_from_cross_ratio(cr.re)?;
    // K(λ²) has complementary modulus √(1 − λ²); K(1 − λ²) has λ.
    let k_lambda = k_from_complementary_modulus(((1.0 - lambda) * (1.0 + lambda)).sqrt());
    let k_complement = k_from_complementary_modulus(lambda);
    Ok(k_complement / (2.0 * k_lambda))
}

/// Half-plane images `−cos(πk/(n − 2))`, `k = 0..=n−2`, followed by ∞, of the
/// vertices of the zero-angle circular n-gon `Pₙ`.
pub fn pn_vertex_images(n: usize) -> Result<Vec<ExtendedComplex>> {
    if n < 4 {
        return Err(Error::Domain {
            what: "polygon vertex count n",
            value: n as f64,
            expected: "n >= 4",
        });
    }
    let denom = (n - 2) as f64;
    let mut images: Vec<ExtendedComplex> = (0..=n - 2)
        .map(|k| {
            // Exact zero at the midpoint instead of −cos(π/2) ≈ −6e-17.
            if 2 * k == n - 2 {
                ExtendedComplex::real(0.0)
            } else {
                ExtendedComplex::real(-(std::f64::consts::PI * k as f64 / denom).cos())
            }
        })
        .collect();
    images.push(ExtendedComplex::Infinity);
    Ok(images)
}

//! Complete elliptic integral of the first kind and the disk-quadrilateral
//! modulus built on it.
//!
//! Everything here uses the *parameter* convention `m = k²`. Callers holding
//! a modulus `λ` pass `m = λ²`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

const AGM_MAX_ITER: usize = 40;

/// Elliptic parameter `m = k²` restricted to `[0, 1)`, where `K(m)` is finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticParameter(f64);

impl EllipticParameter {
    pub fn new(m: f64) -> Result<Self> {
        if (0.0..1.0).contains(&m) {
            Ok(Self(m))
        } else {
            Err(Error::Domain {
                what: "elliptic parameter m",
                value: m,
                expected: "0 <= m < 1",
            })
        }
    }

    /// Builds the parameter from a modulus `λ ∈ [0, 1)`, i.e. `m = λ²`.
    pub fn from_modulus(lambda: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::Domain {
                what: "elliptic modulus",
                value: lambda,
                expected: "0 <= lambda < 1",
            });
        }
        Ok(Self(lambda * lambda))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `K(m)`.
    pub fn complete_k(self) -> f64 {
        k_from_complementary_modulus((1.0 - self.0).sqrt())
    }
}

/// `K(m) = π / (2·AGM(1, k'))` where `k' = √(1 − m)` is the complementary
/// modulus.
///
/// Taking `k'` directly lets callers that know it in closed form (for example
/// `tan²(β/2)`) avoid forming `1 − m` and losing digits when `m` is near 0 or 1.
pub(crate) fn k_from_complementary_modulus(kc: f64) -> f64 {
    debug_assert!(kc > 0.0 && kc <= 1.0, "complementary modulus {kc}");
    if kc == 1.0 {
        return FRAC_PI_2;
    }
    let mut a = 1.0_f64;
    let mut b = kc;
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
    }
    PI / (a + b)
}

/// Complete elliptic integral of the first kind in the parameter convention,
/// `K(m) = ∫₀¹ dt / √((1 − t²)(1 − m t²))`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    EllipticParameter::new(m).map(EllipticParameter::complete_k)
}

/// Conformal modulus of the unit disk with vertices `e^{iβ}, −e^{−iβ},
/// −e^{iβ}, e^{−iβ}`: `2K(m)/K(1 − m)` with `m = tan⁴(β/2)`.
///
/// Strictly increasing on `(0, π/2)`, equal to 1 at `β = π/4`, and
/// `modulus_from_beta(β) · modulus_from_beta(π/2 − β) = 1`.
pub fn modulus_from_beta(beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < FRAC_PI_2) {
        return Err(Error::Domain {
            what: "beta",
            value: beta,
            expected: "0 < beta < pi/2",
        });
    }
    // m = q², 1 − m = (1 − q)(1 + q) with q = tan²(β/2) ∈ (0, 1).
    let q = (0.5 * beta).tan().powi(2);
    let k_m = k_from_complementary_modulus(((1.0 - q) * (1.0 + q)).sqrt());
    let k_complement = k_from_complementary_modulus(q);
    Ok(2.0 * k_m / k_complement)
}

//! Taylor-series evaluation of the odd/even solutions `u`, `v`.

use num_complex::Complex64;

use super::SchwarzParams;
use crate::error::{Error, Result};

/// Largest `|x|` accepted by [`series_eval`].
pub const SERIES_MAX_RADIUS: f64 = 0.6;

/// Coefficients `c₀..c_{n−1}` of `½S_f(z) = Σ cₙ z^{2n}`:
/// `cₙ = 2(n+1)cos(2(n+1)β) − γ·sin(2(n+1)β)/sin(2β)`.
pub fn schwarzian_series_coeffs(params: &SchwarzParams, n: usize) -> Vec<f64> {
    let beta = params.beta();
    let s2 = (2.0 * beta).sin();
    (0..n)
        .map(|k| {
            let m = (k + 1) as f64;
            let a = 2.0 * m * beta;
            2.0 * m * a.cos() - params.gamma() * a.sin() / s2
        })
        .collect()
}

/// Evaluates `u` and `v` at `z = x e^{iθ}` from their first `n_terms` nonzero
/// Taylor coefficients.
///
/// `u = Σ a_{2k+1} z^{2k+1}` and `v = Σ b_{2k} z^{2k}` with `a₁ = b₀ = 1` and
///
/// ```text
/// (2k+3)(2k+2) a_{2k+3} = −Σ_{j≤k} c_j a_{2(k−j)+1}
/// (2k+2)(2k+1) b_{2k+2} = −Σ_{j≤k} c_j b_{2(k−j)}
/// ```
///
/// Negative `x` is allowed; `u` is odd and `v` even in `x`.
pub fn series_eval(
    params: &SchwarzParams,
    theta: f64,
    x: f64,
    n_terms: usize,
) -> Result<(Complex64, Complex64)> {
    if !(x.abs() <= SERIES_MAX_RADIUS) {
        return Err(Error::Domain {
            what: "series radius |x|",
            value: x,
            expected: "|x| <= 0.6",
        });
    }
    if n_terms == 0 {
        return Err(Error::Domain {
            what: "series term count",
            value: 0.0,
            expected: "n_terms >= 1",
        });
    }
    let (odd, even) = series_coefficients(params, n_terms);
    let z = Complex64::from_polar(x.abs(), theta);
    let z2 = z * z;
    let horner = |coeffs: &[f64]| {
        coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z2 + c)
    };
    let u = z * horner(&odd);
    let v = horner(&even);
    Ok(if x < 0.0 { (-u, v) } else { (u, v) })
}

/// `(a₁, a₃, a₅, …)` and `(b₀, b₂, b₄, …)`, `n_terms` of each.
pub(crate) fn series_coefficients(params: &SchwarzParams, n_terms: usize) -> (Vec<f64>, Vec<f64>) {
    let c = schwarzian_series_coeffs(params, n_terms);
    let mut odd = vec![0.0; n_terms];
    let mut even = vec![0.0; n_terms];
    odd[0] = 1.0;
    even[0] = 1.0;
    for k in 0..n_terms - 1 {
        let conv = |coeffs: &[f64]| -> f64 { (0..=k).map(|j| c[j] * coeffs[k - j]).sum() };
        let kf = k as f64;
        odd[k + 1] = -conv(&odd) / ((2.0 * kf + 3.0) * (2.0 * kf + 2.0));
        even[k + 1] = -conv(&even) / ((2.0 * kf + 2.0) * (2.0 * kf + 1.0));
    }
    (odd, even)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    /// Taylor coefficients of `½S_f` in powers of `w = z²`, by multiplying out
    /// the geometric series of each rational term.
    fn brute_force_coeffs(beta: f64, gamma: f64, n: usize) -> Vec<C> {
        let p = C::from_polar(1.0, 2.0 * beta);
        let q = C::from_polar(1.0, -2.0 * beta);
        // 1/(w − a) = −Σ w^k / a^{k+1}
        let geo = |a: C| -> Vec<C> { (0..n).map(|k| -a.powi(-(k as i32) - 1)).collect() };
        let mul = |x: &[C], y: &[C]| -> Vec<C> {
            (0..n)
                .map(|k| (0..=k).map(|j| x[j] * y[k - j]).sum())
                .collect()
        };
        let gp = geo(p);
        let gq = geo(q);
        let sq_p = mul(&gp, &gp);
        let sq_q = mul(&gq, &gq);
        let cross = mul(&gp, &gq);
        (0..n)
            .map(|k| p * sq_p[k] + q * sq_q[k] - gamma * cross[k])
            .collect()
    }

    #[test]
    fn closed_form_coefficients_match_series_multiplication() {
        for &(beta, gamma) in &[
            (0.3398369094541219, 2.0 / 3.0),
            (0.1, -1.3),
            (1.2, 0.7),
            (0.785, 0.0),
        ] {
            let params = SchwarzParams::new(beta, gamma).unwrap();
            let closed = schwarzian_series_coeffs(&params, 40);
            let brute = brute_force_coeffs(beta, gamma, 40);
            for (k, (a, b)) in closed.iter().zip(&brute).enumerate() {
                let scale = 1.0 + b.norm();
                assert!((a - b.re).abs() < 1e-11 * scale, "k={k}: {a} vs {b}");
                assert!(b.im.abs() < 1e-11 * scale);
            }
        }
    }

    #[test]
    fn single_term_is_leading_order() {
        let params = SchwarzParams::new(0.5, 0.4).unwrap();
        let (u, v) = series_eval(&params, 0.3, 0.2, 1).unwrap();
        assert_eq!(u, C::from_polar(0.2, 0.3));
        assert_eq!(v, C::new(1.0, 0.0));
    }

    #[test]
    fn second_even_coefficient() {
        let (beta, gamma) = (0.5, 0.4);
        let params = SchwarzParams::new(beta, gamma).unwrap();
        let (odd, even) = series_coefficients(&params, 3);
        let c0 = 2.0 * (2.0 * beta).cos() - gamma;
        assert!((even[1] + c0 / 2.0).abs() < 1e-15);
        assert!((odd[1] + c0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn parity_is_exact() {
        let params = SchwarzParams::new(0.7, -0.3).unwrap();
        let (u, v) = series_eval(&params, 1.1, 0.45, 200).unwrap();
        let (um, vm) = series_eval(&params, 1.1, -0.45, 200).unwrap();
        assert_eq!(um, -u);
        assert_eq!(vm, v);
    }

    #[test]
    fn radius_enforced() {
        let params = SchwarzParams::new(0.7, -0.3).unwrap();
        assert!(series_eval(&params, 0.0, 0.61, 200).is_err());
        assert!(series_eval(&params, 0.0, 0.3, 0).is_err());
    }
}

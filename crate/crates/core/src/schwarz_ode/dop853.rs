//! Dormand–Prince 8(5,3) explicit Runge–Kutta pair (no dense output),
//! specialised to fixed-size complex state vectors.
//!
//! Coefficients and the combined 5th/3rd-order error estimate follow Hairer,
//! Nørsett & Wanner's `DOP853`. Step control uses the Lund-stabilised (PI)
//! controller of the reference code.

#![allow(clippy::excessive_precision)]

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Per-integration statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evals: usize,
    /// Sum over accepted steps of the unscaled local error estimate.
    pub error_budget: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Dop853Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

const SAFE: f64 = 0.9;
const FAC_MIN: f64 = 0.333;
const FAC_MAX: f64 = 6.0;
const PI_BETA: f64 = 0.04;
const EXPO1: f64 = 1.0 / 8.0 - PI_BETA * 0.2;

/// Integrates `y' = rhs(x, y)` from `x0` to `x_end > x0`.
///
/// `on_accept` is called with `(x, y)` after every accepted step.
pub fn integrate<const N: usize, F, G>(
    rhs: F,
    x0: f64,
    y0: [Complex64; N],
    x_end: f64,
    opts: &Dop853Options,
    mut on_accept: G,
) -> Result<([Complex64; N], StepStats)>
where
    F: Fn(f64, &[Complex64; N]) -> [Complex64; N],
    G: FnMut(f64, &[Complex64; N]),
{
    let mut stats = StepStats::default();
    let mut x = x0;
    let mut y = y0;
    if x_end <= x0 {
        return Ok((y, stats));
    }
    let span = x_end - x0;

    let mut k1 = rhs(x, &y);
    stats.evals += 1;
    let mut h = initial_step(&rhs, x, &y, &k1, span, opts, &mut stats);
    let mut fac_old = 1e-4_f64;
    let mut last_rejected = false;

    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::StepLimit {
                max_steps: opts.max_steps,
                x,
            });
        }
        if h.abs() <= 10.0 * f64::EPSILON * x.abs().max(1.0) {
            return Err(Error::StepUnderflow { x });
        }
        let last = x + 1.01 * h >= x_end;
        if last {
            h = x_end - x;
        }

        let (y_new, err5, err3) = trial_step(&rhs, x, &y, &k1, h);
        stats.evals += 11;

        // Scaled and unscaled norms of the embedded error estimates.
        let mut e5 = 0.0;
        let mut e3 = 0.0;
        let mut u5 = 0.0;
        let mut u3 = 0.0;
        for i in 0..N {
            let sk = opts.abs_tol + opts.rel_tol * y[i].norm().max(y_new[i].norm());
            let (a5, a3) = (err5[i].norm_sqr(), err3[i].norm_sqr());
            e5 += a5 / (sk * sk);
            e3 += a3 / (sk * sk);
            u5 += a5;
            u3 += a3;
        }
        let blend = |n5: f64, n3: f64| {
            let deno = if n5 + 0.01 * n3 > 0.0 {
                n5 + 0.01 * n3
            } else {
                1.0
            };
            h.abs() * n5 / (deno * N as f64).sqrt()
        };
        let err = blend(e5, e3);
        if !err.is_finite() {
            // Overflow near a singularity: shrink hard and retry.
            stats.rejected += 1;
            h *= 0.1;
            last_rejected = true;
            continue;
        }

        let fac11 = err.powf(EXPO1);
        let fac = (fac11 / fac_old.powf(PI_BETA) / SAFE).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
        let mut h_new = h / fac;

        if err <= 1.0 {
            fac_old = err.max(1e-4);
            stats.accepted += 1;
            stats.error_budget += blend(u5, u3);
            k1 = rhs(x + h, &y_new);
            stats.evals += 1;
            x = if last { x_end } else { x + h };
            y = y_new;
            on_accept(x, &y);
            if last {
                return Ok((y, stats));
            }
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
        } else {
            h_new = h / (1.0 / FAC_MIN).min(fac11 / SAFE);
            stats.rejected += 1;
            last_rejected = true;
        }
        h = h_new;
    }
}

fn scaled_norm<const N: usize>(
    v: &[Complex64; N],
    y: &[Complex64; N],
    opts: &Dop853Options,
) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sk = opts.abs_tol + opts.rel_tol * y[i].norm();
        acc += v[i].norm_sqr() / (sk * sk);
    }
    (acc / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(
    rhs: &F,
    x: f64,
    y: &[Complex64; N],
    f0: &[Complex64; N],
    span: f64,
    opts: &Dop853Options,
    stats: &mut StepStats,
) -> f64
where
    F: Fn(f64, &[Complex64; N]) -> [Complex64; N],
{
    let dnf = scaled_norm(f0, y, opts);
    let dny = scaled_norm(y, y, opts);
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        0.01 * dny / dnf
    };
    h = h.min(span);
    let mut y1 = *y;
    for i in 0..N {
        y1[i] += f0[i] * h;
    }
    let f1 = rhs(x + h, &y1);
    stats.evals += 1;
    let mut diff = [Complex64::new(0.0, 0.0); N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let der2 = scaled_norm(&diff, y, opts) / h;
    let der12 = der2.max(dnf);
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(1.0 / 8.0)
    };
    (100.0 * h).min(h1).min(span)
}

/// One trial step: the 8th-order solution and the 5th/3rd-order error
/// vectors (still to be multiplied by `h`).
fn trial_step<const N: usize, F>(
    rhs: &F,
    x: f64,
    y: &[Complex64; N],
    k1: &[Complex64; N],
    h: f64,
) -> ([Complex64; N], [Complex64; N], [Complex64; N])
where
    F: Fn(f64, &[Complex64; N]) -> [Complex64; N],
{
    let comb = |terms: &[(f64, &[Complex64; N])]| {
        let mut out = *y;
        for i in 0..N {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, k) in terms {
                acc += k[i] * *c;
            }
            out[i] += acc * h;
        }
        out
    };

    let k2 = rhs(x + C2 * h, &comb(&[(A21, k1)]));
    let k3 = rhs(x + C3 * h, &comb(&[(A31, k1), (A32, &k2)]));
    let k4 = rhs(x + C4 * h, &comb(&[(A41, k1), (A43, &k3)]));
    let k5 = rhs(x + C5 * h, &comb(&[(A51, k1), (A53, &k3), (A54, &k4)]));
    let k6 = rhs(x + C6 * h, &comb(&[(A61, k1), (A64, &k4), (A65, &k5)]));
    let k7 = rhs(
        x + C7 * h,
        &comb(&[(A71, k1), (A74, &k4), (A75, &k5), (A76, &k6)]),
    );
    let k8 = rhs(
        x + C8 * h,
        &comb(&[(A81, k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)]),
    );
    let k9 = rhs(
        x + C9 * h,
        &comb(&[
            (A91, k1),
            (A94, &k4),
            (A95, &k5),
            (A96, &k6),
            (A97, &k7),
            (A98, &k8),
        ]),
    );
    let k10 = rhs(
        x + C10 * h,
        &comb(&[
            (A101, k1),
            (A104, &k4),
            (A105, &k5),
            (A106, &k6),
            (A107, &k7),
            (A108, &k8),
            (A109, &k9),
        ]),
    );
    let k11 = rhs(
        x + C11 * h,
        &comb(&[
            (A111, k1),
            (A114, &k4),
            (A115, &k5),
            (A116, &k6),
            (A117, &k7),
            (A118, &k8),
            (A119, &k9),
            (A1110, &k10),
        ]),
    );
    let y12 = comb(&[
        (A121, k1),
        (A124, &k4),
        (A125, &k5),
        (A126, &k6),
        (A127, &k7),
        (A128, &k8),
        (A129, &k9),
        (A1210, &k10),
        (A1211, &k11),
    ]);
    let k12 = rhs(x + h, &y12);

    let mut y_new = *y;
    let mut err5 = [Complex64::new(0.0, 0.0); N];
    let mut err3 = [Complex64::new(0.0, 0.0); N];
    for i in 0..N {
        let incr = k1[i] * B1
            + k6[i] * B6
            + k7[i] * B7
            + k8[i] * B8
            + k9[i] * B9
            + k10[i] * B10
            + k11[i] * B11
            + k12[i] * B12;
        y_new[i] += incr * h;
        err3[i] = incr - k1[i] * BHH1 - k9[i] * BHH2 - k12[i] * BHH3;
        err5[i] = k1[i] * ER1
            + k6[i] * ER6
            + k7[i] * ER7
            + k8[i] * ER8
            + k9[i] * ER9
            + k10[i] * ER10
            + k11[i] * ER11
            + k12[i] * ER12;
    }
    (y_new, err5, err3)
}

const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;

const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;

const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(tol: f64) -> Dop853Options {
        Dop853Options {
            rel_tol: tol,
            abs_tol: tol,
            max_steps: 100_000,
        }
    }

    #[test]
    fn harmonic_oscillator_to_tolerance() {
        // y'' = −y, y(0) = 0, y'(0) = 1 → y = sin x
        let rhs = |_x: f64, y: &[Complex64; 2]| [y[1], -y[0]];
        let y0 = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let (y, stats) = integrate(rhs, 0.0, y0, 10.0, &opts(1e-12), |_, _| {}).unwrap();
        assert!((y[0].re - 10f64.sin()).abs() < 1e-10, "{}", y[0]);
        assert!((y[1].re - 10f64.cos()).abs() < 1e-10);
        assert!(stats.accepted > 5 && stats.accepted < 500, "{stats:?}");
    }

    #[test]
    fn complex_exponential_growth() {
        // y' = i y → e^{i x}
        let rhs = |_x: f64, y: &[Complex64; 1]| [Complex64::i() * y[0]];
        let (y, _) = integrate(
            rhs,
            0.0,
            [Complex64::new(1.0, 0.0)],
            3.0,
            &opts(1e-13),
            |_, _| {},
        )
        .unwrap();
        let exact = Complex64::new(0.0, 3.0).exp();
        assert!((y[0] - exact).norm() < 1e-11);
    }

    #[test]
    fn eighth_order_convergence_on_fixed_tolerances() {
        // Error should shrink roughly like tol when tol shrinks.
        let rhs = |x: f64, y: &[Complex64; 1]| [y[0] * (x.cos())];
        let exact = 2f64.sin().exp();
        let e = |tol| {
            let (y, _) = integrate(
                rhs,
                0.0,
                [Complex64::new(1.0, 0.0)],
                2.0,
                &opts(tol),
                |_, _| {},
            )
            .unwrap();
            (y[0].re - exact).abs()
        };
        assert!(e(1e-6) < 1e-5);
        assert!(e(1e-12) < 1e-10);
    }

    #[test]
    fn step_limit_reported() {
        let rhs = |_x: f64, y: &[Complex64; 1]| [y[0] * 1e6];
        let mut o = opts(1e-12);
        o.max_steps = 10;
        let r = integrate(rhs, 0.0, [Complex64::new(1.0, 0.0)], 1.0, &o, |_, _| {});
        assert!(matches!(r, Err(Error::StepLimit { .. })));
    }
}

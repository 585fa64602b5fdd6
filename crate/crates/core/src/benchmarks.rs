//! Reference cases with known moduli.
//!
//! - the doubly symmetric quadrilateral with `k = √2`, `K = 2`, whose
//!   parameters `β = arcsin(1/3)`, `γ = 2/3` and modulus are known exactly;
//! - the zero-angle hexagon mapped onto the upper half-plane with vertex
//!   images `−(3+2√2), −1, −(3−2√2), 0, 1, ∞`;
//! - the `Pₙ` family with vertex images `−cos(πk/(n−2))` and `∞`;
//! - the 25-row `(α, j)` table of high-accuracy moduli.
//!
//! Values that follow from elliptic integrals are recomputed on construction
//! and checked against their stored decimals; tabulated moduli are stored
//! verbatim.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::QuadrilateralSpec;
use crate::specialfn::{half_plane_modulus, pn_vertex_images, ExtendedComplex, MobiusMap};

/// Stored-vs-recomputed agreement required of exact fixtures.
pub const EXACT_FIXTURE_TOL: f64 = 1e-12;

pub const Q4_MODULUS: f64 = 0.6396307855855;
#[allow(clippy::excessive_precision)]
pub const HEXAGON_ABDE_MODULUS: f64 = 0.92401502327430725964;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BenchmarkInput {
    Quadrilateral { spec: QuadrilateralSpec },
    HalfPlane { vertices: Vec<ExtendedComplex> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkCase {
    pub name: String,
    pub input: BenchmarkInput,
    pub expected_modulus: f64,
    pub expected_beta: Option<f64>,
    pub expected_gamma: Option<f64>,
    pub provenance: String,
}

impl BenchmarkCase {
    /// The quadrilateral spec, for solver-backed cases.
    pub fn spec(&self) -> Option<&QuadrilateralSpec> {
        match &self.input {
            BenchmarkInput::Quadrilateral { spec } => Some(spec),
            BenchmarkInput::HalfPlane { .. } => None,
        }
    }

    /// Exact modulus of a half-plane case via the cross-ratio pipeline.
    pub fn half_plane_modulus(&self) -> Option<Result<f64>> {
        match &self.input {
            BenchmarkInput::HalfPlane { vertices } => Some(half_plane_modulus(
                vertices[0],
                vertices[1],
                vertices[2],
                vertices[3],
            )),
            BenchmarkInput::Quadrilateral { .. } => None,
        }
    }
}

fn assert_recomputed(name: &str, stored: f64, recomputed: f64) {
    assert!(
        (stored - recomputed).abs() <= EXACT_FIXTURE_TOL,
        "fixture {name}: stored {stored} but recomputed {recomputed}"
    );
}

/// Quadrilateral with `t = √(3/2)`, `s = √3`, `r₁ = √(1/2)`, `r₂ = √2`.
pub fn exact_case_q4() -> BenchmarkCase {
    let spec = QuadrilateralSpec {
        t: 1.5f64.sqrt(),
        s: 3f64.sqrt(),
        r1: 0.5f64.sqrt(),
        r2: 2f64.sqrt(),
    };
    // K(√3/2)/(2K(1/2)) in the parameter convention.
    let exact = crate::specialfn::elliptic_k(0.75).expect("m in domain")
        / (2.0 * crate::specialfn::elliptic_k(0.25).expect("m in domain"));
    assert_recomputed("q4", Q4_MODULUS, exact);
    BenchmarkCase {
        name: "q4".into(),
        input: BenchmarkInput::Quadrilateral { spec },
        expected_modulus: Q4_MODULUS,
        expected_beta: Some((1.0_f64 / 3.0).asin()),
        expected_gamma: Some(2.0 / 3.0),
        provenance: "exact: K(sqrt(3)/2) / (2 K(1/2)), beta = arcsin(1/3), gamma = 2/3".into(),
    }
}

/// Vertices of the zero-angle hexagon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HexVertex {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl HexVertex {
    pub const ALL: [HexVertex; 6] = [Self::A, Self::B, Self::C, Self::D, Self::E, Self::F];

    /// Image on the boundary of the upper half-plane.
    pub fn half_plane_image(self) -> ExtendedComplex {
        let r2 = 2f64.sqrt();
        match self {
            Self::A => ExtendedComplex::real(-(3.0 + 2.0 * r2)),
            Self::B => ExtendedComplex::real(-1.0),
            Self::C => ExtendedComplex::real(-(3.0 - 2.0 * r2)),
            Self::D => ExtendedComplex::real(0.0),
            Self::E => ExtendedComplex::real(1.0),
            Self::F => ExtendedComplex::Infinity,
        }
    }

    /// Position of the vertex in the plane of the hexagon.
    pub fn position(self) -> ExtendedComplex {
        match self {
            Self::A => ExtendedComplex::real(-2.0),
            Self::B => ExtendedComplex::real(0.0),
            Self::C => ExtendedComplex::real(2.0 / 3.0),
            Self::D => ExtendedComplex::real(1.0),
            Self::E => ExtendedComplex::real(2.0),
            Self::F => ExtendedComplex::Infinity,
        }
    }

    /// Image of [`position`](Self::position) on the unit circle under
    /// [`hexagon_disk_map`].
    pub fn disk_image(self) -> Complex64 {
        match self {
            Self::A => Complex64::new(0.0, -1.0),
            Self::B => Complex64::new(1.0, 0.0),
            Self::C => Complex64::new(8.0 / 17.0, 15.0 / 17.0),
            Self::D => Complex64::new(0.0, 1.0),
            Self::E => Complex64::new(-0.8, 0.6),
            Self::F => Complex64::new(-0.8, -0.6),
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for HexVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for HexVertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Self::A),
            "B" => Ok(Self::B),
            "C" => Ok(Self::C),
            "D" => Ok(Self::D),
            "E" => Ok(Self::E),
            "F" => Ok(Self::F),
            other => Err(Error::InvalidGeometry(format!(
                "unknown hexagon vertex {other:?}"
            ))),
        }
    }
}

/// `w = (4 − (1 − 3i)z) / (4 − (1 + 3i)z)`, taking the upper half-plane onto
/// the unit disk.
pub fn hexagon_disk_map() -> MobiusMap {
    MobiusMap::new(
        Complex64::new(-1.0, 3.0),
        Complex64::new(4.0, 0.0),
        Complex64::new(-1.0, -3.0),
        Complex64::new(4.0, 0.0),
    )
    .expect("nonsingular map")
}

/// `K(m₁)/K(1 − m₁)` with `m₁ = 1/(1 + √2)`, the closed form of the
/// `(A, B, D, E)` hexagon modulus.
pub fn hexagon_abde_closed_form() -> f64 {
    let m1 = 1.0 / (1.0 + 2f64.sqrt());
    let m2 = 2f64.sqrt() / (1.0 + 2f64.sqrt());
    crate::specialfn::elliptic_k(m1).expect("m in domain")
        / crate::specialfn::elliptic_k(m2).expect("m in domain")
}

/// Index tuples that visit `0..n` in increasing cyclic order.
fn is_cyclic_selection(idx: &[usize; 4]) -> bool {
    let descents = (0..4).filter(|&i| idx[i] >= idx[(i + 1) % 4]).count();
    descents == 1
}

/// Quadrilateral obtained by keeping four of the hexagon's vertices.
pub fn hexagon_case(selection: [HexVertex; 4]) -> Result<BenchmarkCase> {
    let idx = selection.map(HexVertex::index);
    if !is_cyclic_selection(&idx) {
        return Err(Error::InvalidGeometry(format!(
            "hexagon vertices {selection:?} are not distinct and in cyclic order"
        )));
    }
    let vertices: Vec<ExtendedComplex> = selection.iter().map(|v| v.half_plane_image()).collect();
    let modulus = half_plane_modulus(vertices[0], vertices[1], vertices[2], vertices[3])?;
    let name = format!(
        "hexagon {}",
        selection
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("")
    );
    let (expected, provenance) =
        if selection == [HexVertex::A, HexVertex::B, HexVertex::D, HexVertex::E] {
            assert_recomputed(&name, HEXAGON_ABDE_MODULUS, modulus);
            assert_recomputed(&name, HEXAGON_ABDE_MODULUS, hexagon_abde_closed_form());
            (
                HEXAGON_ABDE_MODULUS,
                "exact: K(1/sqrt(1+sqrt2)) / K(sqrt(sqrt2/(1+sqrt2))) = 0.92401502327430725964",
            )
        } else {
            (
                modulus,
                "exact: half-plane cross-ratio of the hexagon vertex images",
            )
        };
    Ok(BenchmarkCase {
        name,
        input: BenchmarkInput::HalfPlane { vertices },
        expected_modulus: expected,
        expected_beta: None,
        expected_gamma: None,
        provenance: provenance.into(),
    })
}

/// Quadrilateral obtained by keeping vertices `indices` of `Pₙ`; index
/// `n − 1` is the vertex at infinity.
pub fn pn_case(n: usize, indices: [usize; 4]) -> Result<BenchmarkCase> {
    let images = pn_vertex_images(n)?;
    if indices.iter().any(|&i| i >= images.len()) || !is_cyclic_selection(&indices) {
        return Err(Error::InvalidGeometry(format!(
            "P_{n} vertex indices {indices:?} must be distinct, below {} and in cyclic order",
            images.len()
        )));
    }
    let vertices: Vec<ExtendedComplex> = indices.iter().map(|&i| images[i]).collect();
    let modulus = half_plane_modulus(vertices[0], vertices[1], vertices[2], vertices[3])?;
    Ok(BenchmarkCase {
        name: format!("P{n} {indices:?}"),
        input: BenchmarkInput::HalfPlane { vertices },
        expected_modulus: modulus,
        expected_beta: None,
        expected_gamma: None,
        provenance: "exact: half-plane images -cos(pi k/(n-2)) and infinity".into(),
    })
}

/// `(n, j, modulus)` with `α = π/n`: high-accuracy moduli of the `(α, j)`
/// family. `(4, 5)` is exactly 1.
pub const TABLE1: [(u32, u32, f64); 25] = [
    (4, 1, 1.65195641811156),
    (4, 2, 1.41312882432748),
    (4, 3, 1.23851628549016),
    (4, 4, 1.10517573064876),
    (4, 5, 1.0),
    (5, 1, 0.98160730939538),
    (5, 2, 0.88131392866493),
    (5, 3, 0.79679236427334),
    (5, 4, 0.72458889240001),
    (5, 5, 0.66218813398119),
    (6, 1, 0.69813355689778),
    (6, 2, 0.63911229266297),
    (6, 3, 0.58614411420414),
    (6, 4, 0.53833144748697),
    (6, 5, 0.49493951440663),
    (7, 1, 0.54204377899126),
    (7, 2, 0.50133063755764),
    (7, 3, 0.46350872114770),
    (7, 4, 0.42826373909062),
    (7, 5, 0.39531863465020),
    (8, 1, 0.44327582367411),
    (8, 2, 0.41254658974644),
    (8, 3, 0.38338339855016),
    (8, 4, 0.35565066792949),
    (8, 5, 0.32922144646084),
];

/// The 25 `(α = π/n, j)` quadrilaterals paired with their tabulated moduli.
pub fn table1_fixture() -> Vec<BenchmarkCase> {
    TABLE1
        .iter()
        .map(|&(n, j, modulus)| {
            let spec = QuadrilateralSpec::from_alpha_j(PI / n as f64, j)
                .expect("table parameters are in range");
            BenchmarkCase {
                name: format!("alpha=pi/{n} j={j}"),
                input: BenchmarkInput::Quadrilateral { spec },
                expected_modulus: modulus,
                expected_beta: None,
                expected_gamma: None,
                provenance: if n == 4 && j == 5 {
                    "table: sharp value 1".into()
                } else {
                    "table: higher-accuracy column".into()
                },
            }
        })
        .collect()
}

/// Every fixture: `q4`, all cyclic hexagon quadruples starting at each
/// vertex, representative `Pₙ` cases, and the 25 table rows.
pub fn all_fixtures() -> Vec<BenchmarkCase> {
    let mut out = vec![exact_case_q4()];
    for sel in hexagon_selections() {
        out.push(hexagon_case(sel).expect("cyclic selection"));
    }
    for (n, idx) in [
        (4, [0, 1, 2, 3]),
        (6, [0, 2, 4, 5]),
        (6, [0, 1, 2, 3]),
        (8, [0, 2, 4, 7]),
    ] {
        out.push(pn_case(n, idx).expect("valid indices"));
    }
    out.extend(table1_fixture());
    out
}

/// All 15 four-vertex subsets of the hexagon, each in cyclic order.
pub fn hexagon_selections() -> Vec<[HexVertex; 4]> {
    let v = HexVertex::ALL;
    let mut out = Vec::new();
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                for d in c + 1..6 {
                    out.push([v[a], v[b], v[c], v[d]]);
                }
            }
        }
    }
    out
}

/// JSON document of [`all_fixtures`].
pub fn fixtures_json() -> String {
    serde_json::to_string_pretty(&all_fixtures()).expect("fixtures serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::elliptic_k;

    #[test]
    fn q4_fixture() {
        let case = exact_case_q4();
        let exact = elliptic_k(0.75).unwrap() / (2.0 * elliptic_k(0.25).unwrap());
        assert!((case.expected_modulus - exact).abs() < 1e-13);
        let lambda: f64 = 0.5;
        assert!(
            (case.expected_beta.unwrap().sin() - (1.0 - lambda) / (1.0 + lambda)).abs() < 1e-15
        );
        let spec = case.spec().unwrap();
        assert!((spec.center_ratio() - 2f64.sqrt()).abs() < 1e-15);
        assert!((spec.radius_ratio() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hexagon_abde_and_conjugate() {
        use HexVertex::*;
        let m = hexagon_case([A, B, D, E]).unwrap();
        let exact = m.half_plane_modulus().unwrap().unwrap();
        assert!((exact - HEXAGON_ABDE_MODULUS).abs() < 1e-12);
        let conj = hexagon_case([B, D, E, A]).unwrap().expected_modulus;
        assert!((exact * conj - 1.0).abs() < 1e-12);
        assert!((hexagon_abde_closed_form() - HEXAGON_ABDE_MODULUS).abs() < 1e-12);
        let bcde = hexagon_case([B, C, D, E]).unwrap().expected_modulus;
        let direct = half_plane_modulus(
            B.half_plane_image(),
            C.half_plane_image(),
            D.half_plane_image(),
            E.half_plane_image(),
        )
        .unwrap();
        assert_eq!(bcde, direct);
        assert!((bcde - 1.2200415912834624).abs() < 1e-13, "{bcde}");
    }

    #[test]
    fn hexagon_rejects_non_cyclic() {
        use HexVertex::*;
        assert!(hexagon_case([A, D, B, E]).is_err());
        assert!(hexagon_case([A, A, D, E]).is_err());
    }

    #[test]
    fn hexagon_disk_images_match_mobius() {
        let map = hexagon_disk_map();
        for v in HexVertex::ALL {
            let w = map.apply(v.position()).finite().unwrap();
            assert!((w - v.disk_image()).norm() < 1e-14, "{v}: {w}");
            assert!((w.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn pn_cases() {
        assert!((pn_case(4, [0, 1, 2, 3]).unwrap().expected_modulus - 1.0).abs() < 1e-14);
        assert!((pn_case(6, [0, 2, 4, 5]).unwrap().expected_modulus - 1.0).abs() < 1e-14);
        let m = pn_case(6, [0, 1, 2, 3]).unwrap().expected_modulus;
        assert!((m - 0.6806341730599133).abs() < 1e-13, "{m}");
        assert!(pn_case(6, [0, 1, 2, 6]).is_err());
        assert!(pn_case(6, [2, 1, 0, 3]).is_err());
        assert!(pn_case(3, [0, 1, 2, 3]).is_err());
    }

    #[test]
    fn table_fixture_shape() {
        let rows = table1_fixture();
        assert_eq!(rows.len(), 25);
        assert_eq!(rows[0].expected_modulus, 1.65195641811156);
        assert_eq!(rows[7].expected_modulus, 0.79679236427334);
        assert_eq!(rows[12].expected_modulus, 0.58614411420414);
        assert_eq!(rows[24].expected_modulus, 0.32922144646084);
        assert_eq!(rows[4].expected_modulus, 1.0);
    }

    #[test]
    fn json_export_has_schema_fields() {
        let doc: serde_json::Value = serde_json::from_str(&fixtures_json()).unwrap();
        let arr = doc.as_array().unwrap();
        assert_eq!(arr.len(), 1 + 15 + 4 + 25);
        for case in arr {
            for key in ["name", "input", "expected_modulus", "provenance"] {
                assert!(case.get(key).is_some(), "missing {key}");
            }
        }
    }
}

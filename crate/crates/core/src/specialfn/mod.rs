//! Special functions and projective primitives: the complete elliptic
//! integral `K`, the disk-quadrilateral modulus as a function of the vertex
//! angle, cross-ratios, Möbius maps and exact half-plane moduli.

mod elliptic;
mod projective;

pub use elliptic::{elliptic_k, modulus_from_beta, EllipticParameter};
pub use projective::{
    cross_ratio, half_plane_modulus, lambda_from_cross_ratio, mobius_apply, pn_vertex_images,
    ExtendedComplex, MobiusMap,
};

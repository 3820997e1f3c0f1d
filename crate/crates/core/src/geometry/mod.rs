//! Polyhedral-cone kernel: double description, polar, faces, images,
//! containment and projection. All arithmetic is exact.

mod cone;
mod dd;
mod faces;
mod project;

pub use cone::{conv_pos, strictly_feasible, Cone, Containment, PolyhedronH};
pub use faces::{face_lattice, faces_of_cone, Face};
pub use project::{project_onto_cone, ConeProjector};

use crate::error::Result;
use crate::linalg::{RMatrix, RVector, Rational};

/// Generators of a homogeneous H-described cone.
pub fn dd_h_to_v(cone_h: &PolyhedronH) -> Cone {
    cone_h.to_cone()
}

/// H-representation of `pos(rays) + span(lineality)`.
pub fn dd_v_to_h(dim: usize, rays: &[RVector], lineality: &[RVector]) -> Cone {
    Cone::from_v(dim, rays, lineality)
}

pub fn polar(c: &Cone) -> Cone {
    c.polar()
}

pub fn intersect(a: &Cone, b: &Cone) -> Cone {
    a.intersect(b)
}

pub fn minkowski_diff(f1: &Cone, f2: &Cone) -> Cone {
    f1.minkowski_diff(f2)
}

pub fn linear_image(m: &RMatrix, c: &Cone) -> Cone {
    c.linear_image(m)
}

pub fn linear_preimage(m: &RMatrix, c: &Cone) -> Cone {
    c.linear_preimage(m)
}

pub fn contains(big: &Cone, small: &Cone) -> Containment {
    big.contains(small)
}

pub fn is_trivial(c: &Cone) -> bool {
    c.is_trivial()
}

pub fn tangent_cone_poly(p: &PolyhedronH, x: &[Rational]) -> Result<Cone> {
    p.tangent_cone(x)
}

pub fn normal_cone_poly(p: &PolyhedronH, x: &[Rational]) -> Result<Cone> {
    p.normal_cone(x)
}

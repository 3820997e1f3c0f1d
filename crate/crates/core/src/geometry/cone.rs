use std::fmt;

use num::{Signed, Zero};

use super::dd::{generators, Generators};
use crate::error::{Error, Result};
use crate::linalg::{dot, fmt_vector, is_zero_vec, neg, primitive, RMatrix, RVector, Rational};

/// Polyhedral convex cone holding both representations in canonical form.
///
/// * V-representation: `rays` (extreme rays of the pointed part, orthogonal
///   to the lineality space, primitive integer vectors, sorted) and
///   `lineality` (reduced echelon basis, primitive rows).
/// * H-representation: `equalities` (`a·x = 0`) and `inequalities`
///   (`a·x <= 0`), canonicalized as the V-representation of the polar.
///
/// Two cones are equal as sets iff they compare equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    rays: Vec<RVector>,
    lineality: Vec<RVector>,
    inequalities: Vec<RVector>,
    equalities: Vec<RVector>,
}

impl Cone {
    /// `{x : eqs·x = 0, ineqs·x <= 0}`.
    pub fn from_h(dim: usize, eqs: &[RVector], ineqs: &[RVector]) -> Self {
        check_dims(dim, eqs.iter().chain(ineqs));
        let v = generators(dim, eqs, ineqs);
        let h = generators(dim, &v.lineality, &v.rays);
        Self::assemble(dim, v, h)
    }

    /// `pos(rays) + span(lineality)`.
    pub fn from_v(dim: usize, rays: &[RVector], lineality: &[RVector]) -> Self {
        check_dims(dim, rays.iter().chain(lineality));
        let h = generators(dim, lineality, rays);
        let v = generators(dim, &h.lineality, &h.rays);
        Self::assemble(dim, v, h)
    }

    fn assemble(dim: usize, v: Generators, h: Generators) -> Self {
        Self {
            dim,
            rays: v.rays,
            lineality: v.lineality,
            inequalities: h.rays,
            equalities: h.lineality,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_v(dim, &[], &[])
    }

    pub fn full(dim: usize) -> Self {
        Self::from_h(dim, &[], &[])
    }

    /// Nonnegative orthant `R^n_+`.
    pub fn orthant(dim: usize) -> Self {
        let ineqs: Vec<RVector> = (0..dim)
            .map(|i| {
                let mut a = crate::linalg::zeros(dim);
                a[i] = crate::linalg::rat(-1);
                a
            })
            .collect();
        Self::from_h(dim, &[], &ineqs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[RVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[RVector] {
        &self.lineality
    }

    pub fn inequalities(&self) -> &[RVector] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[RVector] {
        &self.equalities
    }

    /// Dimension of the linear hull.
    pub fn linear_dim(&self) -> usize {
        self.dim - self.equalities.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn is_subspace(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        assert_eq!(x.len(), self.dim, "point dimension mismatch");
        self.equalities.iter().all(|a| dot(a, x).is_zero())
            && self.inequalities.iter().all(|a| !dot(a, x).is_positive())
    }

    /// Generators spanning the cone as a nonnegative combination: rays plus
    /// both signs of every lineality vector.
    pub fn conic_generators(&self) -> Vec<RVector> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(neg(l));
        }
        g
    }

    /// Sum of all conic generators; a point in the relative interior.
    pub fn interior_point(&self) -> RVector {
        let mut p = crate::linalg::zeros(self.dim);
        for r in &self.rays {
            p = crate::linalg::add(&p, r);
        }
        p
    }

    /// `{v : <v, x> <= 0 for all x in self}`.
    pub fn polar(&self) -> Cone {
        Cone {
            dim: self.dim,
            rays: self.inequalities.clone(),
            lineality: self.equalities.clone(),
            inequalities: self.rays.clone(),
            equalities: self.lineality.clone(),
        }
    }

    pub fn negate(&self) -> Cone {
        let f = |vs: &[RVector]| -> Vec<RVector> {
            let mut out: Vec<RVector> = vs.iter().map(|v| neg(v)).collect();
            out.sort_by(|a, b| crate::linalg::lex_cmp(a, b));
            out
        };
        Cone {
            dim: self.dim,
            rays: f(&self.rays),
            lineality: self.lineality.clone(),
            inequalities: f(&self.inequalities),
            equalities: self.equalities.clone(),
        }
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        assert_eq!(self.dim, other.dim, "cone dimension mismatch");
        let mut eqs = self.equalities.clone();
        eqs.extend(other.equalities.iter().cloned());
        let mut ineqs = self.inequalities.clone();
        ineqs.extend(other.inequalities.iter().cloned());
        Cone::from_h(self.dim, &eqs, &ineqs)
    }

    /// Minkowski sum `self + other`.
    pub fn sum(&self, other: &Cone) -> Cone {
        assert_eq!(self.dim, other.dim, "cone dimension mismatch");
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().cloned());
        let mut lin = self.lineality.clone();
        lin.extend(other.lineality.iter().cloned());
        Cone::from_v(self.dim, &rays, &lin)
    }

    /// `{a - b : a in self, b in other}`.
    pub fn minkowski_diff(&self, other: &Cone) -> Cone {
        self.sum(&other.negate())
    }

    /// `{m·x : x in self}`.
    pub fn linear_image(&self, m: &RMatrix) -> Cone {
        assert_eq!(m.cols(), self.dim, "image matrix has wrong column count");
        let rays: Vec<RVector> = self.rays.iter().map(|r| m.mul_vec(r)).collect();
        let lin: Vec<RVector> = self.lineality.iter().map(|l| m.mul_vec(l)).collect();
        Cone::from_v(m.rows(), &rays, &lin)
    }

    /// `{u : m·u in self}`.
    pub fn linear_preimage(&self, m: &RMatrix) -> Cone {
        assert_eq!(m.rows(), self.dim, "preimage matrix has wrong row count");
        let mt = m.transpose();
        let eqs: Vec<RVector> = self.equalities.iter().map(|a| mt.mul_vec(a)).collect();
        let ineqs: Vec<RVector> = self.inequalities.iter().map(|a| mt.mul_vec(a)).collect();
        Cone::from_h(m.cols(), &eqs, &ineqs)
    }

    /// Checks `small ⊆ self`. On failure returns a generator of `small`
    /// (a ray or a signed lineality vector) that leaves `self`.
    pub fn contains(&self, small: &Cone) -> Containment {
        assert_eq!(self.dim, small.dim, "cone dimension mismatch");
        for g in small.conic_generators() {
            if !self.contains_point(&g) {
                return Containment::Violated(g);
            }
        }
        Containment::Holds
    }

    pub fn contains_cone(&self, small: &Cone) -> bool {
        matches!(self.contains(small), Containment::Holds)
    }
}


/// Outcome of a cone containment test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Containment {
    Holds,
    Violated(RVector),
}

impl Containment {
    pub fn holds(&self) -> bool {
        matches!(self, Containment::Holds)
    }

    pub fn witness(&self) -> Option<&RVector> {
        match self {
            Containment::Holds => None,
            Containment::Violated(w) => Some(w),
        }
    }
}

fn check_dims<'a>(dim: usize, vs: impl Iterator<Item = &'a RVector>) {
    for v in vs {
        assert_eq!(v.len(), dim, "vector of length {} in a cone of dimension {dim}", v.len());
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |vs: &[RVector]| vs.iter().map(|v| fmt_vector(v)).collect::<Vec<_>>().join(" ");
        write!(
            f,
            "Cone(dim {}; rays [{}]; lin [{}]; ineq [{}]; eq [{}])",
            self.dim,
            list(&self.rays),
            list(&self.lineality),
            list(&self.inequalities),
            list(&self.equalities)
        )
    }
}

/// Polyhedron `{x : a_le·x <= b_le, a_eq·x = b_eq}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedronH {
    pub a_le: RMatrix,
    pub b_le: RVector,
    pub a_eq: RMatrix,
    pub b_eq: RVector,
}

impl PolyhedronH {
    pub fn new(a_le: RMatrix, b_le: RVector, a_eq: RMatrix, b_eq: RVector) -> Result<Self> {
        if a_le.cols() != a_eq.cols() {
            return Err(Error::Dimension(format!(
                "inequality block has {} columns, equality block {}",
                a_le.cols(),
                a_eq.cols()
            )));
        }
        if a_le.rows() != b_le.len() || a_eq.rows() != b_eq.len() {
            return Err(Error::Dimension("right-hand side length mismatch".into()));
        }
        Ok(Self { a_le, b_le, a_eq, b_eq })
    }

    /// Homogeneous polyhedron `{x : a_le·x <= 0}`.
    pub fn homogeneous(a_le: RMatrix) -> Self {
        let n = a_le.cols();
        let rows = a_le.rows();
        Self {
            a_le,
            b_le: crate::linalg::zeros(rows),
            a_eq: RMatrix::empty(n),
            b_eq: Vec::new(),
        }
    }

    /// The whole space `R^n`.
    pub fn whole(n: usize) -> Self {
        Self::homogeneous(RMatrix::empty(n))
    }

    /// `R^n_+` as `{-x <= 0}`.
    pub fn orthant(n: usize) -> Self {
        Self::homogeneous(RMatrix::identity(n).neg())
    }

    /// H-representation of a cone.
    pub fn from_cone(c: &Cone) -> Self {
        let n = c.dim();
        let a_le = if c.inequalities().is_empty() {
            RMatrix::empty(n)
        } else {
            RMatrix::from_rows(c.inequalities().to_vec()).expect("uniform rows")
        };
        let a_eq = if c.equalities().is_empty() {
            RMatrix::empty(n)
        } else {
            RMatrix::from_rows(c.equalities().to_vec()).expect("uniform rows")
        };
        let (le, eq) = (a_le.rows(), a_eq.rows());
        Self {
            a_le,
            b_le: crate::linalg::zeros(le),
            a_eq,
            b_eq: crate::linalg::zeros(eq),
        }
    }

    pub fn dim(&self) -> usize {
        self.a_le.cols()
    }

    pub fn is_homogeneous(&self) -> bool {
        is_zero_vec(&self.b_le) && is_zero_vec(&self.b_eq)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        assert_eq!(x.len(), self.dim(), "point dimension mismatch");
        (0..self.a_le.rows()).all(|i| dot(self.a_le.row(i), x) <= self.b_le[i])
            && (0..self.a_eq.rows()).all(|i| dot(self.a_eq.row(i), x) == self.b_eq[i])
    }

    fn require_member(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "point has length {}, polyhedron lives in R^{}",
                x.len(),
                self.dim()
            )));
        }
        if !self.contains(x) {
            return Err(Error::Membership(format!("{} is not in the polyhedron", fmt_vector(x))));
        }
        Ok(())
    }

    /// Indices of inequality rows active at `x`.
    pub fn active_set(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.a_le.rows())
            .filter(|&i| dot(self.a_le.row(i), x) == self.b_le[i])
            .collect()
    }

    /// The cone as a homogeneous system; only valid for homogeneous input.
    pub fn to_cone(&self) -> Cone {
        assert!(self.is_homogeneous(), "to_cone needs a homogeneous polyhedron");
        Cone::from_h(self.dim(), &self.a_eq.row_vecs(), &self.a_le.row_vecs())
    }

    pub fn tangent_cone(&self, x: &[Rational]) -> Result<Cone> {
        self.require_member(x)?;
        let active: Vec<RVector> = self
            .active_set(x)
            .into_iter()
            .map(|i| self.a_le.row(i).to_vec())
            .collect();
        Ok(Cone::from_h(self.dim(), &self.a_eq.row_vecs(), &active))
    }

    pub fn normal_cone(&self, x: &[Rational]) -> Result<Cone> {
        Ok(self.tangent_cone(x)?.polar())
    }

    /// Closed homogenization `{(x,t) : a_le·x <= b_le·t, a_eq·x = b_eq·t, t >= 0}`.
    /// For nonempty polyhedra this determines the set uniquely.
    pub fn homogenization(&self) -> Cone {
        let n = self.dim();
        let lift = |row: &[Rational], b: &Rational| -> RVector {
            let mut v = row.to_vec();
            v.push(-b.clone());
            v
        };
        let mut ineqs: Vec<RVector> = (0..self.a_le.rows())
            .map(|i| lift(self.a_le.row(i), &self.b_le[i]))
            .collect();
        let mut t = crate::linalg::zeros(n + 1);
        t[n] = crate::linalg::rat(-1);
        ineqs.push(t);
        let eqs: Vec<RVector> = (0..self.a_eq.rows())
            .map(|i| lift(self.a_eq.row(i), &self.b_eq[i]))
            .collect();
        Cone::from_h(n + 1, &eqs, &ineqs)
    }

    /// Some point of the polyhedron, or `None` if it is empty.
    pub fn find_point(&self) -> Option<RVector> {
        let h = self.homogenization();
        let n = self.dim();
        let lifted = h.interior_point();
        if lifted[n].is_positive() {
            let t = lifted[n].clone();
            Some(lifted[..n].iter().map(|v| v / &t).collect())
        } else {
            None
        }
    }

    /// Exact Euclidean projection of `p`, by enumerating active sets.
    /// Returns `None` for an empty polyhedron.
    pub fn project(&self, p: &[Rational]) -> Option<(RVector, Rational)> {
        let m = self.a_le.rows();
        assert!(m <= 20, "active-set projection is exponential in the row count");
        let mut best: Option<(RVector, Rational)> = None;
        for mask in 0u32..(1 << m) {
            let mut rows = self.a_eq.row_vecs();
            let mut rhs = self.b_eq.clone();
            for i in 0..m {
                if mask >> i & 1 == 1 {
                    rows.push(self.a_le.row(i).to_vec());
                    rhs.push(self.b_le[i].clone());
                }
            }
            let Some(y) = crate::linalg::affine_project(&rows, &rhs, p) else {
                continue;
            };
            if !self.contains(&y) {
                continue;
            }
            let d = crate::linalg::norm_sq(&crate::linalg::sub(p, &y));
            if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                best = Some((y, d));
            }
        }
        best
    }

    pub fn is_single_point(&self, x: &[Rational]) -> bool {
        self.tangent_cone(x).map(|t| t.is_trivial()).unwrap_or(false)
    }
}

/// `pos` of the columns of `columns`.
pub fn conv_pos(columns: &RMatrix) -> Cone {
    let rays: Vec<RVector> = (0..columns.cols()).map(|j| primitive(&columns.column(j))).collect();
    Cone::from_v(columns.rows(), &rays, &[])
}

/// Looks for `z` with `eqs·z = 0`, `nonstrict·z <= 0` and `strict·z < 0`.
pub fn strictly_feasible(
    dim: usize,
    eqs: &[RVector],
    nonstrict: &[RVector],
    strict: &[RVector],
) -> Option<RVector> {
    let mut ineqs = nonstrict.to_vec();
    ineqs.extend(strict.iter().cloned());
    let g = generators(dim, eqs, &ineqs);
    let mut z = crate::linalg::zeros(dim);
    for r in &g.rays {
        z = crate::linalg::add(&z, r);
    }
    strict
        .iter()
        .all(|b| dot(b, &z).is_negative())
        .then_some(z)
}

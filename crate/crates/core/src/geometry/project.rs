//! Euclidean projection onto a polyhedral cone.
//!
//! The projection of `p` lies in the relative interior of some face `F` and
//! coincides there with the orthogonal projection onto `span F`. Enumerating
//! faces, projecting onto each span and keeping the closest feasible
//! candidate therefore gives the exact projection.

use num::Zero;

use super::cone::Cone;
use super::faces::faces_of_cone;
use crate::linalg::{canonical_span, dot, norm_sq, solve_square, sub, to_f64, RMatrix, RVector, Rational};

struct FaceSpan {
    basis: Vec<RVector>,
    gram: RMatrix,
    // Orthogonal projector onto span F in floating point.
    proj_f64: Vec<Vec<f64>>,
}

/// Precomputed face spans of a cone for repeated projections.
pub struct ConeProjector {
    cone: Cone,
    spans: Vec<FaceSpan>,
    ineq_f64: Vec<Vec<f64>>,
    eq_f64: Vec<Vec<f64>>,
}

impl ConeProjector {
    pub fn new(cone: &Cone) -> Self {
        let n = cone.dim();
        let spans = faces_of_cone(cone)
            .iter()
            .map(|f| {
                let mut gens = f.rays().to_vec();
                gens.extend(f.lineality().iter().cloned());
                let basis = canonical_span(&gens, n);
                let k = basis.len();
                let mut gram = RMatrix::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        gram[(i, j)] = dot(&basis[i], &basis[j]);
                    }
                }
                let proj_f64 = float_projector(&basis, &gram, n);
                FaceSpan { basis, gram, proj_f64 }
            })
            .collect();
        let rows = |vs: &[RVector]| -> Vec<Vec<f64>> {
            vs.iter().map(|v| v.iter().map(to_f64).collect()).collect()
        };
        Self {
            ineq_f64: rows(cone.inequalities()),
            eq_f64: rows(cone.equalities()),
            cone: cone.clone(),
            spans,
        }
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    /// Exact projection and squared distance.
    pub fn project(&self, p: &[Rational]) -> (RVector, Rational) {
        let mut best: Option<(RVector, Rational)> = None;
        for span in &self.spans {
            let y = project_onto_span(&span.basis, &span.gram, p);
            if !self.cone.contains_point(&y) {
                continue;
            }
            let d = norm_sq(&sub(p, &y));
            if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
                best = Some((y, d));
            }
        }
        best.expect("the minimal face always yields a feasible projection")
    }

    /// Floating-point distance, used inside numerical searches.
    pub fn distance_f64(&self, p: &[f64]) -> f64 {
        let scale = p.iter().map(|x| x.abs()).fold(1.0, f64::max);
        let tol = 1e-10 * scale;
        let mut best = f64::INFINITY;
        for span in &self.spans {
            let y: Vec<f64> = span
                .proj_f64
                .iter()
                .map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum())
                .collect();
            let feasible = self
                .ineq_f64
                .iter()
                .all(|a| a.iter().zip(&y).map(|(x, z)| x * z).sum::<f64>() <= tol * norm(a))
                && self
                    .eq_f64
                    .iter()
                    .all(|a| a.iter().zip(&y).map(|(x, z)| x * z).sum::<f64>().abs() <= tol * norm(a));
            if !feasible {
                continue;
            }
            let d: f64 = p.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            best = best.min(d);
        }
        best
    }
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn project_onto_span(basis: &[RVector], gram: &RMatrix, p: &[Rational]) -> RVector {
    let n = p.len();
    if basis.is_empty() {
        return vec![Rational::zero(); n];
    }
    let rhs: RVector = basis.iter().map(|b| dot(b, p)).collect();
    let coeffs = solve_square(gram, &rhs).expect("basis vectors are independent");
    let mut y = vec![Rational::zero(); n];
    for (c, b) in coeffs.iter().zip(basis) {
        for (yi, bi) in y.iter_mut().zip(b) {
            *yi += c * bi;
        }
    }
    y
}

fn float_projector(basis: &[RVector], gram: &RMatrix, n: usize) -> Vec<Vec<f64>> {
    let mut p = vec![vec![0.0; n]; n];
    for j in 0..n {
        let e = crate::linalg::unit(n, j);
        let col = project_onto_span(basis, gram, &e);
        for i in 0..n {
            p[i][j] = to_f64(&col[i]);
        }
    }
    p
}

/// Exact projection of `p` onto `c` with its squared distance.
pub fn project_onto_cone(c: &Cone, p: &[Rational]) -> (RVector, Rational) {
    ConeProjector::new(c).project(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio, rvec};

    #[test]
    fn projections() {
        let neg_orthant = Cone::orthant(2).polar();
        assert_eq!(project_onto_cone(&neg_orthant, &rvec(&[1, 1])), (rvec(&[0, 0]), rat(2)));
        assert_eq!(project_onto_cone(&neg_orthant, &rvec(&[-1, 3])), (rvec(&[-1, 0]), rat(9)));
        let ray = Cone::from_v(2, &[rvec(&[1, 1])], &[]);
        assert_eq!(
            project_onto_cone(&ray, &rvec(&[1, 2])),
            (vec![ratio(3, 2), ratio(3, 2)], ratio(1, 2))
        );
    }

    #[test]
    fn float_distance_matches_exact() {
        let ray = Cone::from_v(2, &[rvec(&[1, 1])], &[]);
        let proj = ConeProjector::new(&ray);
        assert!((proj.distance_f64(&[1.0, 2.0]) - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((proj.distance_f64(&[-1.0, -1.0]) - 2.0f64.sqrt()).abs() < 1e-12);
    }
}

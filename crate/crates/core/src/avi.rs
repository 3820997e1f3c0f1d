//! Affine variational inequalities `0 ∈ q + Mx + N_C(x)` with a polyhedral
//! parameter set `Q`: critical cones, face pairs, the normal cone of
//! `gph N_C`, and the generalized critical face condition.

use num::Zero;

use crate::error::{Error, Result};
use crate::geometry::{face_lattice, strictly_feasible, Cone, Face, PolyhedronH};
use crate::linalg::{dot, fmt_vector, neg, sub, RMatrix, RVector, Rational};

/// `S(q) = {x : 0 ∈ q + Mx + N_C(x)}` examined relative to `q_set`.
#[derive(Clone, Debug)]
pub struct AviProblem {
    pub m: RMatrix,
    pub c: PolyhedronH,
    pub q_set: PolyhedronH,
    /// Caller asserts `q_set = dom S`. Enables necessity and drops the CQ.
    pub q_is_domain: bool,
}

impl AviProblem {
    pub fn new(m: RMatrix, c: PolyhedronH, q_set: PolyhedronH) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("M is {}x{}, expected square", m.rows(), m.cols())));
        }
        let n = m.rows();
        if c.dim() != n || q_set.dim() != n {
            return Err(Error::Dimension(format!(
                "M is {n}x{n} but C lives in R^{} and Q in R^{}",
                c.dim(),
                q_set.dim()
            )));
        }
        Ok(Self { m, c, q_set, q_is_domain: false })
    }

    /// The LCP with `C = R^n_+`.
    pub fn lcp(m: RMatrix, q_set: PolyhedronH) -> Result<Self> {
        let n = m.rows();
        Self::new(m, PolyhedronH::orthant(n), q_set)
    }

    pub fn assume_q_is_domain(mut self) -> Self {
        self.q_is_domain = true;
        self
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    /// `v̄ = -M x̄ - q̄`, after checking `q̄ ∈ Q` and `x̄ ∈ S(q̄)`.
    fn base_multiplier(&self, q_bar: &[Rational], x_bar: &[Rational]) -> Result<RVector> {
        let n = self.dim();
        if q_bar.len() != n || x_bar.len() != n {
            return Err(Error::Dimension(format!(
                "expected points in R^{n}, got q of length {} and x of length {}",
                q_bar.len(),
                x_bar.len()
            )));
        }
        if !self.q_set.contains(q_bar) {
            return Err(Error::Membership(format!("q = {} is not in Q", fmt_vector(q_bar))));
        }
        let v = sub(&neg(&self.m.mul_vec(x_bar)), q_bar);
        critical_cone(&self.c, x_bar, &v).map_err(|e| match e {
            Error::Membership(msg) => Error::Membership(format!(
                "x = {} does not solve the AVI at q = {}: {msg}",
                fmt_vector(x_bar),
                fmt_vector(q_bar)
            )),
            other => other,
        })?;
        Ok(v)
    }
}

/// `K(x, v) = T_C(x) ∩ [v]^⊥`.
pub fn critical_cone(c: &PolyhedronH, x: &[Rational], v: &[Rational]) -> Result<Cone> {
    let t = c.tangent_cone(x)?;
    if v.len() != c.dim() {
        return Err(Error::Dimension(format!("v has length {}, expected {}", v.len(), c.dim())));
    }
    if !t.polar().contains_point(v) {
        return Err(Error::Membership(format!(
            "v = {} is not normal to C at x = {}",
            fmt_vector(v),
            fmt_vector(x)
        )));
    }
    Ok(t.intersect(&Cone::from_h(c.dim(), &[v.to_vec()], &[])))
}

/// Faces `F2 ⊆ F1` of a critical cone with the difference `F1 - F2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePair {
    pub f1: Cone,
    pub f2: Cone,
    pub diff: Cone,
    /// Extreme-ray incidence sets of `f1` and `f2` in the parent cone.
    pub f1_rays: Vec<usize>,
    pub f2_rays: Vec<usize>,
}

impl FacePair {
    fn new(f1: &Face, f2: &Face) -> Self {
        FacePair {
            diff: f1.cone.minkowski_diff(&f2.cone),
            f1: f1.cone.clone(),
            f2: f2.cone.clone(),
            f1_rays: f1.ray_set.clone(),
            f2_rays: f2.ray_set.clone(),
        }
    }

    /// `(F1 - F2) ∩ (M(F1 - F2))^*`, i.e. the `u` with `(M^T u, u)` in the
    /// piece `(F1 - F2)^* × (F1 - F2)`.
    pub fn critical_directions(&self, m: &RMatrix) -> Cone {
        self.diff.intersect(&self.diff.linear_image(m).polar())
    }
}

/// All pairs `F2 ⊆ F1` of faces of `k`, in face-lattice order of `F1` then `F2`.
pub fn enumerate_face_pairs(k: &Cone) -> Vec<FacePair> {
    let faces = face_lattice(k);
    pairs_of(&faces)
}

fn pairs_of(faces: &[Face]) -> Vec<FacePair> {
    let mut out = Vec::new();
    for f1 in faces {
        for f2 in faces {
            if f2.is_subface_of(f1) {
                out.push(FacePair::new(f1, f2));
            }
        }
    }
    out
}

/// Pieces `((F1 - F2)^*, F1 - F2)` whose union is `N_{gph N_C}(x, v)`.
pub fn normal_cone_gph_nc(c: &PolyhedronH, x: &[Rational], v: &[Rational]) -> Result<Vec<(Cone, Cone)>> {
    let k = critical_cone(c, x, v)?;
    Ok(enumerate_face_pairs(&k)
        .into_iter()
        .map(|p| (p.diff.polar(), p.diff))
        .collect())
}

/// Pieces of `N_{gph N_C}(x + x', v + v')` for a small tangent step
/// `(x', v')`: only pairs with `x' ∈ F2` and `F1 ⊆ [v']^⊥` survive.
pub fn normal_cone_gph_nc_near(
    c: &PolyhedronH,
    x: &[Rational],
    v: &[Rational],
    x_dir: &[Rational],
    v_dir: &[Rational],
) -> Result<Vec<(Cone, Cone)>> {
    let k = critical_cone(c, x, v)?;
    if x_dir.len() != k.dim() || v_dir.len() != k.dim() {
        return Err(Error::Dimension("direction has the wrong length".into()));
    }
    let tangent = k.contains_point(x_dir) && k.polar().contains_point(v_dir) && dot(x_dir, v_dir).is_zero();
    if !tangent {
        return Err(Error::Direction(format!(
            "({}, {}) is not tangent to gph N_C: need v' ∈ N_K(x')",
            fmt_vector(x_dir),
            fmt_vector(v_dir)
        )));
    }
    Ok(enumerate_face_pairs(&k)
        .into_iter()
        .filter(|p| p.f2.contains_point(x_dir) && orthogonal_to(&p.f1, v_dir))
        .map(|p| (p.diff.polar(), p.diff))
        .collect())
}

fn orthogonal_to(f: &Cone, v: &[Rational]) -> bool {
    f.rays().iter().chain(f.lineality()).all(|g| dot(g, v).is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Necessity {
    SufficientOnly,
    SufficientAndNecessary,
}

#[derive(Clone, Debug)]
pub struct CritFaceVerdict {
    pub cq_holds: bool,
    pub condition_holds: bool,
    pub necessity: Necessity,
    pub failing_pair: Option<FacePair>,
    /// Lies in `(F1 - F2) ∩ (M(F1 - F2))^*` but not in `-N_Q(q̄)`.
    pub witness_ray: Option<RVector>,
    /// Nonzero element of `N_Q(q̄) ∩ (F1 - F2) ∩ (M(F1 - F2))^*`.
    pub cq_witness: Option<RVector>,
    pub pairs_checked: usize,
    pub critical_cone: Cone,
}

impl CritFaceVerdict {
    /// `Some(true)` when the sufficient condition certifies the property,
    /// `Some(false)` when it fails and is known to be necessary, `None`
    /// otherwise.
    pub fn lipschitz_like(&self, q_is_domain: bool) -> Option<bool> {
        let cq_ok = self.cq_holds || q_is_domain;
        match (self.condition_holds, cq_ok, self.necessity) {
            (true, true, _) => Some(true),
            (false, true, Necessity::SufficientAndNecessary) => Some(false),
            _ => None,
        }
    }
}

/// Generalized critical face condition at `(q̄, x̄)`.
pub fn check_generalized_critical_face(
    p: &AviProblem,
    q_bar: &[Rational],
    x_bar: &[Rational],
) -> Result<CritFaceVerdict> {
    let v_bar = p.base_multiplier(q_bar, x_bar)?;
    let k = critical_cone(&p.c, x_bar, &v_bar)?;
    let n_q = p.q_set.normal_cone(q_bar)?;
    let minus_n_q = n_q.negate();

    let pairs = enumerate_face_pairs(&k);
    let mut verdict = CritFaceVerdict {
        cq_holds: true,
        condition_holds: true,
        necessity: if p.q_is_domain || k.is_subspace() {
            Necessity::SufficientAndNecessary
        } else {
            Necessity::SufficientOnly
        },
        failing_pair: None,
        witness_ray: None,
        cq_witness: None,
        pairs_checked: pairs.len(),
        critical_cone: k.clone(),
    };
    for pair in pairs {
        let x = pair.critical_directions(&p.m);
        if verdict.cq_holds {
            let meet = n_q.intersect(&x);
            if !meet.is_trivial() {
                verdict.cq_holds = false;
                verdict.cq_witness = meet.conic_generators().into_iter().next();
            }
        }
        if verdict.condition_holds {
            if let Some(w) = minus_n_q.contains(&x).witness() {
                verdict.condition_holds = false;
                verdict.witness_ray = Some(w.clone());
                verdict.failing_pair = Some(pair);
            }
        }
    }
    Ok(verdict)
}

/// Upper estimate of the projectional coderivative `D*_Q S(q̄|x̄)(0)` as a
/// finite union of cones. The property holds iff every cone is `{0}`
/// (exactly so when `Q = dom S` or the CQ and regularity hold).
///
/// Nearby points `(q̄ + q', x̄ + x')` are grouped by status: the face of
/// `T_Q(q̄)` with `q'` in its relative interior, the face `G` of `K` with
/// `x'` in its relative interior, and the face `E` of `K` exposed by
/// `v' = -Mx' - q'`. Each feasible status contributes the projections
/// onto `T_Q(q)` of `-u + N_Q(q)` over the pairs `G ⊆ F2 ⊆ F1 ⊆ E`.
pub fn projcode_zero_upper(p: &AviProblem, q_bar: &[Rational], x_bar: &[Rational]) -> Result<Vec<Cone>> {
    let n = p.dim();
    let v_bar = p.base_multiplier(q_bar, x_bar)?;
    let k = critical_cone(&p.c, x_bar, &v_bar)?;
    let n_q_bar = p.q_set.normal_cone(q_bar)?;
    let t_q_bar = n_q_bar.polar();

    let k_faces = face_lattice(&k);
    let all_pairs = pairs_of(&k_faces);
    let crit: Vec<Cone> = all_pairs.iter().map(|pr| pr.critical_directions(&p.m)).collect();

    if !p.q_is_domain {
        for x in &crit {
            let meet = n_q_bar.intersect(x);
            if let Some(u) = meet.conic_generators().into_iter().next() {
                return Err(Error::CqViolation { witness: u });
            }
        }
    }

    let k_star = k.polar();
    let mut out: Vec<Cone> = Vec::new();
    for phi in face_lattice(&t_q_bar) {
        // N_Q(q̄ + q') for q' in relint Φ.
        let n_q = n_q_bar.intersect(&Cone::from_h(n, &span_generators(&phi.cone), &[]));
        let t_q = n_q.polar();
        let t_faces = face_lattice(&t_q);
        for g in &k_faces {
            for e in &k_faces {
                if !g.is_subface_of(e) {
                    continue;
                }
                let conj = k_star.intersect(&Cone::from_h(n, &span_generators(&e.cone), &[]));
                if !status_feasible(&p.m, &phi.cone, &g.cone, &conj) {
                    continue;
                }
                for (pair, x) in all_pairs.iter().zip(&crit) {
                    let inside = g.ray_set.iter().all(|r| pair.f2_rays.contains(r))
                        && pair.f1_rays.iter().all(|r| e.ray_set.contains(r));
                    if !inside {
                        continue;
                    }
                    let z = x.negate().sum(&n_q);
                    for f in &t_faces {
                        let piece = z.intersect(&f.cone.sum(&n_q.intersect(&Cone::from_h(
                            n,
                            &span_generators(&f.cone),
                            &[],
                        ))));
                        let img = piece.linear_image(&span_projector(&f.cone));
                        if !out.contains(&img) {
                            out.push(img);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn span_generators(c: &Cone) -> Vec<RVector> {
    let mut g = c.rays().to_vec();
    g.extend(c.lineality().iter().cloned());
    g
}

/// Exact orthogonal projector onto the linear hull of `c`.
fn span_projector(c: &Cone) -> RMatrix {
    let n = c.dim();
    let basis = crate::linalg::canonical_span(&span_generators(c), n);
    let mut out = RMatrix::zeros(n, n);
    if basis.is_empty() {
        return out;
    }
    let k = basis.len();
    let mut gram = RMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = dot(&basis[i], &basis[j]);
        }
    }
    for col in 0..n {
        let rhs: RVector = basis.iter().map(|b| b[col].clone()).collect();
        let coeffs = crate::linalg::solve_square(&gram, &rhs).expect("independent basis");
        for (c, b) in coeffs.iter().zip(&basis) {
            for row in 0..n {
                out[(row, col)] += c * &b[row];
            }
        }
    }
    out
}

/// Is there `(q', x')` with `q' ∈ relint Φ`, `x' ∈ relint G` and
/// `-Mx' - q' ∈ relint conj`?
fn status_feasible(m: &RMatrix, phi: &Cone, g: &Cone, conj: &Cone) -> bool {
    let n = m.rows();
    let lift_q = |a: &RVector| -> RVector {
        let mut v = a.clone();
        v.extend(std::iter::repeat_n(Rational::zero(), n));
        v
    };
    let lift_x = |a: &RVector| -> RVector {
        let mut v: RVector = std::iter::repeat_n(Rational::zero(), n).collect();
        v.extend(a.iter().cloned());
        v
    };
    // a·(-Mx - q) = (-a)·q + (-Mᵀa)·x
    let mt = m.transpose();
    let lift_v = |a: &RVector| -> RVector {
        let mut v = neg(a);
        v.extend(neg(&mt.mul_vec(a)));
        v
    };
    let mut eqs: Vec<RVector> = Vec::new();
    let mut strict: Vec<RVector> = Vec::new();
    eqs.extend(phi.equalities().iter().map(lift_q));
    strict.extend(phi.inequalities().iter().map(lift_q));
    eqs.extend(g.equalities().iter().map(lift_x));
    strict.extend(g.inequalities().iter().map(lift_x));
    eqs.extend(conj.equalities().iter().map(lift_v));
    strict.extend(conj.inequalities().iter().map(lift_v));
    strictly_feasible(2 * n, &eqs, &[], &strict).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::conv_pos;
    use crate::linalg::{rvec, RMatrix};

    fn example_m() -> RMatrix {
        RMatrix::from_i64(&[&[-1, -1], &[1, -1]])
    }

    fn example_q() -> PolyhedronH {
        // 0 <= q2 <= q1
        PolyhedronH::homogeneous(RMatrix::from_i64(&[&[0, -1], &[-1, 1]]))
    }

    fn example_domain() -> PolyhedronH {
        let m = example_m();
        let cols = RMatrix::from_i64(&[&[1, 0, 1, 1], &[0, 1, -1, 1]]);
        assert_eq!(cols.column(2), m.neg().column(0));
        assert_eq!(cols.column(3), m.neg().column(1));
        PolyhedronH::from_cone(&conv_pos(&cols))
    }

    #[test]
    fn critical_cones() {
        let orth = PolyhedronH::orthant(2);
        assert_eq!(critical_cone(&orth, &rvec(&[0, 0]), &rvec(&[0, 0])).unwrap(), Cone::orthant(2));
        assert_eq!(
            critical_cone(&orth, &rvec(&[1, 0]), &rvec(&[0, -1])).unwrap(),
            Cone::from_v(2, &[], &[rvec(&[1, 0])])
        );
        assert_eq!(
            critical_cone(&PolyhedronH::whole(2), &rvec(&[3, -1]), &rvec(&[0, 0])).unwrap(),
            Cone::full(2)
        );
        assert!(matches!(
            critical_cone(&orth, &rvec(&[1, 0]), &rvec(&[-1, 0])),
            Err(Error::Membership(_))
        ));
    }

    #[test]
    fn face_pairs_of_quadrant() {
        let pairs = enumerate_face_pairs(&Cone::orthant(2));
        assert_eq!(pairs.len(), 9);
        let e1 = rvec(&[1, 0]);
        let e2 = rvec(&[0, 1]);
        let expected = [
            Cone::zero(2),
            Cone::from_v(2, &[e1.clone()], &[]),
            Cone::from_v(2, &[], &[e1.clone()]),
            Cone::from_v(2, &[e2.clone()], &[]),
            Cone::from_v(2, &[], &[e2.clone()]),
            Cone::orthant(2),
            Cone::from_v(2, &[e2.clone()], &[e1.clone()]),
            Cone::from_v(2, &[e1.clone()], &[e2.clone()]),
            Cone::full(2),
        ];
        for e in &expected {
            assert_eq!(pairs.iter().filter(|p| &p.diff == e).count(), 1, "diff {e:?}");
        }
        for p in &pairs {
            assert!(p.f1.contains_cone(&p.f2));
        }
    }

    #[test]
    fn face_pairs_trivial_cones() {
        let z = enumerate_face_pairs(&Cone::zero(3));
        assert_eq!(z.len(), 1);
        assert!(z[0].diff.is_trivial());
        let full = enumerate_face_pairs(&Cone::full(3));
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].diff, Cone::full(3));
    }

    #[test]
    fn normal_cone_of_gph_nc() {
        let orth = PolyhedronH::orthant(2);
        let pieces = normal_cone_gph_nc(&orth, &rvec(&[0, 0]), &rvec(&[0, 0])).unwrap();
        assert_eq!(pieces.len(), 9);
        assert!(pieces.contains(&(Cone::orthant(2).polar(), Cone::orthant(2))));

        let whole = normal_cone_gph_nc(&PolyhedronH::whole(2), &rvec(&[1, 1]), &rvec(&[0, 0])).unwrap();
        assert_eq!(whole, vec![(Cone::zero(2), Cone::full(2))]);

        let half = normal_cone_gph_nc(&PolyhedronH::orthant(1), &rvec(&[0]), &rvec(&[0])).unwrap();
        let r_plus = Cone::orthant(1);
        let expected = [
            (Cone::full(1), Cone::zero(1)),
            (r_plus.polar(), r_plus.clone()),
            (Cone::zero(1), Cone::full(1)),
        ];
        assert_eq!(half.len(), 3);
        for e in &expected {
            assert!(half.contains(e));
        }
    }

    #[test]
    fn neighborhood_filter() {
        let orth = PolyhedronH::orthant(2);
        let o = rvec(&[0, 0]);
        let all = normal_cone_gph_nc(&orth, &o, &o).unwrap();
        assert_eq!(normal_cone_gph_nc_near(&orth, &o, &o, &o, &o).unwrap(), all);

        // x' = (1,0): F2 must contain e1, so F2 ∈ {R+ × 0, R²+}
        let near = normal_cone_gph_nc_near(&orth, &o, &o, &rvec(&[1, 0]), &o).unwrap();
        let k = Cone::orthant(2);
        let expected: Vec<(Cone, Cone)> = enumerate_face_pairs(&k)
            .into_iter()
            .filter(|p| p.f2_rays.contains(&1))
            .map(|p| (p.diff.polar(), p.diff))
            .collect();
        assert_eq!(near, expected);
        assert_eq!(near.len(), 3);

        // v' = (0,-1): F1 ⊆ R × 0
        let near = normal_cone_gph_nc_near(&orth, &o, &o, &o, &rvec(&[0, -1])).unwrap();
        assert_eq!(near.len(), 3);
        let axis = Cone::from_v(2, &[rvec(&[1, 0])], &[]);
        assert!(near.iter().all(|(_, d)| Cone::from_v(2, &[], &[rvec(&[1, 0])]).contains_cone(d)));
        assert!(near.iter().any(|(_, d)| d == &axis));

        assert!(matches!(
            normal_cone_gph_nc_near(&orth, &o, &o, &rvec(&[1, 0]), &rvec(&[-1, 0])),
            Err(Error::Direction(_))
        ));
    }

    #[test]
    fn critical_face_relative_to_q() {
        let p = AviProblem::lcp(example_m(), example_q()).unwrap();
        let o = rvec(&[0, 0]);
        let v = check_generalized_critical_face(&p, &o, &o).unwrap();
        assert!(v.cq_holds);
        assert!(v.condition_holds);
        assert_eq!(v.necessity, Necessity::SufficientOnly);
        assert_eq!(v.lipschitz_like(false), Some(true));
        assert_eq!(v.pairs_checked, 9);
    }

    #[test]
    fn critical_face_relative_to_domain_fails() {
        let p = AviProblem::lcp(example_m(), example_domain()).unwrap().assume_q_is_domain();
        let o = rvec(&[0, 0]);
        let v = check_generalized_critical_face(&p, &o, &o).unwrap();
        assert!(!v.condition_holds);
        assert_eq!(v.necessity, Necessity::SufficientAndNecessary);
        assert_eq!(v.lipschitz_like(true), Some(false));
        let w = v.witness_ray.clone().unwrap();
        let pair = v.failing_pair.clone().unwrap();
        assert!(pair.critical_directions(&p.m).contains_point(&w));
        assert!(!p.q_set.normal_cone(&o).unwrap().negate().contains_point(&w));
    }

    #[test]
    fn critical_face_at_interior_point() {
        let q = PolyhedronH::whole(2);
        let p = AviProblem::lcp(RMatrix::identity(2), q).unwrap();
        let v = check_generalized_critical_face(&p, &rvec(&[1, 1]), &rvec(&[0, 0])).unwrap();
        assert!(v.cq_holds && v.condition_holds);
        assert!(v.critical_cone.is_trivial());
        assert_eq!(v.pairs_checked, 1);
        assert_eq!(v.necessity, Necessity::SufficientAndNecessary);
    }

    #[test]
    fn rejects_non_solutions() {
        let p = AviProblem::lcp(example_m(), example_q()).unwrap();
        assert!(matches!(
            check_generalized_critical_face(&p, &rvec(&[2, 1]), &rvec(&[1, 1])),
            Err(Error::Membership(_))
        ));
        assert!(matches!(
            check_generalized_critical_face(&p, &rvec(&[1, 2]), &rvec(&[0, 0])),
            Err(Error::Membership(_))
        ));
    }

    #[test]
    fn projectional_coderivative_estimates() {
        let o = rvec(&[0, 0]);
        let good = AviProblem::lcp(example_m(), example_q()).unwrap();
        let cones = projcode_zero_upper(&good, &o, &o).unwrap();
        assert!(!cones.is_empty());
        assert!(cones.iter().all(Cone::is_trivial), "{cones:?}");

        let bad = AviProblem::lcp(example_m(), example_domain()).unwrap().assume_q_is_domain();
        let cones = projcode_zero_upper(&bad, &o, &o).unwrap();
        assert!(cones.iter().any(|c| !c.is_trivial()));

        let interior = AviProblem::lcp(RMatrix::identity(2), PolyhedronH::whole(2)).unwrap();
        let cones = projcode_zero_upper(&interior, &rvec(&[1, 1]), &o).unwrap();
        assert_eq!(cones, vec![Cone::zero(2)]);
    }

    #[test]
    fn projectional_coderivative_reports_cq_failure() {
        // Q = {q1 = 0}: N_Q(0) is the q1-axis and meets the critical
        // directions of the quadrant for M = 0.
        let q = PolyhedronH::new(RMatrix::empty(2), vec![], RMatrix::from_i64(&[&[1, 0]]), rvec(&[0])).unwrap();
        let p = AviProblem::lcp(RMatrix::zeros(2, 2), q).unwrap();
        let o = rvec(&[0, 0]);
        assert!(matches!(projcode_zero_upper(&p, &o, &o), Err(Error::CqViolation { .. })));
        let v = check_generalized_critical_face(&p, &o, &o).unwrap();
        assert!(!v.cq_holds);
        assert!(v.cq_witness.is_some());
    }
}

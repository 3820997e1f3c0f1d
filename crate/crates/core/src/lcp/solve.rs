use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_len, check_square, domain_cone, slack};
use crate::error::Result;
use crate::geometry::{Cone, PolyhedronH};
use crate::linalg::{lex_cmp, solve_square, unit, zeros, RMatrix, RVector, Rational};

/// One convex piece of a solution set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionPiece {
    Point(RVector),
    /// A polyhedral family of solutions with more than one point.
    Polyhedron(PolyhedronH),
}

impl SolutionPiece {
    pub fn contains(&self, x: &[Rational]) -> bool {
        match self {
            SolutionPiece::Point(p) => p.as_slice() == x,
            SolutionPiece::Polyhedron(p) => p.contains(x),
        }
    }
}

/// `S(q)` as a finite union of convex pieces.
#[derive(Clone, Debug, Default)]
pub struct SolutionSet {
    pub pieces: Vec<SolutionPiece>,
}

impl SolutionSet {
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn points(&self) -> Vec<&RVector> {
        self.pieces
            .iter()
            .filter_map(|p| match p {
                SolutionPiece::Point(x) => Some(x),
                SolutionPiece::Polyhedron(_) => None,
            })
            .collect()
    }

    pub fn polyhedra(&self) -> Vec<&PolyhedronH> {
        self.pieces
            .iter()
            .filter_map(|p| match p {
                SolutionPiece::Polyhedron(x) => Some(x),
                SolutionPiece::Point(_) => None,
            })
            .collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    /// Assembles pieces into canonical form: isolated points sorted, points
    /// lying on a polyhedral piece dropped, polyhedra contained in another
    /// polyhedron dropped, and the rest ordered by their homogenization.
    pub fn from_pieces(pieces: Vec<SolutionPiece>) -> Self {
        let mut points: Vec<RVector> = Vec::new();
        let mut polys: Vec<(Cone, PolyhedronH)> = Vec::new();
        for p in pieces {
            match p {
                SolutionPiece::Point(x) => points.push(x),
                SolutionPiece::Polyhedron(p) => polys.push((p.homogenization(), p)),
            }
        }
        let mut kept: Vec<(Cone, PolyhedronH)> = Vec::new();
        for (i, (h, p)) in polys.iter().enumerate() {
            let dominated = polys.iter().enumerate().any(|(j, (h2, _))| {
                j != i && h2.contains_cone(h) && (h2 != h || j < i)
            });
            if !dominated {
                kept.push((h.clone(), p.clone()));
            }
        }
        kept.sort_by_key(|(h, _)| format!("{h:?}"));
        points.retain(|x| !kept.iter().any(|(_, p)| p.contains(x)));
        points.sort_by(|a, b| lex_cmp(a, b));
        points.dedup();
        let mut out: Vec<SolutionPiece> = points.into_iter().map(SolutionPiece::Point).collect();
        out.extend(kept.into_iter().map(|(_, p)| SolutionPiece::Polyhedron(p)));
        SolutionSet { pieces: out }
    }

    /// Set equality with another canonical solution set.
    pub fn same_set(&self, other: &SolutionSet) -> bool {
        let pts = |s: &SolutionSet| -> Vec<RVector> { s.points().into_iter().cloned().collect() };
        let homs = |s: &SolutionSet| -> Vec<Cone> { s.polyhedra().iter().map(|p| p.homogenization()).collect() };
        let (ha, hb) = (homs(self), homs(other));
        pts(self) == pts(other) && ha.len() == hb.len() && ha.iter().all(|h| hb.contains(h))
    }
}

/// Solution set on support `alpha`:
/// `{x : x_{α^c} = 0, x_α >= 0, (Mx+q)_α = 0, (Mx+q)_{α^c} >= 0}`.
fn support_piece(m: &RMatrix, q: &[Rational], alpha: &[usize]) -> Option<SolutionPiece> {
    let n = m.rows();
    let mm = m.principal(alpha);
    let q_alpha: RVector = alpha.iter().map(|&i| -q[i].clone()).collect();
    if let Some(xa) = solve_square(&mm, &q_alpha) {
        if xa.iter().any(Signed::is_negative) {
            return None;
        }
        let mut x = zeros(n);
        for (&i, v) in alpha.iter().zip(xa) {
            x[i] = v;
        }
        let w = slack(m, q, &x);
        return (!w.iter().any(Signed::is_negative)).then_some(SolutionPiece::Point(x));
    }

    let in_alpha = |i: usize| alpha.contains(&i);
    let mut a_le = Vec::new();
    let mut b_le = Vec::new();
    let mut a_eq = Vec::new();
    let mut b_eq = Vec::new();
    for i in 0..n {
        if in_alpha(i) {
            // -x_i <= 0 and M_i x + q_i = 0
            a_le.push(crate::linalg::neg(&unit(n, i)));
            b_le.push(Rational::zero());
            a_eq.push(m.row(i).to_vec());
            b_eq.push(-q[i].clone());
        } else {
            // x_i = 0 and -(M_i x) <= q_i
            a_eq.push(unit(n, i));
            b_eq.push(Rational::zero());
            a_le.push(crate::linalg::neg(m.row(i)));
            b_le.push(q[i].clone());
        }
    }
    let poly = PolyhedronH::new(
        RMatrix::from_rows(a_le).expect("n rows"),
        b_le,
        RMatrix::from_rows(a_eq).expect("n rows"),
        b_eq,
    )
    .expect("consistent dimensions");
    let x = poly.find_point()?;
    if poly.is_single_point(&x) {
        Some(SolutionPiece::Point(x))
    } else {
        Some(SolutionPiece::Polyhedron(poly))
    }
}

fn supports(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1 << n)).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// All solutions by complementary support enumeration.
pub fn solve_lcp(m: &RMatrix, q: &[Rational]) -> Result<SolutionSet> {
    let n = check_square(m)?;
    check_len(n, q, "q")?;
    let pieces: Vec<SolutionPiece> = supports(n).filter_map(|a| support_piece(m, q, &a)).collect();
    Ok(SolutionSet::from_pieces(pieces))
}

/// Whether `S(q)` is nonempty; stops at the first support that works.
pub fn is_solvable(m: &RMatrix, q: &[Rational]) -> Result<bool> {
    let n = check_square(m)?;
    check_len(n, q, "q")?;
    Ok(supports(n).any(|a| support_piece(m, q, &a).is_some()))
}

/// Outcome of the Q0 test (LCP solvable whenever feasible).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Q0Status {
    /// Every extreme ray is solvable and an exact argument covers the whole
    /// feasible cone: `M` is a P-matrix, or `pos(E, -M)` lies inside one
    /// complementary cone.
    CertifiedYesOnRays,
    /// Rays and every sample are solvable.
    ProbableYes { samples: usize },
    /// A feasible `q` without solutions.
    No {
        #[serde(with = "crate::report::rational_vec")]
        witness: RVector,
    },
}

impl Q0Status {
    pub fn is_no(&self) -> bool {
        matches!(self, Q0Status::No { .. })
    }
}

fn is_p_matrix(m: &RMatrix) -> bool {
    supports(m.rows())
        .filter(|a| !a.is_empty())
        .all(|a| m.principal(&a).determinant().is_positive())
}

/// `pos` of the columns `-M_{·i}` (`i ∈ α`) and `e_i` (otherwise).
fn complementary_cone(m: &RMatrix, alpha: &[usize]) -> Cone {
    let n = m.rows();
    let cols: Vec<RVector> = (0..n)
        .map(|i| {
            if alpha.contains(&i) {
                crate::linalg::neg(&m.column(i))
            } else {
                unit(n, i)
            }
        })
        .collect();
    Cone::from_v(n, &cols, &[])
}

/// Q0 test: exact solvability on the extreme rays of `pos(E, -M)`, then
/// `sample_count` random lattice points of that cone.
pub fn is_q0(m: &RMatrix, sample_count: usize, seed: u64) -> Result<Q0Status> {
    let n = check_square(m)?;
    let dom = domain_cone(m);
    let gens = dom.conic_generators();
    for r in &gens {
        if !is_solvable(m, r)? {
            return Ok(Q0Status::No { witness: r.clone() });
        }
    }
    if is_p_matrix(m) || supports(n).any(|a| complementary_cone(m, &a).contains_cone(&dom)) {
        return Ok(Q0Status::CertifiedYesOnRays);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<RVector> = (0..sample_count)
        .map(|_| {
            let mut q = zeros(n);
            for g in &gens {
                let c: i64 = rng.random_range(0..=9);
                if c > 0 {
                    let c = Rational::from_integer(c.into());
                    for (qi, gi) in q.iter_mut().zip(g) {
                        *qi += &c * gi;
                    }
                }
            }
            q
        })
        .collect();
    let first_bad = samples
        .par_iter()
        .position_first(|q| !is_solvable(m, q).unwrap_or(false));
    Ok(match first_bad {
        Some(i) => Q0Status::No { witness: samples[i].clone() },
        None => Q0Status::ProbableYes { samples: sample_count },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ratio, rvec};

    fn example_m() -> RMatrix {
        RMatrix::from_i64(&[&[-1, -1], &[1, -1]])
    }

    fn point_set(s: &SolutionSet) -> Vec<RVector> {
        assert!(s.polyhedra().is_empty());
        s.points().into_iter().cloned().collect()
    }

    #[test]
    fn example_solution_table() {
        let m = example_m();
        let s = solve_lcp(&m, &rvec(&[2, 1])).unwrap();
        let mut expected = vec![rvec(&[0, 0]), rvec(&[2, 0]), rvec(&[0, 1]), vec![ratio(1, 2), ratio(3, 2)]];
        expected.sort_by(|a, b| lex_cmp(a, b));
        assert_eq!(point_set(&s), expected);

        let s = solve_lcp(&m, &rvec(&[1, 2])).unwrap();
        assert_eq!(point_set(&s), vec![rvec(&[0, 0]), rvec(&[1, 0])]);

        let s = solve_lcp(&m, &[rat(1), ratio(-1, 2)]).unwrap();
        assert_eq!(point_set(&s), vec![vec![ratio(3, 4), ratio(1, 4)], rvec(&[1, 0])]);

        assert!(solve_lcp(&m, &rvec(&[-1, 0])).unwrap().is_empty());
    }

    fn rat(n: i64) -> Rational {
        crate::linalg::rat(n)
    }

    #[test]
    fn degenerate_support_gives_polyhedral_piece() {
        // M = 0, q = 0: every x >= 0 solves
        let s = solve_lcp(&RMatrix::zeros(2, 2), &rvec(&[0, 0])).unwrap();
        assert_eq!(s.pieces.len(), 1);
        let p = s.polyhedra()[0];
        assert!(p.contains(&rvec(&[3, 5])));
        assert!(!p.contains(&rvec(&[-1, 0])));
        // M = [[0,1],[0,0]] type: x1 free on a ray
        let m = RMatrix::from_i64(&[&[0, 0], &[0, 1]]);
        let s = solve_lcp(&m, &rvec(&[0, 1])).unwrap();
        assert_eq!(s.pieces.len(), 1);
        assert!(s.contains(&rvec(&[7, 0])));
    }

    #[test]
    fn complementarity_of_all_points() {
        let m = RMatrix::from_i64(&[&[1, -2, 0], &[0, 1, 3], &[-1, 0, 2]]);
        for q in [rvec(&[1, -1, 2]), rvec(&[-3, 2, -1]), rvec(&[0, 0, 0])] {
            for x in solve_lcp(&m, &q).unwrap().points() {
                let w = slack(&m, &q, x);
                assert!(x.iter().chain(&w).all(|v| !v.is_negative()));
                assert!(crate::linalg::dot(x, &w).is_zero());
            }
        }
    }

    #[test]
    fn q0_examples() {
        assert_eq!(is_q0(&example_m(), 100, 1).unwrap(), Q0Status::CertifiedYesOnRays);
        assert_eq!(is_q0(&RMatrix::identity(3), 100, 1).unwrap(), Q0Status::CertifiedYesOnRays);
        // q = (1,-1) is feasible (x = (0,1)) but no complementary solution exists
        let m = RMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(solve_lcp(&m, &rvec(&[1, -1])).unwrap().is_empty());
        assert!(is_q0(&m, 100, 1).unwrap().is_no());
    }
}

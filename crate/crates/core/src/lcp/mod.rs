//! Linear complementarity problems `x >= 0, Mx + q >= 0, x·(Mx + q) = 0`:
//! support enumeration, index combinations of graph slices, domain cones,
//! the W / W′ certificate and the graphical modulus.

mod certificate;
mod modulus;
mod solve;

pub use certificate::{check_lipschitz_domain, normal_cone_gph_s, BranchResult, LipschitzCertificate};
pub use modulus::{modulus, CombinationMax, ModulusDiagnostics, ModulusOptions};
pub use solve::{is_q0, is_solvable, solve_lcp, Q0Status, SolutionPiece, SolutionSet};

use std::fmt;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{conv_pos, Cone};
use crate::linalg::{fmt_vector, neg, sub, unit, RMatrix, RVector, Rational};

/// Which of the three slice conditions an index satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    /// `x_i = 0`, `(Mx+q)_i > 0`
    I1,
    /// `x_i > 0`, `(Mx+q)_i = 0`
    I2,
    /// `x_i = 0`, `(Mx+q)_i = 0`
    I3,
}

/// An ordered partition `(I1, I2, I3)` of `{0..n}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexCombination {
    parts: Vec<Part>,
}

impl IndexCombination {
    pub fn from_parts(parts: Vec<Part>) -> Self {
        Self { parts }
    }

    /// Builds a combination from 0-based index sets.
    pub fn from_sets(n: usize, i1: &[usize], i2: &[usize], i3: &[usize]) -> Result<Self> {
        let mut parts: Vec<Option<Part>> = vec![None; n];
        for (set, p) in [(i1, Part::I1), (i2, Part::I2), (i3, Part::I3)] {
            for &i in set {
                if i >= n {
                    return Err(Error::Dimension(format!("index {} out of range 1..={n}", i + 1)));
                }
                if parts[i].replace(p).is_some() {
                    return Err(Error::Dimension(format!("index {} appears twice", i + 1)));
                }
            }
        }
        let parts = parts
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::Dimension(format!("index {} is unassigned", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { parts })
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, i: usize) -> Part {
        self.parts[i]
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn indices(&self, p: Part) -> Vec<usize> {
        (0..self.parts.len()).filter(|&i| self.parts[i] == p).collect()
    }

    pub fn i1(&self) -> Vec<usize> {
        self.indices(Part::I1)
    }

    pub fn i2(&self) -> Vec<usize> {
        self.indices(Part::I2)
    }

    pub fn i3(&self) -> Vec<usize> {
        self.indices(Part::I3)
    }
}

impl fmt::Debug for IndexCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IndexCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |p: Part| {
            let items: Vec<String> = self.indices(p).iter().map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", items.join(","))
        };
        write!(f, "(I1={}, I2={}, I3={})", set(Part::I1), set(Part::I2), set(Part::I3))
    }
}

/// 1-based index sets on the wire.
#[derive(Serialize, Deserialize)]
struct IndexSets {
    i1: Vec<usize>,
    i2: Vec<usize>,
    i3: Vec<usize>,
}

impl Serialize for IndexCombination {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let one = |v: Vec<usize>| v.into_iter().map(|i| i + 1).collect();
        IndexSets { i1: one(self.i1()), i2: one(self.i2()), i3: one(self.i3()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexCombination {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let sets = IndexSets::deserialize(d)?;
        let n = sets.i1.len() + sets.i2.len() + sets.i3.len();
        let zero = |v: &[usize]| -> std::result::Result<Vec<usize>, D::Error> {
            v.iter()
                .map(|&i| i.checked_sub(1).ok_or_else(|| serde::de::Error::custom("indices are 1-based")))
                .collect()
        };
        IndexCombination::from_sets(n, &zero(&sets.i1)?, &zero(&sets.i2)?, &zero(&sets.i3)?)
            .map_err(serde::de::Error::custom)
    }
}

fn check_square(m: &RMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("M is {}x{}, expected square", m.rows(), m.cols())));
    }
    Ok(m.rows())
}

fn check_len(n: usize, v: &[Rational], what: &str) -> Result<()> {
    if v.len() != n {
        return Err(Error::Dimension(format!("{what} has length {}, expected {n}", v.len())));
    }
    Ok(())
}

/// `Mx + q`.
pub fn slack(m: &RMatrix, q: &[Rational], x: &[Rational]) -> RVector {
    crate::linalg::add(&m.mul_vec(x), q)
}

/// `(I1(q,x), I2(q,x), I3(q,x))` after checking `x ∈ S(q)`.
pub fn classify(m: &RMatrix, q: &[Rational], x: &[Rational]) -> Result<IndexCombination> {
    let n = check_square(m)?;
    check_len(n, q, "q")?;
    check_len(n, x, "x")?;
    let w = slack(m, q, x);
    let mut parts = Vec::with_capacity(n);
    for i in 0..n {
        let part = match (x[i].is_positive(), w[i].is_positive()) {
            _ if x[i].is_negative() || w[i].is_negative() => None,
            (true, true) => None,
            (false, true) => Some(Part::I1),
            (true, false) => Some(Part::I2),
            (false, false) => Some(Part::I3),
        };
        match part {
            Some(p) => parts.push(p),
            None => {
                return Err(Error::Membership(format!(
                    "x = {} does not solve the LCP at q = {} (Mx+q = {})",
                    fmt_vector(x),
                    fmt_vector(q),
                    fmt_vector(&w)
                )))
            }
        }
    }
    Ok(IndexCombination { parts })
}

/// `q = Σ_{I1} e_i slack_i - Σ_{I2} M_{·i} x_i`.
pub fn reconstruct_q(m: &RMatrix, combo: &IndexCombination, x: &[Rational], slack: &[Rational]) -> Result<RVector> {
    let n = check_square(m)?;
    check_len(n, x, "x")?;
    check_len(n, slack, "slack")?;
    if combo.len() != n {
        return Err(Error::Dimension(format!("combination has {} indices, expected {n}", combo.len())));
    }
    for i in 0..n {
        let want_x = combo.part(i) == Part::I2;
        let want_s = combo.part(i) == Part::I1;
        let ok = x[i].is_positive() == want_x
            && (want_x || x[i].is_zero())
            && slack[i].is_positive() == want_s
            && (want_s || slack[i].is_zero());
        if !ok {
            return Err(Error::Sign(format!(
                "index {}: x = {}, slack = {} do not match {combo}",
                i + 1,
                crate::linalg::fmt_rational(&x[i]),
                crate::linalg::fmt_rational(&slack[i])
            )));
        }
    }
    Ok(sub(slack, &m.mul_vec(x)))
}

/// All `(I1, I2, I3)` with `I1 ⊇ combo.I1`, `I2 ⊇ combo.I2`, `I3 ⊆ combo.I3`.
/// Ternary counter over `combo.I3` (first index most significant), digit
/// order `I1 < I2 < I3`.
pub fn neighboring_combinations(combo: &IndexCombination) -> Vec<IndexCombination> {
    let free = combo.i3();
    let total = 3usize.pow(free.len() as u32);
    let digits = [Part::I1, Part::I2, Part::I3];
    (0..total)
        .map(|mut code| {
            let mut parts = combo.parts.clone();
            for &i in free.iter().rev() {
                parts[i] = digits[code % 3];
                code /= 3;
            }
            IndexCombination { parts }
        })
        .collect()
}

/// All `3^n` combinations.
pub fn all_combinations(n: usize) -> Vec<IndexCombination> {
    neighboring_combinations(&IndexCombination { parts: vec![Part::I3; n] })
}

/// `pos(E, -M)`; equals `dom S` when `M` is Q0.
pub fn domain_cone(m: &RMatrix) -> Cone {
    let n = m.rows();
    let mut cols = RMatrix::zeros(n, 2 * n);
    for i in 0..n {
        cols[(i, i)] = Rational::from_integer(1.into());
        for j in 0..n {
            cols[(i, n + j)] = -m[(i, j)].clone();
        }
    }
    conv_pos(&cols)
}

/// `N(I1, I2, I3)`: `w ⊥ e_i (I1)`, `w ⊥ M_{·j} (I2)`, `<w, e_i> <= 0` off I1,
/// `<w, -M_{·j}> <= 0` off I2.
pub fn domain_normal_cone(m: &RMatrix, combo: &IndexCombination) -> Cone {
    let n = m.rows();
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for i in 0..n {
        let e = unit(n, i);
        let minus_col = neg(&m.column(i));
        match combo.part(i) {
            Part::I1 => {
                eqs.push(e);
                ineqs.push(minus_col);
            }
            Part::I2 => {
                ineqs.push(e);
                eqs.push(minus_col);
            }
            Part::I3 => {
                ineqs.push(e);
                ineqs.push(minus_col);
            }
        }
    }
    Cone::from_h(n, &eqs, &ineqs)
}

/// `T(I1, I2, I3)`, the polar of [`domain_normal_cone`].
pub fn domain_tangent_cone(m: &RMatrix, combo: &IndexCombination) -> Cone {
    domain_normal_cone(m, combo).polar()
}

/// Branch choice for an index in `I3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `u_i = 0`
    UZero,
    /// `(Mᵀu)_i = 0`
    MtuZero,
    /// `u_i <= 0` and `(Mᵀu)_i >= 0`
    BothNonpositive,
}

/// `{u : (u, -Mᵀu) ∈ W(combo)}` as `3^|I3|` cones with their branch choices.
pub fn w_cone_branches_labeled(m: &RMatrix, combo: &IndexCombination) -> Vec<(Vec<Branch>, Cone)> {
    let n = m.rows();
    let free = combo.i3();
    let total = 3usize.pow(free.len() as u32);
    let digits = [Branch::UZero, Branch::MtuZero, Branch::BothNonpositive];
    let mut base_eqs = Vec::new();
    for i in 0..n {
        match combo.part(i) {
            Part::I1 => base_eqs.push(unit(n, i)),
            Part::I2 => base_eqs.push(m.column(i)),
            Part::I3 => {}
        }
    }
    (0..total)
        .map(|mut code| {
            let mut choice = vec![Branch::UZero; free.len()];
            for slot in choice.iter_mut().rev() {
                *slot = digits[code % 3];
                code /= 3;
            }
            let mut eqs = base_eqs.clone();
            let mut ineqs = Vec::new();
            for (&i, b) in free.iter().zip(&choice) {
                match b {
                    Branch::UZero => eqs.push(unit(n, i)),
                    Branch::MtuZero => eqs.push(m.column(i)),
                    Branch::BothNonpositive => {
                        ineqs.push(unit(n, i));
                        ineqs.push(neg(&m.column(i)));
                    }
                }
            }
            (choice, Cone::from_h(n, &eqs, &ineqs))
        })
        .collect()
}

pub fn w_cone_branches(m: &RMatrix, combo: &IndexCombination) -> Vec<Cone> {
    w_cone_branches_labeled(m, combo).into_iter().map(|(_, c)| c).collect()
}

/// `{u : (u, -Mᵀu) ∈ W′(combo)}`.
pub fn w_prime_cone(m: &RMatrix, combo: &IndexCombination) -> Cone {
    let n = m.rows();
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for i in 0..n {
        let e = unit(n, i);
        let col = m.column(i);
        match combo.part(i) {
            Part::I1 => {
                eqs.push(e);
                ineqs.push(neg(&col));
            }
            Part::I2 => {
                ineqs.push(e);
                eqs.push(col);
            }
            Part::I3 => {
                ineqs.push(e);
                ineqs.push(neg(&col));
            }
        }
    }
    Cone::from_h(n, &eqs, &ineqs)
}

/// Direct coordinate test of `(u, -Mᵀu) ∈ W(combo)`.
pub fn in_w(m: &RMatrix, combo: &IndexCombination, u: &[Rational]) -> bool {
    let v = neg(&m.transpose().mul_vec(u));
    (0..combo.len()).all(|i| match combo.part(i) {
        Part::I1 => u[i].is_zero(),
        Part::I2 => v[i].is_zero(),
        Part::I3 => u[i].is_zero() || v[i].is_zero() || (!u[i].is_positive() && !v[i].is_positive()),
    })
}

/// Direct coordinate test of `(u, -Mᵀu) ∈ W′(combo)`.
pub fn in_w_prime(m: &RMatrix, combo: &IndexCombination, u: &[Rational]) -> bool {
    let v = neg(&m.transpose().mul_vec(u));
    (0..combo.len()).all(|i| match combo.part(i) {
        Part::I1 => u[i].is_zero() && !v[i].is_positive(),
        Part::I2 => !u[i].is_positive() && v[i].is_zero(),
        Part::I3 => !u[i].is_positive() && !v[i].is_positive(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PolyhedronH;
    use crate::linalg::{ratio, rvec};

    pub(crate) fn example_m() -> RMatrix {
        RMatrix::from_i64(&[&[-1, -1], &[1, -1]])
    }

    fn combo(n: usize, i1: &[usize], i2: &[usize], i3: &[usize]) -> IndexCombination {
        IndexCombination::from_sets(n, i1, i2, i3).unwrap()
    }

    #[test]
    fn classify_examples() {
        let m = example_m();
        assert_eq!(classify(&m, &rvec(&[1, 2]), &rvec(&[0, 0])).unwrap(), combo(2, &[0, 1], &[], &[]));
        assert_eq!(classify(&m, &rvec(&[0, 0]), &rvec(&[0, 0])).unwrap(), combo(2, &[], &[], &[0, 1]));
        let x = vec![ratio(1, 2), ratio(3, 2)];
        assert_eq!(classify(&m, &rvec(&[2, 1]), &x).unwrap(), combo(2, &[], &[0, 1], &[]));
        assert!(matches!(classify(&m, &rvec(&[2, 1]), &rvec(&[1, 1])), Err(Error::Membership(_))));
    }

    #[test]
    fn reconstruct_examples() {
        let m = example_m();
        let c = combo(2, &[0, 1], &[], &[]);
        assert_eq!(reconstruct_q(&m, &c, &rvec(&[0, 0]), &rvec(&[1, 2])).unwrap(), rvec(&[1, 2]));
        let c = combo(2, &[], &[0, 1], &[]);
        let x = vec![ratio(1, 2), ratio(3, 2)];
        assert_eq!(reconstruct_q(&m, &c, &x, &rvec(&[0, 0])).unwrap(), rvec(&[2, 1]));
        let c = combo(2, &[], &[], &[0, 1]);
        assert_eq!(reconstruct_q(&m, &c, &rvec(&[0, 0]), &rvec(&[0, 0])).unwrap(), rvec(&[0, 0]));
        assert!(matches!(
            reconstruct_q(&m, &c, &rvec(&[1, 0]), &rvec(&[0, 0])),
            Err(Error::Sign(_))
        ));
    }

    #[test]
    fn neighbor_counts() {
        assert_eq!(neighboring_combinations(&combo(2, &[], &[], &[0, 1])).len(), 9);
        let c = combo(2, &[0], &[1], &[]);
        assert_eq!(neighboring_combinations(&c), vec![c]);
        let nb = neighboring_combinations(&combo(2, &[0], &[], &[1]));
        assert_eq!(nb.len(), 3);
        assert!(nb.iter().all(|c| c.part(0) == Part::I1));
        assert_eq!(all_combinations(3).len(), 27);
    }

    #[test]
    fn domain_cones() {
        let dom = domain_cone(&example_m());
        assert_eq!(dom, Cone::from_h(2, &[], &[rvec(&[-1, 0]), rvec(&[-1, -1])]));
        assert_eq!(domain_cone(&RMatrix::identity(2)), Cone::full(2));
        assert_eq!(domain_cone(&RMatrix::zeros(2, 2)), Cone::orthant(2));
    }

    #[test]
    fn domain_normal_cone_matches_polyhedral_normal_cone() {
        let m = example_m();
        let origin = combo(2, &[], &[], &[0, 1]);
        let n = domain_normal_cone(&m, &origin);
        let dom = PolyhedronH::from_cone(&domain_cone(&m));
        assert_eq!(n, dom.normal_cone(&rvec(&[0, 0])).unwrap());
        assert_eq!(domain_tangent_cone(&m, &origin), domain_cone(&m));
        // q = (1,2) lies in the interior
        let inner = combo(2, &[0, 1], &[], &[]);
        assert!(domain_normal_cone(&m, &inner).is_trivial());
        assert_eq!(domain_tangent_cone(&m, &inner), Cone::full(2));
    }

    #[test]
    fn w_sets() {
        let m = example_m();
        let all1 = combo(2, &[0, 1], &[], &[]);
        assert_eq!(w_cone_branches(&m, &all1), vec![Cone::zero(2)]);
        assert_eq!(w_cone_branches(&m, &combo(2, &[], &[0, 1], &[])), vec![Cone::zero(2)]);
        let origin = combo(2, &[], &[], &[0, 1]);
        assert_eq!(w_cone_branches(&m, &origin).len(), 9);
        // u <= 0 and -Mᵀu <= 0
        let mt = m.transpose();
        let expected = Cone::from_h(
            2,
            &[],
            &[rvec(&[1, 0]), rvec(&[0, 1]), neg(mt.row(0)), neg(mt.row(1))],
        );
        assert_eq!(w_prime_cone(&m, &origin), expected);
        for c in all_combinations(2) {
            assert_eq!(w_prime_cone(&m, &c), domain_normal_cone(&m, &c), "{c}");
        }
    }

    #[test]
    fn combination_serde_is_one_based() {
        let c = combo(3, &[2], &[0], &[1]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"i1":[3],"i2":[1],"i3":[2]}"#);
        let back: IndexCombination = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}

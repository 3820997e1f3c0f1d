use serde::{Deserialize, Serialize};

use super::modulus::ModulusDiagnostics;
use super::{
    classify, in_w, in_w_prime, w_cone_branches_labeled, w_prime_cone, Branch, IndexCombination, Part, Q0Status,
};
use crate::error::{Error, Result};
use crate::geometry::Cone;
use crate::linalg::{fmt_vector, unit, RMatrix, RVector, Rational};

/// Containment of one W-branch in W′.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchResult {
    /// Choices for the indices of `I3`, in increasing index order.
    pub choice: Vec<Branch>,
    pub contained: bool,
    #[serde(with = "crate::report::opt_rational_vec")]
    pub witness: Option<RVector>,
}

/// Outcome of the Lipschitz-like test relative to `dom S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzCertificate {
    pub verdict: bool,
    pub combination: IndexCombination,
    /// A `u` with `(u, -Mᵀu) ∈ W` but not in `W′`.
    #[serde(with = "crate::report::opt_rational_vec")]
    pub witness: Option<RVector>,
    pub branches: Vec<BranchResult>,
    pub q0: Q0Status,
    /// `None` until [`super::modulus`] runs; `+∞` when the verdict is false.
    #[serde(with = "crate::report::opt_modulus")]
    pub modulus: Option<f64>,
    pub modulus_diagnostics: Option<ModulusDiagnostics>,
}

/// Necessary and sufficient test for the Lipschitz-like property of `S`
/// relative to `dom S` at `(q̄, x̄)`: every branch of `W` must lie in `W′`.
pub fn check_lipschitz_domain(
    m: &RMatrix,
    q_bar: &[Rational],
    x_bar: &[Rational],
    q0: &Q0Status,
) -> Result<LipschitzCertificate> {
    let combo = classify(m, q_bar, x_bar)?;
    if let Q0Status::No { witness } = q0 {
        return Err(Error::NotQ0 { witness: Some(witness.clone()) });
    }
    let wp = w_prime_cone(m, &combo);
    let mut branches = Vec::new();
    let mut witness: Option<RVector> = None;
    for (choice, cone) in w_cone_branches_labeled(m, &combo) {
        let w = wp.contains(&cone).witness().cloned();
        if witness.is_none() {
            if let Some(u) = &w {
                verify_witness(m, &combo, &cone, u)?;
                witness = Some(u.clone());
            }
        }
        branches.push(BranchResult { choice, contained: w.is_none(), witness: w });
    }
    let verdict = witness.is_none();
    Ok(LipschitzCertificate {
        verdict,
        combination: combo,
        witness,
        branches,
        q0: q0.clone(),
        modulus: (!verdict).then_some(f64::INFINITY),
        modulus_diagnostics: None,
    })
}

fn verify_witness(m: &RMatrix, combo: &IndexCombination, branch: &Cone, u: &[Rational]) -> Result<()> {
    if branch.contains_point(u) && in_w(m, combo, u) && !in_w_prime(m, combo, u) {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "witness u = {} failed exact re-verification for {combo}",
            fmt_vector(u)
        )))
    }
}

/// `N_{gph S}(q, x)` as cones in `(q*, x*)`-space `R^{2n}`: the images of
/// the branches of `W(I1, I2, I3)` under `(u, v) ↦ (u, Mᵀu + v)`.
pub fn normal_cone_gph_s(m: &RMatrix, q: &[Rational], x: &[Rational]) -> Result<Vec<Cone>> {
    let combo = classify(m, q, x)?;
    let n = m.rows();
    let u = |i: usize| unit(2 * n, i);
    let v = |i: usize| unit(2 * n, n + i);
    let free = combo.i3();
    let total = 3usize.pow(free.len() as u32);

    let mut map = RMatrix::identity(2 * n);
    for i in 0..n {
        for j in 0..n {
            map[(n + i, j)] = m[(j, i)].clone();
        }
    }
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut eqs = Vec::new();
        let mut ineqs = Vec::new();
        for i in 0..n {
            match combo.part(i) {
                Part::I1 => eqs.push(u(i)),
                Part::I2 => eqs.push(v(i)),
                Part::I3 => {}
            }
        }
        let mut digits = vec![0; free.len()];
        for d in digits.iter_mut().rev() {
            *d = code % 3;
            code /= 3;
        }
        for (&i, d) in free.iter().zip(digits) {
            match d {
                0 => eqs.push(u(i)),
                1 => eqs.push(v(i)),
                _ => {
                    ineqs.push(u(i));
                    ineqs.push(v(i));
                }
            }
        }
        out.push(Cone::from_h(2 * n, &eqs, &ineqs).linear_image(&map));
    }
    Ok(out)
}

use num::{Signed, Zero};
use proptest::prelude::*;
use stabcert::avi::{check_generalized_critical_face, AviProblem};
use stabcert::geometry::{faces_of_cone, project_onto_cone, Cone, PolyhedronH};
use stabcert::lcp::{
    check_lipschitz_domain, classify, domain_cone, modulus, neighboring_combinations, reconstruct_q, solve_lcp,
    IndexCombination, ModulusOptions, Part, Q0Status,
};
use stabcert::linalg::{dot, rat, scale, sub, RMatrix, RVector, Rational};
use stabcert::oracle::{brute_solutions, same_solutions};

fn vector(n: usize) -> impl Strategy<Value = RVector> {
    prop::collection::vec(-3i64..=3, n).prop_map(|v| v.into_iter().map(rat).collect())
}

fn matrix(n: usize) -> impl Strategy<Value = RMatrix> {
    prop::collection::vec(vector(n), n).prop_map(|rows| RMatrix::from_rows(rows).unwrap())
}

fn cone() -> impl Strategy<Value = Cone> {
    (2usize..=4).prop_flat_map(|n| {
        (prop::collection::vec(vector(n), 1..=5), prop::collection::vec(vector(n), 0..=1))
            .prop_map(move |(rays, lines)| Cone::from_v(n, &rays, &lines))
    })
}

fn cone_and_point() -> impl Strategy<Value = (Cone, RVector)> {
    cone().prop_flat_map(|c| {
        let n = c.dim();
        (Just(c), vector(n))
    })
}

fn problem() -> impl Strategy<Value = (RMatrix, RVector)> {
    (1usize..=4).prop_flat_map(|n| (matrix(n), vector(n)))
}

fn slice_point() -> impl Strategy<Value = (RMatrix, IndexCombination, RVector, RVector)> {
    (1usize..=4).prop_flat_map(|n| {
        let parts = prop::collection::vec(prop_oneof![Just(Part::I1), Just(Part::I2), Just(Part::I3)], n);
        let mags = prop::collection::vec(1i64..=5, n);
        (matrix(n), parts, mags).prop_map(|(m, parts, mags)| {
            let combo = IndexCombination::from_parts(parts);
            let n = m.rows();
            let mut x = vec![Rational::zero(); n];
            let mut s = vec![Rational::zero(); n];
            for i in 0..n {
                match combo.part(i) {
                    Part::I1 => s[i] = rat(mags[i]),
                    Part::I2 => x[i] = rat(mags[i]),
                    Part::I3 => {}
                }
            }
            (m, combo, x, s)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polar_is_an_involution(c in cone()) {
        prop_assert_eq!(c.polar().polar(), c);
    }

    #[test]
    fn representations_round_trip(c in cone()) {
        let from_h = Cone::from_h(c.dim(), c.equalities(), c.inequalities());
        let from_v = Cone::from_v(c.dim(), c.rays(), c.lineality());
        prop_assert_eq!(&from_h, &c);
        prop_assert_eq!(&from_v, &c);
    }

    #[test]
    fn containment_matches_generators(a in cone(), b in cone()) {
        prop_assume!(a.dim() == b.dim());
        let expected = b.conic_generators().iter().all(|g| a.contains_point(g));
        let got = a.contains(&b);
        prop_assert_eq!(got.holds(), expected);
        if let Some(w) = got.witness() {
            prop_assert!(b.contains_point(w) && !a.contains_point(w));
        }
    }

    #[test]
    fn faces_are_closed_under_intersection(c in cone()) {
        let faces = faces_of_cone(&c);
        prop_assert!(faces.contains(&c));
        for f in &faces {
            for g in &faces {
                prop_assert!(faces.contains(&f.intersect(g)));
            }
        }
    }

    #[test]
    fn projection_is_optimal((c, p) in cone_and_point()) {
        let (y, d) = project_onto_cone(&c, &p);
        prop_assert!(c.contains_point(&y));
        let r = sub(&p, &y);
        prop_assert!(c.polar().contains_point(&r));
        prop_assert!(dot(&r, &y).is_zero());
        prop_assert_eq!(d, dot(&r, &r));
    }

    #[test]
    fn reconstruct_then_classify((m, combo, x, s) in slice_point()) {
        let q = reconstruct_q(&m, &combo, &x, &s).unwrap();
        prop_assert_eq!(classify(&m, &q, &x).unwrap(), combo.clone());
        let t = Rational::new(3.into(), 2.into());
        prop_assert_eq!(classify(&m, &scale(&q, &t), &scale(&x, &t)).unwrap(), combo.clone());
        prop_assert_eq!(neighboring_combinations(&combo).len(), 3usize.pow(combo.i3().len() as u32));
    }

    #[test]
    fn solutions_are_complementary((m, q) in problem()) {
        let s = solve_lcp(&m, &q).unwrap();
        for x in s.points() {
            prop_assert!(classify(&m, &q, x).is_ok());
        }
        for p in s.polyhedra() {
            let x = p.find_point().unwrap();
            prop_assert!(classify(&m, &q, &x).is_ok());
        }
    }

    #[test]
    fn modulus_finite_on_certified_points((m, combo, x, s) in slice_point()) {
        let q = reconstruct_q(&m, &combo, &x, &s).unwrap();
        let cert = check_lipschitz_domain(&m, &q, &x, &Q0Status::CertifiedYesOnRays).unwrap();
        if cert.verdict {
            let opts = ModulusOptions { starts: 8, ..ModulusOptions::default() };
            let (v, _) = modulus(&m, &q, &x, &cert, &opts).unwrap();
            prop_assert!(v.is_finite() && v >= 0.0);
        } else {
            prop_assert!(cert.witness.is_some());
        }
    }

    #[test]
    fn lcp_and_avi_verdicts_agree_relative_to_domain((m, combo, x, s) in slice_point()) {
        // both sides work with pos(E, -M), so they agree whether or not M is Q0
        let q = reconstruct_q(&m, &combo, &x, &s).unwrap();
        let cert = check_lipschitz_domain(&m, &q, &x, &Q0Status::CertifiedYesOnRays).unwrap();
        let dom = PolyhedronH::from_cone(&domain_cone(&m));
        let p = AviProblem::lcp(m.clone(), dom).unwrap().assume_q_is_domain();
        let v = check_generalized_critical_face(&p, &q, &x).unwrap();
        prop_assert_eq!(v.lipschitz_like(true), Some(cert.verdict));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn brute_force_agrees_with_support_enumeration((m, q) in problem()) {
        let exact = solve_lcp(&m, &q).unwrap();
        let brute = brute_solutions(&m, &q);
        prop_assert!(same_solutions(&exact, &brute));
        prop_assert_eq!(exact.is_empty(), brute.is_empty());
        for x in brute.points() {
            prop_assert!(!x.iter().any(Signed::is_negative));
        }
    }
}

//! Problems shipped under `fixtures/`, kept here so the files can be
//! regenerated and checked against the code.

use crate::linalg::{ratio, rvec, RVector};
use crate::report::{HRepFile, Kind, Options, ProblemFile, QSetFile};

fn example_m() -> Vec<RVector> {
    vec![rvec(&[-1, -1]), rvec(&[1, -1])]
}

fn identity(n: usize) -> Vec<RVector> {
    (0..n).map(|i| crate::linalg::unit(n, i)).collect()
}

fn lcp(m: Vec<RVector>, q_set: QSetFile, q_bar: RVector, x_bar: RVector) -> ProblemFile {
    ProblemFile {
        kind: Kind::Lcp,
        m,
        c: None,
        q_set: Some(q_set),
        q_bar,
        x_bar: Some(x_bar),
        options: Options::default(),
    }
}

/// `{q : 0 <= q2 <= q1}`.
pub fn example_q_set() -> HRepFile {
    HRepFile { a_le: vec![rvec(&[0, -1]), rvec(&[-1, 1])], b_le: rvec(&[0, 0]), a_eq: vec![], b_eq: vec![] }
}

/// `(file name, problem)` for every shipped fixture.
pub fn builtin() -> Vec<(&'static str, ProblemFile)> {
    let o2 = rvec(&[0, 0]);
    vec![
        ("example46_origin.json", lcp(example_m(), QSetFile::Domain, o2.clone(), o2.clone())),
        ("example46_Q.json", lcp(example_m(), QSetFile::Set(example_q_set()), o2.clone(), o2.clone())),
        ("example46_q21.json", lcp(example_m(), QSetFile::Domain, rvec(&[2, 1]), vec![ratio(1, 2), ratio(3, 2)])),
        ("example46_q21_vertex.json", lcp(example_m(), QSetFile::Domain, rvec(&[2, 1]), rvec(&[2, 0]))),
        ("example46_q_neg.json", lcp(example_m(), QSetFile::Domain, vec![ratio(1, 1), ratio(-1, 2)], vec![ratio(3, 4), ratio(1, 4)])),
        ("identity_interior.json", lcp(identity(2), QSetFile::Domain, rvec(&[-1, 2]), rvec(&[1, 0]))),
        ("identity_origin.json", lcp(identity(3), QSetFile::Domain, rvec(&[0, 0, 0]), rvec(&[0, 0, 0]))),
        (
            "pmatrix_origin.json",
            lcp(vec![rvec(&[2, 1, 0]), rvec(&[1, 3, -1]), rvec(&[0, 1, 2])], QSetFile::Domain, rvec(&[0, 0, 0]), rvec(&[0, 0, 0])),
        ),
        (
            "avi_simplex.json",
            ProblemFile {
                kind: Kind::Avi,
                m: identity(2),
                c: Some(HRepFile {
                    a_le: vec![rvec(&[1, 1]), rvec(&[-1, 0]), rvec(&[0, -1])],
                    b_le: rvec(&[1, 0, 0]),
                    a_eq: vec![],
                    b_eq: vec![],
                }),
                q_set: Some(QSetFile::Set(HRepFile { a_le: vec![], b_le: vec![], a_eq: vec![], b_eq: vec![] })),
                q_bar: rvec(&[0, 1]),
                x_bar: Some(rvec(&[0, 0])),
                options: Options::default(),
            },
        ),
    ]
}

pub fn by_name(name: &str) -> Option<ProblemFile> {
    builtin().into_iter().find(|(n, _)| *n == name).map(|(_, p)| p)
}

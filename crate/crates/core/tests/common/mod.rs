//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabcert::lcp::{reconstruct_q, IndexCombination, Part};
use stabcert::linalg::{RMatrix, RVector, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Entries `k/d` with `|k| <= 3` and `d ∈ {1, 2}`.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> RMatrix {
    let rows: Vec<RVector> = (0..n)
        .map(|_| (0..n).map(|_| r(rng.random_range(-3..=3), rng.random_range(1..=2))).collect())
        .collect();
    RMatrix::from_rows(rows).unwrap()
}

pub fn random_integer_matrix(rng: &mut ChaCha8Rng, n: usize) -> RMatrix {
    let rows: Vec<RVector> =
        (0..n).map(|_| (0..n).map(|_| r(rng.random_range(-3..=3), 1)).collect()).collect();
    RMatrix::from_rows(rows).unwrap()
}

/// Strictly diagonally dominant with positive diagonal, hence a P-matrix.
pub fn random_p_matrix(rng: &mut ChaCha8Rng, n: usize) -> RMatrix {
    let mut m = random_integer_matrix(rng, n);
    for i in 0..n {
        let off: Rational = (0..n).filter(|&j| j != i).map(|j| {
            let v = m[(i, j)].clone();
            if v < Rational::from_integer(0.into()) { -v } else { v }
        }).sum();
        m[(i, i)] = off + r(rng.random_range(1..=3), 1);
    }
    m
}

pub fn random_combination(rng: &mut ChaCha8Rng, n: usize) -> IndexCombination {
    let parts = [Part::I1, Part::I2, Part::I3];
    IndexCombination::from_parts((0..n).map(|_| parts[rng.random_range(0..3)]).collect())
}

/// A graph point on the slice of `combo`: `(q, x)` with `x ∈ S(q)`.
pub fn point_on(rng: &mut ChaCha8Rng, m: &RMatrix, combo: &IndexCombination) -> (RVector, RVector) {
    let n = m.rows();
    let mut x = vec![r(0, 1); n];
    let mut s = vec![r(0, 1); n];
    for i in 0..n {
        match combo.part(i) {
            Part::I1 => s[i] = r(rng.random_range(1..=4), 2),
            Part::I2 => x[i] = r(rng.random_range(1..=4), 2),
            Part::I3 => {}
        }
    }
    let q = reconstruct_q(m, combo, &x, &s).unwrap();
    (q, x)
}

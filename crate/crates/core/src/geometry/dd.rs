//! Incremental double description for homogeneous systems.
//!
//! Given `{x : E·x = 0, A·x <= 0}` this produces a canonical generator set:
//! a reduced basis of the lineality space and the extreme rays of the pointed
//! part `cone ∩ lineality^⊥`. Inequalities are inserted one at a time; two
//! rays are adjacent when the constraints active at both have rank `k - 2`.

use num::bigint::BigInt;
use num::{Signed, Zero};

use crate::linalg::{canonical_span, lex_cmp, nullspace, primitive_bigint, primitive_int, rank, Rational, RVector};

/// Generators of a polyhedral cone in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Generators {
    pub rays: Vec<RVector>,
    pub lineality: Vec<RVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet(vec![0; len.div_ceil(64).max(1)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    coords: Vec<BigInt>,
    zeros: BitSet,
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn to_rational(v: &[BigInt]) -> RVector {
    v.iter().cloned().map(Rational::from_integer).collect()
}

pub(crate) fn generators(dim: usize, eqs: &[RVector], ineqs: &[RVector]) -> Generators {
    let mut all: Vec<RVector> = eqs.to_vec();
    all.extend(ineqs.iter().cloned());
    let lineality = canonical_span(&nullspace(&all, dim), dim);

    // Pointed part lives in lineality^⊥ ∩ null(E); parametrize it by a basis.
    let mut eq_pointed: Vec<RVector> = eqs.to_vec();
    eq_pointed.extend(lineality.iter().cloned());
    let basis: Vec<Vec<BigInt>> = nullspace(&eq_pointed, dim)
        .iter()
        .map(|b| primitive_int(b))
        .collect();
    let k = basis.len();
    if k == 0 {
        return Generators { rays: Vec::new(), lineality };
    }

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for a in ineqs {
        let a_int = primitive_int(a);
        let row: Vec<BigInt> = basis.iter().map(|b| idot(&a_int, b)).collect();
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        let row = primitive_bigint(row);
        if !rows.contains(&row) {
            rows.push(row);
        }
    }
    let rows_q: Vec<RVector> = rows.iter().map(|r| to_rational(r)).collect();

    // Initial simplicial cone from k independent rows.
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<RVector> = chosen.iter().map(|&c| rows_q[c].clone()).collect();
        trial.push(rows_q[i].clone());
        if rank(&trial, k) == trial.len() {
            chosen.push(i);
            if chosen.len() == k {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), k, "pointed cone must have full-rank constraint matrix");

    let mut rays: Vec<Ray> = Vec::with_capacity(k);
    for j in 0..k {
        // y with B0·y = -e_j: the nullspace of the other k-1 chosen rows.
        let others: Vec<RVector> = chosen
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, &c)| rows_q[c].clone())
            .collect();
        let dir = nullspace(&others, k);
        debug_assert_eq!(dir.len(), 1);
        let mut y = primitive_int(&dir[0]);
        if idot(&rows[chosen[j]], &y).is_positive() {
            y.iter_mut().for_each(|v| *v = -v.clone());
        }
        let mut zeros = BitSet::new(rows.len());
        for (i, &c) in chosen.iter().enumerate() {
            if i != j {
                zeros.insert(c);
            }
        }
        rays.push(Ray { coords: y, zeros });
    }

    let mut processed: Vec<bool> = vec![false; rows.len()];
    for &c in &chosen {
        processed[c] = true;
    }

    for idx in 0..rows.len() {
        if processed[idx] {
            continue;
        }
        let row = &rows[idx];
        let vals: Vec<BigInt> = rays.iter().map(|r| idot(row, &r.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();

        let mut created: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.and(&rays[n].zeros);
                if k >= 2 && common.count() < k - 2 {
                    continue;
                }
                let active: Vec<RVector> = (0..rows.len())
                    .filter(|&i| common.contains(i))
                    .map(|i| rows_q[i].clone())
                    .collect();
                if rank(&active, k) + 2 != k {
                    continue;
                }
                let sp = &vals[p];
                let sn = -&vals[n];
                let coords: Vec<BigInt> = rays[n]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(a, b)| sp * a + &sn * b)
                    .collect();
                let mut zeros = common;
                zeros.insert(idx);
                created.push(Ray { coords: primitive_bigint(coords), zeros });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_zero() {
                r.zeros.insert(idx);
                next.push(r);
            } else if vals[i].is_negative() {
                next.push(r);
            }
        }
        next.extend(created);
        rays = next;
        processed[idx] = true;
    }

    let mut out: Vec<RVector> = rays
        .iter()
        .map(|r| {
            let mut x = vec![BigInt::zero(); dim];
            for (c, b) in r.coords.iter().zip(&basis) {
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi += c * bi;
                }
            }
            to_rational(&primitive_bigint(x))
        })
        .collect();
    out.sort_by(|a, b| lex_cmp(a, b));
    out.dedup();
    Generators { rays: out, lineality }
}

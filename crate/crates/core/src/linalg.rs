//! Exact rational scalars, vectors and matrices.
//!
//! Everything here is arbitrary precision: `Rational` is a normalized
//! `BigRational` (positive denominator, reduced), so equality is structural.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type RVector = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rvec(entries: &[i64]) -> RVector {
    entries.iter().map(|&v| rat(v)).collect()
}

pub fn zeros(n: usize) -> RVector {
    vec![Rational::zero(); n]
}

pub fn unit(n: usize, i: usize) -> RVector {
    let mut e = zeros(n);
    e[i] = Rational::one();
    e
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Dimension(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Canonical text form, `"p"` for integers and `"p/q"` otherwise.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(", "))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn norm_sq(a: &[Rational]) -> Rational {
    dot(a, a)
}

pub fn add(a: &[Rational], b: &[Rational]) -> RVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> RVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> RVector {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Rational]) -> RVector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn lex_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    a.iter().cmp(b.iter())
}

/// Scales `v` by a positive factor to the primitive integer vector on the
/// same ray. The zero vector is returned unchanged.
pub fn primitive(v: &[Rational]) -> RVector {
    let ints = primitive_int(v);
    ints.into_iter().map(Rational::from_integer).collect()
}

pub(crate) fn primitive_int(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    primitive_bigint(ints)
}

pub(crate) fn primitive_bigint(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x /= &g;
        }
    }
    v
}

/// Primitive with the first nonzero entry made positive; canonical
/// representative of a line.
pub fn primitive_line(v: &[Rational]) -> RVector {
    let mut p = primitive(v);
    if let Some(first) = p.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            p = neg(&p);
        }
    }
    p
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for integer fixtures; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| rvec(r)).collect()).expect("ragged integer matrix")
    }

    /// A matrix with no rows and `cols` columns.
    pub fn empty(cols: usize) -> Self {
        Self {
            rows: 0,
            cols,
            data: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<RVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> RVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RVector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn neg(&self) -> RMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    /// Principal submatrix on the index set `idx`.
    pub fn principal(&self, idx: &[usize]) -> RMatrix {
        let mut out = Self::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square());
        let mut rows = self.row_vecs();
        let n = self.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                rows.swap(p, col);
                det = -det;
            }
            let pivot = rows[col][col].clone();
            det *= &pivot;
            for r in col + 1..n {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = &rows[r][col] / &pivot;
                for c in col..n {
                    let delta = &f * &rows[col][c];
                    rows[r][c] -= delta;
                }
            }
        }
        det
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data.iter().map(|x| to_f64(x).abs()).fold(0.0, f64::max)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(to_f64).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for RMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows).map(|i| fmt_vector(self.row(i))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Reduced row echelon form of `rows` (each of length `ncols`).
/// Returns the nonzero reduced rows and their pivot columns.
pub fn rref(rows: &[RVector], ncols: usize) -> (Vec<RVector>, Vec<usize>) {
    let mut m: Vec<RVector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in &mut m[r] {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..ncols {
                    let delta = &f * &m[r][k];
                    m[i][k] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[RVector], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row·x = 0 for every row}`, one vector per free column.
pub fn nullspace(rows: &[RVector], ncols: usize) -> Vec<RVector> {
    let (red, pivots) = rref(rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = zeros(ncols);
            v[free] = Rational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Canonical basis of the span of `vectors`: reduced echelon rows scaled to
/// primitive integers. Two families span the same subspace iff their
/// canonical bases are equal.
pub fn canonical_span(vectors: &[RVector], ncols: usize) -> Vec<RVector> {
    rref(vectors, ncols).0.iter().map(|r| primitive(r)).collect()
}

/// Solves the square system `a·x = b`; `None` if `a` is singular.
pub fn solve_square(a: &RMatrix, b: &[Rational]) -> Option<RVector> {
    let n = a.rows();
    assert!(a.is_square() && b.len() == n);
    let aug: Vec<RVector> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug, n + 1);
    if pivots.len() < n || pivots.iter().any(|&p| p == n) {
        return None;
    }
    Some(red.iter().map(|r| r[n].clone()).collect())
}

/// Orthogonal projection of `p` onto the affine set `{x : rows·x = rhs}`.
/// Returns `None` when the system is inconsistent.
pub fn affine_project(rows: &[RVector], rhs: &[Rational], p: &[Rational]) -> Option<RVector> {
    let n = p.len();
    if rows.is_empty() {
        return Some(p.to_vec());
    }
    let aug: Vec<RVector> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let (red, pivots) = rref(&aug, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let c: Vec<RVector> = red.iter().map(|r| r[..n].to_vec()).collect();
    let d: RVector = red.iter().map(|r| r[n].clone()).collect();
    // x = p - Cᵀλ with (C Cᵀ) λ = C p - d
    let k = c.len();
    let mut gram = RMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = dot(&c[i], &c[j]);
        }
    }
    let resid: RVector = (0..k).map(|i| dot(&c[i], p) - &d[i]).collect();
    let lambda = solve_square(&gram, &resid)?;
    let mut x = p.to_vec();
    for (row, l) in c.iter().zip(&lambda) {
        for (xi, ri) in x.iter_mut().zip(row) {
            *xi -= l * ri;
        }
    }
    Some(x)
}

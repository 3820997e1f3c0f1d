//! Benchmark inputs for the criterion suite.

use stabcert::linalg::{rat, RMatrix};

/// Tridiagonal P-matrix `tridiag(-1, 3, -1)`.
pub fn tridiagonal(n: usize) -> RMatrix {
    let mut m = RMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = rat(3);
        if i + 1 < n {
            m[(i, i + 1)] = rat(-1);
            m[(i + 1, i)] = rat(-1);
        }
    }
    m
}

/// The 2x2 matrix whose solution map fails relative to its domain at the origin.
pub fn example() -> RMatrix {
    RMatrix::from_i64(&[&[-1, -1], &[1, -1]])
}

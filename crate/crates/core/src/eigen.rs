//! Thin wrappers over nalgebra's dense symmetric eigensolver and SVD, taking
//! and returning row-major buffers.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 10_000;

/// Eigenvalues (unsorted) and eigenvectors (as columns of a row-major `n x n`
/// matrix) of the symmetric row-major matrix `a`.
pub fn symmetric_eigen(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let m = DMatrix::from_row_slice(n, n, a);
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, MAX_ITERATIONS).ok_or_else(|| {
        let off = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)] * m[(p, q)])
            .sum::<f64>()
            .sqrt();
        Error::NoConvergence {
            sweeps: MAX_ITERATIONS,
            residual: off,
        }
    })?;
    let values = eig.eigenvalues.iter().copied().collect();
    let mut vectors = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            vectors[i * n + j] = eig.eigenvectors[(i, j)];
        }
    }
    Ok((values, vectors))
}

/// Singular values of the row-major `rows x cols` matrix, sorted descending.
pub fn singular_values(m: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    assert_eq!(m.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = DMatrix::from_row_slice(rows, cols, m)
        .singular_values()
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values at or above `rel_tol * largest`.
pub fn numerical_rank(m: &[f64], rows: usize, cols: usize, rel_tol: f64) -> usize {
    let s = singular_values(m, rows, cols);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x >= rel_tol * top).count(),
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let (d, v) = symmetric_eigen(&[1.0, -1.0, -1.0, 1.0], 2).unwrap();
        let mut pairs: Vec<_> = d.iter().copied().enumerate().collect();
        pairs.sort_by(|a, b| a.1.total_cmp(&b.1));
        assert!(pairs[0].1.abs() < 1e-14);
        assert!((pairs[1].1 - 2.0).abs() < 1e-14);
        let k = pairs[0].0;
        assert!((v[k].abs() - v[2 + k].abs()).abs() < 1e-14);
    }

    #[test]
    fn diagonal_matrix() {
        let (mut d, _) = symmetric_eigen(&[3.0, 0.0, 0.0, -1.0], 2).unwrap();
        d.sort_by(f64::total_cmp);
        assert_eq!(d, vec![-1.0, 3.0]);
    }

    #[test]
    fn rank_of_rank_one() {
        let m = [1.0, 2.0, 2.0, 4.0, 3.0, 6.0];
        assert_eq!(numerical_rank(&m, 3, 2, 1e-8), 1);
        let s = singular_values(&[3.0, 0.0, 0.0, 4.0], 2, 2);
        assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
    }
}

//! Spectral radius of nonnegative matrices.
//!
//! The matrix is split into strongly connected components; the spectral
//! radius is the largest over the irreducible diagonal blocks. On each block
//! of size > 1 we run power iteration on `B + I`: the shift makes the block
//! primitive, so the iteration converges even for periodic blocks, and
//! `rho(B + I) = rho(B) + 1` because `rho(B)` is itself an eigenvalue.
//! Every iterate stays strictly positive, so the Collatz-Wielandt quotients
//! `min_i (Ax)_i / x_i <= rho(A) <= max_i (Ax)_i / x_i` give a certified
//! bracket, and iteration stops once it is narrower than the tolerance.

use crate::error::{invalid, Error, Result};
use crate::graph;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 1_000_000;

/// Spectral radius of a square nonnegative matrix, within `tol`.
pub fn spectral_radius(matrix: &[Vec<f64>], tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let n = matrix.len();
    for (row, entries) in matrix.iter().enumerate() {
        if entries.len() != n {
            return Err(invalid(format!(
                "row {row} has {} entries, expected {n}",
                entries.len()
            )));
        }
        for (col, &value) in entries.iter().enumerate() {
            if !value.is_finite() {
                return Err(invalid(format!("entry ({row}, {col}) is not finite")));
            }
            if value < 0.0 {
                return Err(Error::NegativeEntry { row, col, value });
            }
        }
    }
    let mut rho: f64 = 0.0;
    for comp in graph::strong_components(matrix) {
        let r = if comp.len() == 1 {
            matrix[comp[0]][comp[0]]
        } else {
            let block: Vec<Vec<f64>> = comp
                .iter()
                .map(|&i| comp.iter().map(|&j| matrix[i][j]).collect())
                .collect();
            shifted_power_iteration(&block, tol)?
        };
        rho = rho.max(r);
    }
    // Empty float sums are -0.0; report a plain zero.
    Ok(rho + 0.0)
}

fn shifted_power_iteration(block: &[Vec<f64>], tol: f64) -> Result<f64> {
    let n = block.len();
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let (mut lower, mut upper) = (0.0, f64::INFINITY);
    for _ in 0..MAX_ITERATIONS {
        for (i, row) in block.iter().enumerate() {
            y[i] = x[i] + row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
        }
        lower = f64::INFINITY;
        upper = 0.0;
        for (yi, xi) in y.iter().zip(&x) {
            let q = yi / xi;
            lower = lower.min(q);
            upper = upper.max(q);
        }
        if upper - lower <= tol {
            return Ok(0.5 * (lower + upper) - 1.0);
        }
        let norm = y.iter().fold(0.0, |a: f64, &b| a.max(b));
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / norm;
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        lower: lower - 1.0,
        upper: upper - 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_cases() {
        assert_eq!(
            spectral_radius(&[vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]], 1e-10).unwrap(),
            0.0
        );
        assert_eq!(spectral_radius(&[], 1e-10).unwrap(), 0.0);
        let diag = vec![vec![0.5, 0.0], vec![0.0, 0.25]];
        assert_eq!(spectral_radius(&diag, 1e-10).unwrap(), 0.5);
        let flip = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert!((spectral_radius(&flip, 1e-12).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_rows_give_the_row_sum() {
        let row = vec![0.5, 0.5, 0.25, 0.25];
        let m = vec![row.clone(); 4];
        assert!((spectral_radius(&m, 1e-12).unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn triangular_blocks() {
        // No cycles through distinct vertices: the eigenvalues are the diagonal.
        let m = vec![
            vec![0.3, 1.0, 0.0],
            vec![0.0, 0.7, 0.0],
            vec![2.0, 0.0, 0.1],
        ];
        assert!((spectral_radius(&m, 1e-12).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            spectral_radius(&[vec![0.0, -1.0], vec![0.0, 0.0]], 1e-10),
            Err(Error::NegativeEntry { row: 0, col: 1, .. })
        ));
        assert!(spectral_radius(&[vec![0.0, 1.0]], 1e-10).is_err());
        assert!(spectral_radius(&[vec![1.0]], 0.0).is_err());
    }
}

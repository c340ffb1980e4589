//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};

/// Largest eigenvalue magnitude of a general real square matrix.
pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    assert!(m.is_square(), "spectral radius of a non-square matrix");
    if m.nrows() == 0 {
        return 0.0;
    }
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// `K_N = (1/N) 1 1^T`.
pub fn averaging_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_element(n, n, 1.0 / n as f64)
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Euclidean norm of `v - (1_N (x) mean)` for a stacked vector of `N` blocks of size `block`.
pub fn consensus_error(v: &[f64], block: usize) -> f64 {
    let n = v.len() / block;
    let mean = block_mean(v, block);
    let mut acc = 0.0;
    for i in 0..n {
        for (c, m) in mean.iter().enumerate() {
            let d = v[i * block + c] - m;
            acc += d * d;
        }
    }
    acc.sqrt()
}

/// Mean over the `N` blocks of a stacked vector.
pub fn block_mean(v: &[f64], block: usize) -> Vec<f64> {
    let n = v.len() / block;
    let mut mean = vec![0.0; block];
    for i in 0..n {
        for c in 0..block {
            mean[c] += v[i * block + c];
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    mean
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_of_rotation_is_one() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!((spectral_radius(&m) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn consensus_error_vanishes_on_consensus() {
        let v = [1.0, 2.0, 1.0, 2.0, 1.0, 2.0];
        assert_eq!(consensus_error(&v, 2), 0.0);
        assert_eq!(block_mean(&v, 2), vec![1.0, 2.0]);
    }
}

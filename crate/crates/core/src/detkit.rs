//! Determinant identities behind the hyperbolic changes of variables.
//!
//! `J(a)` is the determinant of the identity bordered by `a`,
//!
//! ```text
//! | I   a |
//! | aᵀ  1 |
//! ```
//!
//! and `K(a) = det(I − a aᵀ)`. Both equal `1 − Σ a_i²`. The closed forms
//! are what the crate uses; [`determinant`] (Gaussian elimination with
//! partial pivoting) on the explicit matrices is kept as the cross-check.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{norm_sq, sqrt};

/// A vector of bordering entries `a_1, …, a_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BorderedVector(Vec<f64>);

impl BorderedVector {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("bordered vector entries must be finite"));
        }
        Ok(BorderedVector(a))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    size: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn identity(size: usize) -> Self {
        let mut m = Matrix {
            size,
            data: vec![0.0; size * size],
        };
        for i in 0..size {
            m.data[i * size + i] = 1.0;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.size + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.size + col] = value;
    }
}

/// `1 − Σ a_i²`, the bordered-identity determinant.
pub fn j(a: &BorderedVector) -> f64 {
    1.0 - norm_sq(&a.0)
}

/// `1 − Σ a_i²`, the determinant of `I − a aᵀ`.
pub fn k(a: &BorderedVector) -> f64 {
    1.0 - norm_sq(&a.0)
}

/// The `(n+1)×(n+1)` identity bordered by `a` in the last row and column.
pub fn bordered_matrix(a: &BorderedVector) -> Matrix {
    let n = a.len();
    let mut m = Matrix::identity(n + 1);
    for (i, &ai) in a.0.iter().enumerate() {
        m.set(i, n, ai);
        m.set(n, i, ai);
    }
    m
}

/// The `n×n` rank-one update `I − a aᵀ`.
pub fn rank_one_matrix(a: &BorderedVector) -> Matrix {
    rank_one_update(a.as_slice(), -1.0)
}

/// `I + sign · a aᵀ`.
pub(crate) fn rank_one_update(a: &[f64], sign: f64) -> Matrix {
    let n = a.len();
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for jj in 0..n {
            let v = m.get(i, jj) + sign * a[i] * a[jj];
            m.set(i, jj, v);
        }
    }
    m
}

/// Matrix of the linear change of variables `(y, ζ) ↦ (x, z)` that maps the
/// slab coordinates of a hyperbolic cut to the ambient frame:
///
/// ```text
/// | I    p/√q |
/// | pᵀ   1/√q |
/// ```
pub fn change_of_variables_matrix(p: &[f64]) -> Result<Matrix> {
    let q = 1.0 - norm_sq(p);
    if !(q > 0.0) {
        return Err(Error::Domain {
            what: "q = 1 - |p|^2",
            value: q,
            lower: 0.0,
            upper: 1.0,
        });
    }
    let root = sqrt(q);
    let n = p.len();
    let mut m = Matrix::identity(n + 1);
    for (i, &pi) in p.iter().enumerate() {
        m.set(i, n, pi / root);
        m.set(n, i, pi);
    }
    m.set(n, n, 1.0 / root);
    Ok(m)
}

/// Jacobian `√q` of [`change_of_variables_matrix`], `q = 1 − Σ p_i²`.
pub fn jacobian_sqrtq(p: &[f64]) -> Result<f64> {
    let q = 1.0 - norm_sq(p);
    if !(q > 0.0) {
        return Err(Error::Domain {
            what: "q = 1 - |p|^2",
            value: q,
            lower: 0.0,
            upper: 1.0,
        });
    }
    Ok(sqrt(q))
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(matrix: &Matrix) -> f64 {
    let n = matrix.size;
    let mut a = matrix.data.clone();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
            .unwrap_or(col);
        if a[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for c in 0..n {
                a.swap(pivot * n + c, col * n + c);
            }
            det = -det;
        }
        let diag = a[col * n + col];
        det *= diag;
        for r in col + 1..n {
            let factor = a[r * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] -= factor * a[col * n + c];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(a: &[f64]) -> BorderedVector {
        BorderedVector::new(a.to_vec()).unwrap()
    }

    #[test]
    fn j_examples() {
        assert_eq!(j(&bv(&[0.5])), 0.75);
        assert_eq!(j(&bv(&[0.0; 4])), 1.0);
        let a = bv(&[0.6, 0.0, 0.8]);
        assert!(j(&a).abs() < 1e-15);
        assert!(determinant(&bordered_matrix(&a)).abs() < 1e-12);
    }

    #[test]
    fn k_examples() {
        let a = bv(&[0.6, 0.8]);
        assert!(k(&a).abs() < 1e-15);
        assert!(determinant(&rank_one_matrix(&a)).abs() < 1e-12);
        assert_eq!(k(&bv(&[0.0; 7])), 1.0);
        assert_eq!(determinant(&rank_one_matrix(&bv(&[0.0; 7]))), 1.0);
    }

    #[test]
    fn k_with_half_norm() {
        let s = sqrt(0.1);
        let a = bv(&[s, -s, s, -s, s]);
        assert!((k(&a) - 0.5).abs() < 1e-15);
        assert!((determinant(&rank_one_matrix(&a)) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(jacobian_sqrtq(&[0.0, 0.0]).unwrap(), 1.0);
        assert!((jacobian_sqrtq(&[0.6]).unwrap() - 0.8).abs() < 1e-15);
        let m = change_of_variables_matrix(&[0.6]).unwrap();
        assert!((determinant(&m) - 0.8).abs() < 1e-15);
        let edge = sqrt(1.0 - 1e-10);
        let jac = jacobian_sqrtq(&[edge]).unwrap();
        assert!(jac > 0.0 && jac < 2e-5);
        assert!(jacobian_sqrtq(&[1.0]).is_err());
        assert!(jacobian_sqrtq(&[0.8, 0.8]).is_err());
    }

    #[test]
    fn elimination_handles_pivoting() {
        let mut m = Matrix::identity(3);
        m.set(0, 0, 0.0);
        m.set(0, 1, 2.0);
        m.set(1, 0, 3.0);
        m.set(1, 1, 0.0);
        // [[0,2,0],[3,0,0],[0,0,1]] has determinant −6.
        assert_eq!(determinant(&m), -6.0);
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert!(BorderedVector::new(alloc::vec![f64::NAN]).is_err());
    }
}

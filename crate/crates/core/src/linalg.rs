//! Small dense linear-algebra helpers shared by the group and domain code.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn complexify(m: &RealMatrix) -> ComplexMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

pub fn from_parts(re: &RealMatrix, im: &RealMatrix) -> ComplexMatrix {
    assert_eq!(re.shape(), im.shape());
    ComplexMatrix::from_fn(re.nrows(), re.ncols(), |r, c| {
        Complex64::new(re[(r, c)], im[(r, c)])
    })
}

pub fn real_part(m: &ComplexMatrix) -> RealMatrix {
    m.map(|v| v.re)
}

pub fn imag_part(m: &ComplexMatrix) -> RealMatrix {
    m.map(|v| v.im)
}

pub fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn max_abs_c(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.norm()))
}

pub fn all_finite(m: &RealMatrix) -> bool {
    m.iter().all(|v| v.is_finite())
}

pub fn all_finite_c(m: &ComplexMatrix) -> bool {
    m.iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

/// The standard symplectic form `(0 I; -I 0)` of size `2n`.
pub fn j_matrix(n: usize) -> RealMatrix {
    let mut j = RealMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        j[(r, n + r)] = 1.0;
        j[(n + r, r)] = -1.0;
    }
    j
}

pub fn symmetrize(m: &RealMatrix) -> RealMatrix {
    (m + m.transpose()) * 0.5
}

pub fn symmetrize_c(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.transpose()) * Complex64::new(0.5, 0.0)
}

/// Applies `f` to the eigenvalues of a symmetric positive definite matrix.
fn spd_function(y: &RealMatrix, f: impl Fn(f64) -> f64) -> Result<RealMatrix> {
    let eig = SymmetricEigen::new(symmetrize(y));
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::num("matrix is not positive definite"));
    }
    let d = RealMatrix::from_diagonal(&eig.eigenvalues.map(f));
    Ok(symmetrize(
        &(&eig.eigenvectors * d * eig.eigenvectors.transpose()),
    ))
}

pub fn spd_sqrt(y: &RealMatrix) -> Result<RealMatrix> {
    spd_function(y, f64::sqrt)
}

pub fn spd_inv_sqrt(y: &RealMatrix) -> Result<RealMatrix> {
    spd_function(y, |l| 1.0 / l.sqrt())
}

/// 2-norm condition number from the singular values.
pub fn condition_number_c(m: &ComplexMatrix) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

pub fn identity_c(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Frobenius norm of a real matrix.
pub fn frobenius(m: &RealMatrix) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

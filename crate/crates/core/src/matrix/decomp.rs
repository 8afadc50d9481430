//! Thin wrappers over `faer` decompositions. `faer` is built without its
//! rayon feature, so every call is sequential and bitwise reproducible.

use super::DenseMatrix;
use crate::error::{Error, Result};
use faer::{Mat, Side};

fn to_faer(a: &DenseMatrix) -> Mat<f64> {
    Mat::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, f64>) -> DenseMatrix {
    DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin singular value decomposition `A = U diag(s) Vᵀ`, `s` nonincreasing.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows x k` left singular vectors.
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    /// `cols x k` right singular vectors.
    pub v: DenseMatrix,
}

pub fn thin_svd(a: &DenseMatrix) -> Result<Svd> {
    a.check_finite()?;
    let svd = to_faer(a)
        .thin_svd()
        .map_err(|e| Error::Numerical(format!("svd: {e:?}")))?;
    let s = svd.S().column_vector().iter().copied().collect();
    Ok(Svd {
        u: from_faer(svd.U()),
        s,
        v: from_faer(svd.V()),
    })
}

pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(Vec::new());
    }
    to_faer(a)
        .singular_values()
        .map_err(|e| Error::Numerical(format!("svd: {e:?}")))
}

/// Eigendecomposition of a symmetric matrix; eigenvalues ascending, columns
/// of `vectors` orthonormal.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

/// `Σ_k weights[k] · left[k] right[k]ᵀ` as one matrix product.
pub fn weighted_outer_sum(
    rows: usize,
    cols: usize,
    left: &[Vec<f64>],
    weights: &[f64],
    right: &[Vec<f64>],
) -> DenseMatrix {
    let k = weights.len();
    if k == 0 {
        return DenseMatrix::zeros(rows, cols);
    }
    let l = Mat::from_fn(rows, k, |i, j| weights[j] * left[j][i]);
    let r = Mat::from_fn(cols, k, |i, j| right[j][i]);
    let prod = &l * r.transpose();
    from_faer(prod.as_ref())
}

/// Reads only the lower triangle of `a`.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch("eigendecomposition needs a square matrix".into()));
    }
    a.check_finite()?;
    let evd = to_faer(a)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigen: {e:?}")))?;
    Ok(SymmetricEigen {
        values: evd.S().column_vector().iter().copied().collect(),
        vectors: from_faer(evd.U()),
    })
}

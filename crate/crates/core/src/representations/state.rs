use crate::eigen::eig_hermitian;
use crate::error::{shape_err, Error, Result};
use crate::matrix::CMatrix;

/// Square operator used as the input and output of channel evolution.
///
/// [`DensityMatrix::new`] validates Hermiticity, positivity and unit trace.
/// [`DensityMatrix::unchecked`] skips validation for unnormalized operators
/// and for outputs of maps that need not be positive.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix, tol: f64) -> Result<Self> {
        Self::validated(mat, tol, true)
    }

    /// Hermitian and positive semidefinite, any trace.
    pub fn unnormalized(mat: CMatrix, tol: f64) -> Result<Self> {
        Self::validated(mat, tol, false)
    }

    pub fn unchecked(mat: CMatrix) -> Self {
        DensityMatrix { mat }
    }

    fn validated(mat: CMatrix, tol: f64, unit_trace: bool) -> Result<Self> {
        if !mat.is_square() {
            return shape_err(format!("state must be square, got {}x{}", mat.rows(), mat.cols()));
        }
        let scale = mat.frobenius_norm().max(1.0);
        let defect = mat.hermiticity_defect();
        if defect > tol * scale {
            return Err(Error::Domain(format!("state is not Hermitian (defect {defect:.3e})")));
        }
        let min = eig_hermitian(&mat, tol)?.min_eigenvalue();
        if min < -tol * scale {
            return Err(Error::Domain(format!("state has negative eigenvalue {min:.3e}")));
        }
        if unit_trace {
            let tr = mat.trace()?;
            if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
                return Err(Error::Domain(format!("state trace is {tr}, expected 1")));
            }
        }
        Ok(DensityMatrix { mat })
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().map_or(f64::NAN, |t| t.re)
    }

    /// Pure state `|v><v| / <v|v>`.
    pub fn pure(v: &[crate::matrix::C64]) -> Result<Self> {
        let n = crate::matrix::vec_norm(v);
        if n == 0.0 {
            return Err(Error::Domain("zero vector".into()));
        }
        Ok(DensityMatrix {
            mat: CMatrix::outer(v, v).scale_real(1.0 / (n * n)),
        })
    }
}

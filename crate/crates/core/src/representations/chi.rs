use super::choi::spectral_cp_check;
use super::{check_input_dim, scaled, Channel, DensityMatrix, Property, PropertyCheck};
use crate::bipartite::{partial_trace_y, BipartiteShape};
use crate::error::{shape_err, Result};
use crate::matrix::CMatrix;
use crate::vectorize::{basis_change_op, OperatorBasis, VecConvention};

/// Process matrix: `E(rho) = sum_ab chi_ab sigma_a rho sigma_b^dagger` for an
/// orthonormal basis `{sigma_a}` of `dy x dx` operators.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiMatrix {
    mat: CMatrix,
    basis: OperatorBasis,
    dx: usize,
    dy: usize,
}

impl ChiMatrix {
    pub fn new(mat: CMatrix, basis: OperatorBasis) -> Result<Self> {
        let (dx, dy) = (basis.dx(), basis.dy());
        let d = dx * dy;
        if mat.shape() != (d, d) {
            return shape_err(format!(
                "chi matrix over a basis of {} elements must be {d}x{d}, got {}x{}",
                basis.len(),
                mat.rows(),
                mat.cols()
            ));
        }
        Ok(ChiMatrix { mat, basis, dx, dy })
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn basis(&self) -> &OperatorBasis {
        &self.basis
    }

    pub fn dx(&self) -> usize {
        self.dx
    }

    pub fn dy(&self) -> usize {
        self.dy
    }

    /// `T_{col -> basis}`, mapping col-vectorized operators to basis coefficients.
    pub(crate) fn col_to_basis(&self) -> Result<CMatrix> {
        basis_change_op(
            &VecConvention::Col,
            &VecConvention::Basis(self.basis.clone()),
            self.dx,
            self.dy,
        )
    }

    /// `T^dagger chi T`, the col-convention Choi matrix as a plain matrix.
    pub(crate) fn choi_mat(&self) -> Result<CMatrix> {
        let t = self.col_to_basis()?;
        t.adjoint().mat_mul(&self.mat)?.mat_mul(&t)
    }
}

/// `sum_ab chi_ab sigma_a rho sigma_b^dagger`.
pub fn apply_chi(chi: &ChiMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_input_dim(chi.dx, rho)?;
    let sigmas = chi.basis.elements();
    let right: Vec<CMatrix> = sigmas
        .iter()
        .map(|s| rho.mat().mat_mul(&s.adjoint()))
        .collect::<Result<_>>()?;
    let mut out = CMatrix::zeros(chi.dy, chi.dy);
    for (a, sa) in sigmas.iter().enumerate() {
        // sum_b chi_ab rho sigma_b^dagger, then one product with sigma_a.
        let mut inner = CMatrix::zeros(chi.dx, chi.dy);
        let mut any = false;
        for (b, r) in right.iter().enumerate() {
            let c = chi.mat[(a, b)];
            if c.norm_sqr() != 0.0 {
                inner.add_assign(&r.scale(c));
                any = true;
            }
        }
        if any {
            out.add_assign(&sa.mat_mul(&inner)?);
        }
    }
    Ok(DensityMatrix::unchecked(out))
}

impl Channel for ChiMatrix {
    fn input_dim(&self) -> usize {
        self.dx
    }

    fn output_dim(&self) -> usize {
        self.dy
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_chi(self, rho)
    }

    fn check_tp(&self, tol: f64) -> Result<PropertyCheck> {
        let lam = self.choi_mat()?;
        let reduced = partial_trace_y(&lam, BipartiteShape::new(self.dx, self.dy))?;
        Ok(PropertyCheck::residual(
            Property::TracePreserving,
            reduced.distance(&CMatrix::identity(self.dx)),
            scaled(tol, self.mat.frobenius_norm()),
            "||Tr_Y[T^dagger chi T] - I||_F",
        ))
    }

    fn check_hp(&self, tol: f64) -> Result<PropertyCheck> {
        Ok(PropertyCheck::residual(
            Property::HermiticityPreserving,
            self.mat.hermiticity_defect(),
            scaled(tol, self.mat.frobenius_norm()),
            "||chi - chi^dagger||_F",
        ))
    }

    fn check_cp(&self, tol: f64) -> Result<PropertyCheck> {
        spectral_cp_check(&self.mat, tol, "min eigenvalue of chi")
    }
}

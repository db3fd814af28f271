use super::{check_input_dim, scaled, Channel, DensityMatrix, Property, PropertyCheck};
use crate::bipartite::{bipartite_swap_blocks, BlockDims};
use crate::error::{shape_err, Result};
use crate::matrix::{CMatrix, C64, ONE, ZERO};
use crate::vectorize::{basis_change_op, devec, vec, VecConvention};

/// Liouville superoperator `|rho>> -> |E(rho)>>`, a `dy^2 x dx^2` matrix in
/// the stated vectorization convention.
///
/// Operator-basis conventions are only supported for `dx == dy`, with the
/// same basis on the input and output side.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOp {
    mat: CMatrix,
    conv: VecConvention,
    dx: usize,
    dy: usize,
}

impl SuperOp {
    pub fn new(mat: CMatrix, conv: VecConvention, dx: usize, dy: usize) -> Result<Self> {
        if mat.shape() != (dy * dy, dx * dx) {
            return shape_err(format!(
                "superoperator for dx={dx}, dy={dy} must be {}x{}, got {}x{}",
                dy * dy,
                dx * dx,
                mat.rows(),
                mat.cols()
            ));
        }
        if let VecConvention::Basis(b) = &conv {
            if dx != dy || b.dx() != dx || b.dy() != dx {
                return shape_err(format!(
                    "basis convention needs a basis of {dx}x{dx} operators and dx == dy"
                ));
            }
        }
        Ok(SuperOp { mat, conv, dx, dy })
    }

    /// Col-convention superoperator.
    pub fn col(mat: CMatrix, dx: usize, dy: usize) -> Result<Self> {
        Self::new(mat, VecConvention::Col, dx, dy)
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn conv(&self) -> &VecConvention {
        &self.conv
    }

    pub fn dx(&self) -> usize {
        self.dx
    }

    pub fn dy(&self) -> usize {
        self.dy
    }

    /// Re-expresses the superoperator in `target`: `S' = T_out S T_in^dagger`
    /// with `T = T_{conv -> target}` on each side.
    pub fn to_convention(&self, target: &VecConvention) -> Result<SuperOp> {
        if &self.conv == target {
            return Ok(self.clone());
        }
        let t_in = basis_change_op(&self.conv, target, self.dx, self.dx)?;
        let t_out = basis_change_op(&self.conv, target, self.dy, self.dy)?;
        let mat = t_out.mat_mul(&self.mat)?.mat_mul(&t_in.adjoint())?;
        SuperOp::new(mat, target.clone(), self.dx, self.dy)
    }

    pub fn to_col(&self) -> Result<SuperOp> {
        self.to_convention(&VecConvention::Col)
    }

    /// Row/column factor dimensions of the col-convention matrix.
    pub(crate) fn blocks(&self) -> BlockDims {
        BlockDims::new((self.dy, self.dy), (self.dx, self.dx))
    }
}

/// `devec(S vec(rho))` in the superoperator's own convention.
pub fn apply_superop(s: &SuperOp, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_input_dim(s.dx, rho)?;
    let v = vec(rho.mat(), &s.conv)?;
    let w = s.mat.mat_vec(&v)?;
    Ok(DensityMatrix::unchecked(devec(&w, &s.conv, s.dy, s.dy)?))
}

impl Channel for SuperOp {
    fn input_dim(&self) -> usize {
        self.dx
    }

    fn output_dim(&self) -> usize {
        self.dy
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_superop(self, rho)
    }

    /// `sum_m S[(m, m), (n, nu)] = delta_{n nu}`, evaluated in the col convention.
    fn check_tp(&self, tol: f64) -> Result<PropertyCheck> {
        let s = self.to_col()?;
        let (dx, dy) = (s.dx, s.dy);
        let mut residual = 0.0;
        for n in 0..dx {
            for nu in 0..dx {
                let sum: C64 = (0..dy).map(|m| s.mat[(m * dy + m, n * dx + nu)]).sum();
                let expect = if n == nu { ONE } else { ZERO };
                residual += (sum - expect).norm_sqr();
            }
        }
        Ok(PropertyCheck::residual(
            Property::TracePreserving,
            residual.sqrt(),
            scaled(tol, s.mat.frobenius_norm()),
            "sum_m S_{mm,n nu} = delta_{n nu}",
        ))
    }

    /// `conj(S) = S^S`, evaluated in the col convention.
    fn check_hp(&self, tol: f64) -> Result<PropertyCheck> {
        let s = self.to_col()?;
        let swapped = bipartite_swap_blocks(&s.mat, s.blocks())?;
        let residual = s.mat.conjugate().distance(&swapped);
        Ok(PropertyCheck::residual(
            Property::HermiticityPreserving,
            residual,
            scaled(tol, s.mat.frobenius_norm()),
            "||conj(S) - S^S||_F",
        ))
    }

    /// No structural criterion exists on the superoperator itself; the check
    /// reshuffles to the Choi matrix and tests its spectrum.
    fn check_cp(&self, tol: f64) -> Result<PropertyCheck> {
        let choi = crate::transforms::superop_to_choi(self)?;
        let mut check = choi.check_cp(tol)?;
        check.criterion = "min eigenvalue of reshuffled Choi matrix";
        Ok(check)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::swap_operator;
    use crate::random::{random_density_matrix, seeded_rng};
    use crate::vectorize::pauli_basis;

    #[test]
    fn identity_superop() {
        let s = SuperOp::col(CMatrix::identity(4), 2, 2).unwrap();
        let rho = random_density_matrix(2, &mut seeded_rng(60)).unwrap();
        assert!(apply_superop(&s, &rho).unwrap().mat().max_abs_diff(rho.mat()) < 1e-15);
        assert!(s.is_tp(1e-10) && s.is_hp(1e-10) && s.is_cp(1e-10));
    }

    #[test]
    fn swap_superop_is_transpose_map() {
        let s = SuperOp::col(swap_operator(2, 2), 2, 2).unwrap();
        let rho = random_density_matrix(2, &mut seeded_rng(61)).unwrap();
        let out = apply_superop(&s, &rho).unwrap();
        assert_eq!(out.mat(), &rho.mat().transpose());

        assert!(s.is_hp(1e-10));
        assert!(s.is_tp(1e-10));
        let cp = s.check_cp(1e-10).unwrap();
        assert!(!cp.passed);
        assert!((cp.witness.unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn convention_changes_preserve_evolution() {
        let s = SuperOp::col(swap_operator(2, 2), 2, 2).unwrap();
        let rho = random_density_matrix(2, &mut seeded_rng(62)).unwrap();
        let expect = apply_superop(&s, &rho).unwrap();
        for conv in [VecConvention::Row, VecConvention::Basis(pauli_basis(1).unwrap())] {
            let t = s.to_convention(&conv).unwrap();
            let out = apply_superop(&t, &rho).unwrap();
            assert!(out.mat().max_abs_diff(expect.mat()) < 1e-14);
            assert!(t.to_col().unwrap().mat().max_abs_diff(s.mat()) < 1e-14);
            assert!(t.is_tp(1e-10) && t.is_hp(1e-10) && !t.is_cp(1e-10));
        }
    }

    #[test]
    fn non_tp_non_hp_detection() {
        let half = SuperOp::col(CMatrix::identity(4).scale_real(0.5), 2, 2).unwrap();
        assert!(!half.is_tp(1e-10));
        let mut m = CMatrix::identity(4);
        m[(1, 0)] = C64::new(0.0, 1.0);
        let s = SuperOp::col(m, 2, 2).unwrap();
        assert!(!s.is_hp(1e-10));
    }

    #[test]
    fn shape_validation() {
        assert!(SuperOp::col(CMatrix::identity(4), 2, 3).is_err());
        assert!(SuperOp::col(CMatrix::zeros(9, 4), 2, 3).is_ok());
        let pauli = VecConvention::Basis(pauli_basis(1).unwrap());
        assert!(SuperOp::new(CMatrix::zeros(9, 4), pauli, 2, 3).is_err());
    }
}

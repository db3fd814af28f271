use super::{check_input_dim, scaled, Channel, DensityMatrix, Property, PropertyCheck};
use crate::bipartite::{bipartite_swap, partial_trace_x, partial_trace_y, BipartiteShape};
use crate::eigen::{eig_hermitian, EigenDecomposition};
use crate::error::{shape_err, Result};
use crate::matrix::CMatrix;

/// Which half of the Bell pair the channel acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChoiConvention {
    /// `sum_ij |i><j| ⊗ E(|i><j|)` on `X ⊗ Y`.
    Col,
    /// `sum_ij E(|i><j|) ⊗ |i><j|` on `Y ⊗ X`.
    Row,
}

impl ChoiConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChoiConvention::Col => "col",
            ChoiConvention::Row => "row",
        }
    }
}

/// Choi matrix of a map `L(C^dx) -> L(C^dy)`, `(dx dy) x (dx dy)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    mat: CMatrix,
    convention: ChoiConvention,
    dx: usize,
    dy: usize,
}

impl ChoiMatrix {
    pub fn new(mat: CMatrix, convention: ChoiConvention, dx: usize, dy: usize) -> Result<Self> {
        let d = dx * dy;
        if mat.shape() != (d, d) {
            return shape_err(format!(
                "choi matrix for dx={dx}, dy={dy} must be {d}x{d}, got {}x{}",
                mat.rows(),
                mat.cols()
            ));
        }
        Ok(ChoiMatrix {
            mat,
            convention,
            dx,
            dy,
        })
    }

    pub fn col(mat: CMatrix, dx: usize, dy: usize) -> Result<Self> {
        Self::new(mat, ChoiConvention::Col, dx, dy)
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn convention(&self) -> ChoiConvention {
        self.convention
    }

    pub fn dx(&self) -> usize {
        self.dx
    }

    pub fn dy(&self) -> usize {
        self.dy
    }

    /// The same map in the col convention (a bipartite swap for row-Λ).
    pub fn to_col(&self) -> Result<ChoiMatrix> {
        match self.convention {
            ChoiConvention::Col => Ok(self.clone()),
            ChoiConvention::Row => {
                let mat = bipartite_swap(&self.mat, BipartiteShape::new(self.dy, self.dx))?;
                ChoiMatrix::col(mat, self.dx, self.dy)
            }
        }
    }

    pub fn to_convention(&self, convention: ChoiConvention) -> Result<ChoiMatrix> {
        let col = self.to_col()?;
        match convention {
            ChoiConvention::Col => Ok(col),
            ChoiConvention::Row => {
                let mat = bipartite_swap(&col.mat, BipartiteShape::new(self.dx, self.dy))?;
                ChoiMatrix::new(mat, ChoiConvention::Row, self.dx, self.dy)
            }
        }
    }

    pub(crate) fn shape(&self) -> BipartiteShape {
        BipartiteShape::new(self.dx, self.dy)
    }

    pub fn spectrum(&self, tol: f64) -> Result<EigenDecomposition> {
        eig_hermitian(&self.mat, tol)
    }
}

/// `Tr_X[(rho^T ⊗ I_dy) Λ]`.
pub fn apply_choi(lam: &ChoiMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_input_dim(lam.dx, rho)?;
    let col = lam.to_col()?;
    let lifted = rho.mat().transpose().kron(&CMatrix::identity(lam.dy));
    let out = partial_trace_x(&lifted.mat_mul(&col.mat)?, col.shape())?;
    Ok(DensityMatrix::unchecked(out))
}

/// Minimum-eigenvalue CP test shared by the Choi and chi matrices.
pub(crate) fn spectral_cp_check(m: &CMatrix, tol: f64, criterion: &'static str) -> Result<PropertyCheck> {
    let norm = m.frobenius_norm();
    // A non-Hermitian matrix is not positive semidefinite.
    let herm_defect = m.hermiticity_defect();
    if herm_defect > scaled(tol, norm) {
        return Ok(PropertyCheck {
            property: Property::CompletelyPositive,
            passed: false,
            witness: None,
            threshold: scaled(tol, norm),
            criterion: "matrix is not Hermitian",
        });
    }
    let min = eig_hermitian(m, f64::INFINITY)?.min_eigenvalue();
    Ok(PropertyCheck::min_eigenvalue(min, -tol * norm, criterion))
}

impl Channel for ChoiMatrix {
    fn input_dim(&self) -> usize {
        self.dx
    }

    fn output_dim(&self) -> usize {
        self.dy
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_choi(self, rho)
    }

    fn check_tp(&self, tol: f64) -> Result<PropertyCheck> {
        let col = self.to_col()?;
        let reduced = partial_trace_y(&col.mat, col.shape())?;
        Ok(PropertyCheck::residual(
            Property::TracePreserving,
            reduced.distance(&CMatrix::identity(self.dx)),
            scaled(tol, self.mat.frobenius_norm()),
            "||Tr_Y[Λ] - I||_F",
        ))
    }

    fn check_hp(&self, tol: f64) -> Result<PropertyCheck> {
        Ok(PropertyCheck::residual(
            Property::HermiticityPreserving,
            self.mat.hermiticity_defect(),
            scaled(tol, self.mat.frobenius_norm()),
            "||Λ - Λ^dagger||_F",
        ))
    }

    fn check_cp(&self, tol: f64) -> Result<PropertyCheck> {
        spectral_cp_check(&self.mat, tol, "min eigenvalue of Λ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::{bell_state, swap_operator};
    use crate::matrix::C64;
    use crate::random::{random_density_matrix, seeded_rng};

    fn identity_choi(d: usize) -> ChoiMatrix {
        let phi = bell_state(d).unwrap();
        ChoiMatrix::col(CMatrix::outer(&phi, &phi), d, d).unwrap()
    }

    #[test]
    fn identity_channel() {
        let lam = identity_choi(2);
        let rho = random_density_matrix(2, &mut seeded_rng(70)).unwrap();
        assert!(apply_choi(&lam, &rho).unwrap().mat().max_abs_diff(rho.mat()) < 1e-15);
        assert!(lam.is_tp(1e-10) && lam.is_hp(1e-10) && lam.is_cp(1e-10));
    }

    #[test]
    fn identity_choi_matrix_matches_loop_oracle() {
        // Λ = I_4 acts as rho -> Tr(rho) I_2; the loop oracle sums
        // Λ_{mu m, nu n} rho_{mu nu} directly.
        let lam = ChoiMatrix::col(CMatrix::identity(4), 2, 2).unwrap();
        let rho = random_density_matrix(2, &mut seeded_rng(71)).unwrap();
        let out = apply_choi(&lam, &rho).unwrap();
        let mut oracle = CMatrix::zeros(2, 2);
        for m in 0..2 {
            for n in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for mu in 0..2 {
                    for nu in 0..2 {
                        acc += lam.mat()[(mu * 2 + m, nu * 2 + n)] * rho.mat()[(mu, nu)];
                    }
                }
                oracle[(m, n)] = acc;
            }
        }
        assert!(out.mat().max_abs_diff(&oracle) < 1e-15);
        assert!(out.mat().max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn transpose_map_choi_is_swap() {
        let lam = ChoiMatrix::col(swap_operator(2, 2), 2, 2).unwrap();
        let rho = random_density_matrix(2, &mut seeded_rng(72)).unwrap();
        assert_eq!(apply_choi(&lam, &rho).unwrap().mat(), &rho.mat().transpose());
        let cp = lam.check_cp(1e-10).unwrap();
        assert!(!cp.passed);
        assert!((cp.witness.unwrap() + 1.0).abs() < 1e-12);
        assert!(lam.is_tp(1e-10) && lam.is_hp(1e-10));
    }

    #[test]
    fn row_convention_round_trip() {
        let lam = identity_choi(3);
        let row = lam.to_convention(ChoiConvention::Row).unwrap();
        assert_eq!(row.to_col().unwrap(), lam);
        let rho = random_density_matrix(3, &mut seeded_rng(73)).unwrap();
        assert!(apply_choi(&row, &rho).unwrap().mat().max_abs_diff(rho.mat()) < 1e-15);
    }

    #[test]
    fn non_hermitian_fails_cp_and_hp() {
        let mut m = CMatrix::identity(4);
        m[(0, 1)] = C64::new(1.0, 0.0);
        let lam = ChoiMatrix::col(m, 2, 2).unwrap();
        assert!(!lam.is_hp(1e-10));
        assert!(!lam.is_cp(1e-10));
    }
}

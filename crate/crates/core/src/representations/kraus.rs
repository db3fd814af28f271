use super::{check_input_dim, scaled, Channel, DensityMatrix, Property, PropertyCheck};
use crate::error::{shape_err, Result};
use crate::matrix::CMatrix;

/// Operator-sum representation `E(rho) = sum_a K_a rho K_a^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausRep {
    ops: Vec<CMatrix>,
    dx: usize,
    dy: usize,
}

impl KrausRep {
    /// Non-empty list of `dy x dx` operators sharing one shape.
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = ops.first() else {
            return shape_err("kraus representation needs at least one operator");
        };
        let (dy, dx) = first.shape();
        if let Some(bad) = ops.iter().find(|k| k.shape() != (dy, dx)) {
            return shape_err(format!(
                "kraus operators disagree in shape: {dy}x{dx} vs {}x{}",
                bad.rows(),
                bad.cols()
            ));
        }
        Ok(KrausRep { ops, dx, dy })
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<CMatrix> {
        self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dx(&self) -> usize {
        self.dx
    }

    pub fn dy(&self) -> usize {
        self.dy
    }

    /// `sum_a K_a^dagger K_a`.
    pub fn completeness_sum(&self) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dx, self.dx);
        for k in &self.ops {
            acc.add_assign(&k.adjoint().mat_mul(k).expect("kraus shapes agree"));
        }
        acc
    }
}

/// `sum_a K_a rho K_a^dagger`.
pub fn apply_kraus(k: &KrausRep, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_input_dim(k.dx, rho)?;
    let mut out = CMatrix::zeros(k.dy, k.dy);
    for op in &k.ops {
        out.add_assign(&op.mat_mul(rho.mat())?.mat_mul(&op.adjoint())?);
    }
    Ok(DensityMatrix::unchecked(out))
}

impl Channel for KrausRep {
    fn input_dim(&self) -> usize {
        self.dx
    }

    fn output_dim(&self) -> usize {
        self.dy
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_kraus(self, rho)
    }

    fn check_tp(&self, tol: f64) -> Result<PropertyCheck> {
        let sum = self.completeness_sum();
        let residual = sum.distance(&CMatrix::identity(self.dx));
        Ok(PropertyCheck::residual(
            Property::TracePreserving,
            residual,
            scaled(tol, sum.frobenius_norm()),
            "||sum K^dagger K - I||_F",
        ))
    }

    fn check_hp(&self, _tol: f64) -> Result<PropertyCheck> {
        Ok(PropertyCheck::by_construction(
            Property::HermiticityPreserving,
            "operator-sum maps preserve hermiticity",
        ))
    }

    fn check_cp(&self, _tol: f64) -> Result<PropertyCheck> {
        Ok(PropertyCheck::by_construction(
            Property::CompletelyPositive,
            "operator-sum maps are completely positive",
        ))
    }
}

use super::{check_input_dim, scaled, Channel, DensityMatrix, Property, PropertyCheck};
use crate::bipartite::{partial_trace_y, BipartiteShape};
use crate::error::{domain_err, shape_err, Result};
use crate::matrix::C64;
use crate::matrix::{vec_norm, CMatrix};

/// Stinespring isometry `A: C^dx -> C^dy ⊗ C^denv` with
/// `E(rho) = Tr_Z[A rho A^dagger]`.
///
/// Row index of `A` is `y * denv + e`. When the map comes from a joint
/// system-environment unitary, the initial environment state `v0` and the
/// restricted unitary `U0 = A (I ⊗ <v0|)` are kept alongside.
#[derive(Clone, Debug, PartialEq)]
pub struct StinespringRep {
    a: CMatrix,
    dx: usize,
    dy: usize,
    denv: usize,
    env_state: Option<Vec<C64>>,
    restricted_unitary: Option<CMatrix>,
}

impl StinespringRep {
    pub fn new(a: CMatrix, dx: usize, dy: usize, denv: usize) -> Result<Self> {
        if dx == 0 || dy == 0 {
            return domain_err("dimensions must be positive");
        }
        if denv == 0 || denv > dx * dy {
            return domain_err(format!("environment dimension must lie in 1..={}, got {denv}", dx * dy));
        }
        if a.shape() != (dy * denv, dx) {
            return shape_err(format!(
                "stinespring matrix must be {}x{dx}, got {}x{}",
                dy * denv,
                a.rows(),
                a.cols()
            ));
        }
        Ok(StinespringRep {
            a,
            dx,
            dy,
            denv,
            env_state: None,
            restricted_unitary: None,
        })
    }

    /// Attaches the environment state `v0` and derives `U0 = A (I_dx ⊗ <v0|)`.
    pub fn with_env_state(mut self, v0: Vec<C64>) -> Result<Self> {
        check_unit(&v0, self.denv)?;
        let bra = CMatrix::column(&v0).adjoint();
        let u0 = self.a.mat_mul(&CMatrix::identity(self.dx).kron(&bra))?;
        self.env_state = Some(v0);
        self.restricted_unitary = Some(u0);
        Ok(self)
    }

    /// `A = U (I_d ⊗ |v0>)` for a joint unitary `U` on `C^d ⊗ C^denv`.
    pub fn from_joint_unitary(u: &CMatrix, v0: Vec<C64>, d: usize) -> Result<Self> {
        let denv = v0.len();
        if u.shape() != (d * denv, d * denv) {
            return shape_err(format!(
                "joint unitary must be {0}x{0} for d={d}, denv={denv}",
                d * denv
            ));
        }
        check_unit(&v0, denv)?;
        let a = u.mat_mul(&CMatrix::identity(d).kron(&CMatrix::column(&v0)))?;
        StinespringRep::new(a, d, d, denv)?.with_env_state(v0)
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn dx(&self) -> usize {
        self.dx
    }

    pub fn dy(&self) -> usize {
        self.dy
    }

    pub fn denv(&self) -> usize {
        self.denv
    }

    pub fn env_state(&self) -> Option<&[C64]> {
        self.env_state.as_deref()
    }

    pub fn restricted_unitary(&self) -> Option<&CMatrix> {
        self.restricted_unitary.as_ref()
    }

    pub(crate) fn output_env_shape(&self) -> BipartiteShape {
        BipartiteShape::new(self.dy, self.denv)
    }
}

fn check_unit(v0: &[C64], denv: usize) -> Result<()> {
    if v0.len() != denv {
        return shape_err(format!("environment state has dimension {}, expected {denv}", v0.len()));
    }
    let n = vec_norm(v0);
    if (n - 1.0).abs() > 1e-10 {
        return domain_err(format!("environment state must be a unit vector, norm is {n}"));
    }
    Ok(())
}

/// `Tr_Z[A rho A^dagger]`.
pub fn apply_sysenv(se: &StinespringRep, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_input_dim(se.dx, rho)?;
    let joint = se.a.mat_mul(rho.mat())?.mat_mul(&se.a.adjoint())?;
    Ok(DensityMatrix::unchecked(partial_trace_y(
        &joint,
        se.output_env_shape(),
    )?))
}

impl Channel for StinespringRep {
    fn input_dim(&self) -> usize {
        self.dx
    }

    fn output_dim(&self) -> usize {
        self.dy
    }

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_sysenv(self, rho)
    }

    fn check_tp(&self, tol: f64) -> Result<PropertyCheck> {
        let ata = self.a.adjoint().mat_mul(&self.a)?;
        Ok(PropertyCheck::residual(
            Property::TracePreserving,
            ata.distance(&CMatrix::identity(self.dx)),
            scaled(tol, ata.frobenius_norm()),
            "||A^dagger A - I||_F",
        ))
    }

    fn check_hp(&self, _tol: f64) -> Result<PropertyCheck> {
        Ok(PropertyCheck::by_construction(
            Property::HermiticityPreserving,
            "conjugation followed by partial trace preserves hermiticity",
        ))
    }

    fn check_cp(&self, _tol: f64) -> Result<PropertyCheck> {
        Ok(PropertyCheck::by_construction(
            Property::CompletelyPositive,
            "stinespring form is completely positive",
        ))
    }
}

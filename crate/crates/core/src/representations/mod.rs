//! Typed channel representations, state evolution in each of them, and the
//! structural trace-preserving (TP), hermiticity-preserving (HP) and
//! completely-positive (CP) predicates.
//!
//! Every channel maps operators on `C^dx` to operators on `C^dy`. Tolerances
//! are relative: a residual passes when it is at most `tol * max(1, ||M||_F)`
//! for the matrix `M` being tested.

mod chi;
mod choi;
mod kraus;
mod state;
mod stinespring;
mod superop;

pub use chi::{apply_chi, ChiMatrix};
pub use choi::{apply_choi, ChoiConvention, ChoiMatrix};
pub use kraus::{apply_kraus, KrausRep};
pub use state::DensityMatrix;
pub use stinespring::{apply_sysenv, StinespringRep};
pub use superop::{apply_superop, SuperOp};

use std::fmt;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    TracePreserving,
    HermiticityPreserving,
    CompletelyPositive,
}

impl Property {
    pub fn short(&self) -> &'static str {
        match self {
            Property::TracePreserving => "tp",
            Property::HermiticityPreserving => "hp",
            Property::CompletelyPositive => "cp",
        }
    }
}

/// Outcome of a structural check with the number it was decided on.
#[derive(Clone, Debug, PartialEq)]
pub struct PropertyCheck {
    pub property: Property,
    pub passed: bool,
    /// Residual norm (TP, HP) or minimum eigenvalue (CP). `None` when the
    /// property holds by construction.
    pub witness: Option<f64>,
    /// Bound the witness was compared against.
    pub threshold: f64,
    pub criterion: &'static str,
}

impl PropertyCheck {
    pub(crate) fn residual(property: Property, residual: f64, threshold: f64, criterion: &'static str) -> Self {
        PropertyCheck {
            property,
            passed: residual <= threshold,
            witness: Some(residual),
            threshold,
            criterion,
        }
    }

    pub(crate) fn min_eigenvalue(min_eig: f64, threshold: f64, criterion: &'static str) -> Self {
        PropertyCheck {
            property: Property::CompletelyPositive,
            passed: min_eig >= threshold,
            witness: Some(min_eig),
            threshold,
            criterion,
        }
    }

    pub(crate) fn by_construction(property: Property, criterion: &'static str) -> Self {
        PropertyCheck {
            property,
            passed: true,
            witness: None,
            threshold: 0.0,
            criterion,
        }
    }
}

impl fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        match (self.property, self.witness) {
            (_, None) => write!(f, "{}: {verdict} ({})", self.property.short(), self.criterion),
            (Property::CompletelyPositive, Some(w)) => write!(
                f,
                "{}: {verdict} (min eigenvalue {w:.6e}, threshold {:.3e}; {})",
                self.property.short(),
                self.threshold,
                self.criterion
            ),
            (_, Some(w)) => write!(
                f,
                "{}: {verdict} (residual {w:.6e}, threshold {:.3e}; {})",
                self.property.short(),
                self.threshold,
                self.criterion
            ),
        }
    }
}

pub(crate) fn scaled(tol: f64, norm: f64) -> f64 {
    tol * norm.max(1.0)
}

/// Common interface over the five representations.
pub trait Channel {
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize;
    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix>;
    fn check_tp(&self, tol: f64) -> Result<PropertyCheck>;
    fn check_hp(&self, tol: f64) -> Result<PropertyCheck>;
    fn check_cp(&self, tol: f64) -> Result<PropertyCheck>;

    fn is_tp(&self, tol: f64) -> bool {
        self.check_tp(tol).is_ok_and(|c| c.passed)
    }

    fn is_hp(&self, tol: f64) -> bool {
        self.check_hp(tol).is_ok_and(|c| c.passed)
    }

    fn is_cp(&self, tol: f64) -> bool {
        self.check_cp(tol).is_ok_and(|c| c.passed)
    }
}

pub(crate) fn check_input_dim(expected: usize, rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != expected {
        return crate::error::shape_err(format!(
            "channel acts on dimension {expected}, state has dimension {}",
            rho.dim()
        ));
    }
    Ok(())
}

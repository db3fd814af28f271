//! Representations of quantum channels and the conversions between them.
//!
//! A channel `E: L(C^dx) -> L(C^dy)` can be held as a Kraus set, a
//! Liouville superoperator, a Choi matrix, a chi (process) matrix over an
//! operator basis, or a Stinespring isometry. Every representation can
//! evolve states and report whether the map is trace preserving,
//! hermiticity preserving and completely positive.
//!
//! ```
//! use channelforge::matrix::CMatrix;
//! use channelforge::representations::{Channel, KrausRep};
//! use channelforge::transforms::kraus_to_choi;
//!
//! let dephasing = KrausRep::new(vec![CMatrix::unit(2, 2, 0, 0), CMatrix::unit(2, 2, 1, 1)]).unwrap();
//! let choi = kraus_to_choi(&dephasing).unwrap();
//! assert!(choi.is_cp(1e-10) && choi.is_tp(1e-10));
//! ```

pub mod bipartite;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod io;
pub mod matrix;
pub mod random;
pub mod representations;
pub mod transforms;
pub mod vectorize;

pub use error::{Error, Result};
pub use matrix::{CMatrix, C64};

//! JSON channel and state files.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. Floats are written in the shortest form that parses back to the
//! same `f64`, so a write-read cycle reproduces every entry bit for bit.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, C64};
use crate::representations::{ChiMatrix, ChoiConvention, ChoiMatrix, DensityMatrix, KrausRep, StinespringRep, SuperOp};
use crate::transforms::{AnyChannel, RepKind};
use crate::vectorize::{elementary_basis, pauli_basis, qubit_count, BasisKind, OperatorBasis, VecConvention};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<CMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("matrix rows have different lengths".into()));
    }
    let data = rows.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
    CMatrix::new(rows.len(), cols, data)
}

fn vector_to_json(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn vector_from_json(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

/// Provenance carried by every file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    /// Transforms applied to reach this representation.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path: Vec<String>,
}

impl Metadata {
    pub fn new() -> Self {
        Metadata {
            tool_version: TOOL_VERSION.to_string(),
            ..Default::default()
        }
    }
}

/// Operator basis by label. Built-in bases (`elementary`, `pauli`) may omit
/// their elements; custom bases must list them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisJson {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<JsonMatrix>>,
}

impl BasisJson {
    pub fn from_basis(b: &OperatorBasis) -> Self {
        let elements = match b.kind() {
            BasisKind::Custom => Some(b.elements().iter().map(matrix_to_json).collect()),
            _ => None,
        };
        BasisJson {
            label: b.label().to_string(),
            elements,
        }
    }

    pub fn to_basis(&self, dx: usize, dy: usize, tol: f64) -> Result<OperatorBasis> {
        let kind = BasisKind::parse(&self.label)?;
        if let Some(elements) = &self.elements {
            let mats = elements.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
            return OperatorBasis::new(kind, dx, dy, mats, tol);
        }
        builtin_basis(kind, dx, dy)
    }
}

/// Built-in basis for `dy x dx` operators.
pub fn builtin_basis(kind: BasisKind, dx: usize, dy: usize) -> Result<OperatorBasis> {
    match kind {
        BasisKind::Elementary => elementary_basis(dx, dy),
        BasisKind::Pauli => match qubit_count(dx) {
            Some(n) if dx == dy => pauli_basis(n),
            _ => Err(Error::Domain(format!(
                "pauli basis needs square operators on qubits, got {dy}x{dx}"
            ))),
        },
        BasisKind::Custom => Err(Error::Parse("custom basis must list its elements".into())),
    }
}

/// On-disk channel in any representation.
///
/// `data` holds the Kraus operators for `kraus` and a single matrix
/// otherwise (`S`, `Λ`, `chi` or the Stinespring isometry `A`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub representation: String,
    pub dx: usize,
    pub dy: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denv: Option<usize>,
    /// `col`, `row` or `basis` for superoperators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vec_convention: Option<String>,
    /// `col` or `row` for Choi matrices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choi_convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env_state: Option<Vec<[f64; 2]>>,
    pub data: Vec<JsonMatrix>,
    pub metadata: Metadata,
}

impl ChannelFile {
    pub fn from_channel(ch: &AnyChannel, metadata: Metadata) -> Self {
        let mut f = ChannelFile {
            representation: ch.kind().as_str().to_string(),
            dx: ch.as_channel().input_dim(),
            dy: ch.as_channel().output_dim(),
            denv: None,
            vec_convention: None,
            choi_convention: None,
            basis: None,
            env_state: None,
            data: Vec::new(),
            metadata,
        };
        match ch {
            AnyChannel::Kraus(k) => f.data = k.ops().iter().map(matrix_to_json).collect(),
            AnyChannel::Superop(s) => {
                let (label, basis) = match s.conv() {
                    VecConvention::Col => ("col", None),
                    VecConvention::Row => ("row", None),
                    VecConvention::Basis(b) => ("basis", Some(BasisJson::from_basis(b))),
                };
                f.vec_convention = Some(label.to_string());
                f.basis = basis;
                f.data = vec![matrix_to_json(s.mat())];
            }
            AnyChannel::Choi(lam) => {
                f.choi_convention = Some(lam.convention().as_str().to_string());
                f.data = vec![matrix_to_json(lam.mat())];
            }
            AnyChannel::Chi(chi) => {
                f.basis = Some(BasisJson::from_basis(chi.basis()));
                f.data = vec![matrix_to_json(chi.mat())];
            }
            AnyChannel::Stinespring(se) => {
                f.denv = Some(se.denv());
                f.env_state = se.env_state().map(vector_to_json);
                f.data = vec![matrix_to_json(se.a())];
            }
        }
        f
    }

    fn single_matrix(&self) -> Result<CMatrix> {
        match self.data.as_slice() {
            [m] => matrix_from_json(m),
            _ => Err(Error::Parse(format!(
                "{} file must hold exactly one matrix, found {}",
                self.representation,
                self.data.len()
            ))),
        }
    }

    fn basis(&self, tol: f64) -> Result<OperatorBasis> {
        match &self.basis {
            Some(b) => b.to_basis(self.dx, self.dy, tol),
            None => Err(Error::Parse(format!("{} file needs a basis", self.representation))),
        }
    }

    /// Rebuilds the channel, validating shapes, conventions and bases.
    pub fn to_channel(&self, tol: f64) -> Result<AnyChannel> {
        let (dx, dy) = (self.dx, self.dy);
        Ok(match RepKind::parse(&self.representation)? {
            RepKind::Kraus => {
                let ops = self.data.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
                let k = KrausRep::new(ops)?;
                if (k.dx(), k.dy()) != (dx, dy) {
                    return Err(Error::Shape(format!(
                        "kraus operators are {}x{}, header says dx={dx}, dy={dy}",
                        k.dy(),
                        k.dx()
                    )));
                }
                AnyChannel::Kraus(k)
            }
            RepKind::Superop => {
                let conv = match self.vec_convention.as_deref().unwrap_or("col") {
                    "col" => VecConvention::Col,
                    "row" => VecConvention::Row,
                    "basis" => VecConvention::Basis(self.basis(tol)?),
                    other => return Err(Error::Parse(format!("unknown vec convention '{other}'"))),
                };
                AnyChannel::Superop(SuperOp::new(self.single_matrix()?, conv, dx, dy)?)
            }
            RepKind::Choi => {
                let conv = match self.choi_convention.as_deref().unwrap_or("col") {
                    "col" => ChoiConvention::Col,
                    "row" => ChoiConvention::Row,
                    other => return Err(Error::Parse(format!("unknown choi convention '{other}'"))),
                };
                AnyChannel::Choi(ChoiMatrix::new(self.single_matrix()?, conv, dx, dy)?)
            }
            RepKind::Chi => AnyChannel::Chi(ChiMatrix::new(self.single_matrix()?, self.basis(tol)?)?),
            RepKind::Stinespring => {
                let a = self.single_matrix()?;
                let denv = match self.denv {
                    Some(d) => d,
                    None if dy > 0 && a.rows() % dy == 0 => a.rows() / dy,
                    None => return Err(Error::Shape("cannot infer environment dimension".into())),
                };
                let se = StinespringRep::new(a, dx, dy, denv)?;
                let se = match &self.env_state {
                    Some(v) => se.with_env_state(vector_from_json(v))?,
                    None => se,
                };
                AnyChannel::Stinespring(se)
            }
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("channel files always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&read_text(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json())
    }
}

/// On-disk density matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub data: JsonMatrix,
    /// Informational; recomputed on write.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<f64>,
    pub metadata: Metadata,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix, metadata: Metadata) -> Self {
        StateFile {
            dim: rho.dim(),
            data: matrix_to_json(rho.mat()),
            trace: Some(rho.trace()),
            metadata,
        }
    }

    /// Rebuilds the state; with `validate` it must be a density matrix
    /// within `tol`.
    pub fn to_state(&self, validate: bool, tol: f64) -> Result<DensityMatrix> {
        let m = matrix_from_json(&self.data)?;
        if m.shape() != (self.dim, self.dim) {
            return Err(Error::Shape(format!(
                "state data is {}x{}, header says dim={}",
                m.rows(),
                m.cols(),
                self.dim
            )));
        }
        if validate {
            DensityMatrix::new(m, tol)
        } else {
            Ok(DensityMatrix::unchecked(m))
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("state files always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&read_text(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json())
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

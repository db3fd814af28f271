//! Conversions between the channel representations.
//!
//! Superoperator and Choi matrix are related by a reshuffle of their four
//! indices. Kraus operators enter both through vectorization, the canonical
//! Kraus set comes from the spectral decomposition of the Choi matrix, and
//! the chi matrix is the Choi matrix expressed in another operator basis.
//! Inputs in non-default conventions are converted to the col conventions
//! first; [`convert`] records every such step in its returned path.

use crate::bipartite::{partial_trace_y, reshuffle_row_blocks, BlockDims};
use crate::eigen::eig_hermitian;
use crate::error::{domain_err, shape_err, Error, Result};
use crate::matrix::{inner, vec_max_abs_diff, CMatrix, C64, ZERO};
use crate::representations::{ChiMatrix, ChoiConvention, ChoiMatrix, KrausRep, StinespringRep, SuperOp};
use crate::vectorize::{
    basis_change_op, devec, elementary_basis, pauli_basis, qubit_count, vec, OperatorBasis, VecConvention, DEFAULT_TOL,
};

/// Default relative cut below which Choi eigenvalues are dropped.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// Choi matrix of a superoperator by reshuffling,
/// `Λ[(m, mu), (n, nu)] = S[(nu, mu), (n, m)]`.
pub fn superop_to_choi(s: &SuperOp) -> Result<ChoiMatrix> {
    let s = s.to_col()?;
    let dims = BlockDims::new((s.dy(), s.dy()), (s.dx(), s.dx()));
    ChoiMatrix::col(reshuffle_row_blocks(s.mat(), dims)?, s.dx(), s.dy())
}

/// Inverse of [`superop_to_choi`]; the reshuffle is an involution.
pub fn choi_to_superop(lam: &ChoiMatrix) -> Result<SuperOp> {
    let lam = lam.to_col()?;
    let dims = BlockDims::new((lam.dx(), lam.dy()), (lam.dx(), lam.dy()));
    SuperOp::col(reshuffle_row_blocks(lam.mat(), dims)?, lam.dx(), lam.dy())
}

/// `S = sum_a conj(K_a) ⊗ K_a` in the col convention.
pub fn kraus_to_superop(k: &KrausRep) -> Result<SuperOp> {
    let (dx, dy) = (k.dx(), k.dy());
    let mut s = CMatrix::zeros(dy * dy, dx * dx);
    for op in k.ops() {
        s.add_assign(&op.conjugate().kron(op));
    }
    SuperOp::col(s, dx, dy)
}

/// `Λ = sum_a |K_a>><<K_a|` with col vectorization.
pub fn kraus_to_choi(k: &KrausRep) -> Result<ChoiMatrix> {
    let n = k.dx() * k.dy();
    let mut lam = CMatrix::zeros(n, n);
    for op in k.ops() {
        let v = vec(op, &VecConvention::Col)?;
        lam.add_assign(&CMatrix::outer(&v, &v));
    }
    ChoiMatrix::col(lam, k.dx(), k.dy())
}

/// Superoperator of `Tr_Z[A rho A^dagger]`, summing `conj(K_e) ⊗ K_e` over
/// the computational environment basis.
pub fn sysenv_to_superop(se: &StinespringRep) -> Result<SuperOp> {
    kraus_to_superop(&sysenv_to_kraus(se, None)?)
}

/// `Λ = sum_ij |i><j| ⊗ Tr_Z[A |i><j| A^dagger]`.
pub fn sysenv_to_choi(se: &StinespringRep) -> Result<ChoiMatrix> {
    let (dx, dy) = (se.dx(), se.dy());
    let a = se.a();
    let cols: Vec<Vec<C64>> = (0..dx).map(|i| a.column_vec(i)).collect();
    let mut lam = CMatrix::zeros(dx * dy, dx * dy);
    for i in 0..dx {
        for j in 0..dx {
            let joint = CMatrix::outer(&cols[i], &cols[j]);
            let block = partial_trace_y(&joint, se.output_env_shape())?;
            for m in 0..dy {
                for n in 0..dy {
                    lam[(i * dy + m, j * dy + n)] = block[(m, n)];
                }
            }
        }
    }
    ChoiMatrix::col(lam, dx, dy)
}

/// Canonical Kraus set from the spectral decomposition of the Choi matrix.
///
/// Eigenvalues `l` with `l <= rank_tol * max(l)` are dropped and the rest
/// give `K_a = sqrt(l_a) devec(phi_a)`, ordered by descending eigenvalue.
/// Fails with [`Error::NotCp`] when an eigenvalue lies below
/// `-cp_tol * ||Λ||_F`.
pub fn choi_to_kraus(lam: &ChoiMatrix, rank_tol: f64, cp_tol: f64) -> Result<KrausRep> {
    let lam = lam.to_col()?;
    let norm = lam.mat().frobenius_norm();
    if lam.mat().hermiticity_defect() > cp_tol * norm.max(1.0) {
        return domain_err("choi matrix is not Hermitian, the map does not preserve hermiticity");
    }
    let eig = eig_hermitian(lam.mat(), f64::INFINITY)?;
    let min = eig.min_eigenvalue();
    if min < -cp_tol * norm {
        return Err(Error::NotCp { min_eigenvalue: min });
    }
    let (dx, dy) = (lam.dx(), lam.dy());
    let top = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let ops: Vec<CMatrix> = eig
        .eigenvalues
        .iter()
        .zip(&eig.eigenvectors)
        .take_while(|(&l, _)| top > 0.0 && l > rank_tol * top)
        .map(|(&l, phi)| devec(phi, &VecConvention::Col, dx, dy).map(|k| k.scale_real(l.sqrt())))
        .collect::<Result<_>>()?;
    if ops.is_empty() {
        // The zero map; keep a single zero operator so the set is non-empty.
        return KrausRep::new(vec![CMatrix::zeros(dy, dx)]);
    }
    KrausRep::new(ops)
}

/// `K_a = (I ⊗ <e_a|) A` for an orthonormal environment basis `{e_a}`
/// (computational basis when `None`).
pub fn sysenv_to_kraus(se: &StinespringRep, env_basis: Option<&[Vec<C64>]>) -> Result<KrausRep> {
    let (dx, dy, denv) = (se.dx(), se.dy(), se.denv());
    let a = se.a();
    let ops = match env_basis {
        None => (0..denv)
            .map(|e| CMatrix::from_fn(dy, dx, |y, x| a[(y * denv + e, x)]))
            .collect(),
        Some(basis) => {
            check_env_basis(basis, denv)?;
            basis
                .iter()
                .map(|v| {
                    CMatrix::from_fn(dy, dx, |y, x| {
                        (0..denv).map(|e| v[e].conj() * a[(y * denv + e, x)]).sum()
                    })
                })
                .collect()
        }
    };
    KrausRep::new(ops)
}

fn check_env_basis(basis: &[Vec<C64>], denv: usize) -> Result<()> {
    if basis.len() != denv || basis.iter().any(|v| v.len() != denv) {
        return shape_err(format!("environment basis must hold {denv} vectors of length {denv}"));
    }
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let expect = if i == j { 1.0 } else { 0.0 };
            if (inner(u, v) - C64::new(expect, 0.0)).norm() > DEFAULT_TOL {
                return domain_err("environment basis is not orthonormal");
            }
        }
    }
    Ok(())
}

/// `A = sum_a K_a ⊗ |a>` with environment dimension equal to the number of
/// operators. The environment state `v0` defaults to `|0>`, giving the
/// restricted unitary `U0 = sum_a K_a ⊗ |a><v0|`.
pub fn kraus_to_stinespring(k: &KrausRep, v0: Option<Vec<C64>>) -> Result<StinespringRep> {
    let (dx, dy, r) = (k.dx(), k.dy(), k.len());
    let ops = k.ops();
    let a = CMatrix::from_fn(dy * r, dx, |row, x| ops[row % r][(row / r, x)]);
    let v0 = v0.unwrap_or_else(|| {
        let mut v = vec![ZERO; r];
        v[0] = C64::new(1.0, 0.0);
        v
    });
    StinespringRep::new(a, dx, dy, r)?.with_env_state(v0)
}

fn check_basis_dims(basis: &OperatorBasis, dx: usize, dy: usize) -> Result<()> {
    if (basis.dx(), basis.dy()) != (dx, dy) {
        return shape_err(format!(
            "basis spans {}x{} operators, channel needs {dy}x{dx}",
            basis.dy(),
            basis.dx()
        ));
    }
    Ok(())
}

/// `chi = T Λ T^dagger` with `T = T_{col -> basis}`.
pub fn choi_to_chi(lam: &ChoiMatrix, basis: &OperatorBasis) -> Result<ChiMatrix> {
    let lam = lam.to_col()?;
    check_basis_dims(basis, lam.dx(), lam.dy())?;
    let t = basis_change_op(
        &VecConvention::Col,
        &VecConvention::Basis(basis.clone()),
        lam.dx(),
        lam.dy(),
    )?;
    let chi = t.mat_mul(lam.mat())?.mat_mul(&t.adjoint())?;
    ChiMatrix::new(chi, basis.clone())
}

/// `Λ = T^dagger chi T`, inverse of [`choi_to_chi`].
pub fn chi_to_choi(chi: &ChiMatrix) -> Result<ChoiMatrix> {
    ChoiMatrix::col(chi.choi_mat()?, chi.dx(), chi.dy())
}

/// `chi' = T chi T^dagger` with `T = T_{old -> new}`.
pub fn chi_change_basis(chi: &ChiMatrix, new_basis: &OperatorBasis) -> Result<ChiMatrix> {
    check_basis_dims(new_basis, chi.dx(), chi.dy())?;
    if chi.basis() == new_basis {
        return Ok(chi.clone());
    }
    let t = basis_change_op(
        &VecConvention::Basis(chi.basis().clone()),
        &VecConvention::Basis(new_basis.clone()),
        chi.dx(),
        chi.dy(),
    )?;
    let mat = t.mat_mul(chi.mat())?.mat_mul(&t.adjoint())?;
    ChiMatrix::new(mat, new_basis.clone())
}

/// `S' = T S T^dagger` with `T = T_{old -> new}` on each side.
pub fn superop_change_basis(s: &SuperOp, new_conv: &VecConvention) -> Result<SuperOp> {
    s.to_convention(new_conv)
}

/// Pauli basis for multi-qubit endomorphisms, elementary col basis otherwise.
pub fn default_chi_basis(dx: usize, dy: usize) -> Result<OperatorBasis> {
    match qubit_count(dx) {
        Some(n) if dx == dy && n <= 6 => pauli_basis(n),
        _ => elementary_basis(dx, dy),
    }
}

/// Which representation a channel is held in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    Kraus,
    Superop,
    Choi,
    Chi,
    Stinespring,
}

impl RepKind {
    pub const ALL: [RepKind; 5] = [
        RepKind::Kraus,
        RepKind::Superop,
        RepKind::Choi,
        RepKind::Chi,
        RepKind::Stinespring,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RepKind::Kraus => "kraus",
            RepKind::Superop => "superop",
            RepKind::Choi => "choi",
            RepKind::Chi => "chi",
            RepKind::Stinespring => "stinespring",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kraus" => Ok(RepKind::Kraus),
            "superop" | "superoperator" | "liouville" => Ok(RepKind::Superop),
            "choi" => Ok(RepKind::Choi),
            "chi" | "process" => Ok(RepKind::Chi),
            "stinespring" | "sysenv" => Ok(RepKind::Stinespring),
            other => Err(Error::Convention(format!("unknown representation '{other}'"))),
        }
    }
}

/// A channel in any of the five representations.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyChannel {
    Kraus(KrausRep),
    Superop(SuperOp),
    Choi(ChoiMatrix),
    Chi(ChiMatrix),
    Stinespring(StinespringRep),
}

impl AnyChannel {
    pub fn kind(&self) -> RepKind {
        match self {
            AnyChannel::Kraus(_) => RepKind::Kraus,
            AnyChannel::Superop(_) => RepKind::Superop,
            AnyChannel::Choi(_) => RepKind::Choi,
            AnyChannel::Chi(_) => RepKind::Chi,
            AnyChannel::Stinespring(_) => RepKind::Stinespring,
        }
    }

    pub fn as_channel(&self) -> &dyn crate::representations::Channel {
        match self {
            AnyChannel::Kraus(c) => c,
            AnyChannel::Superop(c) => c,
            AnyChannel::Choi(c) => c,
            AnyChannel::Chi(c) => c,
            AnyChannel::Stinespring(c) => c,
        }
    }
}

/// Target conventions and tolerances for [`convert`].
#[derive(Clone, Debug)]
pub struct ConvertOptions {
    pub vec_convention: VecConvention,
    pub choi_convention: ChoiConvention,
    /// Basis for a chi target; [`default_chi_basis`] when `None`.
    pub chi_basis: Option<OperatorBasis>,
    /// Environment state for a Stinespring target; `|0>` when `None`.
    pub env_state: Option<Vec<C64>>,
    pub rank_tol: f64,
    pub tol: f64,
}

impl Default for ConvertOptions {
    fn default() -> Self {
        ConvertOptions {
            vec_convention: VecConvention::Col,
            choi_convention: ChoiConvention::Col,
            chi_basis: None,
            env_state: None,
            rank_tol: DEFAULT_RANK_TOL,
            tol: DEFAULT_TOL,
        }
    }
}

/// Result of [`convert`]: the channel and the transforms applied, in order.
#[derive(Clone, Debug)]
pub struct Conversion {
    pub channel: AnyChannel,
    pub path: Vec<&'static str>,
}

/// Converts `ch` into `target`, routing through the Choi matrix whenever no
/// direct transform exists.
pub fn convert(ch: &AnyChannel, target: RepKind, opts: &ConvertOptions) -> Result<Conversion> {
    let mut path = Vec::new();
    let channel = match target {
        RepKind::Kraus => AnyChannel::Kraus(to_kraus(ch, opts, &mut path)?),
        RepKind::Superop => {
            let s = to_superop(ch, opts, &mut path)?;
            let s = if &opts.vec_convention == s.conv() {
                s
            } else {
                path.push("superop_change_basis");
                superop_change_basis(&s, &opts.vec_convention)?
            };
            AnyChannel::Superop(s)
        }
        RepKind::Choi => {
            let lam = to_choi(ch, &mut path)?;
            let lam = if lam.convention() == opts.choi_convention {
                lam
            } else {
                path.push("bipartite_swap");
                lam.to_convention(opts.choi_convention)?
            };
            AnyChannel::Choi(lam)
        }
        RepKind::Chi => {
            let basis = match &opts.chi_basis {
                Some(b) => b.clone(),
                None => default_chi_basis(dims(ch).0, dims(ch).1)?,
            };
            let chi = match ch {
                AnyChannel::Chi(c) if c.basis() == &basis => c.clone(),
                AnyChannel::Chi(c) => {
                    path.push("chi_change_basis");
                    chi_change_basis(c, &basis)?
                }
                _ => {
                    let lam = to_choi(ch, &mut path)?;
                    path.push("choi_to_chi");
                    choi_to_chi(&lam, &basis)?
                }
            };
            AnyChannel::Chi(chi)
        }
        RepKind::Stinespring => {
            let se = match ch {
                AnyChannel::Stinespring(se) if opts.env_state.is_none() => se.clone(),
                _ => {
                    let k = to_kraus(ch, opts, &mut path)?;
                    path.push("kraus_to_stinespring");
                    kraus_to_stinespring(&k, opts.env_state.clone())?
                }
            };
            AnyChannel::Stinespring(se)
        }
    };
    Ok(Conversion { channel, path })
}

fn dims(ch: &AnyChannel) -> (usize, usize) {
    let c = ch.as_channel();
    (c.input_dim(), c.output_dim())
}

fn to_choi(ch: &AnyChannel, path: &mut Vec<&'static str>) -> Result<ChoiMatrix> {
    Ok(match ch {
        AnyChannel::Kraus(k) => {
            path.push("kraus_to_choi");
            kraus_to_choi(k)?
        }
        AnyChannel::Superop(s) => {
            if !s.conv().is_col() {
                path.push("superop_change_basis");
            }
            path.push("superop_to_choi");
            superop_to_choi(s)?
        }
        AnyChannel::Choi(lam) => {
            if lam.convention() != ChoiConvention::Col {
                path.push("bipartite_swap");
            }
            lam.to_col()?
        }
        AnyChannel::Chi(c) => {
            path.push("chi_to_choi");
            chi_to_choi(c)?
        }
        AnyChannel::Stinespring(se) => {
            path.push("sysenv_to_choi");
            sysenv_to_choi(se)?
        }
    })
}

fn to_superop(ch: &AnyChannel, _opts: &ConvertOptions, path: &mut Vec<&'static str>) -> Result<SuperOp> {
    Ok(match ch {
        AnyChannel::Kraus(k) => {
            path.push("kraus_to_superop");
            kraus_to_superop(k)?
        }
        AnyChannel::Superop(s) => s.clone(),
        AnyChannel::Stinespring(se) => {
            path.push("sysenv_to_superop");
            sysenv_to_superop(se)?
        }
        AnyChannel::Choi(_) | AnyChannel::Chi(_) => {
            let lam = to_choi(ch, path)?;
            path.push("choi_to_superop");
            choi_to_superop(&lam)?
        }
    })
}

fn to_kraus(ch: &AnyChannel, opts: &ConvertOptions, path: &mut Vec<&'static str>) -> Result<KrausRep> {
    Ok(match ch {
        AnyChannel::Kraus(k) => k.clone(),
        AnyChannel::Stinespring(se) => {
            path.push("sysenv_to_kraus");
            sysenv_to_kraus(se, None)?
        }
        _ => {
            let lam = to_choi(ch, path)?;
            path.push("choi_to_kraus");
            choi_to_kraus(&lam, opts.rank_tol, opts.tol)?
        }
    })
}

/// Largest entrywise difference between two Kraus lists of equal length.
pub fn kraus_list_diff(a: &KrausRep, b: &KrausRep) -> Option<f64> {
    (a.len() == b.len() && a.dx() == b.dx() && a.dy() == b.dy()).then(|| {
        a.ops()
            .iter()
            .zip(b.ops())
            .map(|(x, y)| vec_max_abs_diff(x.as_slice(), y.as_slice()))
            .fold(0.0, f64::max)
    })
}

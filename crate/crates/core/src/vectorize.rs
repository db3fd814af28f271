//! Vectorization conventions and changes of vectorization basis.
//!
//! An operator `A: C^dx -> C^dy` is a `dy x dx` matrix. Its col-vec stacks
//! columns (`A_ij` lands at index `j * dy + i`), its row-vec stacks rows
//! (index `i * dx + j`), and its vec in an orthonormal operator basis
//! `{sigma_a}` collects the coefficients `Tr[sigma_a^dagger A]`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{domain_err, shape_err, Error, Result};
use crate::matrix::{CMatrix, C64, ONE, ZERO};

/// Default numerical tolerance, relative to the Frobenius norm of the input.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Elementary,
    Pauli,
    Custom,
}

impl BasisKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BasisKind::Elementary => "elementary",
            BasisKind::Pauli => "pauli",
            BasisKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "elementary" => Ok(BasisKind::Elementary),
            "pauli" => Ok(BasisKind::Pauli),
            "custom" => Ok(BasisKind::Custom),
            other => domain_err(format!("unknown basis label '{other}'")),
        }
    }
}

/// Ordered Hilbert-Schmidt orthonormal basis of `L(C^dx, C^dy)`.
///
/// The order of `elements` is part of the basis identity.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorBasis {
    kind: BasisKind,
    dx: usize,
    dy: usize,
    elements: Vec<CMatrix>,
}

impl OperatorBasis {
    /// Validates a user supplied basis: `dx * dy` elements of shape
    /// `dy x dx`, orthonormal within `tol`.
    pub fn new(kind: BasisKind, dx: usize, dy: usize, elements: Vec<CMatrix>, tol: f64) -> Result<Self> {
        if dx == 0 || dy == 0 {
            return domain_err("basis dimensions must be positive");
        }
        if elements.len() != dx * dy {
            return shape_err(format!(
                "basis for {dy}x{dx} operators needs {} elements, got {}",
                dx * dy,
                elements.len()
            ));
        }
        if let Some(bad) = elements.iter().find(|e| e.shape() != (dy, dx)) {
            return shape_err(format!(
                "basis element has shape {}x{}, expected {dy}x{dx}",
                bad.rows(),
                bad.cols()
            ));
        }
        let basis = OperatorBasis { kind, dx, dy, elements };
        let defect = basis.orthonormality_defect();
        if defect > tol {
            return Err(Error::Domain(format!(
                "basis is not orthonormal (max |<s_a, s_b> - delta_ab| = {defect:.3e})"
            )));
        }
        Ok(basis)
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn label(&self) -> &'static str {
        self.kind.as_str()
    }

    pub fn dx(&self) -> usize {
        self.dx
    }

    pub fn dy(&self) -> usize {
        self.dy
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Largest deviation of the Gram matrix `Tr[s_a^dagger s_b]` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, sa) in self.elements.iter().enumerate() {
            for (b, sb) in self.elements.iter().enumerate() {
                let g = hs_inner(sa, sb);
                let expect = if a == b { ONE } else { ZERO };
                worst = worst.max((g - expect).norm());
            }
        }
        worst
    }
}

/// Hilbert-Schmidt inner product `Tr[a^dagger b]` of equally shaped matrices.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x.conj() * y).sum()
}

/// Elementary basis `E_a = |i><j|` with the col-vec ordering `a = i + dy * j`.
pub fn elementary_basis(dx: usize, dy: usize) -> Result<OperatorBasis> {
    if dx == 0 || dy == 0 {
        return domain_err("basis dimensions must be positive");
    }
    let elements = (0..dx * dy).map(|a| CMatrix::unit(dy, dx, a % dy, a / dy)).collect();
    Ok(OperatorBasis {
        kind: BasisKind::Elementary,
        dx,
        dy,
        elements,
    })
}

/// Normalized `n`-qubit Pauli basis: Kronecker products of `{I, X, Y, Z} / sqrt(2)`,
/// lexicographic with the first factor most significant.
pub fn pauli_basis(n_qubits: usize) -> Result<OperatorBasis> {
    if n_qubits == 0 {
        return domain_err("pauli basis needs at least one qubit");
    }
    if n_qubits > 6 {
        return domain_err(format!("pauli basis on {n_qubits} qubits is too large"));
    }
    let single = single_qubit_paulis();
    let mut elements = vec![CMatrix::identity(1)];
    for _ in 0..n_qubits {
        elements = elements
            .iter()
            .flat_map(|e| single.iter().map(move |p| e.kron(p)))
            .collect();
    }
    let d = 1 << n_qubits;
    Ok(OperatorBasis {
        kind: BasisKind::Pauli,
        dx: d,
        dy: d,
        elements,
    })
}

fn single_qubit_paulis() -> [CMatrix; 4] {
    let r = FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| C64::new(re * r, im * r);
    let m = |a: [C64; 4]| CMatrix::new(2, 2, a.to_vec()).expect("2x2");
    [
        m([c(1.0, 0.0), ZERO, ZERO, c(1.0, 0.0)]),
        m([ZERO, c(1.0, 0.0), c(1.0, 0.0), ZERO]),
        m([ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]),
        m([c(1.0, 0.0), ZERO, ZERO, c(-1.0, 0.0)]),
    ]
}

/// Number of qubits `n` with `2^n == d`, if any.
pub fn qubit_count(d: usize) -> Option<usize> {
    (d.is_power_of_two() && d > 1).then(|| d.trailing_zeros() as usize)
}

/// Meaning of a vectorized operator.
#[derive(Clone, Debug, PartialEq)]
pub enum VecConvention {
    Col,
    Row,
    Basis(OperatorBasis),
}

impl VecConvention {
    pub fn name(&self) -> String {
        match self {
            VecConvention::Col => "col".into(),
            VecConvention::Row => "row".into(),
            VecConvention::Basis(b) => b.label().into(),
        }
    }

    pub fn is_col(&self) -> bool {
        matches!(self, VecConvention::Col)
    }

    fn check_basis(&self, dx: usize, dy: usize) -> Result<()> {
        if let VecConvention::Basis(b) = self {
            if (b.dx, b.dy) != (dx, dy) {
                return shape_err(format!("basis spans {}x{} operators, expected {dy}x{dx}", b.dy, b.dx));
            }
        }
        Ok(())
    }

    /// The operators `sigma_a` whose coefficients this convention extracts.
    pub fn elements(&self, dx: usize, dy: usize) -> Result<Vec<CMatrix>> {
        self.check_basis(dx, dy)?;
        Ok(match self {
            VecConvention::Col => elementary_basis(dx, dy)?.elements,
            VecConvention::Row => (0..dx * dy).map(|a| CMatrix::unit(dy, dx, a / dx, a % dx)).collect(),
            VecConvention::Basis(b) => b.elements.clone(),
        })
    }
}

/// Vectorizes `a` (a `dy x dx` operator) in the given convention.
pub fn vec(a: &CMatrix, conv: &VecConvention) -> Result<Vec<C64>> {
    let (dy, dx) = a.shape();
    match conv {
        VecConvention::Col => {
            let mut out = vec![ZERO; dx * dy];
            for i in 0..dy {
                for j in 0..dx {
                    out[j * dy + i] = a[(i, j)];
                }
            }
            Ok(out)
        }
        VecConvention::Row => Ok(a.as_slice().to_vec()),
        VecConvention::Basis(b) => {
            conv.check_basis(dx, dy)?;
            Ok(b.elements.iter().map(|s| hs_inner(s, a)).collect())
        }
    }
}

/// Inverse of [`vec`]: rebuilds the `dy x dx` operator.
pub fn devec(v: &[C64], conv: &VecConvention, dx: usize, dy: usize) -> Result<CMatrix> {
    if dx == 0 || dy == 0 {
        return domain_err("dimensions must be positive");
    }
    if v.len() != dx * dy {
        return shape_err(format!("vector of length {} cannot be a {dy}x{dx} operator", v.len()));
    }
    match conv {
        VecConvention::Col => Ok(CMatrix::from_fn(dy, dx, |i, j| v[j * dy + i])),
        VecConvention::Row => CMatrix::new(dy, dx, v.to_vec()),
        VecConvention::Basis(b) => {
            conv.check_basis(dx, dy)?;
            let mut out = CMatrix::zeros(dy, dx);
            for (s, &c) in b.elements.iter().zip(v) {
                out.add_assign(&s.scale(c));
            }
            Ok(out)
        }
    }
}

/// `T_{from -> to} = sum_a |a><<omega_a|_from`, where `omega_a` are the
/// elements of `to`. Satisfies `T vec(A, from) = vec(A, to)` and is unitary.
pub fn basis_change_op(from: &VecConvention, to: &VecConvention, dx: usize, dy: usize) -> Result<CMatrix> {
    from.check_basis(dx, dy)?;
    let targets = to.elements(dx, dy)?;
    let n = dx * dy;
    let mut t = CMatrix::zeros(n, n);
    for (a, omega) in targets.iter().enumerate() {
        let w = vec(omega, from)?;
        for (b, z) in w.iter().enumerate() {
            t[(a, b)] = z.conj();
        }
    }
    Ok(t)
}

/// Both sides of `vec(ABC) = (C^T ⊗ A) vec(B)` in the col convention.
#[derive(Clone, Debug)]
pub struct RothSides {
    pub direct: Vec<C64>,
    pub kron_form: Vec<C64>,
}

impl RothSides {
    pub fn max_abs_diff(&self) -> f64 {
        crate::matrix::vec_max_abs_diff(&self.direct, &self.kron_form)
    }
}

/// Evaluates the col-vec of `A B C` directly and through `(C^T ⊗ A) vec(B)`.
pub fn roth_vec(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> Result<RothSides> {
    let abc = a.mat_mul(b)?.mat_mul(c)?;
    let direct = vec(&abc, &VecConvention::Col)?;
    let kron_form = c.transpose().kron(a).mat_vec(&vec(b, &VecConvention::Col)?)?;
    Ok(RothSides { direct, kron_form })
}

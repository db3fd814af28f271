//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use crate::error::{shape_err, Error, Result};
use crate::matrix::{CMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 64;

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
///
/// Each eigenvector has its largest-magnitude component real and positive.
/// Within a degenerate cluster the basis is arbitrary; only the spanned
/// subspace is meaningful.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<C64>>,
}

impl EigenDecomposition {
    /// `sum_k lambda_k v_k v_k^dagger`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut out = CMatrix::zeros(n, n);
        for (&l, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            out.add_assign(&CMatrix::outer(v, v).scale_real(l));
        }
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition of a Hermitian `h`.
///
/// `h` must satisfy `||h - h^dagger||_F <= tol * ||h||_F`; the Hermitian part
/// is what gets diagonalized.
pub fn eig_hermitian(h: &CMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return shape_err(format!(
            "eigendecomposition of non-square {}x{} matrix",
            h.rows(),
            h.cols()
        ));
    }
    let scale = h.frobenius_norm();
    let defect = h.hermiticity_defect();
    if defect > tol * scale {
        return Err(Error::Domain(format!(
            "matrix is not Hermitian (||H - H^dagger||_F = {defect:.3e})"
        )));
    }

    let n = h.rows();
    let mut a = h.add(&h.adjoint())?.scale_real(0.5);
    let mut v = CMatrix::identity(n);

    let mut converged = scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged || off_diagonal_norm(&a) <= 1e-14 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q, scale);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > 1e-14 * scale {
        return Err(Error::Numeric(format!(
            "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| {
            let mut col = v.column_vec(k);
            fix_phase(&mut col);
            col
        })
        .collect();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Zeroes `a[p][q]` with the unitary `W = diag(1, e^{-i phi}) R(theta)` on the
/// `(p, q)` plane, accumulating `W` into `v`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, scale: f64) {
    let b = a[(p, q)];
    let abs_b = b.norm();
    if abs_b <= 1e-18 * scale {
        return;
    }
    let phase = b / abs_b;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * abs_b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e = phase.conj();

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * (e * s);
        a[(k, q)] = akp * s + akq * (e * c);
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * (phase * s);
        a[(q, k)] = apk * s + aqk * (phase * c);
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * (e * s);
        v[(k, q)] = vkp * s + vkq * (e * c);
    }
}

/// Makes the largest-magnitude component real and positive. Ties go to the
/// lowest index.
fn fix_phase(vec: &mut [C64]) {
    let max = vec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = vec
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .expect("non-empty");
    let z = vec[pivot];
    let rot = z.conj() / z.norm();
    vec.iter_mut().for_each(|x| *x *= rot);
    vec[pivot].im = 0.0;
}

//! Index manipulations on operators over a tensor product `X ⊗ Y`.
//!
//! A bipartite matrix has components `M[(m, mu), (n, nu)]` where the row
//! index is `m * dy + mu` and the column index is `n * dy + nu`. The
//! reshuffles and swaps below are permutations of these four indices. They
//! are also provided over [`BlockDims`] so that rectangular operators such as
//! superoperators `dy^2 x dx^2` can be reshuffled without forcing them into a
//! square shape.

use crate::error::{domain_err, shape_err, Result};
use crate::matrix::{CMatrix, C64, ONE, ZERO};

/// Dimensions of the two factors of `X ⊗ Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipartiteShape {
    pub dx: usize,
    pub dy: usize,
}

impl BipartiteShape {
    pub fn new(dx: usize, dy: usize) -> Self {
        BipartiteShape { dx, dy }
    }

    pub fn dim(&self) -> usize {
        self.dx * self.dy
    }

    pub fn blocks(&self) -> BlockDims {
        BlockDims {
            row: (self.dx, self.dy),
            col: (self.dx, self.dy),
        }
    }

    fn check(&self, m: &CMatrix) -> Result<()> {
        let d = self.dim();
        if m.shape() != (d, d) {
            return shape_err(format!(
                "expected {d}x{d} matrix for dx={}, dy={}, got {}x{}",
                self.dx,
                self.dy,
                m.rows(),
                m.cols()
            ));
        }
        Ok(())
    }
}

/// Factor dimensions of the row space `(outer, inner)` and column space
/// `(outer, inner)` of a four-index operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockDims {
    pub row: (usize, usize),
    pub col: (usize, usize),
}

impl BlockDims {
    pub fn new(row: (usize, usize), col: (usize, usize)) -> Self {
        BlockDims { row, col }
    }

    pub fn rows(&self) -> usize {
        self.row.0 * self.row.1
    }

    pub fn cols(&self) -> usize {
        self.col.0 * self.col.1
    }

    fn check(&self, m: &CMatrix) -> Result<()> {
        if m.shape() != (self.rows(), self.cols()) {
            return shape_err(format!(
                "expected {}x{} matrix for blocks {:?}, got {}x{}",
                self.rows(),
                self.cols(),
                self,
                m.rows(),
                m.cols()
            ));
        }
        Ok(())
    }
}

/// Applies `out[f(a, b, c, d)] = m[(a, b), (c, d)]` where `f` returns the
/// output's four indices.
fn permute(
    m: &CMatrix,
    dims: BlockDims,
    out_dims: BlockDims,
    f: impl Fn(usize, usize, usize, usize) -> (usize, usize, usize, usize),
) -> CMatrix {
    let mut out = CMatrix::zeros(out_dims.rows(), out_dims.cols());
    let (p, q) = dims.row;
    let (r, s) = dims.col;
    for a in 0..p {
        for b in 0..q {
            for c in 0..r {
                for d in 0..s {
                    let (w, x, y, z) = f(a, b, c, d);
                    out[(w * out_dims.row.1 + x, y * out_dims.col.1 + z)] = m[(a * q + b, c * s + d)];
                }
            }
        }
    }
    out
}

/// `Tr_X`: `M[(m, mu), (n, nu)] -> sum_m M[(m, mu), (m, nu)]`, a `dy x dy` result.
pub fn partial_trace_x(m: &CMatrix, shape: BipartiteShape) -> Result<CMatrix> {
    shape.check(m)?;
    let BipartiteShape { dx, dy } = shape;
    Ok(CMatrix::from_fn(dy, dy, |mu, nu| {
        (0..dx).map(|k| m[(k * dy + mu, k * dy + nu)]).sum()
    }))
}

/// `Tr_Y`: `M[(m, mu), (n, nu)] -> sum_mu M[(m, mu), (n, mu)]`, a `dx x dx` result.
pub fn partial_trace_y(m: &CMatrix, shape: BipartiteShape) -> Result<CMatrix> {
    shape.check(m)?;
    let BipartiteShape { dx, dy } = shape;
    Ok(CMatrix::from_fn(dx, dx, |a, b| {
        (0..dy).map(|k| m[(a * dy + k, b * dy + k)]).sum()
    }))
}

/// Bipartite swap `M[(m, mu), (n, nu)] -> M'[(mu, m), (nu, n)]`; the result
/// lives on `Y ⊗ X`.
pub fn bipartite_swap(m: &CMatrix, shape: BipartiteShape) -> Result<CMatrix> {
    shape.check(m)?;
    bipartite_swap_blocks(m, shape.blocks())
}

/// Bipartite swap for a general four-index operator.
pub fn bipartite_swap_blocks(m: &CMatrix, dims: BlockDims) -> Result<CMatrix> {
    dims.check(m)?;
    let out = BlockDims::new((dims.row.1, dims.row.0), (dims.col.1, dims.col.0));
    Ok(permute(m, dims, out, |a, b, c, d| (b, a, d, c)))
}

/// Col-reshuffle `M[(m, mu), (n, nu)] -> M'[(m, n), (mu, nu)]`, giving a
/// `dx^2 x dy^2` matrix.
pub fn reshuffle_col(m: &CMatrix, shape: BipartiteShape) -> Result<CMatrix> {
    shape.check(m)?;
    reshuffle_col_blocks(m, shape.blocks())
}

/// Col-reshuffle of a general four-index operator: exchanges the inner row
/// index with the outer column index.
pub fn reshuffle_col_blocks(m: &CMatrix, dims: BlockDims) -> Result<CMatrix> {
    dims.check(m)?;
    let out = BlockDims::new((dims.row.0, dims.col.0), (dims.row.1, dims.col.1));
    Ok(permute(m, dims, out, |a, b, c, d| (a, c, b, d)))
}

/// Row-reshuffle `M[(m, mu), (n, nu)] -> M'[(nu, mu), (n, m)]`, giving a
/// `dy^2 x dx^2` matrix.
pub fn reshuffle_row(m: &CMatrix, shape: BipartiteShape) -> Result<CMatrix> {
    shape.check(m)?;
    reshuffle_row_blocks(m, shape.blocks())
}

/// Row-reshuffle of a general four-index operator: exchanges the outer row
/// index with the inner column index.
pub fn reshuffle_row_blocks(m: &CMatrix, dims: BlockDims) -> Result<CMatrix> {
    dims.check(m)?;
    let out = BlockDims::new((dims.col.1, dims.row.1), (dims.col.0, dims.row.0));
    Ok(permute(m, dims, out, |a, b, c, d| (d, b, c, a)))
}

/// `SWAP: X ⊗ Y -> Y ⊗ X` as the basis sum `sum_ij |y_j><x_i| ⊗ |x_i><y_j|`.
pub fn swap_operator(dx: usize, dy: usize) -> CMatrix {
    let mut out = CMatrix::zeros(dx * dy, dx * dy);
    for i in 0..dx {
        for j in 0..dy {
            let left = CMatrix::unit(dy, dx, j, i);
            let right = CMatrix::unit(dx, dy, i, j);
            out.add_assign(&left.kron(&right));
        }
    }
    out
}

/// Unnormalized Bell vector `sum_i |i> ⊗ |i>` of length `d^2`.
pub fn bell_state(d: usize) -> Result<Vec<C64>> {
    if d == 0 {
        return domain_err("bell state dimension must be positive");
    }
    let mut v = vec![ZERO; d * d];
    for i in 0..d {
        v[i * d + i] = ONE;
    }
    Ok(v)
}

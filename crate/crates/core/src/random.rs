//! Seeded generators for unitaries, states and CPTP channels.
//!
//! All sampling goes through [`ChannelRng`] so a `(generator name, seed)`
//! pair fully determines the output.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{domain_err, Error, Result};
use crate::matrix::{inner, vec_norm, CMatrix, C64};
use crate::representations::{DensityMatrix, StinespringRep};

pub type ChannelRng = ChaCha20Rng;

/// Name recorded in file metadata next to the seed.
pub const RNG_NAME: &str = "chacha20+standard-normal";

pub fn seeded_rng(seed: u64) -> ChannelRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_gaussian(rng: &mut ChannelRng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChannelRng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn gaussian_vector(len: usize, rng: &mut ChannelRng) -> Vec<C64> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}

/// Random Hermitian matrix `(G + G^dagger) / 2`.
pub fn random_hermitian(n: usize, rng: &mut ChannelRng) -> CMatrix {
    let g = gaussian_matrix(n, n, rng);
    g.add(&g.adjoint()).expect("square").scale_real(0.5)
}

/// Orthonormalizes the columns of `m` with modified Gram-Schmidt, run twice
/// per column so the result is orthonormal to working precision.
pub fn orthonormalize_columns(m: &CMatrix) -> Result<CMatrix> {
    let (rows, cols) = m.shape();
    if cols > rows {
        return domain_err(format!("cannot orthonormalize {cols} columns in dimension {rows}"));
    }
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = m.column_vec(j);
        for _ in 0..2 {
            for q in &basis {
                let c = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let n = vec_norm(&v);
        if n < 1e-12 {
            return Err(Error::Numeric(format!("column {j} is linearly dependent")));
        }
        v.iter_mut().for_each(|z| *z /= n);
        basis.push(v);
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| basis[j][i]))
}

pub fn random_isometry(rows: usize, cols: usize, rng: &mut ChannelRng) -> Result<CMatrix> {
    orthonormalize_columns(&gaussian_matrix(rows, cols, rng))
}

pub fn random_unitary(d: usize, rng: &mut ChannelRng) -> Result<CMatrix> {
    if d == 0 {
        return domain_err("dimension must be positive");
    }
    random_isometry(d, d, rng)
}

/// Random state `G G^dagger / Tr(G G^dagger)` for a square Gaussian `G`.
pub fn random_density_matrix(d: usize, rng: &mut ChannelRng) -> Result<DensityMatrix> {
    if d == 0 {
        return domain_err("dimension must be positive");
    }
    let g = gaussian_matrix(d, d, rng);
    let gg = g.mat_mul(&g.adjoint())?;
    let tr = gg.trace()?.re;
    Ok(DensityMatrix::unchecked(gg.scale_real(1.0 / tr)))
}

/// Random CPTP map `L(C^dx) -> L(C^dy)` with Kraus rank `rank`, given as a
/// Stinespring isometry with environment dimension `rank`.
pub fn random_cptp(dx: usize, dy: usize, rank: usize, rng: &mut ChannelRng) -> Result<StinespringRep> {
    if dx == 0 || dy == 0 {
        return domain_err("dimensions must be positive");
    }
    if rank == 0 || rank > dx * dy {
        return domain_err(format!("kraus rank must lie in 1..={}, got {rank}", dx * dy));
    }
    if dy * rank < dx {
        return domain_err(format!(
            "an isometry from dimension {dx} into {dy}x{rank} does not exist"
        ));
    }
    let a = random_isometry(dy * rank, dx, rng)?;
    StinespringRep::new(a, dx, dy, rank)
}

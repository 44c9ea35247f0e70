//! Random matrices, states and channels for property tests and harnesses.
//!
//! All generators take an explicit RNG so callers control reproducibility.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::Channel;
use crate::linalg::{c64, normalize, ComplexMatrix, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    c64(a, b)
}

/// Complex Ginibre matrix with i.i.d. standard normal real and imaginary parts.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    isometry_columns(dim, dim, rng)
}

/// Random isometry rows x cols (rows >= cols) with orthonormal columns.
pub fn isometry_columns<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rows >= cols);
    let g = ginibre(rows, cols, rng);
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for c in 0..cols {
        let mut v = g.column(c);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for u in &q {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        q.push(normalize(&v).expect("Gaussian column is almost surely nonzero"));
    }
    ComplexMatrix::from_fn(rows, cols, |r, c| q[c][r])
}

/// Uniformly random pure state vector.
pub fn pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    normalize(&v).expect("Gaussian vector is almost surely nonzero")
}

/// Random full-rank density matrix (Hilbert-Schmidt measure).
pub fn density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, dim, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    w.scale_real(1.0 / tr).hermitian_part()
}

/// Random Hermitian matrix (GUE-like).
pub fn hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(dim, dim, rng).hermitian_part()
}

/// Random traceless Hermitian matrix.
pub fn traceless_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let h = hermitian(dim, rng);
    let shift = h.trace().re / dim as f64;
    &h - &ComplexMatrix::identity(dim).scale_real(shift)
}

/// Random CPTP map with `n_kraus` Kraus operators, from a random Stinespring
/// isometry C^dim_in -> C^dim_out (x) C^n_kraus.
///
/// Panics unless `dim_out * n_kraus >= dim_in`.
pub fn channel<R: Rng + ?Sized>(dim_in: usize, dim_out: usize, n_kraus: usize, rng: &mut R) -> Channel {
    let v = isometry_columns(dim_out * n_kraus, dim_in, rng);
    let kraus = (0..n_kraus)
        .map(|k| ComplexMatrix::from_fn(dim_out, dim_in, |a, i| v[(k * dim_out + a, i)]))
        .collect();
    Channel::new(kraus).expect("consistent Kraus dimensions")
}

/// Random completely positive (not normalized) map.
pub fn cp_map<R: Rng + ?Sized>(dim_in: usize, dim_out: usize, n_kraus: usize, rng: &mut R) -> Channel {
    let kraus = (0..n_kraus)
        .map(|_| ginibre(dim_out, dim_in, rng).scale_real(1.0 / (dim_in as f64).sqrt()))
        .collect();
    Channel::new(kraus).expect("consistent Kraus dimensions")
}

//! Doeblin minorization constants and the estimates built on them.
//!
//! A map `Phi` is minorized by a CP seed `E` with constant `eps` when
//! `Phi - eps*E` is completely positive, i.e. `J(Phi) - eps*J(E) >= 0`. The
//! largest such `eps` in `[0, 1]` is found by bisection on the smallest
//! eigenvalue of that Choi pencil.

pub mod diamond;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{compose_parallel, Channel};
use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, trace_norm, ComplexMatrix};
use crate::random;

pub use diamond::{
    diamond_bounds, diamond_theorem_check, evaluate_witness, order_commutator_superop, DiamondBounds,
    DiamondReport, Verdict,
};

/// Default feasibility tolerance for the Choi pencil.
pub const DEFAULT_TOL: f64 = 1e-9;

const MAX_BISECTION_STEPS: usize = 60;

/// Tolerance for accepting a state as a fixed point.
pub const FIXED_POINT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct MinorizationResult {
    pub epsilon: f64,
    #[serde(skip)]
    pub seed: Channel,
    pub tol: f64,
    pub iterations: usize,
}

/// Largest `eps` in `[0, 1]` with `J(phi) - eps*J(seed)` positive
/// semidefinite up to `-tol`.
pub fn doeblin_constant(phi: &Channel, seed: &Channel, tol: f64) -> Result<MinorizationResult> {
    if phi.dim_in() != seed.dim_in() || phi.dim_out() != seed.dim_out() {
        return Err(Error::dims(
            format!("{}->{}", phi.dim_in(), phi.dim_out()),
            format!("{}->{}", seed.dim_in(), seed.dim_out()),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let j_seed = seed.choi();
    if j_seed.max_abs() == 0.0 {
        return Err(Error::InvalidParameter("seed map has zero Choi operator".into()));
    }
    let j_phi = phi.choi();
    let pencil_min = |eps: f64| -> Result<f64> {
        let m = j_phi.try_sub(&j_seed.scale_real(eps))?;
        min_eigenvalue(&m)
    };

    let at_zero = pencil_min(0.0)?;
    if at_zero < -tol {
        return Err(Error::NotCompletelyPositive { min_eig: at_zero });
    }
    let result = |epsilon, iterations| MinorizationResult {
        epsilon,
        seed: seed.clone(),
        tol,
        iterations,
    };
    if pencil_min(1.0)? >= -tol {
        return Ok(result(1.0, 0));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut iterations = 0;
    while iterations < MAX_BISECTION_STEPS && hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pencil_min(mid)? >= -tol {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(result(lo, iterations))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProductBound {
    pub delta_a: f64,
    pub delta_b: f64,
    pub delta_ab: f64,
    pub holds: bool,
}

/// Doeblin constants of two maps and of their tensor product against the
/// tensor product of their seeds.
pub fn product_bound_check(
    phi_a: &Channel,
    phi_b: &Channel,
    seed_a: &Channel,
    seed_b: &Channel,
    tol: f64,
) -> Result<ProductBound> {
    let delta_a = doeblin_constant(phi_a, seed_a, tol)?.epsilon;
    let delta_b = doeblin_constant(phi_b, seed_b, tol)?.epsilon;
    let delta_ab = doeblin_constant(&compose_parallel(phi_a, phi_b), &compose_parallel(seed_a, seed_b), tol)?.epsilon;
    Ok(ProductBound {
        delta_a,
        delta_b,
        delta_ab,
        holds: delta_ab >= delta_a * delta_b - 10.0 * tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContractionCheck {
    pub max_ratio: f64,
    pub holds: bool,
}

/// Largest observed `|phi(X)|_1 / |X|_1` over random traceless Hermitian X.
///
/// `delta` must be a Doeblin constant of `phi` against a rank-one seed; then
/// the ratio never exceeds `1 - delta`.
pub fn traceless_contraction_factor(phi: &Channel, delta: f64, n_samples: usize, rng_seed: u64) -> Result<ContractionCheck> {
    let residual = phi.tp_residual();
    if residual > 1e-10 {
        return Err(Error::NotTracePreserving { residual });
    }
    if phi.dim_in() < 2 {
        return Err(Error::InvalidParameter("traceless inputs need dimension at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut max_ratio: f64 = 0.0;
    for _ in 0..n_samples {
        let x = random::traceless_hermitian(phi.dim_in(), &mut rng);
        let nx = trace_norm(&x)?;
        if nx == 0.0 {
            continue;
        }
        let ny = trace_norm(&phi.apply(&x)?.hermitian_part())?;
        max_ratio = max_ratio.max(ny / nx);
    }
    Ok(ContractionCheck {
        max_ratio,
        holds: max_ratio <= 1.0 - delta + 1e-9,
    })
}

/// Empirical per-step decay factor of the slowest component outside the
/// fixed space of `phi`.
///
/// The fixed-space projection is approximated by `phi^(2^20)`, so the map
/// must converge under iteration (no peripheral eigenvalues other than 1).
/// A random Hermitian input is iterated `n_steps` times with its limit
/// removed after every step, and the geometric mean decay over the second
/// half is returned.
pub fn off_fixed_space_decay_rate(phi: &Channel, n_steps: usize, rng_seed: u64) -> Result<f64> {
    if phi.dim_in() != phi.dim_out() {
        return Err(Error::dims(phi.dim_in(), phi.dim_out()));
    }
    if n_steps < 2 {
        return Err(Error::InvalidParameter("need at least two steps".into()));
    }
    let s = phi.superop();
    let limit = s.power(1 << 20)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let x = random::hermitian(phi.dim_in(), &mut rng);
    let mut y = x.try_sub(&limit.apply(&x)?)?;
    let start = y.frobenius_norm();
    if start < 1e-12 {
        return Ok(0.0);
    }
    y = y.scale_real(1.0 / start);
    let mut log_norm = 0.0;
    let mut log_at_half = 0.0;
    for k in 1..=n_steps {
        y = s.apply(&y)?;
        y = y.try_sub(&limit.apply(&y)?)?;
        let n = y.frobenius_norm();
        if n < 1e-300 {
            return Ok(0.0);
        }
        log_norm += n.ln();
        y = y.scale_real(1.0 / n);
        if k == n_steps / 2 {
            log_at_half = log_norm;
        }
    }
    let span = (n_steps - n_steps / 2) as f64;
    Ok(((log_norm - log_at_half) / span).exp())
}

/// `|phi^n(rho0) - tau|_1` for `n = 0..=n_max`.
pub fn mixing_trajectory(phi: &Channel, rho0: &ComplexMatrix, tau: &ComplexMatrix, n_max: usize) -> Result<Vec<(usize, f64)>> {
    let residual = phi.apply(tau)?.max_abs_diff(tau);
    if residual > FIXED_POINT_TOL {
        return Err(Error::NotFixedPoint { residual });
    }
    let mut rho = rho0.clone();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            rho = phi.apply(&rho)?;
        }
        out.push((n, trace_norm(&rho.try_sub(tau)?.hermitian_part())?));
    }
    Ok(out)
}

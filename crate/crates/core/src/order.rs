//! Order effects for pairs of projections.
//!
//! On a Halmos block with principal angle theta the commutator is
//! `[P, Q] = (1/2) sin(2 theta) J` with `J = [[0, 1], [-1, 0]]`, so the
//! commutator expectation of a unit vector `(x, y)` has magnitude
//! `(1/2)|sin 2theta| |2 Im(conj(x) y)|`. This is maximized exactly on the
//! rays `(1, +-i)/sqrt 2`, which [`equality_window_scan`] certifies
//! numerically.
//!
//! Two functionals are kept apart: [`commutator_functional`] is
//! `|<psi|[P,Q]|psi>|`, while [`sequential_deviation`] is the real
//! sequential-probability difference `Tr[rho (PQP - QPQ)]`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{require_projection, zz_coupling};
use crate::error::{Error, Result};
use crate::linalg::{c64, hermitian_eig, operator_norm, re, singular_values, vdot, vnorm, ComplexMatrix, C64};

/// Canonical 2x2 pair P = diag(1, 0), Q = projector onto (cos theta, sin theta).
#[derive(Clone, Debug)]
pub struct HalmosBlock {
    pub theta: f64,
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
}

/// J = [[0, 1], [-1, 0]]
pub fn j_matrix() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]])
}

pub fn halmos_block(theta: f64) -> Result<HalmosBlock> {
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::InvalidParameter(format!("principal angle must lie in [0, pi/2], got {theta}")));
    }
    let (s, c) = theta.sin_cos();
    Ok(HalmosBlock {
        theta,
        p: ComplexMatrix::diag_real(&[1.0, 0.0]),
        q: ComplexMatrix::from_real_rows(&[&[c * c, c * s], &[c * s, s * s]]),
    })
}

impl HalmosBlock {
    pub fn commutator(&self) -> ComplexMatrix {
        self.p.commutator(&self.q).expect("2x2 blocks")
    }

    /// (1/2)|sin 2 theta|
    pub fn bound(&self) -> f64 {
        0.5 * (2.0 * self.theta).sin().abs()
    }
}

fn range_basis(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eig(p)?;
    let cols: Vec<usize> = (0..e.values.len()).filter(|&k| e.values[k] > 0.5).collect();
    let n = p.rows();
    Ok(ComplexMatrix::from_fn(n, cols.len().max(1), |r, c| {
        cols.get(c).map_or(re(0.0), |&k| e.vectors[(r, k)])
    }))
}

fn rank(p: &ComplexMatrix) -> Result<usize> {
    Ok(hermitian_eig(p)?.values.iter().filter(|&&x| x > 0.5).count())
}

/// Principal angles between Ran(P) and Ran(Q), ascending.
///
/// There are min(rank P, rank Q) angles; each is `arccos` of a singular value
/// of `B_P^dag B_Q` for orthonormal range bases, clamped to [0, 1].
pub fn principal_angles(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<Vec<f64>> {
    require_projection(p)?;
    require_projection(q)?;
    if p.rows() != q.rows() {
        return Err(Error::dims(p.rows(), q.rows()));
    }
    let (rp, rq) = (rank(p)?, rank(q)?);
    if rp == 0 || rq == 0 {
        return Ok(Vec::new());
    }
    let bp = range_basis(p)?;
    let bq = range_basis(q)?;
    let overlap = bp.adjoint().matmul(&bq)?;
    let mut angles: Vec<f64> = singular_values(&overlap)
        .into_iter()
        .take(rp.min(rq))
        .map(|s| s.clamp(0.0, 1.0).acos())
        .collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

fn check_unit(psi: &[C64], dim: usize) -> Result<()> {
    if psi.len() != dim {
        return Err(Error::dims(dim, psi.len()));
    }
    let n = vnorm(psi);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!("state vector must be normalized (norm {n})")));
    }
    Ok(())
}

/// |<psi|[P, Q]|psi>|
pub fn commutator_functional(p: &ComplexMatrix, q: &ComplexMatrix, psi: &[C64]) -> Result<f64> {
    if p.rows() != q.rows() || !p.is_square() || !q.is_square() {
        return Err(Error::dims(format!("{0}x{0}", p.rows()), format!("{}x{}", q.rows(), q.cols())));
    }
    check_unit(psi, p.rows())?;
    let c = p.commutator(q)?;
    Ok(c.expectation(psi)?.norm())
}

/// Tr[rho (PQP - QPQ)]
pub fn sequential_deviation(p: &ComplexMatrix, q: &ComplexMatrix, rho: &ComplexMatrix) -> Result<f64> {
    let d = p.require_square()?;
    if q.rows() != d || q.cols() != d || rho.rows() != d || rho.cols() != d {
        return Err(Error::dims(d, format!("{} / {}", q.rows(), rho.rows())));
    }
    let r = &(&(p * q) * p) - &(&(q * p) * q);
    Ok((&r * rho).trace().re)
}

/// <psi|PQP - QPQ|psi>
pub fn sequential_deviation_pure(p: &ComplexMatrix, q: &ComplexMatrix, psi: &[C64]) -> Result<f64> {
    check_unit(psi, p.rows())?;
    sequential_deviation(p, q, &ComplexMatrix::ket_bra(psi))
}

/// Result of an equality-window scan on a Halmos block.
#[derive(Clone, Debug, Serialize)]
pub struct EqualityScan {
    pub theta: f64,
    pub max_value: f64,
    /// Maximizer as (phi, chi) in psi = (cos phi, e^{i chi} sin phi).
    pub phi: f64,
    pub chi: f64,
    #[serde(skip)]
    pub argmax: Vec<C64>,
}

fn bloch_circle_state(phi: f64, chi: f64) -> Vec<C64> {
    vec![re(phi.cos()), C64::from_polar(phi.sin(), chi)]
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}

/// Maximizes `commutator_functional` over psi = (cos phi, e^{i chi} sin phi).
///
/// A uniform grid of ceil(sqrt n)^2 points (offset by a seeded random shift)
/// locates the best cell; alternating golden-section searches in phi and chi
/// refine it.
pub fn equality_window_scan(theta: f64, n_samples: usize, rng_seed: u64) -> Result<EqualityScan> {
    if n_samples < 100 {
        return Err(Error::InvalidParameter(format!("need at least 100 samples, got {n_samples}")));
    }
    let block = halmos_block(theta)?;
    let comm = block.commutator();
    let objective = |phi: f64, chi: f64| -> f64 {
        comm.expectation(&bloch_circle_state(phi, chi)).map(|z| z.norm()).unwrap_or(0.0)
    };

    let side = (n_samples as f64).sqrt().ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let off_phi: f64 = rng.random();
    let off_chi: f64 = rng.random();
    let h_phi = FRAC_PI_2 / side as f64;
    let h_chi = 2.0 * PI / side as f64;

    let (mut best_phi, mut best_chi, mut best) = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..side {
        let phi = (i as f64 + off_phi) * h_phi;
        for j in 0..side {
            let chi = (j as f64 + off_chi) * h_chi;
            let v = objective(phi, chi);
            if v > best {
                (best_phi, best_chi, best) = (phi, chi, v);
            }
        }
    }

    if best > 0.0 {
        for _ in 0..4 {
            let chi = best_chi;
            best_phi = golden_max(|x| objective(x, chi), best_phi - h_phi, best_phi + h_phi, 1e-12);
            let phi = best_phi;
            best_chi = golden_max(|x| objective(phi, x), best_chi - h_chi, best_chi + h_chi, 1e-12);
        }
        best = objective(best_phi, best_chi);
    }

    Ok(EqualityScan {
        theta,
        max_value: best,
        phi: best_phi,
        chi: best_chi,
        argmax: bloch_circle_state(best_phi, best_chi),
    })
}

/// Fubini-Study angle from psi to the nearer of the rays (1, +-i)/sqrt 2.
pub fn window_angular_distance(psi: &[C64]) -> f64 {
    let s = FRAC_1_SQRT_2;
    [c64(0.0, 1.0), c64(0.0, -1.0)]
        .iter()
        .map(|&ph| {
            let target = [re(s), ph * s];
            vdot(&target, psi).norm().clamp(0.0, 1.0).acos()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Sequential residual of a projection pair.
#[derive(Clone, Debug)]
pub struct OrderResidual {
    /// R = P Q P - Q P Q
    pub r: ComplexMatrix,
    pub residual_norm: f64,
    pub commutator_norm: f64,
    /// ||R|| <= 2 ||[P, Q]|| (+1e-10)
    pub bound_holds: bool,
}

pub fn order_residual(pt: &ComplexMatrix, qt: &ComplexMatrix) -> Result<OrderResidual> {
    require_projection(pt)?;
    require_projection(qt)?;
    if pt.rows() != qt.rows() {
        return Err(Error::dims(pt.rows(), qt.rows()));
    }
    let r = &(&(pt * qt) * pt) - &(&(qt * pt) * qt);
    let residual_norm = operator_norm(&r)?;
    let commutator_norm = operator_norm(&pt.commutator(qt)?)?;
    Ok(OrderResidual {
        r,
        residual_norm,
        commutator_norm,
        bound_holds: residual_norm <= 2.0 * commutator_norm + 1e-10,
    })
}

/// Local/nonlocal decomposition of a composite order deviation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SplitBound {
    pub delta_ab: f64,
    pub delta_loc: f64,
    pub delta_nonloc: f64,
    pub holds: bool,
}

/// Evaluates the split bound `|D_AB| <= |D_loc| + |D_nonloc|`.
///
/// `local_pairs` are projection pairs implementing local Lueders steps (e.g.
/// `P_x (x) I` and `P_x' (x) I`), `nonlocal` is the coupled pair. The local
/// term sums the local deviations; the composite deviation is the
/// expectation of the summed residual operators.
pub fn split_bound_check(
    local_pairs: &[(ComplexMatrix, ComplexMatrix)],
    nonlocal: (&ComplexMatrix, &ComplexMatrix),
    rho: &ComplexMatrix,
) -> Result<SplitBound> {
    let d = rho.require_square()?;
    let mut total = ComplexMatrix::zeros(d, d);
    let mut delta_loc = 0.0;
    for (a, b) in local_pairs {
        let res = order_residual(a, b)?;
        if res.r.rows() != d {
            return Err(Error::dims(d, res.r.rows()));
        }
        delta_loc += (&res.r * rho).trace().re;
        total = &total + &res.r;
    }
    let res = order_residual(nonlocal.0, nonlocal.1)?;
    if res.r.rows() != d {
        return Err(Error::dims(d, res.r.rows()));
    }
    let delta_nonloc = (&res.r * rho).trace().re;
    total = &total + &res.r;
    let delta_ab = (&total * rho).trace().re;
    Ok(SplitBound {
        delta_ab,
        delta_loc,
        delta_nonloc,
        holds: delta_ab.abs() <= delta_loc.abs() + delta_nonloc.abs() + 1e-10,
    })
}

/// One row of the ZZ order sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrderSweepRow {
    pub gamma: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Rank-one qubit projection with Bloch vector at polar angle `alpha` in the
/// x-z plane.
pub fn bloch_projection(alpha: f64) -> ComplexMatrix {
    let v = [re((alpha / 2.0).cos()), re((alpha / 2.0).sin())];
    ComplexMatrix::ket_bra(&v)
}

/// |++> on two qubits.
pub fn plus_plus() -> Vec<C64> {
    vec![re(0.5); 4]
}

/// `n` points uniformly spanning [0, pi/2].
pub fn default_gamma_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| FRAC_PI_2 * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Bloch angles k pi/(n+1), k = 1..n.
pub fn instrument_angle_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| PI * k as f64 / (n + 1) as f64).collect()
}

/// |p(P_A, then U, then Q_B) - p(Q_B, then U, then P_A)| for a pure input,
/// with p the Born probability of both outcomes firing.
pub fn order_difference(pa: &ComplexMatrix, u: &ComplexMatrix, qb: &ComplexMatrix, psi: &[C64]) -> Result<f64> {
    let forward = qb.matmul(&u.matmul(pa)?)?;
    let backward = pa.matmul(&u.matmul(qb)?)?;
    let pf = vnorm(&forward.mul_vec(psi)?).powi(2);
    let pb = vnorm(&backward.mul_vec(psi)?).powi(2);
    Ok((pf - pb).abs())
}

/// Order-effect proxy under partial ZZ coupling.
///
/// For each gamma the coupling `U = exp(-i (gamma/2) Z(x)Z)` is interleaved
/// between two local Lueders steps, `P_alpha (x) I` on A and `I (x) Q_beta`
/// on B. The proxy is the order difference of the joint outcome probability
/// (see [`order_difference`]) on `psi0`, aggregated over the uniform
/// (alpha, beta) grid `k pi/(n+1)`.
pub fn zz_order_sweep(gammas: &[f64], ab_steps: usize, psi0: &[C64]) -> Result<Vec<OrderSweepRow>> {
    if gammas.is_empty() || ab_steps == 0 {
        return Err(Error::InvalidParameter("sweep grids must be nonempty".into()));
    }
    if let Some(g) = gammas.iter().find(|g| !(0.0..=FRAC_PI_2).contains(*g)) {
        return Err(Error::InvalidParameter(format!("coupling {g} outside [0, pi/2]")));
    }
    check_unit(psi0, 4)?;
    let angles = instrument_angle_grid(ab_steps);
    let id2 = ComplexMatrix::identity(2);
    let pas: Vec<ComplexMatrix> = angles.iter().map(|&a| bloch_projection(a).kron(&id2)).collect();
    let qbs: Vec<ComplexMatrix> = angles.iter().map(|&b| id2.kron(&bloch_projection(b))).collect();

    gammas
        .iter()
        .map(|&gamma| {
            let u = zz_coupling(gamma).kraus()[0].clone();
            let mut vals = Vec::with_capacity(pas.len() * qbs.len());
            for pa in &pas {
                for qb in &qbs {
                    vals.push(order_difference(pa, &u, qb, psi0)?);
                }
            }
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok(OrderSweepRow { gamma, mean, min, max })
        })
        .collect()
}

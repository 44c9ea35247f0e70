//! GKLS generators, their semigroups, and monitored look-return limits.
//!
//! Superoperators use column stacking, so `vec(A X B) = (B^T (x) A) vec(X)`
//! and the generator
//! `L(X) = -i[H, X] + sum_k (L_k X L_k^dag - {L_k^dag L_k, X}/2)`
//! is assembled term by term in that form.

use serde::Serialize;

use crate::certify::{rate_from_epsilon, Rate};
use crate::channel::{Channel, Superoperator};
use crate::doeblin::doeblin_constant;
use crate::error::{Error, Result};
use crate::linalg::{
    c64, hermitian_eig, matrix_exp, psd_sqrt, trace_norm, ComplexMatrix, HermitianMatrix,
};

/// CPTP tolerance for channels produced by [`semigroup`].
pub const SEMIGROUP_CPTP_TOL: f64 = 1e-9;

/// Bisection tolerance used by [`limit_sweep`]. Tight enough that the rate
/// `-ln(1 - eps)/dt` is accurate to about 1e-11 at `dt = 0.025`.
pub const SWEEP_TOL: f64 = 1e-13;

/// Null-space gap below which the stationary state is considered degenerate.
pub const STATIONARY_GAP_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct GKLSGenerator {
    h: HermitianMatrix,
    jumps: Vec<ComplexMatrix>,
}

impl GKLSGenerator {
    pub fn new(h: ComplexMatrix, jumps: Vec<ComplexMatrix>) -> Result<Self> {
        let h = HermitianMatrix::new(h)?;
        let d = h.dim();
        for l in &jumps {
            if l.rows() != d || l.cols() != d {
                return Err(Error::dims(format!("{d}x{d}"), format!("{}x{}", l.rows(), l.cols())));
            }
        }
        Ok(Self { h, jumps })
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        self.h.as_matrix()
    }

    pub fn jumps(&self) -> &[ComplexMatrix] {
        &self.jumps
    }

    /// `sum_k L_k^dag L_k`
    fn damping(&self) -> ComplexMatrix {
        let d = self.dim();
        self.jumps
            .iter()
            .fold(ComplexMatrix::zeros(d, d), |acc, l| &acc + &(&l.adjoint() * l))
    }

    pub fn superop(&self) -> Superoperator {
        Superoperator::from_matrix(self.dim(), self.dim(), generator_superop(self)).expect("square generator")
    }
}

/// Qubit depolarizing generator `L(rho) = kappa (Tr[rho] I/2 - rho)`, with
/// jumps `sqrt(kappa/4) sigma_k`.
pub fn depolarizing_generator(kappa: f64) -> Result<GKLSGenerator> {
    check_rate(kappa)?;
    let w = (kappa / 4.0).sqrt();
    let jumps = [crate::linalg::pauli::x(), crate::linalg::pauli::y(), crate::linalg::pauli::z()]
        .iter()
        .map(|s| s.scale_real(w))
        .collect();
    GKLSGenerator::new(ComplexMatrix::zeros(2, 2), jumps)
}

/// Qubit amplitude damping with jump `sqrt(kappa) |0><1|`.
pub fn amplitude_damping_generator(kappa: f64) -> Result<GKLSGenerator> {
    check_rate(kappa)?;
    let l = ComplexMatrix::unit(2, 2, 0, 1).scale_real(kappa.sqrt());
    GKLSGenerator::new(ComplexMatrix::zeros(2, 2), vec![l])
}

fn check_rate(kappa: f64) -> Result<()> {
    if kappa >= 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("rate must be nonnegative, got {kappa}")))
    }
}

/// Transfer matrix of the generator (d^2 x d^2, column stacking).
pub fn generator_superop(g: &GKLSGenerator) -> ComplexMatrix {
    let d = g.dim();
    let id = ComplexMatrix::identity(d);
    let h = g.hamiltonian();
    let minus_i = c64(0.0, -1.0);
    let mut m = (&id.kron(h) - &h.transpose().kron(&id)).scale(minus_i);
    for l in &g.jumps {
        let ldl = &l.adjoint() * l;
        m = &m + &l.conj().kron(l);
        m = &m - &id.kron(&ldl).scale_real(0.5);
        m = &m - &ldl.transpose().kron(&id).scale_real(0.5);
    }
    m
}

/// The channel `exp(t L)` in Kraus form.
pub fn semigroup(g: &GKLSGenerator, t: f64) -> Result<Channel> {
    let s = semigroup_superop(g, t)?;
    let ch = Channel::from_superop(&s)?;
    let report = ch.is_cptp(SEMIGROUP_CPTP_TOL);
    if !report.completely_positive {
        return Err(Error::NotCompletelyPositive {
            min_eig: report.min_choi_eigenvalue,
        });
    }
    if !report.trace_preserving {
        return Err(Error::NotTracePreserving {
            residual: report.tp_residual,
        });
    }
    Ok(ch)
}

fn semigroup_superop(g: &GKLSGenerator, t: f64) -> Result<Superoperator> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    let d = g.dim();
    Superoperator::from_matrix(d, d, matrix_exp(&generator_superop(g).scale_real(t))?)
}

/// One look-return cycle of length `dt`, exactly CPTP:
/// `K0 = exp(-i H dt) sqrt(I - dt sum L^dag L)`, `K_k = sqrt(dt) L_k`.
pub fn first_order_step(g: &GKLSGenerator, dt: f64) -> Result<Channel> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    let d = g.dim();
    let remainder = &ComplexMatrix::identity(d) - &g.damping().scale_real(dt);
    let low = hermitian_eig(&remainder)?.min();
    if low <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "time step {dt} too large: I - dt sum L^dag L has eigenvalue {low:e}"
        )));
    }
    let u = matrix_exp(&g.hamiltonian().scale(c64(0.0, -dt)))?;
    let mut kraus = vec![u.matmul(&psd_sqrt(&remainder)?)?];
    kraus.extend(g.jumps.iter().map(|l| l.scale_real(dt.sqrt())));
    Channel::new(kraus)
}

/// Unique stationary state of the generator.
///
/// Taken from the null vector of `L^dag L`; a second near-null direction
/// means the stationary state is not unique and is rejected.
pub fn stationary_state(g: &GKLSGenerator) -> Result<ComplexMatrix> {
    let d = g.dim();
    let l = generator_superop(g);
    let eig = hermitian_eig(&l.adjoint().matmul(&l)?.hermitian_part())?;
    if d > 1 && eig.values[1] < STATIONARY_GAP_TOL {
        return Err(Error::InvalidParameter("stationary state is not unique".into()));
    }
    let v = eig.vectors.column(0);
    let rho = ComplexMatrix::from_fn(d, d, |i, j| v[i + j * d]);
    let tr = rho.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::Numerical("null vector has vanishing trace".into()));
    }
    Ok(rho.scale(tr.inv()).hermitian_part())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepMode {
    /// Steps are the exact semigroup `exp(dt L)`.
    Exact,
    /// Steps are [`first_order_step`].
    FirstOrder,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitSweepRow {
    pub dt: f64,
    pub epsilon: f64,
    /// `f64::INFINITY` when `epsilon = 1`.
    pub gamma: f64,
    /// Trace distance between normalized Choi states of `step^n` and
    /// `exp(n dt L)`, `n = floor(t / dt)`.
    pub embed_error: f64,
}

/// Minorization constant, rate and embedding error for each time step.
pub fn limit_sweep(
    g: &GKLSGenerator,
    seed: &Channel,
    dts: &[f64],
    t_horizon: f64,
    mode: StepMode,
) -> Result<Vec<LimitSweepRow>> {
    if dts.is_empty() {
        return Err(Error::InvalidParameter("time step list is empty".into()));
    }
    if let Some(&bad) = dts.iter().find(|&&dt| !(dt > 0.0 && dt.is_finite())) {
        return Err(Error::InvalidParameter(format!("time steps must be positive, got {bad}")));
    }
    let max_dt = dts.iter().copied().fold(0.0, f64::max);
    if !(t_horizon > max_dt) {
        return Err(Error::InvalidParameter(format!(
            "horizon {t_horizon} must exceed the largest time step {max_dt}"
        )));
    }
    let d = g.dim();
    dts.iter()
        .map(|&dt| {
            let step = match mode {
                StepMode::Exact => semigroup(g, dt)?,
                StepMode::FirstOrder => first_order_step(g, dt)?,
            };
            let epsilon = doeblin_constant(&step, seed, SWEEP_TOL)?.epsilon;
            let gamma = match rate_from_epsilon(epsilon, dt)? {
                Rate::Finite(x) => x,
                Rate::Infinite => f64::INFINITY,
            };
            let n = (t_horizon / dt + 1e-9).floor() as usize;
            let discrete = step.power(n)?;
            let exact = semigroup_superop(g, dt * n as f64)?;
            let diff = discrete.try_sub(&exact)?.choi().hermitian_part();
            let embed_error = 0.5 * trace_norm(&diff)? / d as f64;
            Ok(LimitSweepRow {
                dt,
                epsilon,
                gamma,
                embed_error,
            })
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`. Nonpositive entries are
/// rejected.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::dims(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(Error::InvalidParameter("slope needs at least two points".into()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidParameter("log-log fit needs positive values".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("x values must not all coincide".into()));
    }
    Ok(sxy / sxx)
}

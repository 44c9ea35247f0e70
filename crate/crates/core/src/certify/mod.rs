//! Finite-sample mixing certificates.
//!
//! From counts `X[i][j]` of outcome `i` after preparing stencil `j`, each
//! outcome contributes the smallest Clopper–Pearson lower bound over the
//! stencils, at the Bonferroni level `alpha / m`. Their sum `eps_hat` is, with
//! probability at least `1 - alpha`, a lower bound on the minorization mass
//! of the loop, and `(1 - eps_hat)^n` bounds the distance to stationarity
//! after `n` rounds.

mod beta;
mod counts;

pub use beta::{clopper_pearson_lower, ln_gamma, regularized_incomplete_beta, QUANTILE_TOL};
pub use counts::CountTable;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::Instrument;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Probabilities of an instrument must sum to one within this.
pub const PROBABILITY_SUM_TOL: f64 = 1e-8;

/// Above this many steps [`mixing_bound`] switches from repeated
/// multiplication to `powi`.
pub const EXACT_STEP_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingCertificate {
    pub epsilon_hat: f64,
    pub alpha: f64,
    pub alpha_prime: f64,
    pub per_outcome_lower: Vec<f64>,
    /// The raw sum exceeded 1 and was clamped; signals an inconsistent table.
    pub clamped: bool,
    /// `epsilon_hat == 0`: valid but certifies nothing.
    pub vacuous: bool,
}

/// Sum over outcomes of the worst-stencil lower bound, at level `alpha / m`.
pub fn epsilon_hat(counts: &CountTable, alpha: f64) -> Result<MixingCertificate> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let m = counts.m();
    if m == 0 || counts.stencils().is_empty() {
        return Err(Error::InvalidCounts("empty table".into()));
    }
    let alpha_prime = alpha / m as f64;
    let mut per_outcome_lower = Vec::with_capacity(m);
    for i in 0..m {
        let mut lowest = f64::INFINITY;
        for j in 0..counts.stencils().len() {
            lowest = lowest.min(clopper_pearson_lower(counts.successes(i, j), counts.trials(j), alpha_prime)?);
        }
        per_outcome_lower.push(lowest);
    }
    let sum: f64 = per_outcome_lower.iter().sum();
    let clamped = sum > 1.0;
    let epsilon_hat = sum.clamp(0.0, 1.0);
    Ok(MixingCertificate {
        epsilon_hat,
        alpha,
        alpha_prime,
        per_outcome_lower,
        clamped,
        vacuous: epsilon_hat == 0.0,
    })
}

/// `(1 - eps_hat)^n * initial_distance`.
///
/// Up to [`EXACT_STEP_LIMIT`] steps the factor is applied one step at a time,
/// so that `mixing_bound(n1 + n2, d) == mixing_bound(n2, mixing_bound(n1, d))`
/// holds bit for bit.
pub fn mixing_bound(cert: &MixingCertificate, n: u64, initial_distance: f64) -> f64 {
    let r = 1.0 - cert.epsilon_hat;
    if n > EXACT_STEP_LIMIT {
        return initial_distance * r.powf(n as f64);
    }
    let mut v = initial_distance;
    for _ in 0..n {
        if v == 0.0 {
            break;
        }
        v *= r;
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepBound {
    Steps(u64),
    /// `eps_hat = 0`: no finite number of steps is certified.
    NoCertificate,
}

/// Smallest `k` with `(1 - eps_hat)^k * initial_distance <= target`.
pub fn step_bound(cert: &MixingCertificate, target: f64, initial_distance: f64) -> Result<StepBound> {
    if !(target > 0.0 && target < initial_distance) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < target < initial distance, got target {target}, distance {initial_distance}"
        )));
    }
    let eps = cert.epsilon_hat;
    if eps <= 0.0 {
        return Ok(StepBound::NoCertificate);
    }
    if eps >= 1.0 {
        return Ok(StepBound::Steps(1));
    }
    let r = 1.0 - eps;
    let raw = ((target / initial_distance).ln() / r.ln()).ceil().max(1.0);
    if !raw.is_finite() || raw > u64::MAX as f64 {
        return Err(Error::Numerical(format!("step bound overflows ({raw})")));
    }
    // guard the ceiling against rounding in the logarithms
    let value = |k: u64| initial_distance * r.powf(k as f64);
    let mut k = raw as u64;
    while value(k) > target {
        k += 1;
    }
    while k > 1 && value(k - 1) <= target {
        k -= 1;
    }
    Ok(StepBound::Steps(k))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rate {
    Finite(f64),
    Infinite,
}

impl Rate {
    pub fn finite(self) -> Option<f64> {
        match self {
            Rate::Finite(g) => Some(g),
            Rate::Infinite => None,
        }
    }
}

/// `-ln(1 - eps) / dt`.
pub fn rate_from_epsilon(epsilon: f64, dt: f64) -> Result<Rate> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in [0, 1], got {epsilon}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    if epsilon == 1.0 {
        return Ok(Rate::Infinite);
    }
    Ok(Rate::Finite(-(-epsilon).ln_1p() / dt))
}

/// Composed certificate for a product of loops: the product of the
/// component constants.
pub fn compose(epsilons: &[f64]) -> f64 {
    epsilons.iter().product()
}

/// Samples outcome counts of `instrument` on each stencil state.
///
/// Stencil `j` draws from its own ChaCha stream (`set_stream(j)`), so the
/// counts of one stencil do not depend on the others or on evaluation order.
/// Stencils are labelled by index, outcomes by the instrument's labels.
pub fn simulate_counts(
    instrument: &Instrument,
    stencils: &[ComplexMatrix],
    shots_per_stencil: u64,
    rng_seed: u64,
) -> Result<CountTable> {
    if shots_per_stencil == 0 {
        return Err(Error::InvalidParameter("shots per stencil must be positive".into()));
    }
    if stencils.is_empty() {
        return Err(Error::InvalidParameter("at least one stencil required".into()));
    }
    let m = instrument.len();
    let mut successes = vec![vec![0u64; stencils.len()]; m];
    for (j, rho) in stencils.iter().enumerate() {
        let probs = instrument.probabilities(rho)?;
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL || probs.iter().any(|&p| p < -PROBABILITY_SUM_TOL) {
            return Err(Error::InvalidParameter(format!(
                "outcome probabilities on stencil {j} sum to {total}"
            )));
        }
        let mut cumulative = Vec::with_capacity(m);
        let mut acc = 0.0;
        for &p in &probs {
            acc += p.max(0.0) / total;
            cumulative.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        rng.set_stream(j as u64);
        for _ in 0..shots_per_stencil {
            let u: f64 = rng.random();
            let i = cumulative.iter().position(|&c| u < c).unwrap_or(m - 1);
            successes[i][j] += 1;
        }
    }
    CountTable::new(
        instrument.outcomes().to_vec(),
        (0..stencils.len()).map(|j| j.to_string()).collect(),
        successes,
        vec![shots_per_stencil; stencils.len()],
        true,
    )
}

//! Diamond-norm bounds for differences of channels, and a harness that
//! compares them with the coupling bound `2(1 - delta_A delta_B)`.
//!
//! Lower bound: multi-start local ascent over ancilla-assisted pure inputs
//! `psi = (B (x) I)|Omega>`, maximizing `|(id (x) Theta)(|psi><psi|)|_1`.
//! For fixed B the trace norm equals `Tr[W Y]` with `W = sign(Y)`; for fixed W
//! the best B is the top eigenvector of a Hermitian form, so alternating the
//! two never decreases the objective. Upper bound: trace norm of the Choi
//! operator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::{doeblin_constant, DEFAULT_TOL};
use crate::channel::{compose_parallel, dephasing, replacement, swap, zz_coupling, Channel, Superoperator};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, re, trace_norm, ComplexMatrix, C64};
use crate::random;

// The supremum is often approached only as the input degenerates, so the
// ascent creeps; any iterate is still a valid lower bound.
const MAX_ASCENT_STEPS: usize = 200;
const ASCENT_REL_TOL: f64 = 1e-9;
const SANDWICH_TOL: f64 = 1e-9;

/// `(id (x) phi_b) o psi o (phi_a (x) id) - (phi_a (x) id) o psi o (id (x) phi_b)`.
pub fn order_commutator_superop(phi_a: &Channel, phi_b: &Channel, psi: &Channel) -> Result<Superoperator> {
    for (name, c) in [("phi_a", phi_a), ("phi_b", phi_b)] {
        if c.dim_in() != c.dim_out() {
            return Err(Error::InvalidParameter(format!(
                "{name} must map a factor to itself ({}->{})",
                c.dim_in(),
                c.dim_out()
            )));
        }
    }
    let (da, db) = (phi_a.dim_in(), phi_b.dim_in());
    if psi.dim_in() != da * db || psi.dim_out() != da * db {
        return Err(Error::dims(
            format!("{}->{}", da * db, da * db),
            format!("{}->{}", psi.dim_in(), psi.dim_out()),
        ));
    }
    let l_a = compose_parallel(phi_a, &Channel::identity(db)).superop();
    let l_b = compose_parallel(&Channel::identity(da), phi_b).superop();
    let s = psi.superop();
    let first = l_b.compose(&s)?.compose(&l_a)?;
    let second = l_a.compose(&s)?.compose(&l_b)?;
    first.try_sub(&second)
}

#[derive(Clone, Debug)]
pub struct DiamondBounds {
    pub lower: f64,
    pub upper: f64,
    /// Input state on ancilla (x) system, ancilla index major.
    pub witness: Vec<C64>,
}

/// `|(id (x) theta)(|psi><psi|)|_1`, evaluated blockwise from the action of
/// `theta` (independent of the Choi route used by the ascent).
pub fn evaluate_witness(theta: &Superoperator, psi: &[C64]) -> Result<f64> {
    let (di, dout) = (theta.dim_in(), theta.dim_out());
    if psi.len() != di * di {
        return Err(Error::dims(di * di, psi.len()));
    }
    let block = |k: usize| &psi[k * di..(k + 1) * di];
    let mut y = ComplexMatrix::zeros(di * dout, di * dout);
    for k in 0..di {
        for l in 0..di {
            let out = theta.apply(&ComplexMatrix::outer(block(k), block(l)))?;
            for a in 0..dout {
                for b in 0..dout {
                    y[(k * dout + a, l * dout + b)] = out[(a, b)];
                }
            }
        }
    }
    trace_norm(&y.hermitian_part())
}

/// Lower and upper bounds on the diamond norm of a Hermiticity-preserving map.
///
/// Restart 0 starts from the maximally entangled input, restart `r > 0` from
/// a random input drawn from ChaCha stream `r` of `rng_seed`. Restarts run on
/// scoped threads; the best value wins and ties go to the lower index, so the
/// result does not depend on the thread count.
pub fn diamond_bounds(theta: &Superoperator, restarts: usize, rng_seed: u64) -> Result<DiamondBounds> {
    let (di, dout) = (theta.dim_in(), theta.dim_out());
    let j = theta.choi().hermitian_part();
    let upper = trace_norm(&j)?;
    let start = ComplexMatrix::identity(di).scale_real(1.0 / (di as f64).sqrt());
    if j.max_abs() == 0.0 {
        return Ok(DiamondBounds {
            lower: 0.0,
            upper,
            witness: start.into_data(),
        });
    }

    let restarts = restarts.max(1);
    let run_one = |r: usize| -> Result<(f64, ComplexMatrix)> {
        let b0 = if r == 0 {
            start.clone()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            rng.set_stream(r as u64);
            let g = random::ginibre(di, di, &mut rng);
            let n = g.frobenius_norm();
            g.scale_real(1.0 / n)
        };
        ascend(&j, b0, di, dout)
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(restarts);
    let mut results: Vec<Option<Result<(f64, ComplexMatrix)>>> = (0..restarts).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let run_one = &run_one;
                scope.spawn(move || (w..restarts).step_by(workers).map(|r| (r, run_one(r))).collect::<Vec<_>>())
            })
            .collect();
        for h in handles {
            for (r, res) in h.join().expect("restart worker panicked") {
                results[r] = Some(res);
            }
        }
    });
    let mut best: Option<(f64, ComplexMatrix)> = None;
    for res in results {
        let (value, b) = res.expect("every restart ran")?;
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, b));
        }
    }
    let (lower, b) = best.expect("at least one restart");
    Ok(DiamondBounds {
        lower,
        upper,
        witness: b.into_data(),
    })
}

fn output_for(j: &ComplexMatrix, b: &ComplexMatrix, dout: usize) -> Result<ComplexMatrix> {
    let bi = b.kron(&ComplexMatrix::identity(dout));
    Ok(bi.matmul(j)?.matmul(&bi.adjoint())?.hermitian_part())
}

fn ascend(j: &ComplexMatrix, mut b: ComplexMatrix, di: usize, dout: usize) -> Result<(f64, ComplexMatrix)> {
    let mut y = output_for(j, &b, dout)?;
    let mut value = trace_norm(&y)?;
    for _ in 0..MAX_ASCENT_STEPS {
        let eig = hermitian_eig(&y)?;
        let w = eig.map_values(|x| if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 });
        // K[(l,j),(k,i)] = sum_ab J[(i,a),(j,b)] W[(l,b),(k,a)]
        let n = di * di;
        let k = ComplexMatrix::from_fn(n, n, |row, col| {
            let (l, jj) = (row / di, row % di);
            let (kk, i) = (col / di, col % di);
            let mut s = re(0.0);
            for a in 0..dout {
                for bb in 0..dout {
                    s += j[(i * dout + a, jj * dout + bb)] * w[(l * dout + bb, kk * dout + a)];
                }
            }
            s
        });
        let ke = hermitian_eig(&k.hermitian_part())?;
        let top = ke.vectors.column(n - 1);
        let candidate = ComplexMatrix::from_vec(di, di, top)?;
        let y_new = output_for(j, &candidate, dout)?;
        let v_new = trace_norm(&y_new)?;
        if v_new <= value + ASCENT_REL_TOL * value.max(1.0) {
            if v_new > value {
                return Ok((v_new, candidate));
            }
            break;
        }
        b = candidate;
        y = y_new;
        value = v_new;
    }
    Ok((value, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

fn serialize_state<S: Serializer>(psi: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = psi.iter().map(|z| [z.re, z.im]).collect();
    pairs.serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiamondReport {
    pub lower: f64,
    pub upper: f64,
    pub theorem_rhs: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    pub verdict: Verdict,
    /// Best input found, as `[re, im]` pairs on ancilla (x) system.
    #[serde(serialize_with = "serialize_state")]
    pub witness: Vec<C64>,
    /// Witness objective recomputed from the action of the map.
    pub witness_value: f64,
}

impl DiamondReport {
    fn verdict_for(lower: f64, upper: f64, rhs: f64) -> Verdict {
        if lower > rhs + SANDWICH_TOL {
            Verdict::Violated
        } else if upper <= rhs + SANDWICH_TOL {
            Verdict::Holds
        } else {
            Verdict::Inconclusive
        }
    }
}

/// Compares the diamond norm of the order commutator with `2(1 - dA dB)`.
#[allow(clippy::too_many_arguments)]
pub fn diamond_theorem_check(
    phi_a: &Channel,
    phi_b: &Channel,
    psi: &Channel,
    seed_a: &Channel,
    seed_b: &Channel,
    restarts: usize,
    rng_seed: u64,
) -> Result<DiamondReport> {
    let theta = order_commutator_superop(phi_a, phi_b, psi)?;
    let delta_a = doeblin_constant(phi_a, seed_a, DEFAULT_TOL)?.epsilon;
    let delta_b = doeblin_constant(phi_b, seed_b, DEFAULT_TOL)?.epsilon;
    let theorem_rhs = 2.0 * (1.0 - delta_a * delta_b);
    let bounds = diamond_bounds(&theta, restarts, rng_seed)?;
    let witness_value = evaluate_witness(&theta, &bounds.witness)?;
    Ok(DiamondReport {
        lower: bounds.lower,
        upper: bounds.upper,
        theorem_rhs,
        delta_a,
        delta_b,
        verdict: DiamondReport::verdict_for(bounds.lower, bounds.upper, theorem_rhs),
        witness: bounds.witness,
        witness_value,
    })
}

/// Named harness configurations on two qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiamondPreset {
    /// Dephasing factors, identity coupling.
    Identity,
    /// Both factors replace with |0><0|, SWAP coupling.
    SwapRankOne,
    /// Dephasing factors, maximal partial ZZ coupling.
    DephasingZz,
}

/// Channels for a harness run: factors, coupling, and factor seeds.
#[derive(Clone, Debug)]
pub struct DiamondInstance {
    pub phi_a: Channel,
    pub phi_b: Channel,
    pub psi: Channel,
    pub seed_a: Channel,
    pub seed_b: Channel,
}

impl DiamondPreset {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "identity" => Some(Self::Identity),
            "swap-rank-one" => Some(Self::SwapRankOne),
            "dephasing-zz" => Some(Self::DephasingZz),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::SwapRankOne => "swap-rank-one",
            Self::DephasingZz => "dephasing-zz",
        }
    }

    pub fn instance(&self) -> DiamondInstance {
        let full = dephasing(1.0, 2).expect("valid");
        match self {
            Self::Identity | Self::DephasingZz => DiamondInstance {
                phi_a: dephasing(0.3, 2).expect("valid"),
                phi_b: dephasing(0.5, 2).expect("valid"),
                psi: if *self == Self::Identity {
                    Channel::identity(4)
                } else {
                    zz_coupling(std::f64::consts::FRAC_PI_2)
                },
                seed_a: full.clone(),
                seed_b: full,
            },
            Self::SwapRankOne => {
                let r = replacement(&ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]])).expect("valid");
                DiamondInstance {
                    phi_a: r.clone(),
                    phi_b: r.clone(),
                    psi: swap(2),
                    seed_a: r.clone(),
                    seed_b: r,
                }
            }
        }
    }

    pub fn run(&self, restarts: usize, rng_seed: u64) -> Result<DiamondReport> {
        let i = self.instance();
        diamond_theorem_check(&i.phi_a, &i.phi_b, &i.psi, &i.seed_a, &i.seed_b, restarts, rng_seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::depolarizing;
    use crate::linalg::{c64, vkron};
    use rand::Rng;

    fn sampled_max(theta: &Superoperator, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = theta.dim_in();
        (0..samples)
            .map(|_| evaluate_witness(theta, &random::pure_state(d * d, &mut rng)).unwrap())
            .fold(0.0, f64::max)
    }

    fn unitary_difference(alpha: f64, beta: f64) -> Superoperator {
        let u = Channel::unitary(ComplexMatrix::identity(2)).unwrap().superop();
        let v = ComplexMatrix::diag(&[C64::from_polar(1.0, alpha), C64::from_polar(1.0, beta)]);
        u.try_sub(&Channel::unitary(v).unwrap().superop()).unwrap()
    }

    #[test]
    fn zero_map() {
        let z = Superoperator::zero(2, 2);
        let b = diamond_bounds(&z, 4, 1).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        let c = depolarizing(0.2, 2).unwrap().superop();
        let diff = c.try_sub(&c).unwrap().scale(0.5);
        let b = diamond_bounds(&diff, 4, 1).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn unitary_difference_matches_closed_form_and_sampling() {
        for &(a, b) in &[(0.0, 0.7), (0.3, 2.0), (0.0, std::f64::consts::PI)] {
            let theta = unitary_difference(a, b);
            let closed: f64 = 2.0 * ((b - a).abs() / 2.0).sin();
            let bounds = diamond_bounds(&theta, 8, 2).unwrap();
            assert!((bounds.lower - closed).abs() < 1e-8, "{} vs {closed}", bounds.lower);
            assert!(bounds.lower <= bounds.upper + 1e-9);
            let sampled = sampled_max(&theta, 4000, 9);
            assert!(sampled <= bounds.lower + 1e-9);
            assert!(sampled >= 0.98 * bounds.lower, "{sampled} vs {}", bounds.lower);
        }
    }

    #[test]
    fn ascent_dominates_sampling_on_random_qubit_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let a = random::channel(2, 2, 2, &mut rng).superop();
            let b = random::channel(2, 2, 3, &mut rng).superop();
            let theta = a.try_sub(&b).unwrap();
            let bounds = diamond_bounds(&theta, 8, rng.random()).unwrap();
            let sampled = sampled_max(&theta, 2000, rng.random());
            assert!(sampled <= bounds.lower + 1e-9);
            assert!(bounds.lower <= bounds.upper + 1e-9);
            let w = evaluate_witness(&theta, &bounds.witness).unwrap();
            assert!((w - bounds.lower).abs() < 1e-9);
        }
    }

    #[test]
    fn commutator_vanishes_for_identity_and_commuting_product_couplings() {
        let pa = dephasing(0.3, 2).unwrap();
        let pb = depolarizing(0.4, 2).unwrap();
        let t = order_commutator_superop(&pa, &pb, &Channel::identity(4)).unwrap();
        assert_eq!(t.matrix().max_abs(), 0.0);
        // each coupling factor commutes with the local map on its side
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u = random::haar_unitary(2, &mut rng);
        let prod = compose_parallel(&dephasing(0.6, 2).unwrap(), &Channel::unitary(u).unwrap());
        let t = order_commutator_superop(&pa, &pb, &prod).unwrap();
        assert!(t.matrix().max_abs() < 1e-10);
    }

    #[test]
    fn generic_product_coupling_does_not_commute() {
        // (C o A) (x) (B o D) differs from (A o C) (x) (D o B) unless the
        // factors commute
        let pa = dephasing(0.3, 2).unwrap();
        let pb = depolarizing(0.4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let prod = compose_parallel(&random::channel(2, 2, 2, &mut rng), &random::channel(2, 2, 2, &mut rng));
        let t = order_commutator_superop(&pa, &pb, &prod).unwrap();
        assert!(t.matrix().max_abs() > 1e-3);
    }

    #[test]
    fn swap_rank_one_action() {
        let inst = DiamondPreset::SwapRankOne.instance();
        let theta = order_commutator_superop(&inst.phi_a, &inst.phi_b, &inst.psi).unwrap();
        let tau = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let rho = random::density_matrix(4, &mut rng);
        let tr_a = crate::linalg::partial_trace(&rho, crate::linalg::Subsystem::A, 2, 2).unwrap();
        let tr_b = crate::linalg::partial_trace(&rho, crate::linalg::Subsystem::B, 2, 2).unwrap();
        let expected = &tr_a.kron(&tau) - &tau.kron(&tr_b);
        assert!(theta.apply(&rho).unwrap().approx_eq(&expected, 1e-12));
    }

    #[test]
    fn presets() {
        let r = DiamondPreset::Identity.run(4, 1).unwrap();
        assert_eq!(r.lower, 0.0);
        assert_eq!(r.verdict, Verdict::Holds);
        let r = DiamondPreset::SwapRankOne.run(4, 1).unwrap();
        assert_eq!(r.theorem_rhs, 0.0);
        assert_eq!(r.verdict, Verdict::Violated);
        assert!(r.witness_value > 1e-3);
        assert!((r.witness_value - r.lower).abs() < 1e-9);
        let r = DiamondPreset::DephasingZz.run(4, 1).unwrap();
        assert!(r.lower <= 2.0 + 1e-9 && r.lower <= r.upper + 1e-9);
    }

    #[test]
    fn witness_evaluation_agrees_with_choi_route() {
        // maximally entangled input reproduces the Choi operator up to 1/d
        let c = depolarizing(0.3, 2).unwrap().superop();
        let t = c.try_sub(&Channel::identity(2).superop()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let omega = vkron(&[re(s), re(0.0)], &[re(1.0), re(0.0)])
            .iter()
            .zip(vkron(&[re(0.0), re(s)], &[re(0.0), re(1.0)]))
            .map(|(a, b)| a + b)
            .collect::<Vec<_>>();
        let w = evaluate_witness(&t, &omega).unwrap();
        let expected = trace_norm(&t.choi()).unwrap() / 2.0;
        assert!((w - expected).abs() < 1e-12);
        let _ = c64(0.0, 0.0);
    }
}

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordmix::certify::{clopper_pearson_lower, epsilon_hat, mixing_bound, simulate_counts};
use ordmix::channel::{
    compose_parallel, dephasing, depolarizing, lueders_instrument, qubit_stencils, replacement, Channel,
};
use ordmix::doeblin::diamond::{diamond_bounds, evaluate_witness, order_commutator_superop, DiamondPreset, Verdict};
use ordmix::doeblin::{doeblin_constant, mixing_trajectory, product_bound_check, traceless_contraction_factor};
use ordmix::lindblad::{self, StepMode};
use ordmix::linalg::{hermitian_eig, ComplexMatrix};
use ordmix::order::{default_gamma_grid, equality_window_scan, plus_plus, window_angular_distance, zz_order_sweep};
use ordmix::random;

type Outcome = Result<String, String>;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ordmix"));
    cmd.stdout(Stdio::null());
    cmd
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ordmix-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    check(elapsed.as_secs_f64() < limit_s, || {
        format!("runtime {:.2} s exceeds {limit_s} s", elapsed.as_secs_f64())
    })
}

fn half_identity() -> ComplexMatrix {
    ComplexMatrix::identity(2).scale_real(0.5)
}

fn ket0() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]])
}

fn product_table() -> Outcome {
    let start = Instant::now();
    let out = scratch("product_table.csv");
    let status = bin()
        .args(["doeblin-table", "--pairs", "0.2:0.5,0.3:0.3,0.4:0.7", "--out", out.to_str().unwrap()])
        .status()
        .map_err(|e| e.to_string())?;
    check(status.success(), || format!("doeblin-table exited with {status}"))?;
    let elapsed = start.elapsed();
    let expected = [(0.2, 0.5, 0.10), (0.3, 0.3, 0.09), (0.4, 0.7, 0.28)];
    let text = fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    check(rows.len() == 3, || format!("expected 3 rows, got {}", rows.len()))?;
    let mut worst: f64 = 0.0;
    for (row, &(a, b, ab)) in rows.iter().zip(&expected) {
        for (x, w) in row[2..].iter().zip([a, b, ab]) {
            worst = worst.max((x - w).abs());
        }
        // full-precision values from the library
        let seed = dephasing(1.0, 3).unwrap();
        let r = product_bound_check(&dephasing(a, 3).unwrap(), &dephasing(b, 3).unwrap(), &seed, &seed, 1e-9)
            .map_err(|e| e.to_string())?;
        for (x, w) in [(r.delta_a, a), (r.delta_b, b), (r.delta_ab, ab)] {
            worst = worst.max((x - w).abs());
        }
    }
    check(worst < 1e-6, || format!("max deviation {worst:e}"))?;
    within(elapsed, 10.0)?;
    Ok(format!("max deviation {worst:.1e}, CLI runtime {:.2} s", elapsed.as_secs_f64()))
}

fn equality_window() -> Outcome {
    let start = Instant::now();
    let mut worst_val: f64 = 0.0;
    let mut worst_dist: f64 = 0.0;
    for k in 1..=100 {
        let theta = FRAC_PI_2 * k as f64 / 101.0;
        let scan = equality_window_scan(theta, 400, k).map_err(|e| e.to_string())?;
        worst_val = worst_val.max((scan.max_value - 0.5 * (2.0 * theta).sin().abs()).abs());
        worst_dist = worst_dist.max(window_angular_distance(&scan.argmax));
    }
    let zero = equality_window_scan(0.0, 400, 1).map_err(|e| e.to_string())?;
    check(worst_val <= 1e-6, || format!("max value deviation {worst_val:e}"))?;
    check(worst_dist <= 1e-3, || format!("argmax distance {worst_dist:e}"))?;
    check(zero.max_value <= 1e-12, || format!("theta=0 max {:e}", zero.max_value))?;
    within(start.elapsed(), 30.0)?;
    Ok(format!(
        "value dev {worst_val:.1e}, argmax dist {worst_dist:.1e}, theta=0 max {:.1e}, {:.2} s",
        zero.max_value,
        start.elapsed().as_secs_f64()
    ))
}

fn product_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for i in 0..200 {
        let db = if i % 4 == 3 { 3 } else { 2 };
        let pa = random::channel(2, 2, 1 + rng.random_range(1..4usize), &mut rng);
        let pb = random::channel(db, db, 1 + rng.random_range(1..db * db), &mut rng);
        let sa = random::cp_map(2, 2, rng.random_range(1..3usize), &mut rng);
        let sb = random::cp_map(db, db, rng.random_range(1..3usize), &mut rng);
        let r = product_bound_check(&pa, &pb, &sa, &sb, 1e-10).map_err(|e| e.to_string())?;
        let margin = r.delta_ab - r.delta_a * r.delta_b;
        min_margin = min_margin.min(margin);
        if margin < -1e-7 {
            violations += 1;
        }
    }
    check(violations == 0, || format!("{violations} violations"))?;
    Ok(format!("200 pairs, 0 violations, min margin {min_margin:.2e}"))
}

fn traceless_contraction() -> Outcome {
    let seed = replacement(&half_identity()).unwrap();
    let mut worst: f64 = 0.0;
    for lambda in [0.1, 0.3, 0.7] {
        let phi = depolarizing(lambda, 2).unwrap();
        let delta = doeblin_constant(&phi, &seed, 1e-12).map_err(|e| e.to_string())?.epsilon;
        let c = traceless_contraction_factor(&phi, delta, 100, 7).map_err(|e| e.to_string())?;
        worst = worst.max((c.max_ratio - (1.0 - lambda)).abs());
    }
    check(worst <= 1e-8, || format!("depolarizing ratio deviation {worst:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut failures = 0;
    let mut worst_slack = f64::NEG_INFINITY;
    for i in 0..100u64 {
        let d = if i % 2 == 0 { 2 } else { 3 };
        let tau = random::density_matrix(d, &mut rng);
        let mix: f64 = rng.random_range(0.05..0.95);
        let lambda = random::channel(d, d, rng.random_range(1..=d * d), &mut rng);
        let mut kraus: Vec<ComplexMatrix> = replacement(&tau).unwrap().scaled(mix).unwrap().kraus().to_vec();
        kraus.extend(lambda.scaled(1.0 - mix).unwrap().kraus().iter().cloned());
        let phi = Channel::new(kraus).unwrap();
        let delta = doeblin_constant(&phi, &replacement(&tau).unwrap(), 1e-12)
            .map_err(|e| e.to_string())?
            .epsilon;
        let c = traceless_contraction_factor(&phi, delta, 100, 1000 + i).map_err(|e| e.to_string())?;
        worst_slack = worst_slack.max(c.max_ratio - (1.0 - delta));
        if !c.holds {
            failures += 1;
        }
    }
    check(failures == 0, || format!("{failures} channels exceed 1 - delta"))?;
    Ok(format!(
        "depolarizing dev {worst:.1e}; 100 random channels, max ratio - (1 - delta) = {worst_slack:.2e}"
    ))
}

fn clopper_pearson() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in [1u64, 5, 10, 50, 1000] {
        for alpha in [0.01, 0.05, 0.2] {
            check(clopper_pearson_lower(0, n, alpha).unwrap() == 0.0, || "X=0 not zero".into())?;
            worst = worst.max((clopper_pearson_lower(n, n, alpha).unwrap() - alpha.powf(1.0 / n as f64)).abs());
        }
    }
    check(worst <= 1e-10, || format!("X=N deviation {worst:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut covered = 0;
    for _ in 0..2000 {
        let x = (0..50).filter(|_| rng.random::<f64>() < 0.3).count() as u64;
        if clopper_pearson_lower(x, 50, 0.05).unwrap() <= 0.3 {
            covered += 1;
        }
    }
    let coverage = covered as f64 / 2000.0;
    check(coverage >= 0.94, || format!("coverage {coverage}"))?;
    within(start.elapsed(), 20.0)?;
    Ok(format!(
        "closed-form dev {worst:.1e}, coverage {coverage:.4}, {:.2} s",
        start.elapsed().as_secs_f64()
    ))
}

fn end_to_end() -> Outcome {
    let lambda = 0.3;
    let projections = [ket0(), ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]])];
    let inst = lueders_instrument(&projections)
        .unwrap()
        .after(&depolarizing(lambda, 2).unwrap())
        .unwrap();
    let loop_channel = inst.sum_channel();
    let true_eps = doeblin_constant(&loop_channel, &replacement(&half_identity()).unwrap(), 1e-12)
        .map_err(|e| e.to_string())?
        .epsilon;
    check((true_eps - lambda).abs() < 1e-9, || format!("loop constant {true_eps}"))?;
    let traj = mixing_trajectory(&loop_channel, &ket0(), &half_identity(), 50).map_err(|e| e.to_string())?;
    let d0 = traj[0].1;
    let mut good = 0;
    for seed in 0..200u64 {
        let counts = simulate_counts(&inst, &qubit_stencils(), 1000, seed).map_err(|e| e.to_string())?;
        let cert = epsilon_hat(&counts, 0.05).map_err(|e| e.to_string())?;
        if traj.iter().all(|&(n, d)| d <= mixing_bound(&cert, n as u64, d0) + 1e-12) {
            good += 1;
        }
    }
    let frac = good as f64 / 200.0;
    check(frac >= 0.95, || format!("bound dominates in {good}/200 runs"))?;
    Ok(format!("bound dominates trajectory in {good}/200 runs"))
}

fn monitored_limit() -> Outcome {
    let start = Instant::now();
    let dts = [0.2, 0.1, 0.05, 0.025];
    let mut worst: f64 = 0.0;
    for kappa in [0.5, 1.0, 2.0] {
        let g = lindblad::depolarizing_generator(kappa).unwrap();
        let seed = replacement(&lindblad::stationary_state(&g).map_err(|e| e.to_string())?).unwrap();
        let rows = lindblad::limit_sweep(&g, &seed, &dts, 1.0, StepMode::Exact).map_err(|e| e.to_string())?;
        for r in rows {
            worst = worst.max((r.gamma - kappa).abs());
        }
    }
    check(worst <= 1e-9, || format!("exact-step gamma deviation {worst:e}"))?;
    let g = lindblad::depolarizing_generator(1.0).unwrap();
    let seed = replacement(&half_identity()).unwrap();
    let rows = lindblad::limit_sweep(&g, &seed, &dts, 1.0, StepMode::FirstOrder).map_err(|e| e.to_string())?;
    let errs: Vec<f64> = rows.iter().map(|r| r.embed_error).collect();
    let slope = lindblad::log_log_slope(&dts, &errs).map_err(|e| e.to_string())?;
    check((0.8..=1.2).contains(&slope), || format!("slope {slope}"))?;
    within(start.elapsed(), 30.0)?;
    Ok(format!(
        "gamma dev {worst:.1e}, embed_error slope {slope:.4}, {:.2} s",
        start.elapsed().as_secs_f64()
    ))
}

fn order_trend() -> Outcome {
    let rows = zz_order_sweep(&default_gamma_grid(16), 12, &plus_plus()).map_err(|e| e.to_string())?;
    check(rows[0].mean == 0.0, || format!("mean at gamma=0 is {:e}", rows[0].mean))?;
    check(rows.len() == 16, || format!("{} rows", rows.len()))?;
    check(rows.windows(2).all(|w| w[1].mean >= w[0].mean), || "mean column not nondecreasing".into())?;
    let a = scratch("sweep_a.csv");
    let b = scratch("sweep_b.csv");
    for p in [&a, &b] {
        let st = bin()
            .args(["order-sweep", "--gamma-steps", "16", "--ab-steps", "12", "--seed", "1", "--out", p.to_str().unwrap()])
            .status()
            .map_err(|e| e.to_string())?;
        check(st.success(), || format!("order-sweep exited with {st}"))?;
    }
    let (fa, fb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    check(fa == fb, || "repeated runs differ".into())?;
    let first = String::from_utf8(fa).unwrap().lines().nth(1).unwrap().to_string();
    check(first.starts_with("0.000000,0.000000,"), || format!("first row {first}"))?;
    Ok(format!(
        "mean 0 -> {:.6}, nondecreasing over 16 points, byte-identical reruns",
        rows[15].mean
    ))
}

fn diamond_harness() -> Outcome {
    let id = DiamondPreset::Identity.run(8, 1).map_err(|e| e.to_string())?;
    check(id.lower == 0.0 && id.verdict == Verdict::Holds, || {
        format!("identity preset lower {} verdict {}", id.lower, id.verdict)
    })?;
    let swap = DiamondPreset::SwapRankOne.instance();
    let sw = DiamondPreset::SwapRankOne.run(8, 1).map_err(|e| e.to_string())?;
    let theta = order_commutator_superop(&swap.phi_a, &swap.phi_b, &swap.psi).map_err(|e| e.to_string())?;
    let witness_value = evaluate_witness(&theta, &sw.witness).map_err(|e| e.to_string())?;
    check(sw.verdict == Verdict::Violated, || format!("swap verdict {}", sw.verdict))?;
    check(sw.theorem_rhs == 0.0, || format!("swap rhs {}", sw.theorem_rhs))?;
    check(witness_value > 1e-3, || format!("witness value {witness_value}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst_gap = f64::NEG_INFINITY;
    for i in 0..50u64 {
        let pa = dephasing(rng.random_range(0.0..1.0), 2).unwrap();
        let pb = dephasing(rng.random_range(0.0..1.0), 2).unwrap();
        let psi = Channel::unitary(random::haar_unitary(4, &mut rng)).unwrap();
        let theta = order_commutator_superop(&pa, &pb, &psi).map_err(|e| e.to_string())?;
        let b = diamond_bounds(&theta, 2, i).map_err(|e| e.to_string())?;
        worst_gap = worst_gap.max(b.lower - b.upper);
    }
    check(worst_gap <= 1e-9, || format!("lower exceeds upper by {worst_gap:e}"))?;
    Ok(format!(
        "identity holds (lower 0); swap violated, witness value {witness_value:.4} vs rhs 0; 50 random instances max(lower - upper) = {worst_gap:.2e}"
    ))
}

fn numerics_floor() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut count = 0;
    let mut worst = [0.0f64; 4];
    for _ in 0..200 {
        let d = rng.random_range(2..=8usize);
        let h = random::hermitian(d, &mut rng);
        let e = hermitian_eig(&h).map_err(|e| e.to_string())?;
        worst[0] = worst[0].max(e.reconstruct().max_abs_diff(&h));
        count += 1;
    }
    for _ in 0..100 {
        let (a, b) = (random::ginibre(2, 3, &mut rng), random::ginibre(3, 2, &mut rng));
        let (c, d) = (random::ginibre(3, 2, &mut rng), random::ginibre(2, 3, &mut rng));
        let lhs = &a.kron(&b) * &c.kron(&d);
        let rhs = (&a * &c).kron(&(&b * &d));
        worst[1] = worst[1].max(lhs.max_abs_diff(&rhs));
        count += 1;
    }
    for _ in 0..100 {
        let d = rng.random_range(2..=3usize);
        let h = random::hermitian(d, &mut rng);
        let jumps = (0..2).map(|_| random::ginibre(d, d, &mut rng).scale_real(0.5)).collect();
        let g = lindblad::GKLSGenerator::new(h, jumps).map_err(|e| e.to_string())?;
        let (s, t) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
        let a = lindblad::semigroup(&g, s).map_err(|e| e.to_string())?;
        let b = lindblad::semigroup(&g, t).map_err(|e| e.to_string())?;
        let ab = lindblad::semigroup(&g, s + t).map_err(|e| e.to_string())?;
        let rho = random::density_matrix(d, &mut rng);
        let lhs = a.apply(&b.apply(&rho).unwrap()).unwrap();
        worst[2] = worst[2].max(lhs.max_abs_diff(&ab.apply(&rho).unwrap()));
        count += 1;
    }
    let mut cptp_fail = 0;
    for _ in 0..100 {
        let (di, dout) = (rng.random_range(1..=3usize), rng.random_range(1..=3usize));
        let k = rng.random_range(di.div_ceil(dout)..=4usize.max(di.div_ceil(dout)));
        let ch = random::channel(di, dout, k, &mut rng);
        let par = compose_parallel(&ch, &depolarizing(0.5, 2).unwrap());
        let rep = par.is_cptp(1e-10);
        worst[3] = worst[3].max(rep.tp_residual);
        if !rep.is_cptp() {
            cptp_fail += 1;
        }
        count += 1;
    }
    check(worst[0] <= 1e-10, || format!("eig reconstruction {:e}", worst[0]))?;
    check(worst[1] <= 1e-10, || format!("kron mixed product {:e}", worst[1]))?;
    check(worst[2] <= 1e-9, || format!("semigroup composition {:e}", worst[2]))?;
    check(cptp_fail == 0, || format!("{cptp_fail} CPTP failures"))?;
    within(start.elapsed(), 60.0)?;
    Ok(format!(
        "{count} instances: eig {:.1e}, kron {:.1e}, semigroup {:.1e}, tp residual {:.1e}, {:.2} s",
        worst[0],
        worst[1],
        worst[2],
        worst[3],
        start.elapsed().as_secs_f64()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Dephasing product table", product_table),
        ("Equality window", equality_window),
        ("Product bound over random pairs", product_bound),
        ("Traceless contraction", traceless_contraction),
        ("Clopper-Pearson", clopper_pearson),
        ("End-to-end certificate soundness", end_to_end),
        ("Monitored limit", monitored_limit),
        ("Order-sweep trend", order_trend),
        ("Diamond harness", diamond_harness),
        ("Numerics floor", numerics_floor),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

use std::time::{Duration, Instant};

use hbac::config::Config;
use hbac::cooling::{asymptotic_polarization, run_ppa, BathParameters, DiagonalState};
use hbac::experiment::{
    fit_error_model, protocol_fidelity, reference_observations, run_protocol, ErrorModel,
    ProtocolSchedule,
};
use hbac::pulse::optimize_pulse;
use hbac::spin::{
    natural_hamiltonian, pauli, peak_transfer_time, register_hamiltonian, toggling_average,
    transfer_efficiency, Axis, CouplingForm, Operator, Species, SpinSystem, ToggleSequence,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let ok = out.ok && elapsed < limit;
    println!(
        "{} {id}. {name}: {} [{:.2?} of {:?}]",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed,
        limit
    );
    ok
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn six_step_ideal() -> Outcome {
    let p = 2.4e-5;
    let bath = BathParameters::ideal(p).unwrap();
    let reports = run_protocol(&ProtocolSchedule::six_step(), &bath, &ErrorModel::ideal()).unwrap();
    let q1 = reports.last().unwrap().polarizations[0] * p;
    let err = rel(q1, 1.5 * p);
    Outcome {
        ok: err < 1e-6,
        detail: format!("P(C1) = {:.9}·P', relative error {err:.1e}", q1 / p),
    }
}

fn three_qubit_asymptote() -> Outcome {
    let p = 2.4e-5;
    let lim = asymptotic_polarization(3, p).unwrap();
    let err = rel(lim.limit, 2.0 * p);
    Outcome {
        ok: err < 1e-3,
        detail: format!("limit {:.8}·P' after {} rounds", lim.limit / p, lim.rounds),
    }
}

fn scaling_law() -> Outcome {
    let p = 1e-6;
    let mut ok = true;
    let mut ratios = Vec::new();
    for n in 2..=6 {
        let lim = asymptotic_polarization(n, p).unwrap();
        let expected = (1u64 << (n - 2)) as f64 * p;
        ok &= rel(lim.limit, expected) < 1e-2;
        ratios.push(format!("{:.4}", lim.limit / p));
    }
    let bath = BathParameters::ideal(0.2).unwrap();
    let traj = run_ppa(6, &bath, 6, 100_000, 1e-12).unwrap();
    ok &= traj.converged && traj.asymptote >= 0.99;
    Outcome {
        ok,
        detail: format!(
            "limits/P' for n=2..6 = [{}]; n=6 at P'=0.2 reaches {:.5}",
            ratios.join(", "),
            traj.asymptote
        ),
    }
}

fn swap_timing() -> Outcome {
    let d = 19.0;
    let sys = SpinSystem::<f64>::from_couplings(
        &[("Cm", Species::Carbon), ("Hm1", Species::Proton)],
        &[(1, 2, d)],
    )
    .unwrap();
    // zero-quantum doublet {|01>, |10>} with flip-flop element D/3
    let rabi = |t: f64| (2.0 * std::f64::consts::PI * d / 3.0 * t).sin().powi(2);
    let tau = 3.0 / (4.0 * d);
    let curve_dev = (0..=200)
        .map(|k| k as f64 * 1e-4 / 200.0)
        .map(|t| (transfer_efficiency(&sys, 2, 1, t).unwrap() - rabi(t)).abs())
        .fold(0.0, f64::max);
    let peak = peak_transfer_time(&sys, 2, 1, 0.1, 401).unwrap();
    let ok = (peak.time - tau).abs() < 1e-6
        && (peak.efficiency - 1.0).abs() < 1e-6
        && (rabi(peak.time) - 1.0).abs() < 1e-6
        && curve_dev < 1e-9;
    Outcome {
        ok,
        detail: format!(
            "tau = {:.4} us (oracle {:.4} us), eta = {:.9}, curve deviation {curve_dev:.1e}",
            peak.time * 1e3,
            tau * 1e3,
            peak.efficiency
        ),
    }
}

fn product(a: (usize, Axis), b: (usize, Axis), m: usize) -> Operator<f64> {
    Operator::from_matrix(
        pauli(a.0, a.1, m).unwrap().matrix() * pauli(b.0, b.1, m).unwrap().matrix(),
    )
    .unwrap()
}

fn bilinear(ax: Axis) -> Operator<f64> {
    product((1, ax), (2, ax), 2)
}

fn average_hamiltonian_identities() -> Outcome {
    let d = 19.0;
    let hetero = SpinSystem::<f64>::from_couplings(
        &[("Cm", Species::Carbon), ("Hm1", Species::Proton)],
        &[(1, 2, d)],
    )
    .unwrap();
    let avg = toggling_average(
        &natural_hamiltonian(&hetero).unwrap(),
        &ToggleSequence::balanced_xyz(0.06).unwrap(),
        &hetero.species(),
    )
    .unwrap();
    let exchange = (bilinear(Axis::X) + bilinear(Axis::Y) + bilinear(Axis::Z)).scale(d / 3.0 / 2.0);
    let dev_xyz = avg.max_abs_diff(&exchange);

    let dh = 1.5;
    let homo = SpinSystem::<f64>::from_couplings(
        &[("C1", Species::Carbon), ("C2", Species::Carbon)],
        &[(1, 2, dh)],
    )
    .unwrap();
    let secular =
        (bilinear(Axis::Z).scale(2.0) - bilinear(Axis::X) - bilinear(Axis::Y)).scale(dh / 4.0);
    let locked =
        (bilinear(Axis::X).scale(2.0) - bilinear(Axis::Y) - bilinear(Axis::Z)).scale(dh / 4.0);
    let h = register_hamiltonian(&homo, CouplingForm::Strong).unwrap();
    let dev_h = h.max_abs_diff(&secular);
    let avg = toggling_average(
        &h,
        &ToggleSequence::spin_lock_x(0.01).unwrap(),
        &homo.species(),
    )
    .unwrap();
    let dev_lock = avg.max_abs_diff(&locked.scale(-0.5));
    Outcome {
        ok: dev_xyz < 1e-12 && dev_h < 1e-12 && dev_lock < 1e-12,
        detail: format!("xyz vs exchange {dev_xyz:.1e}, spin-lock vs -1/2 secular {dev_lock:.1e}"),
    }
}

fn experimental_reproduction() -> Outcome {
    let bath = BathParameters::ideal(2.4e-5).unwrap();
    let schedule = ProtocolSchedule::six_step();
    let fit = fit_error_model(&reference_observations(), &schedule, &bath).unwrap();
    let reports = run_protocol(&schedule, &bath, &fit.model).unwrap();
    let step5 = &reports[4].polarizations;
    let step6 = reports[5].polarizations[0];
    let summary = protocol_fidelity(&reports).unwrap();
    let boost = 100.0 * summary.boost;
    let ok = step5
        .iter()
        .zip([0.88, 0.83, 0.76])
        .all(|(m, t)| (m - t).abs() <= 0.05)
        && (step6 - 1.22).abs() <= 0.03
        && (boost - 48.0).abs() <= 3.0
        && (summary.fidelity - 0.81).abs() <= 0.01;
    Outcome {
        ok,
        detail: format!(
            "c = {:.4}, g = {:.4}, r = {:.4}; step 5 = ({:.3}, {:.3}, {:.3}), step 6 = {step6:.3}, boost {boost:.1}%, F = {:.4}",
            fit.model.refresh_decay(),
            fit.model.gate_efficiency(),
            fit.model.register_retention(),
            step5[0],
            step5[1],
            step5[2],
            summary.fidelity
        ),
    }
}

// Heap's algorithm over all 8! relabellings of the basis.
fn brute_force_best_q1(weights: &[i64; 8]) -> i64 {
    let mut perm = [0usize, 1, 2, 3, 4, 5, 6, 7];
    let score = |p: &[usize; 8]| -> i64 {
        (0..8)
            .map(|b| if p[b] < 4 { weights[b] } else { -weights[b] })
            .sum()
    };
    let mut best = score(&perm);
    let mut c = [0usize; 8];
    let mut i = 1;
    while i < 8 {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            perm.swap(j, i);
            best = best.max(score(&perm));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

fn sort_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let mut weights: [i64; 8] = std::array::from_fn(|_| rng.gen_range(0..=1000));
        weights[rng.gen_range(0..8)] += 1;
        let total: i64 = weights.iter().sum();
        let probs = weights.iter().map(|&w| Ratio::new(w, total)).collect();
        let state = DiagonalState::<Ratio<i64>>::new(3, probs).unwrap();
        let (sorted, _) = state.ppa_sort();
        let q1 = sorted.polarization(1).unwrap();
        if q1 != Ratio::new(brute_force_best_q1(&weights), total) {
            mismatches += 1;
        }
    }
    Outcome {
        ok: mismatches == 0,
        detail: format!("{mismatches} mismatches over 1000 states x 40320 permutations"),
    }
}

fn pulse_optimization() -> Outcome {
    let cfg = Config::reference();
    let sys = cfg.system.subsystem(&cfg.pulse.register).unwrap();
    assert_eq!(cfg.pulse.optimizer.coupling_form, CouplingForm::Strong);
    let target = cfg.pulse.target.permutation(sys.len()).unwrap().unwrap();
    let dist = cfg.pulse.distribution().unwrap();
    let a = optimize_pulse(&sys, &target, &cfg.pulse.optimizer, &dist).unwrap();
    let b = optimize_pulse(&sys, &target, &cfg.pulse.optimizer, &dist).unwrap();
    let bits = |p: &hbac::pulse::OptimizedPulse| -> Vec<u64> {
        p.pulse
            .segments()
            .iter()
            .flat_map(|s| [s.duration_ms, s.amplitude_khz, s.phase_rad, s.offset_khz])
            .chain([p.fidelity.mean, p.fidelity.worst, p.objective])
            .map(f64::to_bits)
            .collect()
    };
    let identical = bits(&a) == bits(&b);
    Outcome {
        ok: a.fidelity.mean >= 0.99 && identical,
        detail: format!(
            "mean fidelity {:.5} (worst {:.5}) over {} RF points, {} evaluations, repeat identical: {identical}",
            a.fidelity.mean,
            a.fidelity.worst,
            dist.points().len(),
            a.evaluations
        ),
    }
}

#[test]
fn acceptance() {
    let results = [
        check(
            1,
            "six-step ideal protocol",
            Duration::from_secs(1),
            six_step_ideal,
        ),
        check(
            2,
            "three-qubit asymptote",
            Duration::from_secs(1),
            three_qubit_asymptote,
        ),
        check(3, "scaling law", Duration::from_secs(10), scaling_law),
        check(4, "swap timing", Duration::from_secs(1), swap_timing),
        check(
            5,
            "average-Hamiltonian identities",
            Duration::from_secs(1),
            average_hamiltonian_identities,
        ),
        check(
            6,
            "experimental reproduction",
            Duration::from_secs(5),
            experimental_reproduction,
        ),
        check(
            7,
            "sort optimality",
            Duration::from_secs(60),
            sort_optimality,
        ),
        check(
            8,
            "pulse optimization",
            Duration::from_secs(300),
            pulse_optimization,
        ),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

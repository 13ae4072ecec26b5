use hbac::cooling::{BathParameters, DiagonalState, Permutation};
use hbac::experiment::{
    fit_error_model, fit_error_model_with, gate_state_fidelity, predict, protocol_fidelity,
    reference_observations, run_protocol, ErrorModel, FreeParameters, Observation,
    ProtocolSchedule, Quantity,
};

fn bath() -> BathParameters<f64> {
    BathParameters::ideal(2.4e-5).unwrap()
}

fn final_q1(m: &ErrorModel) -> f64 {
    run_protocol(&ProtocolSchedule::six_step(), &bath(), m).unwrap()[5].polarizations[0]
}

#[test]
fn ideal_run_matches_engine_step_by_step() {
    let p = 2.4e-5;
    let b = bath();
    let reports = run_protocol(&ProtocolSchedule::six_step(), &b, &ErrorModel::ideal()).unwrap();
    let mut s = DiagonalState::<f64>::maximally_mixed(3).unwrap();
    let gates = [
        None,
        Some(Permutation::swap_gate(3, 2, 3).unwrap()),
        None,
        Some(Permutation::swap_gate(3, 1, 3).unwrap()),
        None,
        Some(Permutation::three_bit_compression(3, (1, 2, 3)).unwrap()),
    ];
    for (report, gate) in reports.iter().zip(&gates) {
        s = match gate {
            None => s.refresh(3, &b).unwrap(),
            Some(g) => s.apply(g).unwrap(),
        };
        let expected: Vec<f64> = s.polarizations().iter().map(|x| x / p).collect();
        assert_eq!(report.polarizations, expected);
    }
}

#[test]
fn final_polarization_is_monotone_in_each_parameter() {
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    for &other in &grid {
        let mut prev = f64::INFINITY;
        for &c in &grid {
            let v = final_q1(&ErrorModel::new(c * 0.3, other, 1.0).unwrap());
            assert!(v <= prev + 1e-12, "c sweep at g={other}");
            prev = v;
        }
        let mut prev = f64::NEG_INFINITY;
        for &g in &grid {
            let v = final_q1(&ErrorModel::new(other * 0.3, g, 1.0).unwrap());
            assert!(v >= prev - 1e-12, "g sweep at c={}", other * 0.3);
            prev = v;
        }
        let mut prev = f64::NEG_INFINITY;
        for &r in &grid {
            let v = final_q1(&ErrorModel::new(other * 0.3, 1.0, r).unwrap());
            assert!(v >= prev - 1e-12, "r sweep at c={}", other * 0.3);
            prev = v;
        }
    }
}

#[test]
fn step_five_bounded_by_delivery() {
    for (c, g, r) in [
        (0.0, 1.0, 1.0),
        (0.06, 1.0, 0.91),
        (0.1, 0.9, 0.8),
        (0.3, 0.5, 1.0),
    ] {
        let m = ErrorModel::new(c, g, r).unwrap();
        let step5 = &run_protocol(&ProtocolSchedule::six_step(), &bath(), &m).unwrap()[4];
        // C1 holds refresh 2, C2 refresh 1, Cm refresh 3
        for (q, k) in [(0, 2), (1, 1), (2, 3)] {
            assert!(
                step5.polarizations[q] <= m.refresh_delivery(k) + 1e-9,
                "{m:?} {q} {:?}",
                step5.polarizations
            );
        }
    }
}

#[test]
fn fit_is_a_projection() {
    let schedule = ProtocolSchedule::six_step();
    let first = fit_error_model(&reference_observations(), &schedule, &bath()).unwrap();
    let obs = reference_observations();
    let predicted = predict(&obs, &schedule, &bath(), &first.model).unwrap();
    let regenerated: Vec<Observation> = obs
        .iter()
        .zip(predicted)
        .map(|(o, value)| Observation { value, ..*o })
        .collect();
    let second = fit_error_model(&regenerated, &schedule, &bath()).unwrap();
    let (a, b) = (first.model, second.model);
    assert!(
        (a.refresh_decay() - b.refresh_decay()).abs() < 1e-9,
        "{a:?} {b:?}"
    );
    assert!(
        (a.register_retention() - b.register_retention()).abs() < 1e-9,
        "{a:?} {b:?}"
    );
    assert!(
        (a.gate_efficiency() - b.gate_efficiency()).abs() < 1e-9,
        "{a:?} {b:?}"
    );
}

#[test]
fn fit_reproduces_measured_values() {
    let schedule = ProtocolSchedule::six_step();
    let fit = fit_error_model(&reference_observations(), &schedule, &bath()).unwrap();
    let reports = run_protocol(&schedule, &bath(), &fit.model).unwrap();
    println!(
        "{fit:?}\n{:?}\n{:?}",
        reports[4].polarizations, reports[5].polarizations
    );
    for (p, want) in reports[4].polarizations.iter().zip([0.88, 0.83, 0.76]) {
        assert!((p - want).abs() <= 0.03, "{p} vs {want}");
    }
    assert!((reports[5].polarizations[0] - 1.22).abs() <= 0.03);
    let f = protocol_fidelity(&reports).unwrap();
    assert!((f.boost * 100.0 - 48.0).abs() <= 3.0, "{f:?}");
    assert!((f.fidelity - 0.81).abs() <= 0.01, "{f:?}");
    let gate = gate_state_fidelity(&schedule, &bath(), &fit.model, 6).unwrap();
    assert!((gate - 0.96).abs() <= 0.03, "{gate}");
}

#[test]
fn polarization_only_fits_miss_a_reported_value() {
    let schedule = ProtocolSchedule::six_step();
    let polarizations: Vec<Observation> = reference_observations()
        .into_iter()
        .filter(|o| o.quantity != Quantity::GateFidelity)
        .collect();
    // ideal gates: the compression scores a perfect fidelity
    let fit = fit_error_model_with(
        &polarizations,
        &schedule,
        &bath(),
        FreeParameters::DecayAndRetention,
    )
    .unwrap();
    let gate = gate_state_fidelity(&schedule, &bath(), &fit.model, 6).unwrap();
    assert!((gate - 1.0).abs() < 1e-9);
    // no crosstalk: the final qubit falls short of the measured value
    let fit = fit_error_model_with(
        &polarizations,
        &schedule,
        &bath(),
        FreeParameters::DecayAndGate,
    )
    .unwrap();
    let reports = run_protocol(&schedule, &bath(), &fit.model).unwrap();
    let f = protocol_fidelity(&reports).unwrap();
    assert!((f.fidelity - 0.81).abs() > 0.01, "{f:?}");
}

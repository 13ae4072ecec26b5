use hbac::cooling::{run_ppa, BathParameters, DiagonalState, Permutation, Polarization};
use hbac::RationalState;
use num_rational::Ratio;
use proptest::prelude::*;

fn state(n: usize) -> impl Strategy<Value = DiagonalState<f64>> {
    prop::collection::vec(0.0..1.0f64, 1 << n).prop_filter_map("nonzero mass", move |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-6)
            .then(|| DiagonalState::new(n, w.iter().map(|x| x / total).collect()).unwrap())
    })
}

fn permutation(len: usize) -> impl Strategy<Value = Permutation> {
    Just((0..len).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|m| Permutation::new(m).unwrap())
}

fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    // Heap's algorithm
    let mut a: Vec<usize> = (0..k).collect();
    let mut c = vec![0; k];
    let mut out = vec![a.clone()];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn brute_force_best_q1(probs: &[f64]) -> f64 {
    let half = probs.len() / 2;
    all_permutations(probs.len())
        .iter()
        .map(|m| {
            let up: f64 = (0..probs.len())
                .filter(|&b| m[b] < half)
                .map(|b| probs[b])
                .sum();
            2.0 * up - 1.0
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Qubit-1 polarization of a uniform product state after a basis permutation,
/// enumerated directly from the 8 outcome probabilities.
fn enumerate_q1(eps: f64, perm: &Permutation) -> f64 {
    let mut pol = 0.0;
    for b in 0..8usize {
        let p: f64 = (0..3)
            .map(|q| {
                let bit = (b >> (2 - q)) & 1;
                (1.0 + if bit == 0 { eps } else { -eps }) / 2.0
            })
            .product();
        pol += if perm.image(b) & 4 == 0 { p } else { -p };
    }
    pol
}

#[test]
fn compression_identity_by_enumeration() {
    let c = Permutation::three_bit_compression(3, (1, 2, 3)).unwrap();
    for eps in [0.01, 0.1, 0.5, 0.9] {
        let closed = (3.0 * eps - eps * eps * eps) / 2.0;
        let s = DiagonalState::<f64>::from_polarizations(&[eps, eps, eps]).unwrap();
        let via_gate = s.apply(&c).unwrap().polarization(1).unwrap();
        let (sorted, _) = s.ppa_sort();
        let via_sort = sorted.polarization(1).unwrap();
        let enumerated = enumerate_q1(eps, &c);
        for v in [via_gate, via_sort] {
            assert!((v - closed).abs() < 1e-14, "eps {eps}: {v} vs {closed}");
            assert!((v - enumerated).abs() < 1e-14);
        }
    }
}

#[test]
fn six_step_protocol_is_exact_in_rationals() {
    let p = Ratio::new(1i64, 1000);
    let bath = BathParameters::new(Polarization::new(p).unwrap(), Ratio::from_integer(1)).unwrap();
    let mut s = RationalState::maximally_mixed(3).unwrap();
    s = s.refresh(3, &bath).unwrap();
    s = s.apply(&Permutation::swap_gate(3, 2, 3).unwrap()).unwrap();
    s = s.refresh(3, &bath).unwrap();
    s = s.apply(&Permutation::swap_gate(3, 1, 3).unwrap()).unwrap();
    s = s.refresh(3, &bath).unwrap();
    s = s
        .apply(&Permutation::three_bit_compression(3, (1, 2, 3)).unwrap())
        .unwrap();
    let expected = (Ratio::from_integer(3) * p - p * p * p) / Ratio::from_integer(2);
    assert_eq!(s.polarization(1).unwrap(), expected);
    assert_eq!(s.total(), Ratio::from_integer(1));
}

#[test]
fn single_precision_engine_agrees() {
    let b32 = BathParameters::<f32>::ideal(0.05).unwrap();
    let b64 = BathParameters::<f64>::ideal(0.05).unwrap();
    let a = run_ppa(3, &b32, 3, 10_000, 1e-6).unwrap();
    let b = run_ppa(3, &b64, 3, 10_000, 1e-12).unwrap();
    assert!((a.asymptote as f64 - b.asymptote).abs() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operations_preserve_normalization(s in state(3), perm in permutation(8), p in -1.0..1.0f64, q in 1usize..=3) {
        let bath = BathParameters::ideal(p).unwrap();
        for t in [
            s.refresh(q, &bath).unwrap(),
            s.apply(&perm).unwrap(),
            s.ppa_sort().0,
            s.depolarize_qubit(q, &0.7).unwrap(),
        ] {
            prop_assert!((t.total() - 1.0).abs() < 1e-12);
            prop_assert!(t.probs().iter().all(|&x| (0.0..=1.0).contains(&x)));
        }
    }

    #[test]
    fn sort_is_optimal_for_two_qubits(s in state(2)) {
        let (sorted, _) = s.ppa_sort();
        let best = brute_force_best_q1(s.probs());
        prop_assert!((sorted.polarization(1).unwrap() - best).abs() < 1e-12);
    }

    #[test]
    fn sort_returns_realizing_permutation(s in state(3)) {
        let (sorted, perm) = s.ppa_sort();
        prop_assert_eq!(s.apply(&perm).unwrap(), sorted.clone());
        prop_assert!(sorted.probs().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn permutations_compose_and_invert(s in state(3), a in permutation(8), b in permutation(8)) {
        let ab = a.then(&b).unwrap();
        prop_assert_eq!(s.apply(&a).unwrap().apply(&b).unwrap(), s.apply(&ab).unwrap());
        prop_assert_eq!(s.apply(&a).unwrap().apply(&a.inverse()).unwrap(), s.clone());
        prop_assert!(a.then(&a.inverse()).unwrap().is_identity());
        let id = Permutation::identity(8);
        prop_assert_eq!(a.then(&id).unwrap(), a.clone());
    }

    #[test]
    fn swap_exchanges_marginals(p1 in -1.0..1.0f64, p2 in -1.0..1.0f64) {
        let s = DiagonalState::<f64>::from_polarizations(&[p1, p2]).unwrap();
        let t = s.apply(&Permutation::swap_gate(1, 2, 2).unwrap()).unwrap();
        prop_assert!((t.polarization(1).unwrap() - p2).abs() < 1e-12);
        prop_assert!((t.polarization(2).unwrap() - p1).abs() < 1e-12);
    }

    #[test]
    fn ideal_ppa_is_monotone(n in 2usize..=5, p in 1e-4..0.5f64) {
        let t = run_ppa(n, &BathParameters::ideal(p).unwrap(), n, 5_000, 1e-12).unwrap();
        let q1: Vec<f64> = t.target_series().copied().collect();
        prop_assert!(q1.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }

    #[test]
    fn refresh_sets_delivered_polarization(s in state(3), ph in 0.0..1.0f64, eta in 0.0..1.0f64, q in 1usize..=3) {
        let bath = BathParameters::new(Polarization::new(ph).unwrap(), eta).unwrap();
        let t = s.refresh(q, &bath).unwrap();
        prop_assert!((t.polarization(q).unwrap() - eta * ph).abs() < 1e-12);
        for other in (1..=3).filter(|&o| o != q) {
            prop_assert!((t.polarization(other).unwrap() - s.polarization(other).unwrap()).abs() < 1e-12);
        }
    }
}

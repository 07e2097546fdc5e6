use swapkit::chain::{evaluate_chain, order_independence_check, order_spread, FusionTree};
use swapkit::states::random_spectrum;
use swapkit::verify::counterexample_finals;
use swapkit::Spectrum;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn four_dim_chain_values_are_stable() {
    let (l, r) = counterexample_finals().unwrap();
    let left = [0.8030, 0.5385, 0.2548, 0.0152];
    let right = [0.8144, 0.5180, 0.2612, 0.0152];
    for (got, want) in [(l.values(), left), (r.values(), right)] {
        for (x, y) in got.iter().zip(want) {
            assert!((x - y).abs() < 5e-5, "{got:?}");
        }
    }
    // Same G-concurrence either way: only the shape of the spectrum moves.
    assert!((l.g_concurrence() - r.g_concurrence()).abs() < 1e-12);
    assert!(l.max_abs_diff(&r) > 0.02);
}

#[test]
fn all_parenthesizations_agree_in_d3() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let links: Vec<Spectrum> = (0..4).map(|_| random_spectrum(3, &mut rng, 1e-3)).collect();
        assert_eq!(FusionTree::all(4).len(), 5);
        assert!(order_spread(&links).unwrap() < 1e-8);
    }
}

#[test]
fn maximal_links_stay_maximal() {
    let links = vec![Spectrum::maximal(4); 3];
    for t in FusionTree::all(3) {
        let out = evaluate_chain(&links, &t).unwrap();
        assert!(out.final_spectrum.approx_eq(&Spectrum::maximal(4), 1e-12));
    }
}

#[test]
fn sweeps_by_dimension() {
    assert!(order_independence_check::<f64>(2, 4, 200, 1).unwrap().holds);
    assert!(order_independence_check::<f64>(3, 3, 200, 1).unwrap().holds);
    let r = order_independence_check::<f64>(4, 3, 50, 1).unwrap();
    assert!(!r.holds && r.witness.is_some());
}

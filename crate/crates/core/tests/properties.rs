use proptest::prelude::*;
use swapkit::catalog::{fourier, fourier_unitary};
use swapkit::chain::fuse;
use swapkit::io::{from_json, to_json};
use swapkit::kernel::dephase_canonical;
use swapkit::measurements::gour_basis;
use swapkit::swap::swap;
use swapkit::{Diagonal, ExponentMatrix, Spectrum};

fn spectrum(d: usize) -> impl Strategy<Value = Spectrum> {
    prop::collection::vec(0.01f64..1.0, d).prop_map(|w| Spectrum::from_probabilities(&w).unwrap())
}

fn pair() -> impl Strategy<Value = (Spectrum, Spectrum)> {
    (2usize..=4).prop_flat_map(|d| (spectrum(d), spectrum(d)))
}

fn phases(d: usize) -> impl Strategy<Value = Diagonal> {
    prop::collection::vec(-3.2f64..3.2, d).prop_map(Diagonal::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fourier_swaps_are_uniform_and_deterministic((a, b) in pair()) {
        let basis = gour_basis(&fourier_unitary::<f64>(a.dim())).unwrap();
        let r = swap(&a, &b, &basis).unwrap();
        prop_assert!(r.uniform_probs);
        prop_assert!(r.lu_deterministic);
        prop_assert!(r.g_factorization_residual < 1e-9);
        prop_assert!((r.probability_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fusion_is_commutative((a, b) in pair()) {
        prop_assert!(fuse(&a, &b).unwrap().approx_eq(&fuse(&b, &a).unwrap(), 1e-10));
    }

    #[test]
    fn fusion_multiplies_g_concurrence((a, b) in pair()) {
        let g = fuse(&a, &b).unwrap().g_concurrence();
        prop_assert!((g - a.g_concurrence() * b.g_concurrence()).abs() < 1e-10);
    }

    #[test]
    fn dephasing_strips_diagonal_dressing((l, r) in (phases(5), phases(5))) {
        let f = fourier_unitary::<f64>(5);
        let (c, _, _) = dephase_canonical(&Diagonal::sandwich(&l, &f, &r)).unwrap();
        prop_assert!(c.approx_eq(&f, 1e-10));
    }

    #[test]
    fn exponent_canonical_ignores_negation(sigma in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
                                           tau in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let m: ExponentMatrix = fourier(5).permuted(&sigma, &tau);
        let c = m.pc_canonical();
        prop_assert_eq!(m.negated().pc_canonical(), c.clone());
        prop_assert_eq!(c.dephased(), c);
    }

    #[test]
    fn spectra_survive_json(a in (2usize..6).prop_flat_map(spectrum)) {
        let back: Spectrum = from_json(&to_json(&a).unwrap()).unwrap();
        prop_assert!(back.approx_eq(&a, 1e-15));
    }
}

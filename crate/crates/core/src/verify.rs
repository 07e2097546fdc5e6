//! Numerical acceptance checks. Each check returns a [`CriterionResult`];
//! the acceptance test target and the CLI's `verify-all` both print them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{family_u4, fourier_unitary};
use crate::chain::{evaluate_chain, four_dim_counterexample, order_independence_check, FusionTree};
use crate::error::Result;
use crate::kernel::DiagonalUnitary;
use crate::measurements::{gour_basis, MeasurementBasis};
use crate::noise::{mixed_lu_deterministic, noisy_swap, NoiseModel};
use crate::pc::{affine_pair_count, census, cross_ratio, epsilon, stabilizer_count, symmetric_pair_count, totient};
use crate::scalar::Complex;
use crate::states::{random_spectrum, random_state, reduce_to_diagonal, DiagonalSpectrum, StateKind};
use crate::swap::{oracle_swap, swap};

/// Published final spectra of the order-dependent `d = 4` chain.
pub const COUNTEREXAMPLE_LEFT: [f64; 4] = [0.856, 0.511, 0.070, 0.013];
pub const COUNTEREXAMPLE_RIGHT: [f64; 4] = [0.879, 0.471, 0.075, 0.013];
pub const COUNTEREXAMPLE_SLACK: f64 = 5e-4;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20240611;

/// Criteria whose published values cannot be reproduced; see the README.
pub const KNOWN_UNREPRODUCIBLE: &[u8] = &[6];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: u8, name: &'static str, passed: bool, detail: String) -> Self {
        CriterionResult { id, name, passed, detail }
    }

    fn from_result(id: u8, name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(id, name, passed, detail),
            Err(e) => Self::new(id, name, false, format!("error: {e}")),
        }
    }

    /// `PASS [n] name: detail` or `FAIL …`.
    pub fn line(&self) -> String {
        format!("{} [{}] {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }

    pub fn known_unreproducible(&self) -> bool {
        KNOWN_UNREPRODUCIBLE.contains(&self.id)
    }
}

fn instance_seed(seed: u64, d: usize, k: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((d as u64) << 40) ^ k as u64
}

fn fourier_basis(d: usize) -> MeasurementBasis<f64> {
    gour_basis(&fourier_unitary::<f64>(d)).expect("Fourier seed is Hadamard")
}

/// Haar-random pure inputs reduced to their Schmidt data.
fn haar_pair(d: usize, seed: u64) -> Result<(DiagonalSpectrum<f64>, DiagonalSpectrum<f64>)> {
    let a = reduce_to_diagonal(&random_state::<f64>(d, seed, StateKind::HaarPure)?).0;
    let b = reduce_to_diagonal(&random_state::<f64>(d, seed ^ 0x5555, StateKind::HaarPure)?).0;
    Ok((a, b))
}

pub const CENSUS_EXPECTED: [(usize, u64, u64); 5] = [(2, 1, 4), (3, 1, 18), (4, 9, 32), (5, 72, 50), (6, 3600, 72)];

pub fn census_table() -> CriterionResult {
    let r = (|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for (d, classes, size) in CENSUS_EXPECTED {
            let c = census(d)?;
            let fact: u64 = (1..=d as u64).product();
            let orbit = fact * fact / totient(d) as u64;
            ok &= c.class_count == classes && c.class_size == size && c.orbit_size == orbit;
            parts.push(format!("d={d}: {} classes x {} = {}", c.class_count, c.class_size, c.orbit_size));
        }
        Ok((ok, parts.join("; ")))
    })();
    CriterionResult::from_result(1, "PC-class census", r)
}

#[derive(Debug, Clone, Copy, Default)]
struct SweepStats {
    worst_prob: f64,
    worst_schmidt: f64,
    worst_g: f64,
    uniform: bool,
    deterministic: bool,
    instances: usize,
}

/// Criteria 2–4 share one sweep: `d ∈ {2,3,4,5}`, 100 inputs each.
fn fourier_sweep(seed: u64, per_dim: usize) -> Result<SweepStats> {
    let jobs: Vec<(usize, usize)> = (2..=5).flat_map(|d| (0..per_dim).map(move |k| (d, k))).collect();
    let bases: Vec<_> = (0..=5).map(|d| if d >= 2 { Some(fourier_basis(d)) } else { None }).collect();
    let per = jobs
        .par_iter()
        .map(|&(d, k)| {
            let (a, b) = haar_pair(d, instance_seed(seed, d, k))?;
            let r = swap(&a, &b, bases[d].as_ref().unwrap())?;
            let target = 1.0 / (d * d) as f64;
            let worst_prob = r.outcomes.iter().map(|o| (o.probability - target).abs()).fold(0.0, f64::max);
            let s0 = r.outcomes[0].schmidt.clone().unwrap();
            let worst_schmidt =
                r.outcomes.iter().map(|o| o.schmidt.as_ref().map_or(f64::INFINITY, |s| s.max_abs_diff(&s0))).fold(0.0, f64::max);
            Ok(SweepStats {
                worst_prob,
                worst_schmidt,
                worst_g: r.g_factorization_residual,
                uniform: r.uniform_probs,
                deterministic: r.lu_deterministic,
                instances: 1,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per.into_iter().fold(
        SweepStats { uniform: true, deterministic: true, ..Default::default() },
        |acc, s| SweepStats {
            worst_prob: acc.worst_prob.max(s.worst_prob),
            worst_schmidt: acc.worst_schmidt.max(s.worst_schmidt),
            worst_g: acc.worst_g.max(s.worst_g),
            uniform: acc.uniform && s.uniform,
            deterministic: acc.deterministic && s.deterministic,
            instances: acc.instances + 1,
        },
    ))
}

pub fn uniform_probabilities(seed: u64) -> CriterionResult {
    let r = fourier_sweep(seed, 100).map(|s| {
        (s.uniform && s.worst_prob <= 1e-9, format!("{} instances, max |p_i - 1/d^2| = {:.2e}", s.instances, s.worst_prob))
    });
    CriterionResult::from_result(2, "uniform probabilities", r)
}

pub fn universal_lu_determinism(seed: u64) -> CriterionResult {
    let r = fourier_sweep(seed, 100).map(|s| {
        (
            s.deterministic && s.worst_schmidt <= 1e-8,
            format!("{} instances, max Schmidt spread = {:.2e}", s.instances, s.worst_schmidt),
        )
    });
    CriterionResult::from_result(3, "universal LU-determinism", r)
}

pub fn g_concurrence_factorization(seed: u64) -> CriterionResult {
    let r = fourier_sweep(seed, 100)
        .map(|s| (s.worst_g < 1e-9, format!("{} instances, max residual = {:.2e}", s.instances, s.worst_g)));
    CriterionResult::from_result(4, "G-concurrence factorization", r)
}

pub fn oracle_equivalence(seed: u64) -> CriterionResult {
    let r = (|| {
        let jobs: Vec<(usize, usize)> = (2..=3).flat_map(|d| (0..100).map(move |k| (d, k))).collect();
        let gaps = jobs
            .par_iter()
            .map(|&(d, k)| {
                let basis = fourier_basis(d);
                let (a, b) = haar_pair(d, instance_seed(seed ^ 0xA11CE, d, k))?;
                let fast = swap(&a, &b, &basis)?;
                let slow = oracle_swap(&a, &b, &basis)?;
                let mut gp: f64 = 0.0;
                let mut gs: f64 = 0.0;
                for (x, y) in fast.outcomes.iter().zip(&slow.outcomes) {
                    gp = gp.max((x.probability - y.probability).abs());
                    match (&x.schmidt, &y.schmidt) {
                        (Some(s), Some(t)) => gs = gs.max(s.max_abs_diff(t)),
                        (None, None) => {}
                        _ => gs = f64::INFINITY,
                    }
                }
                Ok((gp, gs))
            })
            .collect::<Result<Vec<_>>>()?;
        let gp = gaps.iter().map(|g| g.0).fold(0.0, f64::max);
        let gs = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
        Ok((gp <= 1e-9 && gs <= 1e-8, format!("{} instances, max prob gap {gp:.2e}, max Schmidt gap {gs:.2e}", gaps.len())))
    })();
    CriterionResult::from_result(5, "oracle equivalence", r)
}

fn fmt_vec(v: &[f64]) -> String {
    format!("({})", v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", "))
}

/// Final spectra of `((0.1).2)` and `(0.(1.2))` on the order-dependent chain.
pub fn counterexample_finals() -> Result<(DiagonalSpectrum<f64>, DiagonalSpectrum<f64>)> {
    let links = four_dim_counterexample::<f64>();
    let left = evaluate_chain(&links, &FusionTree::left_assoc(3))?.final_spectrum;
    let right = evaluate_chain(&links, &FusionTree::right_assoc(3))?.final_spectrum;
    Ok((left, right))
}

pub fn chain_counterexample() -> CriterionResult {
    let r = counterexample_finals().map(|(l, r)| {
        let gap = |got: &[f64], want: &[f64]| got.iter().zip(want).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let (gl, gr) = (gap(l.values(), &COUNTEREXAMPLE_LEFT), gap(r.values(), &COUNTEREXAMPLE_RIGHT));
        (
            gl <= COUNTEREXAMPLE_SLACK && gr <= COUNTEREXAMPLE_SLACK,
            format!(
                "left {} vs {} (gap {gl:.4}), right {} vs {} (gap {gr:.4})",
                fmt_vec(l.values()),
                fmt_vec(&COUNTEREXAMPLE_LEFT),
                fmt_vec(r.values()),
                fmt_vec(&COUNTEREXAMPLE_RIGHT)
            ),
        )
    });
    CriterionResult::from_result(6, "chain counterexample", r)
}

pub fn order_independence(seed: u64) -> CriterionResult {
    let r = (|| {
        let d2 = order_independence_check::<f64>(2, 3, 500, seed)?;
        let d3 = order_independence_check::<f64>(3, 3, 500, seed)?;
        let (l, r) = counterexample_finals()?;
        let d4 = l.max_abs_diff(&r);
        Ok((
            d2.holds && d3.holds && d4 > 0.02,
            format!(
                "d=2 max gap {:.2e}, d=3 max gap {:.2e}, d=4 witness gap {d4:.4}",
                d2.max_discrepancy, d3.max_discrepancy
            ),
        ))
    })();
    CriterionResult::from_result(7, "order independence", r)
}

pub fn cross_ratio_law(seed: u64) -> CriterionResult {
    let r = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut law, mut inv): (f64, f64) = (0.0, 0.0);
        for k in 0..20 {
            let alpha = std::f64::consts::TAU * k as f64 / 20.0;
            let u = family_u4(alpha).matrix;
            let chi = cross_ratio(&u)?;
            law = law.max((chi - Complex::new(0.0, 1.0) * Complex::from_polar(1.0, -alpha)).norm());
            let dl = DiagonalUnitary::random(4, &mut rng);
            let dr = DiagonalUnitary::random(4, &mut rng);
            inv = inv.max((cross_ratio(&DiagonalUnitary::sandwich(&dl, &u, &dr))? - chi).norm());
        }
        Ok((law <= 1e-10 && inv <= 1e-12, format!("20 angles, law error {law:.2e}, dressing error {inv:.2e}")))
    })();
    CriterionResult::from_result(8, "cross-ratio law", r)
}

pub fn group_counts() -> CriterionResult {
    let r = (|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for d in 2..=5 {
            let want = (epsilon(d) * d * d * totient(d)) as u64;
            let sym = symmetric_pair_count(d)?;
            let aff = affine_pair_count(d)?;
            let stab = stabilizer_count(d)?;
            ok &= sym == want && aff == want && stab == totient(d) as u64;
            parts.push(format!("d={d}: |G|={sym} (affine {aff}, expected {want}), |S|={stab}"));
        }
        Ok((ok, parts.join("; ")))
    })();
    CriterionResult::from_result(9, "group counts", r)
}

pub fn noise_robustness(seed: u64) -> CriterionResult {
    let r = (|| {
        let (mut spec_gap, mut wit_gap): (f64, f64) = (0.0, 0.0);
        let mut ok = true;
        for d in 2..=3 {
            let basis = fourier_basis(d);
            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(seed ^ 0xD1CE, d, 0));
            for _ in 0..50 {
                let a = random_spectrum::<f64, _>(d, &mut rng, 0.0);
                let b = random_spectrum::<f64, _>(d, &mut rng, 0.0);
                let noise = NoiseModel::new(rand::Rng::random(&mut rng), rand::Rng::random(&mut rng))?;
                let out = noisy_swap(&a, &b, &basis, noise)?;
                let rep = mixed_lu_deterministic(&out.outcomes, basis.starred_operators())?;
                ok &= out.diagonal_orbit_only && rep.spectra_equal && rep.diagonal_witnesses_valid;
                spec_gap = spec_gap.max(rep.max_spectrum_gap);
                wit_gap = wit_gap.max(rep.max_witness_residual);
            }
        }
        Ok((ok && spec_gap <= 1e-8 && wit_gap <= 1e-9, format!("100 draws, spectrum gap {spec_gap:.2e}, witness residual {wit_gap:.2e}")))
    })();
    CriterionResult::from_result(10, "noise robustness", r)
}

/// Runs every criterion in order.
pub fn verify_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        census_table(),
        uniform_probabilities(seed),
        universal_lu_determinism(seed),
        g_concurrence_factorization(seed),
        oracle_equivalence(seed),
        chain_counterexample(),
        order_independence(seed),
        cross_ratio_law(seed),
        group_counts(),
        noise_robustness(seed),
    ]
}

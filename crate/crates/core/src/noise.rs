//! Swaps on depolarized links and LU-determinism of the mixed outputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::fourier_unitary;
use crate::error::{Result, SwapError};
use crate::kernel::{hermitian_eigen, ComplexMatrix, DiagonalUnitary};
use crate::measurements::{validate, MeasurementBasis};
use crate::pc::{pc_equivalent, Branch};
use crate::scalar::{Complex, Real};
use crate::states::{random_spectrum, DiagonalSpectrum};

pub const SPECTRUM_TOLERANCE: f64 = 1e-8;
pub const WITNESS_TOLERANCE: f64 = 1e-9;
/// Local phase-invariant gap that certifies no `D_L ⊗ D_R` witness exists.
pub const OBSTRUCTION_GAP: f64 = 1e-6;

/// Depolarizing weights `p` (link A–N) and `q` (link N–B).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p: f64,
    pub q: f64,
}

impl NoiseModel {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
            return Err(SwapError::Domain(format!("noise weights must lie in [0, 1], got p = {p}, q = {q}")));
        }
        Ok(NoiseModel { p, q })
    }
}

/// Conditional state on `AB` (index `a·d + b`) after outcome `index`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct MixedOutcome<T> {
    pub index: usize,
    pub density: ComplexMatrix<T>,
    /// Eigenvalues, non-increasing.
    pub spectrum: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct NoisySwap<T> {
    pub outcomes: Vec<MixedOutcome<T>>,
    /// False means the witness check in [`mixed_lu_deterministic`] cannot
    /// succeed for this basis.
    pub diagonal_orbit_only: bool,
}

/// `(1−p)(1−q)|η⟩⟨η| + (1−p)q·A²⊗1/d + p(1−q)·1/d⊗B² + pq·1/d²` for the
/// outcome whose stored operator is `starred`.
pub fn noisy_density<T: Real>(
    a: &DiagonalSpectrum<T>,
    b: &DiagonalSpectrum<T>,
    starred: &ComplexMatrix<T>,
    noise: NoiseModel,
) -> ComplexMatrix<T> {
    let d = a.dim();
    let n = d * d;
    let raw = starred.conj().dress_real(a.values(), b.values());
    let norm = raw.frobenius_norm();
    let eta: Vec<Complex<T>> = raw.entries().iter().map(|&z| z / norm).collect();
    let (p, q) = (T::lit(noise.p), T::lit(noise.q));
    let one = T::one();
    let inv_d = one / T::from_usize_lossy(d);
    let pure = (one - p) * (one - q);
    ComplexMatrix::from_fn(n, |r, c| {
        let mut z = eta[r] * eta[c].conj() * pure;
        if r == c {
            let (x, y) = (r / d, r % d);
            let ax = a.values()[x] * a.values()[x];
            let by = b.values()[y] * b.values()[y];
            z += Complex::new(
                (one - p) * q * ax * inv_d + p * (one - q) * inv_d * by + p * q * inv_d * inv_d,
                T::zero(),
            );
        }
        z
    })
}

fn mixed_outcome<T: Real>(index: usize, density: ComplexMatrix<T>) -> MixedOutcome<T> {
    let spectrum = hermitian_eigen(&density).values;
    MixedOutcome { index, density, spectrum }
}

/// Conditional mixed outputs for every outcome. Normalization relies on the
/// uniform pure-branch probabilities `1/d²`, so the basis must be unbiased.
pub fn noisy_swap<T: Real>(
    a: &DiagonalSpectrum<T>,
    b: &DiagonalSpectrum<T>,
    basis: &MeasurementBasis<T>,
    noise: NoiseModel,
) -> Result<NoisySwap<T>> {
    let d = basis.dim();
    if a.dim() != d || b.dim() != d {
        return Err(SwapError::Dimension(format!("inputs of dims {} and {} with a d = {d} basis", a.dim(), b.dim())));
    }
    let report = validate(basis)?;
    if !report.unbiased {
        return Err(SwapError::UnsupportedBasis("noisy swaps need an unbiased basis (uniform outcome probabilities)".into()));
    }
    let outcomes = basis
        .starred_operators()
        .iter()
        .enumerate()
        .map(|(i, s)| mixed_outcome(i, noisy_density(a, b, s, noise)))
        .collect();
    Ok(NoisySwap { outcomes, diagonal_orbit_only: report.diagonal_orbit_only })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct MixedLuReport<T> {
    pub spectra_equal: bool,
    pub diagonal_witnesses_valid: bool,
    pub max_spectrum_gap: T,
    /// Largest Frobenius residual of `W ρ_0 W† − ρ_i` over direct-branch outcomes.
    pub max_witness_residual: T,
    /// First outcome without a valid diagonal witness.
    pub failing_outcome: Option<usize>,
}

/// `conj(D_L) ⊗ conj(D_R)` as the diagonal of a `d² × d²` matrix, for the
/// stored relation `S_i = D_L S_0 D_R`.
fn witness_diagonal<T: Real>(l: &DiagonalUnitary<T>, r: &DiagonalUnitary<T>) -> Vec<Complex<T>> {
    let (le, re) = (l.entries(), r.entries());
    le.iter().flat_map(|x| re.iter().map(move |y| (x * y).conj())).collect()
}

/// Compares outcome spectra and tries the diagonal witness
/// `ρ_i = (D_L ⊗ D_R) ρ_0 (D_L ⊗ D_R)†` derived from the stored operators.
pub fn mixed_lu_deterministic<T: Real>(
    outcomes: &[MixedOutcome<T>],
    operators: &[ComplexMatrix<T>],
) -> Result<MixedLuReport<T>> {
    if outcomes.is_empty() || outcomes.len() != operators.len() {
        return Err(SwapError::Structure(format!("{} outcomes for {} operators", outcomes.len(), operators.len())));
    }
    let first = &outcomes[0];
    let max_spectrum_gap = outcomes
        .iter()
        .map(|o| o.spectrum.iter().zip(&first.spectrum).map(|(&x, &y)| (x - y).abs()).fold(T::zero(), T::max))
        .fold(T::zero(), T::max);
    let mut max_witness_residual = T::zero();
    let mut failing_outcome = None;
    for (o, s) in outcomes.iter().zip(operators).skip(1) {
        let v = pc_equivalent(s, &operators[0])?;
        let ok = match (v.branch, &v.witness) {
            (Branch::Direct, Some((l, r))) => {
                let w = witness_diagonal(l, r);
                let moved = first.density.dress(&w, &w.iter().map(|z| z.conj()).collect::<Vec<_>>());
                let res = moved.frobenius_distance(&o.density);
                max_witness_residual = max_witness_residual.max(res);
                res <= T::lit(WITNESS_TOLERANCE)
            }
            _ => false,
        };
        if !ok && failing_outcome.is_none() {
            failing_outcome = Some(o.index);
        }
    }
    Ok(MixedLuReport {
        spectra_equal: max_spectrum_gap <= T::lit(SPECTRUM_TOLERANCE),
        diagonal_witnesses_valid: failing_outcome.is_none(),
        max_spectrum_gap,
        max_witness_residual,
        failing_outcome,
    })
}

/// Largest gap between the products
/// `ρ[(a,b),(a′,b′)] · conj(ρ[(a,b),(a′,b″)]) · ρ[(a,b′),(a,b″)]` of two
/// `d² × d²` densities. Conjugation by any `D_L ⊗ D_R` leaves these products
/// unchanged, so a positive gap rules out a local diagonal witness.
pub fn local_phase_invariant_gap<T: Real>(r1: &ComplexMatrix<T>, r2: &ComplexMatrix<T>, d: usize) -> T {
    let at = |r: &ComplexMatrix<T>, a: usize, b: usize, a2: usize, b2: usize| r.get(a * d + b, a2 * d + b2);
    let inv = |r: &ComplexMatrix<T>, a, a2, b, b1, b2| at(r, a, b, a2, b1) * at(r, a, b, a2, b2).conj() * at(r, a, b1, a, b2);
    let mut gap = T::zero();
    for a in 0..d {
        for a2 in 0..d {
            for b in 0..d {
                for b1 in 0..d {
                    for b2 in 0..d {
                        gap = gap.max((inv(r1, a, a2, b, b1, b2) - inv(r2, a, a2, b, b1, b2)).norm());
                    }
                }
            }
        }
    }
    gap
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct ObstructionInstance<T> {
    pub a: DiagonalSpectrum<T>,
    pub b: DiagonalSpectrum<T>,
    pub noise: NoiseModel,
    /// Phases of `D_L`, `D_R` in `S_1 = D_L S_0* D_R`.
    pub left_phases: Vec<T>,
    pub right_phases: Vec<T>,
    pub spectrum_gap: T,
    pub invariant_gap: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct ObstructionReport<T> {
    pub dim: usize,
    pub seed: u64,
    pub trials_used: usize,
    pub found: bool,
    pub instance: Option<ObstructionInstance<T>>,
}

/// Seeded search for a conjugate-branch operator pair whose noisy outputs
/// admit no diagonal witness, with `S_0 = F_d/√d` and `S_1 = D_L S_0* D_R`.
pub fn conjugation_obstruction<T: Real>(d: usize, seed: u64, budget: usize) -> Result<ObstructionReport<T>> {
    if d < 3 {
        return Err(SwapError::Domain(format!("F_d is self-conjugate up to phases for d = {d}; need d >= 3")));
    }
    let s0 = fourier_unitary::<T>(d).scale_real(T::one() / T::from_usize_lossy(d).sqrt());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 1..=budget {
        let dl = DiagonalUnitary::<T>::random(d, &mut rng);
        let dr = DiagonalUnitary::<T>::random(d, &mut rng);
        let s1 = DiagonalUnitary::sandwich(&dl, &s0.conj(), &dr);
        let a = random_spectrum::<T, _>(d, &mut rng, 1e-3);
        let b = random_spectrum::<T, _>(d, &mut rng, 1e-3);
        let noise = NoiseModel::new(rng.random::<f64>() * 0.5, rng.random::<f64>() * 0.5)?;
        let r0 = noisy_density(&a, &b, &s0, noise);
        let r1 = noisy_density(&a, &b, &s1, noise);
        let gap = local_phase_invariant_gap(&r0, &r1, d);
        if gap > T::lit(OBSTRUCTION_GAP) {
            let (e0, e1) = (hermitian_eigen(&r0).values, hermitian_eigen(&r1).values);
            let spectrum_gap = e0.iter().zip(&e1).map(|(&x, &y)| (x - y).abs()).fold(T::zero(), T::max);
            let instance = ObstructionInstance {
                a,
                b,
                noise,
                left_phases: dl.phases().to_vec(),
                right_phases: dr.phases().to_vec(),
                spectrum_gap,
                invariant_gap: gap,
            };
            return Ok(ObstructionReport { dim: d, seed, trials_used: trial, found: true, instance: Some(instance) });
        }
    }
    Ok(ObstructionReport { dim: d, seed, trials_used: budget, found: false, instance: None })
}

/// `Σ_i density_i / d²`.
pub fn average_density<T: Real>(outcomes: &[MixedOutcome<T>]) -> ComplexMatrix<T> {
    let n = outcomes[0].density.dim();
    let w = T::one() / T::from_usize_lossy(outcomes.len());
    outcomes.iter().fold(ComplexMatrix::zeros(n), |acc, o| &acc + &o.density.scale_real(w))
}

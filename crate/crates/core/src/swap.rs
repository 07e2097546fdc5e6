//! The single-node swap: inputs `A`, `B` (diagonal Schmidt data), outcome
//! `i` leaves `(A E_i B ⊗ 1)|Φ⟩` with probability `‖A E_i B‖²_F`.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, SwapError};
use crate::kernel::{det_modulus, ComplexMatrix};
use crate::measurements::{projector_vectors, MeasurementBasis};
use crate::pc::pc_equivalent;
use crate::scalar::{Complex, Real};
use crate::states::{
    g_concurrence, random_spectrum, schmidt_from_density, schmidt_vector, BipartiteState, DiagonalSpectrum,
    FullTensorState,
};

/// Outcomes below this probability carry no output state.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-14;
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;
pub const SCHMIDT_TOLERANCE: f64 = 1e-8;
/// Largest dimension the dense `d⁴` oracle accepts.
pub const ORACLE_MAX_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SwapOutcome<T> {
    /// Zero-based outcome index, matching the basis order.
    pub index: usize,
    pub probability: T,
    /// `raw_coeff / √p`; absent for negligible outcomes.
    pub output: Option<BipartiteState<T>>,
    /// Unnormalized `A · E_i · B`.
    pub raw_coeff: ComplexMatrix<T>,
    pub schmidt: Option<DiagonalSpectrum<T>>,
    pub g_concurrence: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SwapReport<T> {
    pub dim: usize,
    pub outcomes: Vec<SwapOutcome<T>>,
    pub probability_sum: T,
    pub uniform_probs: bool,
    pub lu_deterministic: bool,
    pub common_schmidt: Option<DiagonalSpectrum<T>>,
    pub g_factorization_residual: T,
    /// Outcomes with probability below [`NEGLIGIBLE_PROBABILITY`].
    pub negligible_outcomes: Vec<usize>,
    /// Set when a negligible outcome occurs although both inputs are full rank.
    pub numerical_degeneracy: bool,
}

fn check_dims<T: Real>(a: &DiagonalSpectrum<T>, b: &DiagonalSpectrum<T>, basis: &MeasurementBasis<T>) -> Result<usize> {
    let d = basis.dim();
    if a.dim() != d || b.dim() != d {
        return Err(SwapError::Dimension(format!(
            "inputs of dims {} and {} with a d = {d} basis",
            a.dim(),
            b.dim()
        )));
    }
    Ok(d)
}

fn assemble<T: Real>(
    d: usize,
    outcomes: Vec<SwapOutcome<T>>,
    a: &DiagonalSpectrum<T>,
    b: &DiagonalSpectrum<T>,
    basis: &MeasurementBasis<T>,
) -> SwapReport<T> {
    let target = T::one() / T::from_usize_lossy(d * d);
    let ptol = T::lit(PROBABILITY_TOLERANCE);
    let probability_sum = outcomes.iter().map(|o| o.probability).sum();
    let uniform_probs = outcomes.iter().all(|o| (o.probability - target).abs() <= ptol);

    let live: Vec<&SwapOutcome<T>> = outcomes.iter().filter(|o| o.schmidt.is_some()).collect();
    let first = live.first().and_then(|o| o.schmidt.clone());
    let lu_deterministic = match &first {
        Some(s0) => live.iter().all(|o| o.schmidt.as_ref().unwrap().approx_eq(s0, T::lit(SCHMIDT_TOLERANCE))),
        None => false,
    };

    let ca = a.g_concurrence();
    let cb = b.g_concurrence();
    let g_factorization_residual = live
        .iter()
        .map(|o| {
            let gamma = BipartiteState::normalized(basis.starred(o.index).clone()).expect("nonzero operator");
            (o.g_concurrence.unwrap() - ca * cb * g_concurrence(&gamma)).abs()
        })
        .fold(T::zero(), T::max);

    let negligible_outcomes: Vec<usize> = outcomes.iter().filter(|o| o.schmidt.is_none()).map(|o| o.index).collect();
    let full_rank = a.full_rank(T::zero()) && b.full_rank(T::zero());
    SwapReport {
        dim: d,
        probability_sum,
        uniform_probs,
        lu_deterministic,
        common_schmidt: if lu_deterministic { first } else { None },
        g_factorization_residual,
        numerical_degeneracy: full_rank && !negligible_outcomes.is_empty(),
        negligible_outcomes,
        outcomes,
    }
}

/// Analytic swap: `raw_i = diag(a) · E_i · diag(b)` with `E_i` the conjugate
/// of the stored operator.
pub fn swap<T: Real>(
    a: &DiagonalSpectrum<T>,
    b: &DiagonalSpectrum<T>,
    basis: &MeasurementBasis<T>,
) -> Result<SwapReport<T>> {
    let d = check_dims(a, b, basis)?;
    let outcomes = (0..d * d)
        .map(|i| {
            let raw = basis.operator(i).dress_real(a.values(), b.values());
            let p = raw.frobenius_norm_sqr();
            if p < T::lit(NEGLIGIBLE_PROBABILITY) {
                return SwapOutcome { index: i, probability: p, output: None, raw_coeff: raw, schmidt: None, g_concurrence: None };
            }
            let state = BipartiteState::normalized(raw.clone()).expect("positive norm");
            let schmidt = schmidt_vector(&state);
            let g = g_concurrence(&state);
            SwapOutcome { index: i, probability: p, output: Some(state), raw_coeff: raw, schmidt: Some(schmidt), g_concurrence: Some(g) }
        })
        .collect();
    Ok(assemble(d, outcomes, a, b, basis))
}

/// Full-tensor oracle: projects `N_A N_B` of `|ψ⟩ ⊗ |φ⟩` onto each `|Γ_i⟩`
/// and reads Schmidt data off the partial trace over everything but `A`.
pub fn oracle_swap<T: Real>(
    a: &DiagonalSpectrum<T>,
    b: &DiagonalSpectrum<T>,
    basis: &MeasurementBasis<T>,
) -> Result<SwapReport<T>> {
    let d = check_dims(a, b, basis)?;
    if d > ORACLE_MAX_DIM {
        return Err(SwapError::Size(format!("oracle keeps d^4 amplitudes; d = {d} exceeds {ORACLE_MAX_DIM}")));
    }
    let full = FullTensorState::from_pair(&a.to_state(), &b.to_state())?;
    let gammas = projector_vectors(basis);
    let outcomes = gammas
        .iter()
        .enumerate()
        .map(|(i, gamma)| {
            let raw = ComplexMatrix::from_fn(d, |x, y| {
                (0..d * d)
                    .map(|m| gamma[m].conj() * full.amplitude(x, m / d, m % d, y))
                    .fold(Complex::zero(), |s, z| s + z)
            });
            let projected = full.project_middle(gamma);
            let p = projected.norm_sqr();
            if p < T::lit(NEGLIGIBLE_PROBABILITY) {
                return SwapOutcome { index: i, probability: p, output: None, raw_coeff: raw, schmidt: None, g_concurrence: None };
            }
            let rho_a = projected.reduced_density_a().scale_real(T::one() / p);
            let values = schmidt_from_density(&rho_a);
            let dd = T::from_usize_lossy(d);
            let g = dd * values.iter().fold(T::one(), |acc, &s| acc * s * s).powf(T::one() / dd);
            let schmidt = DiagonalSpectrum::from_unnormalized(values).ok();
            let output = BipartiteState::normalized(raw.clone()).ok();
            SwapOutcome { index: i, probability: p, output, raw_coeff: raw, schmidt, g_concurrence: Some(g) }
        })
        .collect();
    Ok(assemble(d, outcomes, a, b, basis))
}

/// Result of [`check_lu_pair`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct LuPairCheck<T> {
    /// The algebraic phase–conjugation verdict.
    pub equivalent: bool,
    /// Largest Schmidt-vector gap seen over the sampled inputs.
    pub max_discrepancy: T,
    /// First input pair whose outputs differ, if any.
    pub witness: Option<(DiagonalSpectrum<T>, DiagonalSpectrum<T>)>,
}

/// Samples random full-rank diagonal inputs and compares the Schmidt vectors
/// of `A e_i B` and `A e_j B`; the sampled verdict must agree with
/// [`pc_equivalent`], otherwise an invariant violation is returned.
pub fn check_lu_pair<T: Real>(
    e_i: &ComplexMatrix<T>,
    e_j: &ComplexMatrix<T>,
    trials: usize,
    seed: u64,
) -> Result<LuPairCheck<T>> {
    let d = e_i.dim();
    if e_j.dim() != d {
        return Err(SwapError::Dimension(format!("operators of dims {d} and {}", e_j.dim())));
    }
    let algebraic = pc_equivalent(e_i, e_j)?.equivalent;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_discrepancy = T::zero();
    let mut witness = None;
    for _ in 0..trials {
        let a = random_spectrum::<T, _>(d, &mut rng, 1e-3);
        let b = random_spectrum::<T, _>(d, &mut rng, 1e-3);
        let sv = |e: &ComplexMatrix<T>| {
            schmidt_vector(&BipartiteState::normalized(e.dress_real(a.values(), b.values())).expect("full rank"))
        };
        let gap = sv(e_i).max_abs_diff(&sv(e_j));
        max_discrepancy = max_discrepancy.max(gap);
        if gap > T::lit(SCHMIDT_TOLERANCE) && witness.is_none() {
            witness = Some((a, b));
        }
    }
    let sampled = witness.is_none();
    if sampled != algebraic {
        return Err(SwapError::InvariantViolation(format!(
            "phase-conjugation verdict {algebraic} but sampled LU verdict {sampled} (max gap {max_discrepancy})"
        )));
    }
    Ok(LuPairCheck { equivalent: algebraic, max_discrepancy, witness })
}

/// `|det(A E B)|`-based G-concurrence of a raw outcome, normalized by `p`.
pub fn raw_g_concurrence<T: Real>(raw: &ComplexMatrix<T>) -> T {
    let d = T::from_usize_lossy(raw.dim());
    d * det_modulus(raw).powf(T::lit(2.0) / d) / raw.frobenius_norm_sqr()
}

//! Bipartite pure states in the coefficient-matrix picture.
//!
//! `|χ⟩ = (X ⊗ 1)|Φ⟩` with the unnormalized `|Φ⟩ = Σ_k |kk⟩`, so the amplitude
//! of `|j⟩|k⟩` is `X[j][k]` and all normalization lives in `X`.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SwapError};
use crate::kernel::{det_modulus, hermitian_eigen, singular_values, svd, ComplexMatrix};
use crate::scalar::{Complex, Real};

/// Normalization slack accepted by the validating constructors.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Pure state given by its coefficient matrix (Frobenius norm 1).
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState<T> {
    coeff: ComplexMatrix<T>,
}

impl<T: Real> BipartiteState<T> {
    /// Rejects coefficient matrices whose Frobenius norm is not 1.
    pub fn new(coeff: ComplexMatrix<T>) -> Result<Self> {
        let n = coeff.frobenius_norm().as_f64();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(SwapError::Domain(format!("coefficient matrix has Frobenius norm {n}, expected 1")));
        }
        Ok(BipartiteState { coeff })
    }

    /// Rescales to unit norm; fails on the zero matrix.
    pub fn normalized(coeff: ComplexMatrix<T>) -> Result<Self> {
        let n = coeff.frobenius_norm();
        if n <= T::zero() {
            return Err(SwapError::Domain("cannot normalize the zero state".into()));
        }
        Ok(BipartiteState { coeff: coeff.scale_real(T::one() / n) })
    }

    pub fn dim(&self) -> usize {
        self.coeff.dim()
    }

    pub fn coeff(&self) -> &ComplexMatrix<T> {
        &self.coeff
    }

    pub fn into_coeff(self) -> ComplexMatrix<T> {
        self.coeff
    }

    /// Amplitude vector over `|j, k⟩`, index `j·d + k`.
    pub fn amplitudes(&self) -> Vec<Complex<T>> {
        self.coeff.entries().to_vec()
    }

    /// Schmidt rank equals `d` (smallest Schmidt coefficient above `tol`).
    pub fn full_rank(&self, tol: T) -> bool {
        schmidt_vector(self).values().last().is_some_and(|&s| s > tol)
    }
}

/// Schmidt coefficients: non-negative, non-increasing, squares summing to 1.
/// Serializes as a plain JSON array.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSpectrum<T> {
    values: Vec<T>,
}

impl<T: Real> DiagonalSpectrum<T> {
    /// Validates sortedness, sign and normalization.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(SwapError::Dimension("empty spectrum".into()));
        }
        if values.iter().any(|&x| !x.is_finite() || x < T::zero()) {
            return Err(SwapError::Domain("spectrum entries must be finite and non-negative".into()));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(SwapError::Domain("spectrum must be sorted non-increasing".into()));
        }
        let s: f64 = values.iter().map(|x| x.as_f64().powi(2)).sum();
        if (s - 1.0).abs() > NORM_TOLERANCE {
            return Err(SwapError::Domain(format!("squared spectrum sums to {s}, expected 1")));
        }
        Ok(DiagonalSpectrum { values })
    }

    /// Sorts and rescales arbitrary non-negative coefficients.
    pub fn from_unnormalized(mut values: Vec<T>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|&x| !x.is_finite() || x < T::zero()) {
            return Err(SwapError::Domain("coefficients must be finite and non-negative".into()));
        }
        let n = values.iter().map(|&x| x * x).sum::<T>().sqrt();
        if n <= T::zero() {
            return Err(SwapError::Domain("all coefficients are zero".into()));
        }
        values.iter_mut().for_each(|x| *x /= n);
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        Ok(DiagonalSpectrum { values })
    }

    /// From squared Schmidt coefficients (probabilities), normalized first.
    pub fn from_probabilities(probs: &[T]) -> Result<Self> {
        if probs.iter().any(|&p| !p.is_finite() || p < T::zero()) {
            return Err(SwapError::Domain("probabilities must be finite and non-negative".into()));
        }
        Self::from_unnormalized(probs.iter().map(|&p| p.sqrt()).collect())
    }

    /// Maximally entangled spectrum `(1/√d, …, 1/√d)`.
    pub fn maximal(dim: usize) -> Self {
        let v = T::one() / T::from_usize_lossy(dim).sqrt();
        DiagonalSpectrum { values: vec![v; dim] }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_real_diag(&self.values)
    }

    pub fn to_state(&self) -> BipartiteState<T> {
        BipartiteState { coeff: self.to_matrix() }
    }

    /// `d · (Π λ_k)^{1/d}` with `λ_k` the squared coefficients.
    pub fn g_concurrence(&self) -> T {
        let d = T::from_usize_lossy(self.dim());
        let prod: T = self.values.iter().fold(T::one(), |acc, &x| acc * x * x);
        d * prod.powf(T::one() / d)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.dim() != other.dim() {
            return T::infinity();
        }
        self.values.iter().zip(&other.values).map(|(&a, &b)| (a - b).abs()).fold(T::zero(), T::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn full_rank(&self, tol: T) -> bool {
        self.values.last().is_some_and(|&s| s > tol)
    }
}

/// Dense amplitude vector of `|ψ⟩_{A N_A} ⊗ |φ⟩_{N_B B}` over `|a, n_A, n_B, b⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullTensorState<T> {
    dim: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> FullTensorState<T> {
    pub fn from_pair(psi: &BipartiteState<T>, phi: &BipartiteState<T>) -> Result<Self> {
        let d = psi.dim();
        if phi.dim() != d {
            return Err(SwapError::Dimension(format!("input dimensions {d} and {} differ", phi.dim())));
        }
        let mut amplitudes = Vec::with_capacity(d.pow(4));
        for a in 0..d {
            for na in 0..d {
                let x = psi.coeff().get(a, na);
                for nb in 0..d {
                    for b in 0..d {
                        amplitudes.push(x * phi.coeff().get(nb, b));
                    }
                }
            }
        }
        Ok(FullTensorState { dim: d, amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn index(&self, a: usize, na: usize, nb: usize, b: usize) -> usize {
        ((a * self.dim + na) * self.dim + nb) * self.dim + b
    }

    pub fn amplitude(&self, a: usize, na: usize, nb: usize, b: usize) -> Complex<T> {
        self.amplitudes[self.index(a, na, nb, b)]
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Reduced density matrix on `A`, tracing out `N_A N_B B`.
    pub fn reduced_density_a(&self) -> ComplexMatrix<T> {
        let d = self.dim;
        let rest = d * d * d;
        ComplexMatrix::from_fn(d, |a, a2| {
            (0..rest)
                .map(|r| self.amplitudes[a * rest + r] * self.amplitudes[a2 * rest + r].conj())
                .fold(Complex::zero(), |x, y| x + y)
        })
    }

    /// Applies `1_A ⊗ |γ⟩⟨γ| ⊗ 1_B` with `γ` a vector over `|n_A, n_B⟩`.
    pub fn project_middle(&self, gamma: &[Complex<T>]) -> Self {
        let d = self.dim;
        assert_eq!(gamma.len(), d * d, "projector vector has wrong length");
        let mut out = vec![Complex::zero(); self.amplitudes.len()];
        for a in 0..d {
            for b in 0..d {
                let overlap = (0..d * d)
                    .map(|m| gamma[m].conj() * self.amplitude(a, m / d, m % d, b))
                    .fold(Complex::zero(), |x, y| x + y);
                for m in 0..d * d {
                    out[self.index(a, m / d, m % d, b)] = gamma[m] * overlap;
                }
            }
        }
        FullTensorState { dim: d, amplitudes: out }
    }

    /// Density matrix on `A B` after tracing out `N_A N_B`, index `a·d + b`.
    pub fn reduced_density_ab(&self) -> ComplexMatrix<T> {
        let d = self.dim;
        ComplexMatrix::from_fn(d * d, |r, c| {
            let (a, b) = (r / d, r % d);
            let (a2, b2) = (c / d, c % d);
            (0..d * d)
                .map(|m| self.amplitude(a, m / d, m % d, b) * self.amplitude(a2, m / d, m % d, b2).conj())
                .fold(Complex::zero(), |x, y| x + y)
        })
    }
}

/// `coeff = U₁ · diag(spectrum) · V₁`.
///
/// Singular values are sorted descending and the first non-negligible entry
/// of each column of `U₁` is real positive, so the output is deterministic.
pub fn reduce_to_diagonal<T: Real>(
    state: &BipartiteState<T>,
) -> (DiagonalSpectrum<T>, ComplexMatrix<T>, ComplexMatrix<T>) {
    let f = svd(state.coeff());
    (DiagonalSpectrum { values: f.s }, f.u, f.v_adj)
}

pub fn schmidt_vector<T: Real>(state: &BipartiteState<T>) -> DiagonalSpectrum<T> {
    DiagonalSpectrum { values: singular_values(state.coeff()) }
}

/// `C_d = d · |det M|^{2/d}`.
pub fn g_concurrence<T: Real>(state: &BipartiteState<T>) -> T {
    let d = T::from_usize_lossy(state.dim());
    d * det_modulus(state.coeff()).powf(T::lit(2.0) / d)
}

/// Schmidt coefficients as square roots of the reduced density eigenvalues.
pub fn schmidt_from_density<T: Real>(rho: &ComplexMatrix<T>) -> Vec<T> {
    hermitian_eigen(rho).values.into_iter().map(|x| x.max(T::zero()).sqrt()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    /// Coefficient matrix with i.i.d. complex Gaussian entries, normalized.
    HaarPure,
    /// Diagonal state with Dirichlet(1, …, 1) squared spectrum.
    RandomSpectrum,
}

/// Reproducible random state for a given `(d, seed, kind)`.
pub fn random_state<T: Real>(d: usize, seed: u64, kind: StateKind) -> Result<BipartiteState<T>> {
    if d < 2 {
        return Err(SwapError::Domain(format!("random states need d >= 2, got {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        StateKind::HaarPure => {
            let m = ComplexMatrix::from_fn(d, |_, _| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(T::lit(re), T::lit(im))
            });
            BipartiteState::normalized(m)
        }
        StateKind::RandomSpectrum => Ok(random_spectrum::<T, _>(d, &mut rng, 0.0).to_state()),
    }
}

/// Dirichlet(1, …, 1) squared spectrum, redrawn until every squared value
/// exceeds `min_prob`.
pub fn random_spectrum<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R, min_prob: f64) -> DiagonalSpectrum<T> {
    loop {
        let draws: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        let probs: Vec<f64> = draws.iter().map(|x| x / total).collect();
        if probs.iter().all(|&p| p > min_prob) {
            let vals = probs.iter().map(|&p| T::lit(p)).collect::<Vec<_>>();
            return DiagonalSpectrum::from_probabilities(&vals).expect("valid Dirichlet draw");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::DiagonalUnitary;

    const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn fourier2() -> ComplexMatrix<f64> {
        ComplexMatrix::from_real_rows(&[&[S2, S2], &[S2, -S2]]).unwrap()
    }

    #[test]
    fn constructor_checks_norm() {
        assert!(BipartiteState::new(ComplexMatrix::<f64>::identity(2)).is_err());
        assert!(BipartiteState::new(ComplexMatrix::<f64>::identity(2).scale_real(S2)).is_ok());
    }

    #[test]
    fn reduce_maximally_entangled_identity() {
        let s = BipartiteState::new(ComplexMatrix::<f64>::identity(2).scale_real(S2)).unwrap();
        let (spec, u, v) = reduce_to_diagonal(&s);
        assert!((spec.values()[0] - S2).abs() < 1e-15 && (spec.values()[1] - S2).abs() < 1e-15);
        assert!(u.approx_eq(&ComplexMatrix::identity(2), 1e-15));
        assert!(v.approx_eq(&ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn reduce_fourier_coefficient() {
        let s = BipartiteState::new(fourier2().scale_real(S2)).unwrap();
        let (spec, u, v) = reduce_to_diagonal(&s);
        assert!(spec.approx_eq(&DiagonalSpectrum::maximal(2), 1e-12));
        let rebuilt = &(&u * &spec.to_matrix()) * &v;
        assert!(rebuilt.approx_eq(s.coeff(), 1e-12));
    }

    #[test]
    fn schmidt_of_product_and_maximal() {
        let prod = BipartiteState::new(ComplexMatrix::<f64>::from_real_diag(&[1.0, 0.0])).unwrap();
        assert_eq!(schmidt_vector(&prod).values(), &[1.0, 0.0]);
        assert!(g_concurrence(&prod).abs() < 1e-15);
        let r3 = 1.0 / 3f64.sqrt();
        let max3 = BipartiteState::new(ComplexMatrix::<f64>::identity(3).scale_real(r3)).unwrap();
        assert!(schmidt_vector(&max3).approx_eq(&DiagonalSpectrum::maximal(3), 1e-14));
        assert!((g_concurrence(&max3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn g_concurrence_closed_form_d2() {
        let s = BipartiteState::new(ComplexMatrix::<f64>::from_real_diag(&[0.9f64.sqrt(), 0.1f64.sqrt()])).unwrap();
        assert!((g_concurrence(&s) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn g_concurrence_rank_deficient_is_zero() {
        // rank-1 coefficient matrix u v^T
        let m = ComplexMatrix::<f64>::from_fn(3, |j, k| Complex::new((j + 1) as f64 * (k as f64 - 0.5), 0.0));
        let s = BipartiteState::normalized(m).unwrap();
        assert!(g_concurrence(&s) < 1e-9);
        assert!(!s.full_rank(1e-9));
    }

    #[test]
    fn random_spectrum_reproducible_and_diagonal() {
        let a = random_state::<f64>(2, 7, StateKind::RandomSpectrum).unwrap();
        let b = random_state::<f64>(2, 7, StateKind::RandomSpectrum).unwrap();
        assert_eq!(a, b);
        let c = random_state::<f64>(3, 99, StateKind::RandomSpectrum).unwrap();
        assert!(c.coeff().is_diagonal(0.0));
        assert!((c.coeff().frobenius_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_state_rejects_small_dim() {
        assert!(matches!(random_state::<f64>(1, 0, StateKind::HaarPure), Err(SwapError::Domain(_))));
    }

    #[test]
    fn haar_mean_g_concurrence_strictly_inside() {
        let n = 1000;
        let mean: f64 = (0..n)
            .map(|seed| g_concurrence(&random_state::<f64>(4, seed, StateKind::HaarPure).unwrap()))
            .sum::<f64>()
            / n as f64;
        assert!(mean > 0.0 && mean < 1.0, "mean = {mean}");
        // the ensemble is far from both extremes
        assert!(mean > 0.05 && mean < 0.95, "mean = {mean}");
    }

    #[test]
    fn reduced_density_of_diagonal_input_is_a_squared() {
        let a = DiagonalSpectrum::<f64>::from_probabilities(&[0.5, 0.3, 0.2]).unwrap();
        let phi = random_state::<f64>(3, 4, StateKind::HaarPure).unwrap();
        let full = FullTensorState::from_pair(&a.to_state(), &phi).unwrap();
        let rho = full.reduced_density_a();
        let expect = ComplexMatrix::from_real_diag(&[0.5, 0.3, 0.2]);
        assert!(rho.approx_eq(&expect, 1e-10));
        assert!((full.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn schmidt_matches_partial_trace_oracle() {
        // (1/√2)·A·F₂·B·2 with A, B the given diagonals
        let a = ComplexMatrix::<f64>::from_real_diag(&[0.8f64.sqrt(), 0.2f64.sqrt()]);
        let b = ComplexMatrix::<f64>::from_real_diag(&[0.6f64.sqrt(), 0.4f64.sqrt()]);
        let m = (&(&a * &fourier2()) * &b).scale_real(S2 * 2.0);
        let s = BipartiteState::normalized(m).unwrap();
        let other = BipartiteState::new(ComplexMatrix::<f64>::identity(2).scale_real(S2)).unwrap();
        let full = FullTensorState::from_pair(&s, &other).unwrap();
        let oracle = schmidt_from_density(&full.reduced_density_a());
        let direct = schmidt_vector(&s);
        for (x, y) in oracle.iter().zip(direct.values()) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn local_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for seed in 0..20 {
            let s = random_state::<f64>(3, seed, StateKind::HaarPure).unwrap();
            let p = DiagonalUnitary::<f64>::random(3, &mut rng).to_matrix();
            let perm = ComplexMatrix::<f64>::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]])
                .unwrap();
            let q = &perm * &DiagonalUnitary::<f64>::random(3, &mut rng).to_matrix();
            let moved = BipartiteState::new(&(&p * s.coeff()) * &q).unwrap();
            assert!(schmidt_vector(&s).approx_eq(&schmidt_vector(&moved), 1e-9));
            let spec = schmidt_vector(&s);
            assert!((g_concurrence(&s) - spec.g_concurrence()).abs() < 1e-9);
        }
    }

    #[test]
    fn spectrum_constructors() {
        assert!(DiagonalSpectrum::<f64>::new(vec![0.6, 0.8]).is_err()); // unsorted
        assert!(DiagonalSpectrum::<f64>::new(vec![0.8, 0.6]).is_ok());
        assert!(DiagonalSpectrum::<f64>::new(vec![0.8, 0.5]).is_err()); // not normalized
        let s = DiagonalSpectrum::<f64>::from_unnormalized(vec![1.0, 9.0, 9.0, 8.0]).unwrap();
        assert_eq!(s.values()[0], s.values()[1]);
        assert!(DiagonalSpectrum::<f64>::from_probabilities(&[0.5, -0.1]).is_err());
    }
}

//! Named matrix families: Fourier, Weyl operators, permutations and the
//! `d = 4` / `d = 4k` complex Hadamard families.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SwapError};
use crate::kernel::{ComplexMatrix, ExponentMatrix};
use crate::scalar::{cis, Complex, Real};

/// Bijection on `{0, …, d−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermutationSpec {
    mapping: Vec<usize>,
}

impl PermutationSpec {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let d = mapping.len();
        let mut seen = vec![false; d];
        for &m in &mapping {
            if m >= d || std::mem::replace(&mut seen[m], true) {
                return Err(SwapError::Domain(format!("{mapping:?} is not a permutation of 0..{d}")));
            }
        }
        Ok(PermutationSpec { mapping })
    }

    pub fn identity(dim: usize) -> Self {
        PermutationSpec { mapping: (0..dim).collect() }
    }

    /// `j ↦ a·j + b mod d`; fails unless `gcd(a, d) = 1`.
    pub fn affine(dim: usize, a: usize, b: usize) -> Result<Self> {
        Self::new((0..dim).map(|j| (a * j + b) % dim).collect())
    }

    pub fn dim(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn apply(&self, j: usize) -> usize {
        self.mapping[j]
    }

    /// `Q` with `(Q·M)[j][k] = M[σ(j)][k]`.
    pub fn left_matrix<T: Real>(&self) -> ComplexMatrix<T> {
        let d = self.dim();
        ComplexMatrix::from_fn(d, |j, k| if self.mapping[j] == k { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::zero()) })
    }

    /// `Q` with `(M·Q)[j][k] = M[j][τ(k)]`.
    pub fn right_matrix<T: Real>(&self) -> ComplexMatrix<T> {
        self.left_matrix::<T>().transpose()
    }
}

/// A matrix together with the dimension it is claimed to be Hadamard in.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardCandidate<T> {
    pub matrix: ComplexMatrix<T>,
    pub claimed_dim: usize,
}

impl<T: Real> HadamardCandidate<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Self {
        let claimed_dim = matrix.dim();
        HadamardCandidate { matrix, claimed_dim }
    }
}

/// `F_d` as exponents: entry `(j, k)` is `jk mod d`.
pub fn fourier(d: usize) -> ExponentMatrix {
    ExponentMatrix::from_fn(d, |j, k| (j * k) as i64)
}

/// Unitary Fourier matrix `ω^{jk}/√d`.
pub fn fourier_unitary<T: Real>(d: usize) -> ComplexMatrix<T> {
    fourier(d).to_unitary()
}

/// Weyl shift `X|k⟩ = |k+1⟩`, phase `Z|k⟩ = ω^k|k⟩` and reversal `R|k⟩ = |−k⟩`.
pub fn weyl_ops<T: Real>(d: usize) -> (ComplexMatrix<T>, ComplexMatrix<T>, ComplexMatrix<T>) {
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let x = ComplexMatrix::from_fn(d, |r, c| if r == (c + 1) % d { one } else { zero });
    let step = std::f64::consts::TAU / d as f64;
    let z = ComplexMatrix::from_diag(&(0..d).map(|k| cis(T::lit(step * k as f64))).collect::<Vec<_>>());
    let r = ComplexMatrix::from_fn(d, |r, c| if r == (d - c) % d { one } else { zero });
    (x, z, r)
}

/// The `d = 4` family
/// `U(α) = ½[[1,1,1,1],[1,ie^{iα},−1,−ie^{iα}],[1,−1,1,−1],[1,−ie^{iα},−1,ie^{iα}]]`.
pub fn family_u4<T: Real>(alpha: T) -> HadamardCandidate<T> {
    let h = T::lit(0.5);
    let one = Complex::new(h, T::zero());
    let t = Complex::new(T::zero(), h) * cis(alpha);
    let rows = vec![
        vec![one, one, one, one],
        vec![one, t, -one, -t],
        vec![one, -one, one, -one],
        vec![one, -t, -one, t],
    ];
    HadamardCandidate::new(ComplexMatrix::from_rows(rows).expect("4x4 literal"))
}

/// `V_k(α) = F_k ⊗ U(α)`, a complex Hadamard matrix of dimension `4k`.
pub fn family_4k<T: Real>(k: usize, alpha: T) -> Result<HadamardCandidate<T>> {
    if k == 0 {
        return Err(SwapError::Domain("family_4k needs k >= 1".into()));
    }
    let f: ComplexMatrix<T> = fourier_unitary(k);
    Ok(HadamardCandidate::new(f.kron(&family_u4(alpha).matrix)))
}

/// Every entry has modulus `1/√d` and `h·h† = 1`, both within `tol`.
pub fn is_complex_hadamard<T: Real>(h: &HadamardCandidate<T>, tol: T) -> bool {
    let m = &h.matrix;
    if m.dim() != h.claimed_dim {
        return false;
    }
    let target = T::one() / T::from_usize_lossy(m.dim()).sqrt();
    m.entries().iter().all(|z| (z.norm() - target).abs() <= tol) && m.is_unitary(tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_small_cases() {
        assert_eq!(fourier(3).to_rows(), vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let f2 = ComplexMatrix::<f64>::from_real_rows(&[&[s, s], &[s, -s]]).unwrap();
        assert!(fourier_unitary::<f64>(2).approx_eq(&f2, 1e-15));
        assert!(fourier_unitary::<f64>(5).is_unitary(1e-12));
    }

    #[test]
    fn weyl_d2_literal() {
        let (x, z, r) = weyl_ops::<f64>(2);
        assert!(x.approx_eq(&ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap(), 0.0));
        assert!(z.approx_eq(&ComplexMatrix::from_real_diag(&[1.0, -1.0]), 1e-15));
        assert!(r.approx_eq(&ComplexMatrix::identity(2), 0.0));
    }

    #[test]
    fn weyl_identities() {
        for d in 2..=6 {
            let (x, z, r) = weyl_ops::<f64>(d);
            let f = fourier_unitary::<f64>(d);
            let w = cis(std::f64::consts::TAU / d as f64);
            for a in 0..d {
                for b in 0..d {
                    let lhs = &z.pow(a) * &x.pow(b);
                    let rhs = (&x.pow(b) * &z.pow(a)).scale(w.powu((a * b) as u32));
                    assert!(lhs.approx_eq(&rhs, 1e-12));
                }
                assert!((&f * &x.pow(a)).approx_eq(&(&z.pow(a) * &f), 1e-12));
            }
            assert!((&f * &r).approx_eq(&f.conj(), 1e-12));
            assert!((&r * &f).approx_eq(&f.conj(), 1e-12));
        }
    }

    #[test]
    fn u4_literal_entries_and_conjugation() {
        let u = family_u4(0.0f64).matrix;
        assert!((u.get(1, 1) - Complex::new(0.0, 0.5)).norm() < 1e-15);
        assert!((u.get(3, 1) - Complex::new(0.0, -0.5)).norm() < 1e-15);
        let pi = std::f64::consts::PI;
        assert!(family_u4(0.3f64).matrix.conj().approx_eq(&family_u4(pi - 0.3).matrix, 1e-12));
        for a in [0.0, 0.3, 1.2] {
            assert!(is_complex_hadamard(&family_u4(a), 1e-12));
        }
    }

    #[test]
    fn family_4k_shapes() {
        assert!(family_4k(1, 0.4f64).unwrap().matrix.approx_eq(&family_u4(0.4).matrix, 1e-15));
        let v = family_4k(2, 0.5f64).unwrap();
        assert_eq!(v.matrix.dim(), 8);
        assert!(v.matrix.entries().iter().all(|z| (z.norm() - 8f64.sqrt().recip()).abs() < 1e-12));
        for k in 1..=2 {
            for i in 0..10 {
                assert!(is_complex_hadamard(&family_4k(k, 0.3 * i as f64).unwrap(), 1e-12));
            }
        }
        assert!(family_4k::<f64>(0, 0.0).is_err());
    }

    #[test]
    fn hadamard_predicate() {
        for d in 2..=6 {
            assert!(is_complex_hadamard(&HadamardCandidate::new(fourier_unitary::<f64>(d)), 1e-12));
        }
        assert!(!is_complex_hadamard(&HadamardCandidate::new(ComplexMatrix::<f64>::identity(3)), 1e-9));
    }

    #[test]
    fn fourier_conjugation_symmetry() {
        for d in 2..=7 {
            let f = fourier(d);
            for j in 0..d {
                for k in 0..d {
                    assert_eq!((f.get(j, k) + f.get(j, (d - k) % d)) % d as u32, 0);
                }
            }
        }
    }

    #[test]
    fn permutation_matrices_match_exponent_permutation() {
        let sigma = PermutationSpec::new(vec![2, 0, 1]).unwrap();
        let tau = PermutationSpec::affine(3, 2, 1).unwrap();
        let f = fourier(3);
        let lhs = &(&sigma.left_matrix::<f64>() * &f.to_complex()) * &tau.right_matrix();
        let rhs = f.permuted(sigma.mapping(), tau.mapping()).to_complex::<f64>();
        assert!(lhs.approx_eq(&rhs, 1e-12));
        assert!(PermutationSpec::new(vec![0, 0, 1]).is_err());
        assert!(PermutationSpec::affine(4, 2, 0).is_err());
    }
}

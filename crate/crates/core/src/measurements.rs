//! Rank-1 projective swap measurements `|Γ_i⟩ = (E_i* ⊗ 1)|Φ⟩`.
//!
//! A basis stores the starred operators `E_i*` exactly as they enter
//! `|Γ_i⟩`; [`MeasurementBasis::operator`] conjugates back to `E_i`.

use serde::{Deserialize, Serialize};

use crate::catalog::{is_complex_hadamard, HadamardCandidate};
use crate::error::{Result, SwapError};
use crate::kernel::ComplexMatrix;
use crate::pc::{pc_equivalent, Branch};
use crate::scalar::{cis, Complex, Real};
use crate::tolerance::Tolerance;

/// `d²` operators `E_i*`, orthonormal in the Hilbert–Schmidt product.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis<T> {
    dim: usize,
    operators: Vec<ComplexMatrix<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementClassReport {
    pub unbiased: bool,
    pub mem: bool,
    pub single_pc_class: bool,
    pub diagonal_orbit_only: bool,
}

fn tol<T: Real>() -> T {
    T::lit(Tolerance::global().value())
}

fn check_operators<T: Real>(dim: usize, operators: &[ComplexMatrix<T>]) -> Result<()> {
    if operators.len() != dim * dim {
        return Err(SwapError::Structure(format!("a d = {dim} basis needs {} operators, got {}", dim * dim, operators.len())));
    }
    if let Some((i, op)) = operators.iter().enumerate().find(|(_, op)| op.dim() != dim) {
        return Err(SwapError::Dimension(format!("operator {i} is {}x{}, expected {dim}x{dim}", op.dim(), op.dim())));
    }
    let t = tol::<T>();
    for (i, a) in operators.iter().enumerate() {
        for (j, b) in operators.iter().enumerate().skip(i) {
            let target = if i == j { T::one() } else { T::zero() };
            let g = a.hs_inner(b);
            if (g - Complex::new(target, T::zero())).norm() > t {
                return Err(SwapError::InvalidBasis(format!("Tr(E_{i}^T E_{j}*) = {g}, expected {target}")));
            }
        }
    }
    Ok(())
}

impl<T: Real> MeasurementBasis<T> {
    /// Takes the starred operators `E_i*`; checks count and orthonormality.
    pub fn new(dim: usize, operators: Vec<ComplexMatrix<T>>) -> Result<Self> {
        check_operators(dim, &operators)?;
        Ok(MeasurementBasis { dim, operators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Stored `E_i*`.
    pub fn starred(&self, i: usize) -> &ComplexMatrix<T> {
        &self.operators[i]
    }

    pub fn starred_operators(&self) -> &[ComplexMatrix<T>] {
        &self.operators
    }

    /// `E_i`, recovered by conjugating the stored operator.
    pub fn operator(&self, i: usize) -> ComplexMatrix<T> {
        self.operators[i].conj()
    }

    /// Largest entry of `(1/d) Σ_i E_i^T E_i* − 1`.
    pub fn completeness_residual(&self) -> T {
        let d = self.dim;
        let mut acc = ComplexMatrix::zeros(d);
        for s in &self.operators {
            acc = &acc + &(&s.adjoint() * s);
        }
        acc.scale_real(T::one() / T::from_usize_lossy(d)).max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// Largest entry of `Σ_i |Γ_i⟩⟨Γ_i| − 1_{d²}`.
    pub fn projector_sum_residual(&self) -> T {
        let n = self.dim * self.dim;
        let mut acc = ComplexMatrix::zeros(n);
        for g in projector_vectors(self) {
            acc = &acc + &ComplexMatrix::from_fn(n, |r, c| g[r] * g[c].conj());
        }
        acc.max_abs_diff(&ComplexMatrix::identity(n))
    }

    pub fn is_unbiased(&self, tol: T) -> bool {
        let target = T::one() / T::from_usize_lossy(self.dim);
        self.operators.iter().all(|s| s.entries().iter().all(|z| (z.norm() - target).abs() <= tol))
    }
}

/// Generalized Bell basis `(1/√d) X^a Z^b`, index `a·d + b`. For `d = 2`
/// this is `(1/√2){1, Z, X, XZ}`.
pub fn bell_basis<T: Real>(d: usize) -> MeasurementBasis<T> {
    let (x, z, _) = crate::catalog::weyl_ops::<T>(d);
    let s = T::one() / T::from_usize_lossy(d).sqrt();
    let ops = (0..d * d).map(|i| (&x.pow(i / d) * &z.pow(i % d)).scale_real(s)).collect();
    MeasurementBasis::new(d, ops).expect("Weyl operators are orthonormal")
}

/// Classifies a basis: unbiasedness, MEM, single PC-class and whether every
/// element is reached from the first on the direct (diagonal) branch.
pub fn validate<T: Real>(basis: &MeasurementBasis<T>) -> Result<MeasurementClassReport> {
    check_operators(basis.dim, &basis.operators)?;
    let t = tol::<T>();
    let d = basis.dim;
    let unbiased = basis.is_unbiased(t);
    let sqrt_d = T::from_usize_lossy(d).sqrt();
    let mem = unbiased
        && basis.operators.iter().all(|s| is_complex_hadamard(&HadamardCandidate::new(s.scale_real(sqrt_d)), t));
    let (mut single, mut diagonal) = (unbiased, unbiased);
    if unbiased {
        let first = &basis.operators[0];
        for s in &basis.operators[1..] {
            let v = pc_equivalent(s, first)?;
            single &= v.equivalent;
            diagonal &= v.branch == Branch::Direct;
        }
    }
    Ok(MeasurementClassReport { unbiased, mem, single_pc_class: single, diagonal_orbit_only: diagonal })
}

/// Maximally entangled basis from one complex Hadamard unitary `seed`
/// (entries of modulus `1/√d`):
/// `E*_{m,m'} = (1/√d) · D_{m'} · seed · D'_{m,m'}` with
/// `D_{m'} = diag(e^{2πi m'k/d})`, `D'_{m,m'} = diag(e^{2πi(dm+m')k/d²})`,
/// stored in lexicographic `(m, m')` order.
pub fn gour_basis<T: Real>(seed: &ComplexMatrix<T>) -> Result<MeasurementBasis<T>> {
    let d = seed.dim();
    if !is_complex_hadamard(&HadamardCandidate::new(seed.clone()), tol::<T>()) {
        return Err(SwapError::Domain("seed must be a unitary with all entries of modulus 1/sqrt(d)".into()));
    }
    let tau = std::f64::consts::TAU;
    let scale = T::one() / T::from_usize_lossy(d).sqrt();
    let mut ops = Vec::with_capacity(d * d);
    for m in 0..d {
        for mp in 0..d {
            let left: Vec<_> = (0..d).map(|k| cis(T::lit(tau * (mp * k) as f64 / d as f64))).collect();
            let right: Vec<_> =
                (0..d).map(|k| cis(T::lit(tau * ((d * m + mp) * k) as f64 / (d * d) as f64))).collect();
            ops.push(seed.dress(&left, &right).scale_real(scale));
        }
    }
    MeasurementBasis::new(d, ops).map_err(|e| SwapError::ConstructionFailure(e.to_string()))
}

/// `|Γ_i⟩ = Σ_{m,n} ⟨m|E_i*|n⟩ |m, n⟩`, normalized; index `m·d + n`.
pub fn projector_vectors<T: Real>(basis: &MeasurementBasis<T>) -> Vec<Vec<Complex<T>>> {
    basis
        .operators
        .iter()
        .map(|s| {
            let n = s.frobenius_norm();
            s.entries().iter().map(|&z| z / n).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{family_u4, fourier_unitary};
    use crate::states::{g_concurrence, BipartiteState};

    #[test]
    fn bell_basis_d2() {
        let b = bell_basis::<f64>(2);
        let r = validate(&b).unwrap();
        assert!(!r.unbiased && !r.mem);
        assert!(b.completeness_residual() < 1e-12);
        assert!(b.projector_sum_residual() < 1e-12);
        // the four Bell states
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = projector_vectors(&b);
        assert!((v[0][0].re - s).abs() < 1e-15 && (v[0][3].re - s).abs() < 1e-15);
        assert!((v[1][3].re + s).abs() < 1e-15);
        assert!((v[2][1].re - s).abs() < 1e-15 && (v[2][2].re - s).abs() < 1e-15);
    }

    #[test]
    fn gour_fourier_small() {
        for d in 2..=5 {
            let b = gour_basis(&fourier_unitary::<f64>(d)).unwrap();
            assert_eq!(b.len(), d * d);
            assert!(b.completeness_residual() < 1e-10);
            assert!(b.projector_sum_residual() < 1e-10);
            let r = validate(&b).unwrap();
            assert!(r.unbiased && r.mem && r.single_pc_class, "d = {d}: {r:?}");
        }
        let r3 = validate(&gour_basis(&fourier_unitary::<f64>(3)).unwrap()).unwrap();
        assert!(r3.diagonal_orbit_only);
    }

    #[test]
    fn gour_u4_differs_from_fourier_class() {
        let bu = gour_basis(&family_u4(0.3f64).matrix).unwrap();
        assert!(validate(&bu).unwrap().mem);
        let bf = gour_basis(&fourier_unitary::<f64>(4)).unwrap();
        assert!(!pc_equivalent(bu.starred(0), bf.starred(0)).unwrap().equivalent);
    }

    #[test]
    fn mem_projectors_are_maximally_entangled() {
        let b = gour_basis(&fourier_unitary::<f64>(3)).unwrap();
        for i in 0..9 {
            let st = BipartiteState::new(b.starred(i).clone()).unwrap();
            assert!((g_concurrence(&st) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn seed_and_shape_errors() {
        assert!(matches!(gour_basis(&ComplexMatrix::<f64>::identity(2)), Err(SwapError::Domain(_))));
        let b = bell_basis::<f64>(2);
        let three = b.starred_operators()[..3].to_vec();
        assert!(matches!(MeasurementBasis::new(2, three), Err(SwapError::Structure(_))));
        let mut dup = b.starred_operators().to_vec();
        dup[1] = dup[0].clone();
        assert!(matches!(MeasurementBasis::new(2, dup), Err(SwapError::InvalidBasis(_))));
    }
}

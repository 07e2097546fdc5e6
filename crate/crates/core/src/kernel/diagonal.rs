use num_traits::Zero;
use rand::Rng;

use super::matrix::ComplexMatrix;
use crate::error::{Result, SwapError};
use crate::scalar::{cis, Complex, Real};

/// Entries at or below this modulus make dephasing undefined.
pub const DEGENERATE_MODULUS: f64 = 1e-12;

/// `diag(e^{iθ_0}, …, e^{iθ_{d-1}})`, stored by its angles.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalUnitary<T> {
    phases: Vec<T>,
}

impl<T: Real> DiagonalUnitary<T> {
    pub fn new(phases: Vec<T>) -> Self {
        DiagonalUnitary { phases }
    }

    pub fn identity(dim: usize) -> Self {
        DiagonalUnitary { phases: vec![T::zero(); dim] }
    }

    /// Independent uniform phases in `[0, 2π)`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let two_pi = std::f64::consts::TAU;
        DiagonalUnitary { phases: (0..dim).map(|_| T::lit(rng.random::<f64>() * two_pi)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    pub fn entries(&self) -> Vec<Complex<T>> {
        self.phases.iter().map(|&t| cis(t)).collect()
    }

    pub fn to_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_diag(&self.entries())
    }

    pub fn adjoint(&self) -> Self {
        DiagonalUnitary { phases: self.phases.iter().map(|&t| -t).collect() }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        DiagonalUnitary { phases: self.phases.iter().zip(&other.phases).map(|(&a, &b)| a + b).collect() }
    }

    /// `D_L · m · D_R`.
    pub fn sandwich(left: &Self, m: &ComplexMatrix<T>, right: &Self) -> ComplexMatrix<T> {
        m.dress(&left.entries(), &right.entries())
    }
}

/// Splits `m = D_L · C · D_R` with the first row and first column of `C`
/// real positive.
///
/// The pivot is entry `(0, 0)`: `D_R` carries the phases of row 0 and `D_L`
/// the phases of column 0 relative to `m[0][0]`, so `D_L[0] = 1`.
pub fn dephase_canonical<T: Real>(
    m: &ComplexMatrix<T>,
) -> Result<(ComplexMatrix<T>, DiagonalUnitary<T>, DiagonalUnitary<T>)> {
    let (row, col, modulus) = m.min_abs_entry();
    if modulus <= T::lit(DEGENERATE_MODULUS) {
        return Err(SwapError::DegenerateEntry { row, col, modulus: modulus.as_f64() });
    }
    let d = m.dim();
    let right: Vec<T> = (0..d).map(|k| m.get(0, k).arg()).collect();
    let left: Vec<T> = (0..d).map(|j| m.get(j, 0).arg() - right[0]).collect();
    let canon = ComplexMatrix::from_fn(d, |j, k| {
        let z = m.get(j, k) * cis(-(left[j] + right[k]));
        // pin the pivot row/column to the real axis exactly
        if j == 0 || k == 0 {
            Complex::new(z.norm(), T::zero())
        } else {
            z
        }
    });
    debug_assert!(!canon.get(0, 0).is_zero());
    Ok((canon, DiagonalUnitary::new(left), DiagonalUnitary::new(right)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fourier3() -> ComplexMatrix<f64> {
        let w = std::f64::consts::TAU / 3.0;
        ComplexMatrix::from_fn(3, |j, k| cis(w * (j * k) as f64) / 3f64.sqrt())
    }

    #[test]
    fn fourier_is_already_canonical() {
        let f = fourier3();
        let (c, l, r) = dephase_canonical(&f).unwrap();
        assert!(c.approx_eq(&f, 1e-14));
        assert!(l.phases().iter().chain(r.phases()).all(|t| t.abs() < 1e-14));
    }

    #[test]
    fn strips_random_dressing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = fourier3();
        for _ in 0..10 {
            let dl = DiagonalUnitary::random(3, &mut rng);
            let dr = DiagonalUnitary::random(3, &mut rng);
            let m = DiagonalUnitary::sandwich(&dl, &f, &dr);
            let (c, l, r) = dephase_canonical(&m).unwrap();
            assert!(c.approx_eq(&f, 1e-12));
            assert!(DiagonalUnitary::sandwich(&l, &c, &r).approx_eq(&m, 1e-12));
        }
    }

    #[test]
    fn degenerate_entry_rejected() {
        let m = ComplexMatrix::<f64>::identity(2);
        match dephase_canonical(&m) {
            Err(SwapError::DegenerateEntry { row, col, .. }) => assert_ne!(row, col),
            other => panic!("expected degenerate-entry error, got {other:?}"),
        }
    }

    #[test]
    fn idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = ComplexMatrix::from_fn(4, |_, _| {
            Complex::new(0.5 + rng.random::<f64>(), rng.random::<f64>() - 0.5)
        });
        let (c1, _, _) = dephase_canonical(&m).unwrap();
        let (c2, l, r) = dephase_canonical(&c1).unwrap();
        assert!(c1.approx_eq(&c2, 1e-12));
        assert!(l.phases().iter().chain(r.phases()).all(|t| t.abs() < 1e-12));
    }
}

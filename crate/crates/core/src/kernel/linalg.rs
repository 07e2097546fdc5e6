//! Jacobi-type decompositions for small dense complex matrices.
//!
//! Both routines use the same plane rotation: a phase on column `q` makes the
//! `(p, q)` Gram entry real, then a real Jacobi rotation zeroes it. The SVD is
//! the one-sided (Hestenes) variant, which diagonalizes `M†M` implicitly by
//! orthogonalizing the columns of `M`.

use num_traits::{One, Zero};

use super::matrix::ComplexMatrix;
use crate::scalar::{cis, Complex, Real};

const MAX_SWEEPS: usize = 80;

/// `M = U · diag(s) · V†` with `s` sorted non-increasing.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: ComplexMatrix<T>,
    pub s: Vec<T>,
    /// `V†`, so that `m = u · diag(s) · v_adj`.
    pub v_adj: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let us = ComplexMatrix::from_fn(self.s.len(), |r, c| self.u.get(r, c) * self.s[c]);
        us.matmul(&self.v_adj)
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues non-increasing.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix<T>,
}

/// Rotation parameters `(c, s, φ)` zeroing the off-diagonal of the 2×2
/// Hermitian block `[[alpha, gamma], [conj(gamma), beta]]`.
///
/// The unitary acting on columns `(p, q)` is
/// `[[c, s], [-s·e^{-iφ}, c·e^{-iφ}]]`.
fn rotation<T: Real>(alpha: T, beta: T, gamma: Complex<T>) -> (T, T, T) {
    let g = gamma.norm();
    let phi = gamma.arg();
    let zeta = (beta - alpha) / (g + g);
    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
    let c = T::one() / (T::one() + t * t).sqrt();
    (c, c * t, phi)
}

/// Applies the rotation to columns `p`, `q` of `m` in place.
fn rotate_columns<T: Real>(m: &mut ComplexMatrix<T>, p: usize, q: usize, c: T, s: T, phi: T) {
    let e = cis(-phi);
    for r in 0..m.dim() {
        let xp = m.get(r, p);
        let xq = m.get(r, q) * e;
        m.set(r, p, xp * c - xq * s);
        m.set(r, q, xp * s + xq * c);
    }
}

/// Applies the adjoint rotation to rows `p`, `q` of `m` in place.
fn rotate_rows<T: Real>(m: &mut ComplexMatrix<T>, p: usize, q: usize, c: T, s: T, phi: T) {
    let e = cis(phi);
    for k in 0..m.dim() {
        let xp = m.get(p, k);
        let xq = m.get(q, k) * e;
        m.set(p, k, xp * c - xq * s);
        m.set(q, k, xp * s + xq * c);
    }
}

fn column_dot<T: Real>(m: &ComplexMatrix<T>, p: usize, q: usize) -> Complex<T> {
    (0..m.dim()).map(|r| m.get(r, p).conj() * m.get(r, q)).fold(Complex::zero(), |a, b| a + b)
}

fn column_norm_sqr<T: Real>(m: &ComplexMatrix<T>, p: usize) -> T {
    (0..m.dim()).map(|r| m.get(r, p).norm_sqr()).sum()
}

/// Full singular value decomposition.
///
/// Left singular vectors belonging to (numerically) zero singular values are
/// completed by Gram–Schmidt against the standard basis. Each left singular
/// vector is phased so its first non-negligible entry is real positive.
pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Svd<T> {
    let d = m.dim();
    let mut w = m.clone();
    let mut v = ComplexMatrix::<T>::identity(d);
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..d {
            for q in (p + 1)..d {
                let alpha = column_norm_sqr(&w, p);
                let beta = column_norm_sqr(&w, q);
                let gamma = column_dot(&w, p, q);
                if gamma.norm() <= eps * (alpha * beta).sqrt() || gamma.is_zero() {
                    continue;
                }
                rotated = true;
                let (c, s, phi) = rotation(alpha, beta, gamma);
                rotate_columns(&mut w, p, q, c, s, phi);
                rotate_columns(&mut v, p, q, c, s, phi);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(usize, T)> = (0..d).map(|k| (k, column_norm_sqr(&w, k).sqrt())).collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite singular values"));
    let s: Vec<T> = order.iter().map(|&(_, x)| x).collect();
    let smax = s.first().copied().unwrap_or_else(T::zero);
    let negligible = smax * eps * T::from_usize_lossy(4 * d.max(1));

    let mut u = ComplexMatrix::<T>::zeros(d);
    let mut vv = ComplexMatrix::<T>::zeros(d);
    let mut filled = vec![false; d];
    for (slot, &(k, sigma)) in order.iter().enumerate() {
        for r in 0..d {
            vv.set(r, slot, v.get(r, k));
        }
        if sigma > negligible && sigma > T::zero() {
            for r in 0..d {
                u.set(r, slot, w.get(r, k) / sigma);
            }
            filled[slot] = true;
        }
    }
    complete_orthonormal_columns(&mut u, &filled);

    // phase convention: first non-negligible entry of each u column real positive
    let small = T::lit(1e-7);
    for k in 0..d {
        if let Some(r) = (0..d).find(|&r| u.get(r, k).norm() > small) {
            let ph = cis(-u.get(r, k).arg());
            for i in 0..d {
                u.set(i, k, u.get(i, k) * ph);
                vv.set(i, k, vv.get(i, k) * ph);
            }
        }
    }

    Svd { u, s, v_adj: vv.adjoint() }
}

/// Replaces the columns not marked `filled` by an orthonormal completion.
fn complete_orthonormal_columns<T: Real>(u: &mut ComplexMatrix<T>, filled: &[bool]) {
    let d = u.dim();
    let mut have: Vec<usize> = (0..d).filter(|&k| filled[k]).collect();
    let mut candidate = 0usize;
    for slot in (0..d).filter(|&k| !filled[k]) {
        loop {
            assert!(candidate < d, "orthonormal completion ran out of candidates");
            let mut vec: Vec<Complex<T>> =
                (0..d).map(|r| if r == candidate { Complex::one() } else { Complex::zero() }).collect();
            candidate += 1;
            // two passes of modified Gram–Schmidt
            for _ in 0..2 {
                for &k in &have {
                    let proj = (0..d).map(|r| u.get(r, k).conj() * vec[r]).fold(Complex::zero(), |a, b| a + b);
                    for (r, x) in vec.iter_mut().enumerate() {
                        *x -= u.get(r, k) * proj;
                    }
                }
            }
            let n = vec.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            if n > T::lit(1e-3) {
                for (r, x) in vec.into_iter().enumerate() {
                    u.set(r, slot, x / n);
                }
                have.push(slot);
                break;
            }
        }
    }
}

/// Singular values sorted non-increasing.
pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Vec<T> {
    svd(m).s
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant<T: Real>(m: &ComplexMatrix<T>) -> Complex<T> {
    let d = m.dim();
    let mut a = m.clone();
    let mut det = Complex::<T>::one();
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&x, &y| a.get(x, col).norm().partial_cmp(&a.get(y, col).norm()).expect("finite"))
            .expect("non-empty");
        let pv = a.get(pivot, col);
        if pv.is_zero() {
            return Complex::zero();
        }
        if pivot != col {
            for k in 0..d {
                let tmp = a.get(col, k);
                a.set(col, k, a.get(pivot, k));
                a.set(pivot, k, tmp);
            }
            det = -det;
        }
        det *= pv;
        for r in (col + 1)..d {
            let f = a.get(r, col) / pv;
            if f.is_zero() {
                continue;
            }
            for k in col..d {
                let v = a.get(r, k) - f * a.get(col, k);
                a.set(r, k, v);
            }
        }
    }
    det
}

/// `|det m|`.
pub fn det_modulus<T: Real>(m: &ComplexMatrix<T>) -> T {
    determinant(m).norm()
}

/// Cyclic Jacobi eigensolver for Hermitian input.
///
/// Only the Hermitian part `(m + m†)/2` is used.
pub fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>) -> HermitianEigen<T> {
    let d = m.dim();
    let half = T::lit(0.5);
    let mut a = ComplexMatrix::from_fn(d, |r, c| (m.get(r, c) + m.get(c, r).conj()) * half);
    let mut v = ComplexMatrix::<T>::identity(d);
    let scale = a.frobenius_norm().max(T::min_positive_value());
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..d)
            .flat_map(|r| (0..d).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a.get(r, c).norm_sqr())
            .sum::<T>()
            .sqrt();
        if off <= eps * scale {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let gamma = a.get(p, q);
                if gamma.norm() <= eps * eps * scale {
                    continue;
                }
                let (c, s, phi) = rotation(a.get(p, p).re, a.get(q, q).re, gamma);
                rotate_columns(&mut a, p, q, c, s, phi);
                rotate_rows(&mut a, p, q, c, s, phi);
                rotate_columns(&mut v, p, q, c, s, phi);
                a.set(p, q, Complex::zero());
                a.set(q, p, Complex::zero());
            }
        }
    }

    let mut order: Vec<(usize, T)> = (0..d).map(|k| (k, a.get(k, k).re)).collect();
    order.sort_by(|x, y| y.1.partial_cmp(&x.1).expect("finite eigenvalues"));
    let values = order.iter().map(|&(_, x)| x).collect();
    let vectors = ComplexMatrix::from_fn(d, |r, c| v.get(r, order[c].0));
    HermitianEigen { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn sample(d: usize, seed: u64) -> ComplexMatrix<f64> {
        // small deterministic LCG, enough for unit tests
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(d, |_, _| c(next(), next()))
    }

    #[test]
    fn identity_singular_values() {
        assert_eq!(singular_values(&ComplexMatrix::<f64>::identity(2)), vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_singular_values_sorted() {
        let m = ComplexMatrix::<f64>::from_real_diag(&[3.0, 4.0]);
        let s = singular_values(&m);
        assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn svd_reconstructs_and_is_unitary() {
        for d in 1..=6 {
            for seed in 0..5 {
                let m = sample(d, seed + 100 * d as u64);
                let f = svd(&m);
                assert!(f.reconstruct().approx_eq(&m, 1e-12), "d={d} seed={seed}");
                assert!(f.u.is_unitary(1e-12));
                assert!(f.v_adj.is_unitary(1e-12));
                assert!(f.s.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn svd_rank_deficient_completes_u() {
        let m = ComplexMatrix::<f64>::from_real_diag(&[1.0, 0.0, 0.0]);
        let f = svd(&m);
        assert_eq!(f.s, vec![1.0, 0.0, 0.0]);
        assert!(f.u.is_unitary(1e-12));
        assert!(f.reconstruct().approx_eq(&m, 1e-14));
    }

    #[test]
    fn left_vectors_first_entry_positive() {
        let f = svd(&sample(4, 9));
        for k in 0..4 {
            let z = f.u.get(0, k);
            assert!(z.im.abs() < 1e-12 && z.re > 0.0);
        }
    }

    #[test]
    fn determinant_matches_product_of_singular_values() {
        for seed in 0..10 {
            let m = sample(5, seed);
            let prod: f64 = singular_values(&m).iter().product();
            assert!((det_modulus(&m) - prod).abs() <= 1e-9 * prod);
        }
    }

    #[test]
    fn determinant_known_values() {
        let m = ComplexMatrix::<f64>::from_real_rows(&[&[0.0, 2.0], &[3.0, 0.0]]).unwrap();
        assert!((determinant(&m) - c(-6.0, 0.0)).norm() < 1e-14);
        assert!((det_modulus(&ComplexMatrix::<f64>::from_real_diag(&[0.9, 0.1])) - 0.09).abs() < 1e-15);
    }

    #[test]
    fn hermitian_eigen_diagonalizes() {
        for d in 1..=6 {
            let b = sample(d, 77 + d as u64);
            let h = &b * &b.adjoint();
            let e = hermitian_eigen(&h);
            let lam: Vec<Complex<f64>> = e.values.iter().map(|&x| c(x, 0.0)).collect();
            let rebuilt = &(&e.vectors * &ComplexMatrix::from_diag(&lam)) * &e.vectors.adjoint();
            assert!(rebuilt.approx_eq(&h, 1e-12), "d={d}");
            assert!(e.vectors.is_unitary(1e-12));
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn works_in_f32() {
        let m = sample(3, 5).cast::<f32>();
        let f = svd(&m);
        assert!(f.reconstruct().approx_eq(&m, 1e-5));
    }
}


use super::matrix::ComplexMatrix;
use crate::error::{Result, SwapError};
use crate::scalar::{cis, Complex, Real};

/// Unimodular matrix whose entries are `d`-th roots of unity, stored as
/// exponents: entry `(j, k)` is `ω^{e_jk}` with `ω = e^{2πi/d}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentMatrix {
    dim: usize,
    exponents: Vec<u32>,
}

impl ExponentMatrix {
    pub fn new(dim: usize, exponents: Vec<u32>) -> Result<Self> {
        if dim == 0 || exponents.len() != dim * dim {
            return Err(SwapError::Dimension(format!(
                "exponent matrix of dim {dim} needs {} entries, got {}",
                dim * dim,
                exponents.len()
            )));
        }
        if let Some(e) = exponents.iter().find(|&&e| e as usize >= dim) {
            return Err(SwapError::Domain(format!("exponent {e} outside 0..{dim}")));
        }
        Ok(ExponentMatrix { dim, exponents })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(SwapError::Dimension("exponent matrix must be square".into()));
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    /// Builds from an integer-valued function, reducing mod `d`.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let m = dim as i64;
        let exponents = (0..dim * dim).map(|i| f(i / dim, i % dim).rem_euclid(m) as u32).collect();
        ExponentMatrix { dim, exponents }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> u32 {
        self.exponents[j * self.dim + k]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.exponents.chunks(self.dim).map(|c| c.to_vec()).collect()
    }

    /// Unimodular complex matrix `[ω^{e_jk}]`.
    pub fn to_complex<T: Real>(&self) -> ComplexMatrix<T> {
        let step = std::f64::consts::TAU / self.dim as f64;
        ComplexMatrix::from_fn(self.dim, |j, k| cis(T::lit(step * self.get(j, k) as f64)))
    }

    /// `[ω^{e_jk}] / √d`, unitary exactly when the exponents form a
    /// (dephased or dressed) Fourier-type matrix.
    pub fn to_unitary<T: Real>(&self) -> ComplexMatrix<T> {
        self.to_complex::<T>().scale_real(T::one() / T::from_usize_lossy(self.dim).sqrt())
    }

    /// Reads back exponents from a matrix whose entries are all `c·ω^e` for a
    /// common positive modulus `c`.
    pub fn from_complex<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<Self> {
        let d = m.dim();
        let scale = m.get(0, 0).norm();
        let step = T::TAU() / T::from_usize_lossy(d);
        let mut exps = Vec::with_capacity(d * d);
        for j in 0..d {
            for k in 0..d {
                let z = m.get(j, k);
                if (z.norm() - scale).abs() > tol || scale <= T::zero() {
                    return Err(SwapError::Domain(format!("entry ({j}, {k}) is not of common modulus")));
                }
                let x = z.arg() / step;
                let r = x.round();
                if (x - r).abs() * step > tol {
                    return Err(SwapError::Domain(format!("entry ({j}, {k}) is not a {d}-th root of unity")));
                }
                exps.push(r.to_i64().expect("bounded").rem_euclid(d as i64) as u32);
            }
        }
        Self::new(d, exps)
    }

    /// Exponent negation: the entrywise complex conjugate.
    pub fn negated(&self) -> Self {
        let d = self.dim as u32;
        ExponentMatrix { dim: self.dim, exponents: self.exponents.iter().map(|&e| (d - e) % d).collect() }
    }

    /// Integer dephasing: subtract row 0 from every row, then column 0 from
    /// every column. The result has zero first row and first column.
    pub fn dephased(&self) -> Self {
        let d = self.dim as u32;
        let mut out = self.exponents.clone();
        for j in 0..self.dim {
            for k in 0..self.dim {
                out[j * self.dim + k] = (self.get(j, k) + d - self.get(0, k)) % d;
            }
        }
        for j in 0..self.dim {
            let c0 = out[j * self.dim];
            for k in 0..self.dim {
                out[j * self.dim + k] = (out[j * self.dim + k] + d - c0) % d;
            }
        }
        ExponentMatrix { dim: self.dim, exponents: out }
    }

    /// Canonical key of the phase–conjugation class: the row-major
    /// lexicographic minimum of the dephased matrix and its negation.
    pub fn pc_canonical(&self) -> Self {
        let a = self.dephased();
        let b = a.negated();
        if b.exponents < a.exponents {
            b
        } else {
            a
        }
    }

    /// `Q_L · M · Q_R` for the row map `σ` and column map `τ`, i.e. entry
    /// `(j, k)` of the result is entry `(σ(j), τ(k))` of `self`.
    pub fn permuted(&self, sigma: &[usize], tau: &[usize]) -> Self {
        let d = self.dim;
        let exponents = (0..d * d).map(|i| self.get(sigma[i / d], tau[i % d])).collect();
        ExponentMatrix { dim: d, exponents }
    }

    /// `ω^{e_jk}`.
    pub fn entry<T: Real>(&self, j: usize, k: usize) -> Complex<T> {
        let step = std::f64::consts::TAU / self.dim as f64;
        cis(T::lit(step * self.get(j, k) as f64))
    }
}

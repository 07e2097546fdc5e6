//! Phase–conjugation equivalence of unbiased matrices.
//!
//! `h1 ~ h2` when `h1 = D_L h2 D_R` (direct branch) or `h1 = D_L h2* D_R`
//! (conjugate branch) for diagonal unitaries `D_L`, `D_R`.

mod census;

pub use census::{census, stabilizer_count, symmetric_pair_count, affine_pair_count, CensusReport, FullSetClasses};

use serde::{Deserialize, Serialize};

use crate::catalog::PermutationSpec;
use crate::error::{Result, SwapError};
use crate::kernel::{dephase_canonical, ComplexMatrix, DiagonalUnitary, DEGENERATE_MODULUS};
use crate::scalar::{Complex, Real};

/// Entry tolerance on dephased canonical forms.
pub const PC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Direct,
    Conjugate,
    None,
}

/// Outcome of [`pc_equivalent`]. The witness `(D_L, D_R)` satisfies
/// `h1 = D_L · h2 · D_R` on the direct branch and `h1 = D_L · h2* · D_R` on
/// the conjugate branch.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct PCVerdict<T> {
    pub equivalent: bool,
    pub branch: Branch,
    pub witness: Option<(DiagonalUnitary<T>, DiagonalUnitary<T>)>,
}

impl<T: Real> PCVerdict<T> {
    /// Applies the witness to `h2`; `None` when not equivalent.
    pub fn apply_witness(&self, h2: &ComplexMatrix<T>) -> Option<ComplexMatrix<T>> {
        let (l, r) = self.witness.as_ref()?;
        let base = if self.branch == Branch::Conjugate { h2.conj() } else { h2.clone() };
        Some(DiagonalUnitary::sandwich(l, &base, r))
    }
}

fn witness_for<T: Real>(
    l1: &DiagonalUnitary<T>,
    r1: &DiagonalUnitary<T>,
    l2: &DiagonalUnitary<T>,
    r2: &DiagonalUnitary<T>,
) -> (DiagonalUnitary<T>, DiagonalUnitary<T>) {
    (l1.compose(&l2.adjoint()), r2.adjoint().compose(r1))
}

/// Decides phase–conjugation equivalence by comparing dephased canonical
/// forms of `h1`, `h2` and `h2*`. The direct branch wins ties.
pub fn pc_equivalent<T: Real>(h1: &ComplexMatrix<T>, h2: &ComplexMatrix<T>) -> Result<PCVerdict<T>> {
    if h1.dim() != h2.dim() {
        return Err(SwapError::Dimension(format!("cannot compare {}x{} with {}x{}", h1.dim(), h1.dim(), h2.dim(), h2.dim())));
    }
    let tol = T::lit(PC_TOLERANCE);
    let (c1, l1, r1) = dephase_canonical(h1).map_err(degenerate_to_domain)?;
    let (c2, l2, r2) = dephase_canonical(h2).map_err(degenerate_to_domain)?;
    if c1.approx_eq(&c2, tol) {
        return Ok(PCVerdict { equivalent: true, branch: Branch::Direct, witness: Some(witness_for(&l1, &r1, &l2, &r2)) });
    }
    let (c3, l3, r3) = dephase_canonical(&h2.conj()).map_err(degenerate_to_domain)?;
    if c1.approx_eq(&c3, tol) {
        return Ok(PCVerdict { equivalent: true, branch: Branch::Conjugate, witness: Some(witness_for(&l1, &r1, &l3, &r3)) });
    }
    Ok(PCVerdict { equivalent: false, branch: Branch::None, witness: None })
}

fn degenerate_to_domain(e: SwapError) -> SwapError {
    match e {
        SwapError::DegenerateEntry { row, col, modulus } => {
            SwapError::Domain(format!("entry ({row}, {col}) has modulus {modulus:e}; phase-conjugation needs nonzero entries"))
        }
        other => other,
    }
}

/// `χ(h) = h₀₁ h₁₂ / (h₀₂ h₁₁)`.
pub fn cross_ratio<T: Real>(h: &ComplexMatrix<T>) -> Result<Complex<T>> {
    if h.dim() < 3 {
        return Err(SwapError::Dimension(format!("cross-ratio needs d >= 3, got {}", h.dim())));
    }
    let den = h.get(0, 2) * h.get(1, 1);
    for (r, c) in [(0, 1), (1, 2), (0, 2), (1, 1)] {
        if h.get(r, c).norm() <= T::lit(DEGENERATE_MODULUS) {
            return Err(SwapError::Domain(format!("cross-ratio entry ({r}, {c}) vanishes")));
        }
    }
    Ok(h.get(0, 1) * h.get(1, 2) / den)
}

/// Affine description of a permutation symmetry of `F_d`:
/// `σ(j) = αj + β`, `τ(k) = γk + δ` with `αγ ≡ sign (mod d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSymmetry {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub delta: usize,
    pub sign: i8,
}

fn affine_params(p: &PermutationSpec) -> Option<(usize, usize)> {
    let d = p.dim();
    let beta = p.apply(0);
    let alpha = if d > 1 { (p.apply(1) + d - beta) % d } else { 0 };
    (0..d).all(|j| p.apply(j) == (alpha * j + beta) % d).then_some((alpha, beta))
}

/// Affine parameters of `(Q_L, Q_R)` when `Q_L F_d Q_R` is PC-equivalent to
/// `F_d`; sign `+1` is the direct branch and `−1` the conjugate one.
pub fn affine_symmetry(p_left: &PermutationSpec, p_right: &PermutationSpec, d: usize) -> Option<AffineSymmetry> {
    if p_left.dim() != d || p_right.dim() != d {
        return None;
    }
    let (alpha, beta) = affine_params(p_left)?;
    let (gamma, delta) = affine_params(p_right)?;
    if gcd(alpha, d) != 1 || gcd(gamma, d) != 1 {
        return None;
    }
    let prod = (alpha * gamma) % d;
    let sign = if prod == 1 % d {
        1
    } else if prod == d - 1 {
        -1
    } else {
        return None;
    };
    Some(AffineSymmetry { alpha, beta, gamma, delta, sign })
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Euler's totient by trial factorization.
pub fn totient(d: usize) -> usize {
    let mut n = d;
    let mut out = d;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// `ε(d)`: 1 when `F_d` is real up to dephasing (`d ≤ 2`), else 2.
pub fn epsilon(d: usize) -> usize {
    if d <= 2 {
        1
    } else {
        2
    }
}

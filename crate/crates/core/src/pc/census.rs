//! Exact census of phase–conjugation classes inside the permutation orbit
//! of `F_d`, in integer arithmetic mod `d`.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{affine_symmetry, epsilon, totient};
use crate::catalog::{fourier, PermutationSpec};
use crate::error::{Result, SwapError};
use crate::kernel::ExponentMatrix;

const MAX_DIM: usize = 6;

/// Number of PC-classes in the whole set of `d × d` complex Hadamard
/// matrices, as far as it is known; distinct from the orbit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FullSetClasses {
    Finite(u64),
    Infinite,
    Unknown,
}

impl FullSetClasses {
    pub fn for_dim(d: usize) -> Self {
        match d {
            2 | 3 => FullSetClasses::Finite(1),
            5 => FullSetClasses::Finite(72),
            d if d % 4 == 0 => FullSetClasses::Infinite,
            _ => FullSetClasses::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub dim: usize,
    pub orbit_size: u64,
    pub class_count: u64,
    pub class_size: u64,
    pub totient: u64,
    pub epsilon: u64,
    /// `(d!)² / (ε d² φ(d))`.
    pub expected_class_count: u64,
    pub full_set_classes: FullSetClasses,
    /// Canonical forms, sorted by key.
    pub representatives: Vec<ExponentMatrix>,
}

fn check_dim(d: usize) -> Result<()> {
    if !(2..=MAX_DIM).contains(&d) {
        return Err(SwapError::Size(format!("exhaustive enumeration supports 2 <= d <= {MAX_DIM}, got {d}")));
    }
    Ok(())
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    (0..d).permutations(d).collect()
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Row-major big-endian base-`d` packing; numeric order is lexicographic order.
fn pack(exps: impl Iterator<Item = u32>, d: usize) -> u128 {
    exps.fold(0u128, |acc, e| acc * d as u128 + e as u128)
}

fn unpack(mut key: u128, d: usize) -> ExponentMatrix {
    let mut exps = vec![0u32; d * d];
    for slot in exps.iter_mut().rev() {
        *slot = (key % d as u128) as u32;
        key /= d as u128;
    }
    ExponentMatrix::new(d, exps).expect("packed key in range")
}

/// Packed `(element, canonical key)` for `Q_σ F_d Q_τ`: entry `σ(j)τ(k) mod d`.
fn orbit_entry(sigma: &[usize], tau: &[usize], d: usize) -> (u128, u128) {
    let e = |j: usize, k: usize| ((sigma[j] * tau[k]) % d) as u32;
    let du = d as u32;
    let element = pack((0..d * d).map(|i| e(i / d, i % d)), d);
    let deph = |i: usize| {
        let (j, k) = (i / d, i % d);
        (e(j, k) + 2 * du - e(0, k) - e(j, 0) + e(0, 0)) % du
    };
    let a = pack((0..d * d).map(deph), d);
    let b = pack((0..d * d).map(|i| (du - deph(i)) % du), d);
    (element, a.min(b))
}

/// Enumerates all `(d!)²` permutation pairs acting on `F_d`, deduplicates to
/// the orbit and groups by canonical PC key. Checks the closed-form counts.
pub fn census(d: usize) -> Result<CensusReport> {
    check_dim(d)?;
    let perms = permutations(d);
    let mut pairs: Vec<(u128, u128)> = perms
        .par_iter()
        .flat_map_iter(|s| perms.iter().map(move |t| orbit_entry(s, t, d)))
        .collect();
    pairs.par_sort_unstable();
    pairs.dedup_by_key(|p| p.0);

    let mut keys: Vec<u128> = pairs.iter().map(|p| p.1).collect();
    keys.par_sort_unstable();
    let groups: Vec<(u128, u64)> = keys.iter().dedup_with_count().map(|(n, &k)| (k, n as u64)).collect();

    let phi = totient(d) as u64;
    let eps = epsilon(d) as u64;
    let dd = (d * d) as u64;
    let orbit_size = pairs.len() as u64;
    let class_count = groups.len() as u64;
    let class_size = eps * dd;
    let expected = factorial(d).pow(2) / (eps * dd * phi);

    if orbit_size != factorial(d).pow(2) / phi {
        return Err(SwapError::InvariantViolation(format!("orbit size {orbit_size} != (d!)^2/phi(d) at d = {d}")));
    }
    if let Some((_, n)) = groups.iter().find(|(_, n)| *n != class_size) {
        return Err(SwapError::InvariantViolation(format!("class of size {n}, expected {class_size} at d = {d}")));
    }
    if class_count != expected {
        return Err(SwapError::InvariantViolation(format!("{class_count} classes, closed form gives {expected} at d = {d}")));
    }
    Ok(CensusReport {
        dim: d,
        orbit_size,
        class_count,
        class_size,
        totient: phi,
        epsilon: eps,
        expected_class_count: expected,
        full_set_classes: FullSetClasses::for_dim(d),
        representatives: groups.iter().map(|&(k, _)| unpack(k, d)).collect(),
    })
}

fn count_pairs(d: usize, pred: impl Fn(&[usize], &[usize]) -> bool + Sync) -> Result<u64> {
    check_dim(d)?;
    let perms = permutations(d);
    Ok(perms.par_iter().map(|s| perms.iter().filter(|t| pred(s, t)).count() as u64).sum())
}

/// Pairs `(σ, τ)` with `Q_σ F_d Q_τ` PC-equivalent to `F_d`, by exact
/// canonical-form comparison.
pub fn symmetric_pair_count(d: usize) -> Result<u64> {
    let target = fourier(d).pc_canonical();
    count_pairs(d, |s, t| fourier(d).permuted(s, t).pc_canonical() == target)
}

/// Pairs `(σ, τ)` accepted by [`affine_symmetry`].
pub fn affine_pair_count(d: usize) -> Result<u64> {
    count_pairs(d, |s, t| {
        let l = PermutationSpec::new(s.to_vec()).expect("permutation");
        let r = PermutationSpec::new(t.to_vec()).expect("permutation");
        affine_symmetry(&l, &r, d).is_some()
    })
}

/// Pairs `(σ, τ)` with `Q_σ F_d Q_τ = F_d` exactly.
pub fn stabilizer_count(d: usize) -> Result<u64> {
    let f = fourier(d);
    count_pairs(d, |s, t| f.permuted(s, t) == f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_round_trip_and_order() {
        let e = ExponentMatrix::from_fn(4, |j, k| (j * 3 + k) as i64);
        assert_eq!(unpack(pack(e.exponents().iter().copied(), 4), 4), e);
        let a = ExponentMatrix::from_fn(3, |j, k| (j * k) as i64);
        let b = a.negated();
        let (pa, pb) = (pack(a.exponents().iter().copied(), 3), pack(b.exponents().iter().copied(), 3));
        assert_eq!(pa < pb, a.exponents() < b.exponents());
    }

    #[test]
    fn fast_canonical_matches_matrix_canonical() {
        let perms = permutations(4);
        for s in perms.iter().step_by(5) {
            for t in perms.iter().step_by(3) {
                let (el, key) = orbit_entry(s, t, 4);
                let m = fourier(4).permuted(s, t);
                assert_eq!(unpack(el, 4), m);
                assert_eq!(unpack(key, 4), m.pc_canonical());
            }
        }
    }

    #[test]
    fn small_census() {
        let r = census(2).unwrap();
        assert_eq!((r.class_count, r.class_size, r.orbit_size), (1, 4, 4));
        let r = census(4).unwrap();
        assert_eq!((r.class_count, r.class_size, r.orbit_size), (9, 32, 288));
        assert_eq!(r.full_set_classes, FullSetClasses::Infinite);
        assert!(r.representatives.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(census(7), Err(SwapError::Size(_))));
        assert!(matches!(census(1), Err(SwapError::Size(_))));
    }
}

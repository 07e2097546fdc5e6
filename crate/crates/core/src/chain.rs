//! Linear chains of links joined by swaps: the fusion `J ⋆ K = √d·sv(J F K)`
//! and evaluation under arbitrary contiguous parenthesizations.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::fourier_unitary;
use crate::error::{Result, SwapError};
use crate::kernel::{singular_values, ComplexMatrix};
use crate::scalar::Real;
use crate::states::{random_spectrum, DiagonalSpectrum};

/// Discrepancy below which two parenthesizations count as equal.
pub const ORDER_TOLERANCE: f64 = 1e-7;
pub const MAX_LINKS: usize = 6;
/// Rejection floor on squared link coefficients in random sweeps.
pub const LINK_FLOOR: f64 = 1e-3;

/// Unnormalized diagonals of a three-link `d = 4` chain whose value depends
/// on the swap order.
pub const FOUR_DIM_COUNTEREXAMPLE: [[f64; 4]; 3] = [[9.0, 9.0, 8.0, 1.0], [9.0, 9.0, 9.0, 3.0], [8.0, 5.0, 5.0, 1.0]];

/// Full parenthesization of links `0..n` in chain order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FusionTree {
    Leaf(usize),
    Node(Box<FusionTree>, Box<FusionTree>),
}

impl FusionTree {
    pub fn node(l: FusionTree, r: FusionTree) -> Self {
        FusionTree::Node(Box::new(l), Box::new(r))
    }

    /// `((0.1).2)…`
    pub fn left_assoc(n: usize) -> Self {
        (1..n).fold(FusionTree::Leaf(0), |t, i| FusionTree::node(t, FusionTree::Leaf(i)))
    }

    /// `(0.(1.(2…)))`
    pub fn right_assoc(n: usize) -> Self {
        (0..n.saturating_sub(1)).rev().fold(FusionTree::Leaf(n - 1), |t, i| FusionTree::node(FusionTree::Leaf(i), t))
    }

    pub fn leaves(&self) -> Vec<usize> {
        match self {
            FusionTree::Leaf(i) => vec![*i],
            FusionTree::Node(l, r) => {
                let mut v = l.leaves();
                v.extend(r.leaves());
                v
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            FusionTree::Leaf(_) => 1,
            FusionTree::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Every parenthesization of links `lo..hi` (Catalan many).
    pub fn all(n: usize) -> Vec<FusionTree> {
        fn rec(lo: usize, hi: usize) -> Vec<FusionTree> {
            if hi - lo == 1 {
                return vec![FusionTree::Leaf(lo)];
            }
            let mut out = Vec::new();
            for mid in lo + 1..hi {
                for l in rec(lo, mid) {
                    for r in rec(mid, hi) {
                        out.push(FusionTree::node(l.clone(), r));
                    }
                }
            }
            out
        }
        if n == 0 {
            return Vec::new();
        }
        rec(0, n)
    }
}

impl fmt::Display for FusionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FusionTree::Leaf(i) => write!(f, "{i}"),
            FusionTree::Node(l, r) => write!(f, "({l}.{r})"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<u8> {
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> SwapError {
        SwapError::Parse(format!("{msg} at offset {} in fusion order", self.pos))
    }

    fn expr(&mut self) -> Result<FusionTree> {
        let mut t = self.term()?;
        while self.peek() == Some(b'.') {
            self.pos += 1;
            t = FusionTree::node(t, self.term()?);
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<FusionTree> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let txt = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                txt.parse().map(FusionTree::Leaf).map_err(|_| self.err("bad link index"))
            }
            _ => Err(self.err("expected link index or '('")),
        }
    }
}

impl FromStr for FusionTree {
    type Err = SwapError;

    /// Parses strings like `((0.1).2)`; leaves must read `0, 1, …` in order.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let t = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        let leaves = t.leaves();
        if leaves.iter().enumerate().any(|(i, &l)| i != l) {
            return Err(SwapError::Structure(format!("leaves {leaves:?} are not 0..{} in order", leaves.len())));
        }
        Ok(t)
    }
}

impl Serialize for FusionTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FusionTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct ChainResult<T> {
    #[serde(rename = "final")]
    pub final_spectrum: DiagonalSpectrum<T>,
    /// G-concurrence after each fusion, in evaluation order.
    pub per_node_g: Vec<T>,
    pub order: FusionTree,
}

/// `J ⋆ K` with the Fourier matrix as measurement seed.
pub fn fuse<T: Real>(j: &DiagonalSpectrum<T>, k: &DiagonalSpectrum<T>) -> Result<DiagonalSpectrum<T>> {
    fuse_with_seed(j, k, &fourier_unitary(j.dim()))
}

/// `normalize(√d · sv(diag(j) · seed · diag(k)))`.
pub fn fuse_with_seed<T: Real>(
    j: &DiagonalSpectrum<T>,
    k: &DiagonalSpectrum<T>,
    seed: &ComplexMatrix<T>,
) -> Result<DiagonalSpectrum<T>> {
    if j.dim() != k.dim() || seed.dim() != j.dim() {
        return Err(SwapError::Dimension(format!(
            "fusing dims {} and {} with a {}x{} seed",
            j.dim(),
            k.dim(),
            seed.dim(),
            seed.dim()
        )));
    }
    let m = seed.dress_real(j.values(), k.values());
    DiagonalSpectrum::from_unnormalized(singular_values(&m))
}

fn eval<T: Real>(links: &[DiagonalSpectrum<T>], tree: &FusionTree, g: &mut Vec<T>) -> Result<DiagonalSpectrum<T>> {
    match tree {
        FusionTree::Leaf(i) => Ok(links[*i].clone()),
        FusionTree::Node(l, r) => {
            let a = eval(links, l, g)?;
            let b = eval(links, r, g)?;
            let out = fuse(&a, &b)?;
            g.push(out.g_concurrence());
            Ok(out)
        }
    }
}

pub fn evaluate_chain<T: Real>(links: &[DiagonalSpectrum<T>], tree: &FusionTree) -> Result<ChainResult<T>> {
    if links.len() < 2 {
        return Err(SwapError::Structure(format!("a chain needs at least 2 links, got {}", links.len())));
    }
    if tree.leaf_count() != links.len() || tree.leaves().iter().enumerate().any(|(i, &l)| i != l) {
        return Err(SwapError::Structure(format!("order {tree} does not cover links 0..{}", links.len())));
    }
    let d = links[0].dim();
    if links.iter().any(|l| l.dim() != d) {
        return Err(SwapError::Dimension("links have different dimensions".into()));
    }
    let mut per_node_g = Vec::with_capacity(links.len() - 1);
    let final_spectrum = eval(links, tree, &mut per_node_g)?;
    Ok(ChainResult { final_spectrum, per_node_g, order: tree.clone() })
}

/// Largest pairwise L∞ gap between the final spectra of all parenthesizations.
pub fn order_spread<T: Real>(links: &[DiagonalSpectrum<T>]) -> Result<T> {
    let finals = FusionTree::all(links.len())
        .iter()
        .map(|t| evaluate_chain(links, t).map(|r| r.final_spectrum))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = T::zero();
    for (i, a) in finals.iter().enumerate() {
        for b in &finals[i + 1..] {
            worst = worst.max(a.max_abs_diff(b));
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct OrderReport<T> {
    pub dim: usize,
    pub num_links: usize,
    pub trials: usize,
    pub seed: u64,
    pub holds: bool,
    pub max_discrepancy: T,
    /// Links of the worst trial when the discrepancy exceeds the tolerance.
    pub witness: Option<Vec<DiagonalSpectrum<T>>>,
}

/// Draws `trials` random full-rank chains and compares every
/// parenthesization. Trial `t` uses its own generator seeded from
/// `(seed, t)`, so the report does not depend on the thread count.
pub fn order_independence_check<T: Real>(d: usize, num_links: usize, trials: usize, seed: u64) -> Result<OrderReport<T>> {
    if d < 2 {
        return Err(SwapError::Domain(format!("chains need d >= 2, got {d}")));
    }
    if !(3..=MAX_LINKS).contains(&num_links) {
        return Err(SwapError::Size(format!("num_links must be in 3..={MAX_LINKS}, got {num_links}")));
    }
    let results = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let links: Vec<_> = (0..num_links).map(|_| random_spectrum::<T, _>(d, &mut rng, LINK_FLOOR)).collect();
            order_spread(&links).map(|gap| (gap, links))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut max_discrepancy = T::zero();
    let mut worst = None;
    for (gap, links) in results {
        if gap > max_discrepancy {
            max_discrepancy = gap;
            worst = Some(links);
        }
    }
    let holds = max_discrepancy < T::lit(ORDER_TOLERANCE);
    Ok(OrderReport { dim: d, num_links, trials, seed, holds, max_discrepancy, witness: if holds { None } else { worst } })
}

/// For `d = 2` the spectrum is fixed by `C₂ = 2 s₀ s₁`.
pub fn spectrum_from_g2<T: Real>(c: T) -> DiagonalSpectrum<T> {
    let c = c.min(T::one()).max(T::zero());
    let half = T::lit(0.5);
    let root = (T::one() - c * c).sqrt();
    let s0 = (half * (T::one() + root)).sqrt();
    let s1 = (half * (T::one() - root)).max(T::zero()).sqrt();
    DiagonalSpectrum::from_unnormalized(vec![s0, s1]).expect("valid d = 2 spectrum")
}

/// The three order-dependent `d = 4` links as normalized spectra.
pub fn four_dim_counterexample<T: Real>() -> Vec<DiagonalSpectrum<T>> {
    FOUR_DIM_COUNTEREXAMPLE
        .iter()
        .map(|raw| DiagonalSpectrum::from_unnormalized(raw.iter().map(|&x| T::lit(x)).collect()).expect("positive"))
        .collect()
}

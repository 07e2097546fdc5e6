//! Deterministic entanglement swapping in the coefficient-matrix picture.
//!
//! A bipartite pure state `|χ⟩ = (X ⊗ 1)|Φ⟩` with `|Φ⟩ = Σ_k |kk⟩` is handled
//! through its coefficient matrix `X`. A swap node measuring in the basis
//! `|Γ_i⟩ = (E_i* ⊗ 1)|Φ⟩` leaves the end parties in `(A E_i B ⊗ 1)|Φ⟩`,
//! so every question about the protocol becomes a question about small dense
//! matrices:
//!
//! * [`kernel`]: complex matrices, SVD, determinants, dephasing, and the exact
//!   root-of-unity [`ExponentMatrix`].
//! * [`states`]: Schmidt data, G-concurrence and the full-tensor oracle state.
//! * [`catalog`]: Fourier, Weyl and the `d = 4` / `d = 4k` Hadamard families.
//! * [`measurements`]: operator bases, unbiasedness, the MEM property and the
//!   diagonal-phase basis construction.
//! * [`swap`]: the single-node protocol plus an independent full-tensor oracle.
//! * [`pc`]: phase–conjugation equivalence, the cross-ratio invariant, affine
//!   symmetries of `F_d` and the exact class census.
//! * [`chain`]: the fusion operation and swap-order independence on chains.
//! * [`noise`]: depolarized links and mixed-state LU-determinism.
//! * [`verify`]: the numerical acceptance checks, shared by tests and the CLI.
//!
//! All floating-point code is generic over [`Real`] (`f32` or `f64`); the
//! `f64` aliases at the crate root are what the CLI and tests use.

pub mod catalog;
pub mod chain;
pub mod error;
pub mod io;
pub mod kernel;
pub mod measurements;
pub mod noise;
pub mod pc;
pub mod scalar;
pub mod states;
pub mod swap;
pub mod tolerance;
pub mod verify;

pub use error::{Result, SwapError};
pub use kernel::{ComplexMatrix, DiagonalUnitary, ExponentMatrix};
pub use scalar::{Complex, Real};
pub use tolerance::Tolerance;

/// Dense `f64` complex matrix.
pub type CMatrix = kernel::ComplexMatrix<f64>;
/// `f32` complex matrix, for callers that trade accuracy for footprint.
pub type CMatrix32 = kernel::ComplexMatrix<f32>;
pub type Diagonal = kernel::DiagonalUnitary<f64>;
pub type State = states::BipartiteState<f64>;
pub type Spectrum = states::DiagonalSpectrum<f64>;
pub type TensorState = states::FullTensorState<f64>;
pub type Basis = measurements::MeasurementBasis<f64>;
pub type Report = swap::SwapReport<f64>;
pub type Verdict = pc::PCVerdict<f64>;
pub type Chain = chain::ChainResult<f64>;
pub type Mixed = noise::MixedOutcome<f64>;

/// Crate version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

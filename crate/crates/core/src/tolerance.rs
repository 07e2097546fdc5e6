//! Comparison tolerances.
//!
//! The process-wide default (1e-9 absolute on matrix entries and singular
//! values) can be replaced once at start-up; every routine that takes no
//! explicit tolerance reads it.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SwapError};

const BUILTIN_DEFAULT: f64 = 1e-9;

static DEFAULT_BITS: AtomicU64 = AtomicU64::new(0);

/// Environment variable consulted by [`Tolerance::init_from_env`].
pub const TOLERANCE_ENV: &str = "SWAPKIT_TOLERANCE";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance(pub f64);

impl Tolerance {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Tolerance(value))
        } else {
            Err(SwapError::Domain(format!("tolerance must be positive, got {value}")))
        }
    }

    /// Current process-wide default.
    pub fn global() -> Self {
        let bits = DEFAULT_BITS.load(Ordering::Relaxed);
        if bits == 0 {
            Tolerance(BUILTIN_DEFAULT)
        } else {
            Tolerance(f64::from_bits(bits))
        }
    }

    pub fn set_global(tol: Tolerance) {
        DEFAULT_BITS.store(tol.0.to_bits(), Ordering::Relaxed);
    }

    pub fn reset_global() {
        DEFAULT_BITS.store(0, Ordering::Relaxed);
    }

    /// Reads `SWAPKIT_TOLERANCE` if set and installs it as the global default.
    pub fn init_from_env() -> Result<Self> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(raw) => {
                let value: f64 = raw
                    .trim()
                    .parse()
                    .map_err(|_| SwapError::Parse(format!("{TOLERANCE_ENV}={raw:?} is not a number")))?;
                let tol = Tolerance::new(value)?;
                Tolerance::set_global(tol);
                Ok(tol)
            }
            Err(_) => Ok(Tolerance::global()),
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::global()
    }
}

//! Size ceilings for dense computations.
//!
//! Algebra elements carry `2^n` coefficient bits, and every rank computation
//! materialises a `2^n x 2^n` matrix. Both are gated here so that oversized
//! requests fail with [`Error::Resource`] instead of exhausting memory.

use crate::error::{Error, Result};

/// Largest arity accepted for pure algebra (16 MiB per element).
pub const ALGEBRA_MAX_ARITY: u32 = 24;

/// Largest arity for which dense `2^n x 2^n` matrices are built (128 MiB).
pub const DENSE_MAX_ARITY: u32 = 15;

/// Environment variable overriding [`DENSE_MAX_ARITY`].
pub const MAX_ARITY_ENV: &str = "STORAGECODE_MAX_ARITY";

/// Dense ceiling, honouring `STORAGECODE_MAX_ARITY` when it parses.
pub fn dense_max_arity() -> u32 {
    std::env::var(MAX_ARITY_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .map(|v| v.min(ALGEBRA_MAX_ARITY))
        .unwrap_or(DENSE_MAX_ARITY)
}

pub fn check_algebra_arity(arity: u32) -> Result<()> {
    if arity > ALGEBRA_MAX_ARITY {
        return Err(Error::Resource {
            what: "algebra",
            arity,
            limit: ALGEBRA_MAX_ARITY,
        });
    }
    Ok(())
}

pub fn check_dense_arity(arity: u32) -> Result<()> {
    let limit = dense_max_arity();
    if arity > limit {
        return Err(Error::Resource {
            what: "dense matrix",
            arity,
            limit,
        });
    }
    Ok(())
}

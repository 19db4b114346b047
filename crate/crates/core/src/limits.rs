//! Enumeration caps for exact computations.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Environment variable overriding [`exact_cap`].
pub const EXACT_CAP_ENV: &str = "PLANCHEREL_EXACT_CAP";

/// Default largest n for character tables, transition matrices and the
/// exact identity suites.
pub const DEFAULT_EXACT_CAP: u32 = 8;

/// Largest n for which [`crate::plancherel::plancherel_dist`] enumerates
/// every partition.
pub const DIST_CAP: u32 = 40;

/// Current exact-verification cap, read once from the environment.
pub fn exact_cap() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(EXACT_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_EXACT_CAP)
    })
}

pub fn check_exact(what: &'static str, n: u32) -> Result<()> {
    let cap = exact_cap();
    if n > cap {
        return Err(Error::Resource { what, n, cap });
    }
    Ok(())
}

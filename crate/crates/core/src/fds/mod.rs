//! Fast direct solver for the preconditioned CFIE: C_p = C_p,c + U Vᵀ with
//! C_p,c the circulant counterpart on the equi-perimeter circle, the
//! remainder compressed by a randomized range finder and the sum inverted
//! by the Woodbury identity.

pub mod circulant;
pub mod skeleton;
pub mod solver;
pub mod woodbury;

pub use circulant::{circulant_counterpart, circulant_counterpart_with, CirculantOperator};
pub use skeleton::{adaptive_skeleton, LinearOperator, Skeleton, SkeletonOptions};
pub use solver::{solve_scenario, ExtOperator, FdsSolver, Method, SolveReport, SolveResult};
pub use woodbury::WoodburyInverse;

use crate::error::{Error, Result};

/// Experimental rate of increase ln(t₂/t₁) / ln(N₂/N₁).
pub fn eri(t1: f64, t2: f64, n1: usize, n2: usize) -> f64 {
    (t2 / t1).ln() / (n2 as f64 / n1 as f64).ln()
}

const COMPLEX_BYTES: u64 = 16;

/// Bytes held while assembling and compressing the metal block: four dense
/// factors plus thin skeleton and workspace columns.
pub fn metal_memory_estimate(n: usize) -> u64 {
    let n = n as u64;
    4 * n * n * COMPLEX_BYTES + 256 * n * COMPLEX_BYTES
}

/// Bytes for the dense PMCHWT path: eight operators, the 2N block and its LU.
pub fn skin_memory_estimate(n: usize) -> u64 {
    let n = n as u64;
    (8 + 4 + 8) * n * n * COMPLEX_BYTES
}

/// MemAvailable from /proc/meminfo, when readable.
pub fn available_memory() -> Option<u64> {
    let text = std::fs::read_to_string("/proc/meminfo").ok()?;
    let line = text.lines().find(|l| l.starts_with("MemAvailable:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

/// 90% of available memory, or no cap when unknown.
pub fn default_memory_cap() -> Option<u64> {
    available_memory().map(|m| m / 10 * 9)
}

pub fn check_memory(estimate: u64, cap: Option<u64>) -> Result<()> {
    match cap {
        Some(cap) if estimate > cap => Err(Error::MemoryCap { estimate, cap }),
        _ => Ok(()),
    }
}

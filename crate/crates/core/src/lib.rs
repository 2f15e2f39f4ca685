//! Exact Tutte/Whitney polynomial toolkit for network reliability.
//!
//! Computes Tutte and Whitney polynomials of small graphs, the spanning
//! subgraph count tables `N_{i,j}` they encode, k-reliability polynomials,
//! and divisibility certificates for the Whitney and Tutte orders. The
//! [`scan`] module classifies whole classes of connected `(n, m)`-graphs.

// Adjacency-matrix loops read better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod counts;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod mc;
pub mod order;
pub mod poly;
pub mod scan;
pub mod tutte;

pub use error::{Error, Result};
pub use graph::{CanonicalForm, MultiGraph, SimpleGraph};
pub use poly::BivarPoly;

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool
/// when `workers` is `None`.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

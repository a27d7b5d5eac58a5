//! ipslab-core: exact computer algebra for refutation experiments over the
//! Boolean hypercube.
//!
//! The crate is organized around a sparse, exactly-represented multivariate
//! polynomial type and builds up from it:
//!
//! * [`algebra`] — fields (Q, F_p, F_{p^k}), monomials, orders, polynomials;
//! * [`hypercube`] — unsatisfiability over {0,1}^n, the unique multilinear
//!   inverse 1/f on the cube, and targeted coefficient extraction;
//! * [`instances`] — deterministic generators for the axiom families;
//! * [`measures`] — partial-derivative-matrix rank, trailing-monomial
//!   independence bounds, the partition (Kalorkoti-style) sum, evaluation
//!   dimension;
//! * [`roabp`] — read-once oblivious branching programs, multilinearization
//!   with Boolean-axiom witnesses, width bounds and the rank-collapse
//!   experiment;
//! * [`refute`] — linear refutation certificates: construction, lifting and
//!   exact/randomized verification.

pub use num;

pub mod algebra;
pub mod error;
pub mod hypercube;
pub mod instances;
pub mod measures;
pub mod refute;
pub mod roabp;

pub use error::{IpsError, Result};

/// Derives a per-task seed from a base seed, splitmix64-style.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

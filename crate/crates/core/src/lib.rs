//! Exact arithmetic for the p^s-hypergeometric solutions of the reduced KZ
//! system attached to the hyperelliptic curve `y^2 = (x - z_1)...(x - z_n)`.
//!
//! The crate is `no_std` (it only needs `alloc`). Everything operates on exact
//! integers or on p-adic residues at an explicit precision:
//!
//! * [`poly`]: sparse multivariate integer polynomials and vectors of them.
//! * [`padic`]: finite-precision p-adic integers, Teichmüller lifts, Hensel
//!   square roots and binomials `binom(-1/2 - l, k)`.
//! * [`kz`]: the KZ system itself and exact residual checks.
//! * [`solutions`]: master polynomials, coefficient extraction, closed
//!   coefficient formulas, quasi-constants, module membership.
//! * [`cartier`]: Cartier-Manin matrices and the multiplication-by-p relation.
//! * [`asymptotic`]: the change of variables into the asymptotic zone and the
//!   truncated/series forms there.
//! * [`convergence`]: seeded p-adic convergence experiments.
//!
//! The `parallel` feature (which implies `std`) spreads independent residue
//! and extraction work over a rayon pool.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod asymptotic;
pub mod binomial;
pub mod cartier;
pub mod convergence;
mod decimal;
mod error;
pub mod kz;
mod modpoly;
mod modulus;
pub mod padic;
pub mod poly;
pub mod solutions;
mod par;

pub use decimal::Decimal;
pub use error::{KzError, Result};
pub use modulus::{is_odd_prime, ModulusContext};

/// Schema tag written into every serialized artifact.
pub const SCHEMA: &str = "kz-padic/1";

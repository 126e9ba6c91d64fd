//! Numerical laboratory for restriction and large-sieve estimates over sifted
//! integers.
//!
//! The crate is organised bottom-up:
//!
//! * [`sieve`]: sifting systems `(P, L_p, z)`, sifted sets and the exact
//!   rational sieve sums `h`, `G_d(y; z0)`, `V(y)`;
//! * [`envelope`]: the Fourier-side enveloping sieve majorant `β` and its
//!   coefficient table;
//! * [`expsum`]: exponential sums over well-spaced sets, `L^ℓ` norms, the
//!   measured-constant rows for the restriction and large-sieve inequalities,
//!   and the explicit-constant machinery (Eulerian polynomials, `c(κ)`);
//! * [`apps`]: polynomial, two-squares and weighted applications.

pub mod apps;
pub mod arith;
pub mod envelope;
pub mod error;
pub mod expsum;
pub mod sieve;

pub use error::{Error, Result};
pub use expsum::{CoefficientProfile, InequalityRow, TheoremTag, WellSpacedSet};
pub use sieve::{sift, SiftedSet, SiftingSystem, Window};

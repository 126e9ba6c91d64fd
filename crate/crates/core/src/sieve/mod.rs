//! Sifting systems, sifted sets and the exact multiplicative sieve sums.

pub mod config;
pub mod hypotheses;
pub mod lemmas;
pub mod sift;
pub mod sums;
pub mod system;

pub use config::{build_system, SystemConfig};
pub use hypotheses::{check_hypotheses, HypothesisProfile, HypothesisScan};
pub use sift::{sift, survives, SiftedSet, Window};
pub use sums::{divisor_h_sum, g_sum, g_total, g_window, h_value, v_value, SieveSums};
pub use system::{Cutoff, PrimeRule, ResidueRule, SiftingSystem};

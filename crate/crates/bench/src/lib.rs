//! Fixtures shared by the benchmarks.

use siftlab_core::expsum::CoefficientProfile;
use siftlab_core::sieve::{sift, PrimeRule, ResidueRule, SiftedSet, SiftingSystem, Window};

/// All primes, `L_p = {0}`, `z = N^{1/4}`.
pub fn rough_system(n: u64) -> SiftingSystem {
    SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), (n as f64).powf(0.25).max(2.0))
        .expect("valid system")
}

pub fn rough_set(n: u64) -> (SiftingSystem, SiftedSet) {
    let s = rough_system(n);
    let set = sift(&s, n, Window::full(&s)).expect("valid window");
    (s, set)
}

pub fn indicator(n: u64) -> CoefficientProfile {
    CoefficientProfile::indicator(&rough_set(n).1)
}

/// `count` points spread over `[0, 1)` by the golden-ratio rotation.
pub fn points(count: usize) -> Vec<f64> {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    (0..count).map(|i| (i as f64 * phi).fract()).collect()
}

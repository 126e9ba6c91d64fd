use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::system::SiftingSystem;
use crate::error::{Error, Result};

/// Integers per segment of the segmented sieve.
pub const SEGMENT: u64 = 1 << 16;

/// Range of sieving primes: `lo <= p` and `p` below `hi` under the system's cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Self {
        Window { lo, hi }
    }

    /// `[2, z)`: the window defining `S(N)`.
    pub fn full(system: &SiftingSystem) -> Self {
        Window { lo: 2.0, hi: system.z() }
    }
}

/// `S(N)` or `S'(N)`: the survivors in `[1, N]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiftedSet {
    pub n_max: u64,
    pub members: Vec<u64>,
    pub window: Window,
}

impl SiftedSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }

    /// Members in `[1, m]` for `m <= n_max`.
    pub fn count_up_to(&self, m: u64) -> usize {
        self.members.partition_point(|&n| n <= m)
    }
}

/// Sift `[1, n_max]` by the primes of the system lying in `window`.
pub fn sift(system: &SiftingSystem, n_max: u64, window: Window) -> Result<SiftedSet> {
    if n_max == 0 {
        return Err(Error::Parameter("N must be at least 1".into()));
    }
    if window.hi > system.z() + 1e-12 || window.lo > window.hi.max(2.0) {
        return Err(Error::Window { lo: window.lo, hi: window.hi, z: system.z() });
    }
    let sieve: Vec<(u64, Vec<u64>)> = system
        .primes_in(window.lo.max(2.0), window.hi)
        .into_iter()
        .map(|p| (p, system.residues(p)))
        .collect();

    let segments = n_max.div_ceil(SEGMENT);
    let chunks: Vec<Vec<u64>> = (0..segments)
        .into_par_iter()
        .map(|s| {
            let start = 1 + s * SEGMENT;
            let end = (start + SEGMENT - 1).min(n_max);
            sift_segment(&sieve, start, end)
        })
        .collect();
    Ok(SiftedSet {
        n_max,
        members: chunks.concat(),
        window,
    })
}

/// Membership of a single `n` (of any size) in the sifted set for `window`.
pub fn survives(system: &SiftingSystem, n: u64, window: Window) -> bool {
    system
        .primes_in(window.lo.max(2.0), window.hi)
        .into_iter()
        .all(|p| system.residues(p).binary_search(&(n % p)).is_err())
}

fn sift_segment(sieve: &[(u64, Vec<u64>)], start: u64, end: u64) -> Vec<u64> {
    let len = (end - start + 1) as usize;
    let mut keep = vec![true; len];
    for (p, residues) in sieve {
        let p = *p;
        let offset = start % p;
        for &r in residues {
            let mut i = ((r + p - offset) % p) as usize;
            while i < len {
                keep[i] = false;
                i += p as usize;
            }
        }
    }
    keep.iter()
        .enumerate()
        .filter(|(_, &k)| k)
        .map(|(i, _)| start + i as u64)
        .collect()
}

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::{self, inv_mod};
use crate::error::{Error, Result};
use crate::sieve::{sums, SiftingSystem};

/// `e(num/den)` with the phase reduced exactly before scaling.
pub(crate) fn unit_root(num: u64, den: u64) -> Complex64 {
    let (s, c) = (TAU * ((num % den) as f64) / den as f64).sin_cos();
    Complex64::new(c, s)
}

#[derive(Clone, Debug)]
struct WindowPrime {
    pub lambda: u64,
    pub complement: Vec<u64>,
    pub h: BigRational,
    /// `(1/|K_p|) Σ_{c ∈ K_p} e(-b c / p)` for `b = 0..p`.
    pub sums: Vec<Complex64>,
}

/// Allowed classes `K_p = Z/pZ ∖ L_p` for `p ∈ P ∩ [z0, z)`, full residue
/// systems elsewhere, extended to squarefree moduli by CRT.
#[derive(Clone, Debug)]
pub struct ComplementSystem {
    z0: f64,
    z: f64,
    primes: BTreeMap<u64, WindowPrime>,
}

impl ComplementSystem {
    pub fn new(system: &SiftingSystem, z0: f64, z: f64) -> Result<Self> {
        if z0 > z || z > system.z() + 1e-12 {
            return Err(Error::Window { lo: z0, hi: z, z: system.z() });
        }
        let mut primes = BTreeMap::new();
        for p in system.primes_in(z0.max(2.0), z) {
            let residues = system.residues(p);
            let lambda = residues.len() as u64;
            if lambda >= p {
                return Err(Error::Degenerate { p, lambda });
            }
            let complement: Vec<u64> = (0..p).filter(|c| residues.binary_search(c).is_err()).collect();
            let size = complement.len() as f64;
            let sums = (0..p)
                .map(|b| {
                    complement
                        .iter()
                        .map(|&c| unit_root((p - b * c % p) % p, p))
                        .sum::<Complex64>()
                        / size
                })
                .collect();
            let h = BigRational::new(BigInt::from(lambda), BigInt::from(p - lambda));
            primes.insert(p, WindowPrime { lambda, complement, h, sums });
        }
        Ok(ComplementSystem { z0, z, primes })
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Primes of `P ∩ [z0, z)`, i.e. the prime divisors of `P(z0, z)`.
    pub fn window_primes(&self) -> Vec<u64> {
        self.primes.keys().copied().collect()
    }

    pub fn lambda(&self, p: u64) -> u64 {
        self.primes.get(&p).map_or(0, |w| w.lambda)
    }

    pub fn complement(&self, p: u64) -> Option<&[u64]> {
        self.primes.get(&p).map(|w| w.complement.as_slice())
    }

    /// `|K_q| = Π_{p|q} |K_p|` for squarefree `q`.
    pub fn k_size(&self, q: u64) -> Result<u64> {
        if !arith::is_squarefree(q) {
            return Err(Error::NotSquarefree(q));
        }
        Ok(arith::prime_divisors(q)
            .into_iter()
            .map(|p| self.primes.get(&p).map_or(p, |w| w.complement.len() as u64))
            .product())
    }

    /// `h_[z0,z](k)`: `λ/(p-λ)` on window primes, zero elsewhere, squarefree support.
    pub fn h_window(&self, k: u64) -> BigRational {
        let mut acc = BigRational::one();
        for (p, e) in arith::factorize(k) {
            match self.primes.get(&p) {
                Some(w) if e == 1 => acc *= &w.h,
                _ => return BigRational::default(),
            }
        }
        acc
    }

    /// `(1/|K_q|) Σ_{c ∈ K_q} e(-a c / q)`, evaluated prime by prime.
    pub fn character_sum(&self, a: u64, q: u64) -> Result<Complex64> {
        if !arith::is_squarefree(q) {
            return Err(Error::NotSquarefree(q));
        }
        let mut acc = Complex64::new(1.0, 0.0);
        for p in arith::prime_divisors(q) {
            // a/q ≡ Σ_p a·inv(q/p)/p (mod 1)
            let cofactor = (q / p) % p;
            let inv = inv_mod(cofactor, p).expect("squarefree modulus");
            let b = ((a % p) as u128 * inv as u128 % p as u128) as u64;
            let factor = match self.primes.get(&p) {
                Some(w) => {
                    if w.complement.is_empty() {
                        return Err(Error::Modulus { q, reason: format!("K_{p} is empty") });
                    }
                    w.sums[b as usize]
                }
                None => {
                    if b == 0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }
            };
            acc *= factor;
        }
        Ok(acc)
    }

    /// `Π_{p|q} λ(p)/(p - λ(p))` over window primes (zero if a prime of `q`
    /// lies outside the window): the modulus bound for reduced `a`.
    pub fn character_bound(&self, q: u64) -> f64 {
        sums::to_f64(&self.h_window(q))
    }
}

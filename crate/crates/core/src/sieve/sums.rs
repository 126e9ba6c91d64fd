//! Exact multiplicative sieve quantities `h`, `G_d(y; z0)` and `V(y)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::system::SiftingSystem;
use crate::arith::{self, factorize};
use crate::error::{Error, Result};

/// `h(ℓ)`: multiplicative, supported on squarefree `ℓ` whose primes lie in `P`.
pub fn h_value(system: &SiftingSystem, l: u64) -> Result<BigRational> {
    if l == 0 {
        return Err(Error::Parameter("h is defined for l >= 1".into()));
    }
    let mut acc = BigRational::one();
    for (p, e) in factorize(l) {
        if e > 1 {
            return Ok(BigRational::zero());
        }
        let hp = system.h_prime(p)?;
        if hp.is_zero() {
            return Ok(hp);
        }
        acc *= hp;
    }
    Ok(acc)
}

/// Primes of `P` below `y`, i.e. the prime divisors of `P(y)`.
pub fn primes_below(system: &SiftingSystem, y: f64) -> Vec<u64> {
    system.primes_in(2.0, y)
}

/// `G_d(y; z0) = Σ_{ℓ ≤ y, (ℓ, d P(z0)) = 1} h(ℓ)`.
pub fn g_sum(system: &SiftingSystem, y: f64, z0: f64, d: u64) -> Result<BigRational> {
    if d == 0 {
        return Err(Error::Parameter("d must be positive".into()));
    }
    let bound = arith::floor_u64(y);
    if bound == 0 {
        return Ok(BigRational::zero());
    }
    let mut weights = Vec::new();
    for p in arith::primes_up_to(bound) {
        if d % p == 0 || !system.contains_prime(p) || system.cutoff().below(p, z0) {
            continue;
        }
        let hp = system.h_prime(p)?;
        if !hp.is_zero() {
            weights.push((p, hp));
        }
    }
    Ok(squarefree_sum(&weights, 0, bound))
}

/// `G(y; z0) = G_1(y; z0)`.
pub fn g_window(system: &SiftingSystem, y: f64, z0: f64) -> Result<BigRational> {
    g_sum(system, y, z0, 1)
}

/// `G(y) = G_1(y; 2)`.
pub fn g_total(system: &SiftingSystem, y: f64) -> Result<BigRational> {
    g_sum(system, y, 2.0, 1)
}

/// `Σ Π_{p | ℓ} w(p)` over squarefree `ℓ ≤ limit` built from `weights[start..]`.
pub(crate) fn squarefree_sum(weights: &[(u64, BigRational)], start: usize, limit: u64) -> BigRational {
    let mut total = BigRational::one();
    for i in start..weights.len() {
        let (p, ref w) = weights[i];
        if p > limit {
            break;
        }
        total += w * squarefree_sum(weights, i + 1, limit / p);
    }
    total
}

/// `V(y) = Π_{p < y, p ∈ P} (1 - λ(p)/p)^{-1}`.
pub fn v_value(system: &SiftingSystem, y: f64) -> Result<BigRational> {
    v_over(system, &primes_below(system, y))
}

/// `Π (1 - λ(p)/p)^{-1}` over the given primes.
pub fn v_over(system: &SiftingSystem, primes: &[u64]) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for &p in primes {
        let lam = system.lambda(p);
        if lam == 0 {
            continue;
        }
        if lam >= p {
            return Err(Error::Degenerate { p, lambda: lam });
        }
        acc *= BigRational::new(BigInt::from(p), BigInt::from(p - lam));
    }
    Ok(acc)
}

/// `Σ_{δ | d} h(δ) = Π_{p | d} (1 + h(p))` for squarefree `d`.
pub fn divisor_h_sum(system: &SiftingSystem, d: u64) -> Result<BigRational> {
    if !arith::is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    divisor_h_sum_primes(system, &arith::prime_divisors(d))
}

/// Same as [`divisor_h_sum`] for `d` given by its prime divisors (e.g. `d = P(z0)`).
pub fn divisor_h_sum_primes(system: &SiftingSystem, primes: &[u64]) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for &p in primes {
        acc *= BigRational::one() + system.h_prime(p)?;
    }
    Ok(acc)
}

/// A table of the exact sums at one parameter point.
#[derive(Clone, Debug)]
pub struct SieveSums {
    pub y: f64,
    pub z0: f64,
    pub d: u64,
    pub h: Vec<(u64, BigRational)>,
    pub g_d: BigRational,
    pub g_window: BigRational,
    pub g: BigRational,
    pub v: BigRational,
    pub divisor_sum: BigRational,
}

impl SieveSums {
    /// Evaluate everything at `(y, z0, d)`; `h` is tabulated for `ℓ ≤ h_table`.
    pub fn compute(system: &SiftingSystem, y: f64, z0: f64, d: u64, h_table: u64) -> Result<Self> {
        let h = (1..=h_table)
            .map(|l| h_value(system, l).map(|v| (l, v)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SieveSums {
            y,
            z0,
            d,
            h,
            g_d: g_sum(system, y, z0, d)?,
            g_window: g_window(system, y, z0)?,
            g: g_total(system, y)?,
            v: v_value(system, y)?,
            divisor_sum: if arith::is_squarefree(d) {
                divisor_h_sum(system, d)?
            } else {
                BigRational::zero()
            },
        })
    }
}

/// Lossy conversion for reporting.
pub fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::system::{PrimeRule, ResidueRule};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn all_primes(z: f64) -> SiftingSystem {
        SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), z).unwrap()
    }

    #[test]
    fn h_examples() {
        let s = all_primes(4.0);
        assert_eq!(h_value(&s, 3).unwrap(), q(1, 2));
        assert_eq!(h_value(&s, 15).unwrap(), q(1, 8));
        assert_eq!(h_value(&s, 4).unwrap(), q(0, 1));
        assert_eq!(h_value(&s, 1).unwrap(), q(1, 1));
    }

    #[test]
    fn g_examples() {
        let s = all_primes(4.0);
        assert_eq!(g_total(&s, 10.0).unwrap(), q(11, 3));
        assert_eq!(g_sum(&s, 10.0, 2.0, 2).unwrap(), q(23, 12));
        assert_eq!(g_window(&s, 1.0, 7.0).unwrap(), q(1, 1));
        assert_eq!(g_window(&s, 10.0, 3.0).unwrap(), q(23, 12));
    }

    #[test]
    fn g_matches_direct_enumeration() {
        let s = all_primes(4.0);
        for y in [1u64, 2, 17, 100, 321] {
            let direct = (1..=y).fold(BigRational::zero(), |acc, l| acc + h_value(&s, l).unwrap());
            assert_eq!(g_total(&s, y as f64).unwrap(), direct);
        }
    }

    #[test]
    fn v_examples() {
        let s = all_primes(4.0);
        assert_eq!(v_value(&s, 2.0).unwrap(), q(1, 1));
        assert_eq!(v_value(&s, 10.0).unwrap(), q(35, 8));
        let s3 = SiftingSystem::new(PrimeRule::classes(4, &[3]).unwrap(), ResidueRule::Fixed(vec![0]), 4.0).unwrap();
        assert_eq!(v_value(&s3, 10.0).unwrap(), q(7, 4));
    }

    #[test]
    fn divisor_sum_examples() {
        let s = all_primes(4.0);
        assert_eq!(divisor_h_sum(&s, 1).unwrap(), q(1, 1));
        assert_eq!(divisor_h_sum(&s, 6).unwrap(), q(3, 1));
        assert!(divisor_h_sum(&s, 12).is_err());
        for z0 in [2.0, 3.0, 10.0, 31.0] {
            let ps = primes_below(&s, z0);
            assert_eq!(divisor_h_sum_primes(&s, &ps).unwrap(), v_value(&s, z0).unwrap());
        }
    }

    #[test]
    fn degenerate_large_prime_reported() {
        // {0, 1, 2} is the full residue system mod 3, but 3 >= z so construction succeeds.
        let s = SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0, 1, 5]), 3.0);
        assert!(s.is_err());
        let s = SiftingSystem::new(PrimeRule::list(&[3, 5]).unwrap(), ResidueRule::Fixed(vec![0, 1, 2]), 2.0).unwrap();
        assert!(v_value(&s, 10.0).is_err());
        assert!(h_value(&s, 3).is_err());
    }

    #[test]
    fn empty_prime_set() {
        let s = SiftingSystem::trivial(50.0).unwrap();
        assert_eq!(v_value(&s, 1e6).unwrap(), q(1, 1));
        assert_eq!(g_total(&s, 1e3).unwrap(), q(1, 1));
    }
}

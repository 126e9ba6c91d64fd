use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{self, inv_mod, is_prime, primes_up_to, reduce_mod};
use crate::error::{Error, Result};

/// Which primes belong to `P`.
#[derive(Clone, Debug, PartialEq)]
pub enum PrimeRule {
    All,
    /// Primes `p` with `p mod modulus` in `classes`.
    Classes { modulus: u64, classes: Vec<u64> },
    /// An explicit finite list (kept sorted).
    List(Vec<u64>),
}

impl PrimeRule {
    pub fn classes(modulus: u64, classes: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Config("prime class modulus must be positive".into()));
        }
        let mut cls: Vec<u64> = classes.iter().map(|c| c % modulus).collect();
        cls.sort_unstable();
        cls.dedup();
        Ok(PrimeRule::Classes { modulus, classes: cls })
    }

    pub fn list(primes: &[u64]) -> Result<Self> {
        let mut ps = primes.to_vec();
        ps.sort_unstable();
        ps.dedup();
        if let Some(&bad) = ps.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::Config(format!("{bad} in the prime list is not prime")));
        }
        Ok(PrimeRule::List(ps))
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeRule::All => true,
            PrimeRule::Classes { modulus, classes } => classes.binary_search(&(p % modulus)).is_ok(),
            PrimeRule::List(ps) => ps.binary_search(&p).is_ok(),
        }
    }
}

/// How the forbidden residue set `L_p` is produced for `p ∈ P`.
#[derive(Clone, Debug, PartialEq)]
pub enum ResidueRule {
    /// Fixed integers `{c_1, …, c_k}` reduced modulo `p`.
    Fixed(Vec<i64>),
    /// Explicit residue lists; primes without an entry get `L_p = ∅`.
    PerPrime(BTreeMap<u64, Vec<u64>>),
    /// Roots modulo `p` of an integer polynomial, coefficients in ascending degree.
    PolyRoots(Vec<i64>),
    /// Roots modulo `p` of `Π (a_i x + b_i)`.
    LinearFactors(Vec<(i64, i64)>),
}

impl ResidueRule {
    pub fn per_prime(map: BTreeMap<u64, Vec<u64>>) -> Result<Self> {
        for (&p, rs) in &map {
            if !is_prime(p) {
                return Err(Error::MalformedResidues { p, reason: "key is not prime".into() });
            }
            let mut seen = BTreeSet::new();
            for &r in rs {
                if r >= p {
                    return Err(Error::MalformedResidues { p, reason: format!("residue {r} out of range") });
                }
                if !seen.insert(r) {
                    return Err(Error::MalformedResidues { p, reason: format!("duplicate residue {r}") });
                }
            }
        }
        Ok(ResidueRule::PerPrime(map))
    }

    /// `L_p` as a sorted, duplicate-free list.
    pub fn residues(&self, p: u64) -> Vec<u64> {
        let mut out: Vec<u64> = match self {
            ResidueRule::Fixed(cs) => cs.iter().map(|&c| reduce_mod(c, p)).collect(),
            ResidueRule::PerPrime(map) => map.get(&p).cloned().unwrap_or_default(),
            ResidueRule::PolyRoots(coeffs) => {
                let reduced: Vec<u64> = coeffs.iter().map(|&c| reduce_mod(c, p)).collect();
                (0..p)
                    .filter(|&x| {
                        let v = reduced
                            .iter()
                            .rev()
                            .fold(0u128, |acc, &c| (acc * x as u128 + c as u128) % p as u128);
                        v == 0
                    })
                    .collect()
            }
            ResidueRule::LinearFactors(factors) => {
                let mut roots = Vec::new();
                for &(a, b) in factors {
                    let (a, b) = (reduce_mod(a, p), reduce_mod(b, p));
                    if a == 0 {
                        if b == 0 {
                            return (0..p).collect();
                        }
                        continue;
                    }
                    let inv = inv_mod(a, p).expect("p prime, a nonzero");
                    let root = ((p - b) % p) as u128 * inv as u128 % p as u128;
                    roots.push(root as u64);
                }
                roots
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Strict (`p < y`) or weak (`p ≤ y`) prime cutoffs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cutoff {
    #[default]
    Strict,
    Weak,
}

impl Cutoff {
    pub fn below(self, p: u64, y: f64) -> bool {
        match self {
            Cutoff::Strict => (p as f64) < y,
            Cutoff::Weak => (p as f64) <= y,
        }
    }
}

/// A sieve: primes `P`, forbidden classes `L_p` and the level `z`.
#[derive(Clone, Debug)]
pub struct SiftingSystem {
    prime_rule: PrimeRule,
    residue_rule: ResidueRule,
    excluded: BTreeSet<u64>,
    z: f64,
    cutoff: Cutoff,
    lambda_cache: BTreeMap<u64, Vec<u64>>,
}

impl SiftingSystem {
    pub fn new(prime_rule: PrimeRule, residue_rule: ResidueRule, z: f64) -> Result<Self> {
        Self::with_options(prime_rule, residue_rule, z, Cutoff::Strict, BTreeSet::new())
    }

    /// Full constructor. Primes in `excluded` are removed from `P`.
    pub fn with_options(
        prime_rule: PrimeRule,
        residue_rule: ResidueRule,
        z: f64,
        cutoff: Cutoff,
        excluded: BTreeSet<u64>,
    ) -> Result<Self> {
        if !(z >= 2.0) || !z.is_finite() {
            return Err(Error::Config(format!("sieve level z = {z} must be a finite real >= 2")));
        }
        let mut sys = SiftingSystem {
            prime_rule,
            residue_rule,
            excluded,
            z,
            cutoff,
            lambda_cache: BTreeMap::new(),
        };
        let mut cache = BTreeMap::new();
        for p in sys.primes_in(2.0, z) {
            let l = sys.residue_rule.residues(p);
            if l.is_empty() {
                return Err(Error::EmptyResidues { p });
            }
            if l.len() as u64 >= p {
                return Err(Error::Degenerate { p, lambda: l.len() as u64 });
            }
            cache.insert(p, l);
        }
        sys.lambda_cache = cache;
        Ok(sys)
    }

    /// The same sieve data at a different level `z`.
    pub fn at_level(&self, z: f64) -> Result<Self> {
        Self::with_options(
            self.prime_rule.clone(),
            self.residue_rule.clone(),
            z,
            self.cutoff,
            self.excluded.clone(),
        )
    }

    /// Sieve with no primes at all: `V ≡ 1` and `S(N) = [1, N]`.
    pub fn trivial(z: f64) -> Result<Self> {
        Self::new(PrimeRule::List(Vec::new()), ResidueRule::Fixed(vec![0]), z)
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn prime_rule(&self) -> &PrimeRule {
        &self.prime_rule
    }

    pub fn residue_rule(&self) -> &ResidueRule {
        &self.residue_rule
    }

    pub fn excluded(&self) -> &BTreeSet<u64> {
        &self.excluded
    }

    pub fn contains_prime(&self, p: u64) -> bool {
        is_prime(p) && self.prime_rule.contains(p) && !self.excluded.contains(&p)
    }

    /// `L_p`; empty when `p ∉ P`.
    pub fn residues(&self, p: u64) -> Vec<u64> {
        if let Some(l) = self.lambda_cache.get(&p) {
            return l.clone();
        }
        if !self.contains_prime(p) {
            return Vec::new();
        }
        self.residue_rule.residues(p)
    }

    pub fn lambda(&self, p: u64) -> u64 {
        self.lambda_cache
            .get(&p)
            .map(|l| l.len() as u64)
            .unwrap_or_else(|| self.residues(p).len() as u64)
    }

    /// Primes of `P` with `lo <= p` and `p` below `hi` (per the cutoff rule).
    pub fn primes_in(&self, lo: f64, hi: f64) -> Vec<u64> {
        primes_up_to(arith::floor_u64(hi))
            .into_iter()
            .filter(|&p| (p as f64) >= lo && self.cutoff.below(p, hi) && self.contains_prime(p))
            .collect()
    }

    /// Sieving primes `p ∈ P`, `p < z`.
    pub fn sieving_primes(&self) -> Vec<u64> {
        self.lambda_cache.keys().copied().collect()
    }

    /// `h(p) = λ(p) / (p - λ(p))` for `p ∈ P`, zero otherwise.
    pub fn h_prime(&self, p: u64) -> Result<BigRational> {
        let lam = self.lambda(p);
        if lam == 0 {
            return Ok(BigRational::zero());
        }
        if lam >= p {
            return Err(Error::Degenerate { p, lambda: lam });
        }
        Ok(BigRational::new(BigInt::from(lam), BigInt::from(p - lam)))
    }

    /// `max_{p<z} λ(p)`, the default sieve dimension.
    pub fn max_lambda(&self) -> u64 {
        self.lambda_cache.values().map(|l| l.len() as u64).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_primes_single_class() {
        let s = SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), 4.0).unwrap();
        assert_eq!(s.sieving_primes(), vec![2, 3]);
        assert_eq!(s.lambda(2), 1);
        assert_eq!(s.lambda(3), 1);
    }

    #[test]
    fn residues_coincide_mod_two() {
        let rule = PrimeRule::classes(4, &[2, 3]).unwrap();
        let s = SiftingSystem::new(rule, ResidueRule::Fixed(vec![0, -4]), 10.0).unwrap();
        assert_eq!(s.sieving_primes(), vec![2, 3, 7]);
        assert_eq!(s.lambda(2), 1);
        assert_eq!(s.lambda(3), 2);
        assert_eq!(s.lambda(7), 2);
        assert_eq!(s.residues(7), vec![0, 3]);
        assert_eq!(s.lambda(5), 0);
    }

    #[test]
    fn full_residue_set_is_rejected() {
        let mut map = BTreeMap::new();
        map.insert(2, vec![0]);
        map.insert(3, vec![0, 1, 2]);
        let rule = ResidueRule::per_prime(map).unwrap();
        let err = SiftingSystem::new(PrimeRule::All, rule, 5.0).unwrap_err();
        assert_eq!(err, Error::Degenerate { p: 3, lambda: 3 });
    }

    #[test]
    fn missing_residues_below_z_are_rejected() {
        let mut map = BTreeMap::new();
        map.insert(2, vec![1]);
        let rule = ResidueRule::per_prime(map).unwrap();
        let err = SiftingSystem::new(PrimeRule::All, rule, 5.0).unwrap_err();
        assert_eq!(err, Error::EmptyResidues { p: 3 });
    }

    #[test]
    fn malformed_lists_are_rejected() {
        let mut map = BTreeMap::new();
        map.insert(5, vec![1, 7]);
        assert!(ResidueRule::per_prime(map).is_err());
        let mut map = BTreeMap::new();
        map.insert(5, vec![1, 1]);
        assert!(ResidueRule::per_prime(map).is_err());
        let mut map = BTreeMap::new();
        map.insert(6, vec![1]);
        assert!(ResidueRule::per_prime(map).is_err());
        assert!(PrimeRule::list(&[2, 9]).is_err());
    }

    #[test]
    fn cutoff_modes() {
        let strict = SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), 7.0).unwrap();
        assert_eq!(strict.sieving_primes(), vec![2, 3, 5]);
        let weak = SiftingSystem::with_options(
            PrimeRule::All,
            ResidueRule::Fixed(vec![0]),
            7.0,
            Cutoff::Weak,
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(weak.sieving_primes(), vec![2, 3, 5, 7]);
        assert_eq!(strict.primes_in(2.0, 7.5), vec![2, 3, 5, 7]);
    }

    #[test]
    fn polynomial_and_linear_roots() {
        // x(x+2) = x^2 + 2x
        let poly = ResidueRule::PolyRoots(vec![0, 2, 1]);
        let lin = ResidueRule::LinearFactors(vec![(1, 0), (1, 2)]);
        for p in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(poly.residues(p), lin.residues(p), "p = {p}");
        }
        assert_eq!(lin.residues(5), vec![0, 3]);
        assert_eq!(ResidueRule::LinearFactors(vec![(2, 1), (1, 1)]).residues(2), vec![1]);
    }

    #[test]
    fn empty_prime_set_is_allowed() {
        let s = SiftingSystem::trivial(100.0).unwrap();
        assert!(s.sieving_primes().is_empty());
        assert_eq!(s.max_lambda(), 0);
    }
}

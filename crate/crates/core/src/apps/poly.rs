use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::certificate::{ApplicationSet, Certificate};
use crate::arith::{gcd, is_prime, primes_up_to, reduce_mod};
use crate::error::{Error, Result};
use crate::sieve::{survives, Cutoff, PrimeRule, ResidueRule, SiftingSystem, Window};

/// `F(x) = Π (a_i x + b_i)` with `a_i ≠ 0` and nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearFactorization {
    factors: Vec<(i64, i64)>,
}

impl LinearFactorization {
    pub fn new(factors: Vec<(i64, i64)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Parameter("F needs at least one factor".into()));
        }
        if factors.iter().any(|&(a, _)| a == 0) {
            return Err(Error::Parameter("every factor needs a_i ≠ 0".into()));
        }
        let f = LinearFactorization { factors };
        if f.discriminant().is_zero() {
            return Err(Error::ZeroDiscriminant);
        }
        Ok(f)
    }

    pub fn factors(&self) -> &[(i64, i64)] {
        &self.factors
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    /// `Δ(F) = Π_{i<j} (a_i b_j - a_j b_i)`.
    pub fn discriminant(&self) -> BigInt {
        let mut d = BigInt::from(1);
        for (i, &(ai, bi)) in self.factors.iter().enumerate() {
            for &(aj, bj) in &self.factors[i + 1..] {
                d *= BigInt::from(ai as i128 * bj as i128 - aj as i128 * bi as i128);
            }
        }
        d
    }

    /// Factor values `a_i n + b_i`.
    pub fn values(&self, n: u64) -> Vec<i128> {
        self.factors.iter().map(|&(a, b)| a as i128 * n as i128 + b as i128).collect()
    }

    /// `F(n) mod q`.
    pub fn eval_mod(&self, n: u64, q: u64) -> u64 {
        self.factors.iter().fold(1 % q, |acc, &(a, b)| {
            let v = reduce_mod(((a as i128 * n as i128 + b as i128) % q as i128) as i64, q);
            ((acc as u128 * v as u128) % q as u128) as u64
        })
    }
}

/// The sieve attached to `F` with the primes where `λ(p) ∈ {0, p}` removed.
#[derive(Clone, Debug)]
pub struct PolySystem {
    pub system: SiftingSystem,
    /// `(p, λ(p))` for every removed prime.
    pub excluded: Vec<(u64, u64)>,
    pub warnings: Vec<String>,
}

/// `L_p = {n mod p : F(n) ≡ 0}` for `p < z = max(N^{1/4}, 2)`.
pub fn poly_system(f: &LinearFactorization, n: u64) -> Result<PolySystem> {
    poly_system_at(f, ((n as f64).powf(0.25)).max(2.0))
}

pub fn poly_system_at(f: &LinearFactorization, z: f64) -> Result<PolySystem> {
    let rule = ResidueRule::LinearFactors(f.factors.clone());
    let mut excluded = Vec::new();
    let mut warnings = Vec::new();
    for p in primes_up_to(z.ceil() as u64) {
        if !Cutoff::Strict.below(p, z) {
            continue;
        }
        let lam = rule.residues(p).len() as u64;
        if lam == p {
            warnings.push(format!("F vanishes identically mod {p}; removed from the sieve"));
            excluded.push((p, lam));
        } else if lam == 0 {
            excluded.push((p, 0));
        }
    }
    let set: BTreeSet<u64> = excluded.iter().map(|e| e.0).collect();
    let system = SiftingSystem::with_options(PrimeRule::All, rule, z, Cutoff::Strict, set)?;
    Ok(PolySystem { system, excluded, warnings })
}

/// `γ(q) = #{n mod q : gcd(q, F(n)) = 1} / q`, by enumeration.
pub fn gamma_q(f: &LinearFactorization, q: u64) -> Result<BigRational> {
    if q == 0 {
        return Err(Error::Parameter("q must be positive".into()));
    }
    let count = (0..q).into_par_iter().filter(|&n| gcd(f.eval_mod(n, q), q) == 1).count();
    Ok(BigRational::new(BigInt::from(count), BigInt::from(q)))
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularSeries {
    pub value: f64,
    pub cutoff: u64,
    pub primes: usize,
    /// `Σ_{p > cutoff} k²/p² ≤ k²/cutoff`: size of the omitted log-factor, reported only.
    pub tail_note: f64,
}

/// `Π_{p ≤ cutoff} γ(p) / (1 - 1/p)^k`, with `γ(p) = 1 - ρ(p)/p` from the root count.
pub fn singular_series(f: &LinearFactorization, cutoff: u64) -> SingularSeries {
    let rule = ResidueRule::LinearFactors(f.factors.clone());
    let k = f.k() as i32;
    let ps = primes_up_to(cutoff);
    let logs: Vec<f64> = ps
        .par_iter()
        .map(|&p| {
            let rho = rule.residues(p).len() as f64;
            let pf = p as f64;
            if rho >= pf {
                f64::NEG_INFINITY
            } else {
                (1.0 - rho / pf).ln() - k as f64 * (1.0 - 1.0 / pf).ln()
            }
        })
        .collect();
    let value = crate::expsum::summation::pairwise_sum(&logs).exp();
    let kk = (k * k) as f64;
    SingularSeries { value, cutoff, primes: ps.len(), tail_note: kk / cutoff.max(1) as f64 }
}

/// `{n ≤ N : a_i n + b_i is a positive prime for every i}`.
pub fn x_of_f(f: &LinearFactorization, n_max: u64) -> ApplicationSet {
    let members: Vec<u64> = (1..=n_max)
        .into_par_iter()
        .filter(|&n| {
            f.values(n)
                .into_iter()
                .all(|v| v > 0 && v <= u64::MAX as i128 && is_prime(v as u64))
        })
        .collect();
    ApplicationSet::new("X(F)", n_max, members)
}

/// `X(F) ⊆ S(N)` on members whose factor values are all at least `z`.
pub fn x_of_f_certificate(f: &LinearFactorization, poly: &PolySystem, set: &ApplicationSet) -> Certificate {
    let z = poly.system.z();
    let window = Window::full(&poly.system);
    let mut excluded = Vec::new();
    let mut violations = Vec::new();
    let mut checked = 0;
    for &n in &set.members {
        if f.values(n).iter().any(|&v| (v as f64) < z) {
            excluded.push(n);
            continue;
        }
        checked += 1;
        if !survives(&poly.system, n, window) {
            violations.push(n);
        }
    }
    let lo = excluded.iter().copied().max().unwrap_or(0);
    Certificate { name: "X(F) in S(N)".into(), range: (lo, set.n_max), checked, excluded, violations }
}

/// Whether `p > max(|Δ|, max|a_i|)` forces `λ(p) = k`, for primes up to `limit`.
pub fn generic_lambda_violations(f: &LinearFactorization, limit: u64) -> Vec<u64> {
    let rule = ResidueRule::LinearFactors(f.factors.clone());
    let disc = f.discriminant().abs();
    let max_a = f.factors.iter().map(|&(a, _)| a.unsigned_abs()).max().unwrap_or(0);
    primes_up_to(limit)
        .into_iter()
        .filter(|&p| BigInt::from(p) > disc && p > max_a)
        .filter(|&p| rule.residues(p).len() != f.k())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn twin() -> LinearFactorization {
        LinearFactorization::new(vec![(1, 0), (1, 2)]).unwrap()
    }

    #[test]
    fn residues_of_twin_form() {
        let ps = poly_system_at(&twin(), 10.0).unwrap();
        assert_eq!(ps.system.residues(5), vec![0, 3]);
        assert_eq!(ps.system.residues(2), vec![0]);
        let g = LinearFactorization::new(vec![(2, 1), (1, 1)]).unwrap();
        let gs = poly_system_at(&g, 10.0).unwrap();
        assert_eq!(gs.system.residues(2), vec![1]);
    }

    #[test]
    fn rejects_zero_discriminant() {
        assert_eq!(LinearFactorization::new(vec![(1, 1), (2, 2)]), Err(Error::ZeroDiscriminant));
    }

    #[test]
    fn degenerate_primes_removed() {
        // x(x+1) vanishes identically mod 2
        let f = LinearFactorization::new(vec![(1, 0), (1, 1)]).unwrap();
        let ps = poly_system_at(&f, 10.0).unwrap();
        assert_eq!(ps.excluded, vec![(2, 2)]);
        assert!(!ps.system.contains_prime(2));
        assert_eq!(ps.warnings.len(), 1);
    }

    #[test]
    fn gamma_examples() {
        let f = twin();
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(gamma_q(&f, 1).unwrap(), q(1, 1));
        assert_eq!(gamma_q(&f, 2).unwrap(), q(1, 2));
        assert_eq!(gamma_q(&f, 3).unwrap(), q(1, 3));
        assert_eq!(gamma_q(&f, 6).unwrap(), q(1, 6));
    }

    #[test]
    fn twin_primes_to_thirty() {
        assert_eq!(x_of_f(&twin(), 30).members, vec![3, 5, 11, 17, 29]);
        let id = LinearFactorization::new(vec![(1, 0)]).unwrap();
        assert_eq!(x_of_f(&id, 10).members, vec![2, 3, 5, 7]);
    }

    #[test]
    fn twin_certificate() {
        let f = twin();
        let ps = poly_system(&f, 10_000).unwrap();
        let set = x_of_f(&f, 10_000);
        let cert = x_of_f_certificate(&f, &ps, &set);
        assert!(cert.passes());
        assert_eq!(cert.excluded, vec![3, 5]);
    }

    #[test]
    fn twin_singular_series() {
        // 2 Π_{p>2} (1 - 1/(p-1)^2) ≈ 1.3203
        let s = singular_series(&twin(), 100_000);
        assert!((s.value - 1.320_323_6).abs() < 1e-4, "{}", s.value);
        assert!(generic_lambda_violations(&twin(), 1000).is_empty());
    }
}

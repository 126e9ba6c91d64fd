//! Exact checks of the `G`-sum inequalities.
//!
//! Every check compares two rationals; nothing here is approximate. The
//! printed lower bound `G(y) >= Π_{p<=y}(1 - λ(p)/p)^{-1}` is only probed (it
//! fails already for all primes with `λ ≡ 1` at `y = 10`); the bound that is
//! asserted instead is the term-by-term one
//! `G(y) >= Σ_{n<=y, p|n ⇒ p∈P, p<y} λ*(n)/n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::sums::{divisor_h_sum, divisor_h_sum_primes, g_sum, g_total, g_window, primes_below, v_over};
use super::system::{Cutoff, SiftingSystem};
use crate::arith::{self, primes_up_to};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LemmaId {
    /// `G(yd; z0) >= (Σ_{δ|d} h(δ)) G_d(y; z0)`
    DivisorUpper,
    /// `(Σ_{δ|d} h(δ)) G_d(y; z0) >= G(y; z0)`
    DivisorLower,
    /// `G(y) <= (Σ_{δ|P(z1)} h(δ)) G(y; z1)`
    Shift,
    /// `G(y; z0) >= Π_{p<z0}(1 - λ(p)/p) G(y)`
    Window,
    /// Printed lower bound `G(y) >= Π_{p<=y}(1 - λ(p)/p)^{-1}` (not asserted).
    ProductProbe,
    /// `G(y) >= Σ λ*(n)/n` over `P`-smooth `n <= y`.
    SmoothLower,
}

impl LemmaId {
    pub fn label(self) -> &'static str {
        match self {
            LemmaId::DivisorUpper => "divisor-upper",
            LemmaId::DivisorLower => "divisor-lower",
            LemmaId::Shift => "shift",
            LemmaId::Window => "window",
            LemmaId::ProductProbe => "product-probe",
            LemmaId::SmoothLower => "smooth-lower",
        }
    }

    pub fn asserted(self) -> bool {
        !matches!(self, LemmaId::ProductProbe)
    }
}

/// One exact comparison `lhs >= rhs`.
#[derive(Clone, Debug)]
pub struct LemmaCheck {
    pub id: LemmaId,
    pub y: f64,
    pub z0: f64,
    pub d: u64,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl LemmaCheck {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }

    /// A violation of an asserted inequality.
    pub fn is_failure(&self) -> bool {
        self.id.asserted() && !self.holds()
    }
}

fn coprime_to_window(system: &SiftingSystem, d: u64, z0: f64) -> bool {
    arith::prime_divisors(d)
        .into_iter()
        .all(|p| !(system.contains_prime(p) && system.cutoff().below(p, z0)))
}

/// Both divisor inequalities for `d` squarefree and coprime to `P(z0)`.
pub fn lemma_divisor(system: &SiftingSystem, y: f64, z0: f64, d: u64) -> Result<[LemmaCheck; 2]> {
    if !arith::is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    if !coprime_to_window(system, d, z0) {
        return Err(Error::Parameter(format!("d = {d} shares a prime with P(z0)")));
    }
    let middle = divisor_h_sum(system, d)? * g_sum(system, y, z0, d)?;
    let upper = g_window(system, y * d as f64, z0)?;
    let lower = g_window(system, y, z0)?;
    Ok([
        LemmaCheck { id: LemmaId::DivisorUpper, y, z0, d, lhs: upper, rhs: middle.clone() },
        LemmaCheck { id: LemmaId::DivisorLower, y, z0, d, lhs: middle, rhs: lower },
    ])
}

/// `G(y) <= (Σ_{δ|P(z1)} h(δ)) G(y; z1)`; reported as `rhs_side >= G(y)`.
pub fn lemma_shift(system: &SiftingSystem, y: f64, z1: f64) -> Result<LemmaCheck> {
    let ps = primes_below(system, z1);
    let bound = divisor_h_sum_primes(system, &ps)? * g_window(system, y, z1)?;
    Ok(LemmaCheck { id: LemmaId::Shift, y, z0: z1, d: 1, lhs: bound, rhs: g_total(system, y)? })
}

/// `G(y; z0) >= V(z0)^{-1} G(y)`.
pub fn lemma_window(system: &SiftingSystem, y: f64, z0: f64) -> Result<LemmaCheck> {
    let ps = primes_below(system, z0);
    let inv_v = v_over(system, &ps)?.recip();
    Ok(LemmaCheck {
        id: LemmaId::Window,
        y,
        z0,
        d: 1,
        lhs: g_window(system, y, z0)?,
        rhs: inv_v * g_total(system, y)?,
    })
}

/// The printed product lower bound, with `p <= y` as displayed.
pub fn lemma_product_probe(system: &SiftingSystem, y: f64) -> Result<LemmaCheck> {
    let ps: Vec<u64> = primes_up_to(arith::floor_u64(y))
        .into_iter()
        .filter(|&p| system.contains_prime(p) && Cutoff::Weak.below(p, y))
        .collect();
    Ok(LemmaCheck {
        id: LemmaId::ProductProbe,
        y,
        z0: 2.0,
        d: 1,
        lhs: g_total(system, y)?,
        rhs: v_over(system, &ps)?,
    })
}

/// `G(y) >= Σ_{n <= y} λ*(n)/n` over `n` with every prime factor in `P ∩ [2, y)`.
pub fn lemma_smooth_lower(system: &SiftingSystem, y: f64) -> Result<LemmaCheck> {
    let bound = arith::floor_u64(y);
    let primes: Vec<(u64, u64)> = primes_up_to(bound)
        .into_iter()
        .filter(|&p| system.contains_prime(p) && (p as f64) < y)
        .map(|p| (p, system.lambda(p)))
        .filter(|&(_, l)| l > 0)
        .collect();
    Ok(LemmaCheck {
        id: LemmaId::SmoothLower,
        y,
        z0: 2.0,
        d: 1,
        lhs: g_total(system, y)?,
        rhs: smooth_sum(&primes, 0, bound),
    })
}

// Σ λ*(m)/m over m <= limit built from primes[start..] (with multiplicity).
fn smooth_sum(primes: &[(u64, u64)], start: usize, limit: u64) -> BigRational {
    let mut total = BigRational::one();
    for i in start..primes.len() {
        let (p, lam) = primes[i];
        if p > limit {
            break;
        }
        let step = BigRational::new(BigInt::from(lam), BigInt::from(p));
        let mut weight = step.clone();
        let mut pk = p;
        loop {
            total += &weight * smooth_sum(primes, i + 1, limit / pk);
            match pk.checked_mul(p) {
                Some(next) if next <= limit => {
                    pk = next;
                    weight *= &step;
                }
                _ => break,
            }
        }
    }
    total
}

/// Scan `ys` and return every violation of the printed product bound.
pub fn product_probe_counterexamples(system: &SiftingSystem, ys: &[f64]) -> Result<Vec<LemmaCheck>> {
    let mut out = Vec::new();
    for &y in ys {
        let c = lemma_product_probe(system, y)?;
        if !c.holds() {
            out.push(c);
        }
    }
    Ok(out)
}

/// Count of failures among asserted checks.
pub fn failures(checks: &[LemmaCheck]) -> usize {
    checks.iter().filter(|c| c.is_failure()).count()
}

/// `true` when `lhs - rhs` is zero, i.e. the inequality is tight.
pub fn is_tight(check: &LemmaCheck) -> bool {
    (&check.lhs - &check.rhs).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::system::{PrimeRule, ResidueRule};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn printed_product_bound_fails_at_ten() {
        let s = SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), 4.0).unwrap();
        let c = lemma_product_probe(&s, 10.0).unwrap();
        assert_eq!(c.lhs, q(11, 3));
        assert_eq!(c.rhs, q(35, 8));
        assert!(!c.holds());
        assert!(!c.is_failure());
        let found = product_probe_counterexamples(&s, &[2.0, 5.0, 10.0, 100.0]).unwrap();
        assert!(found.iter().any(|c| c.y == 10.0));
    }

    #[test]
    fn smooth_lower_bound_small_case() {
        let s = SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), 4.0).unwrap();
        let c = lemma_smooth_lower(&s, 10.0).unwrap();
        // with λ ≡ 1 the right side is the harmonic sum over n <= 10 using primes < 10
        let harmonic = (1..=10).fold(q(0, 1), |acc, n| acc + q(1, n));
        assert_eq!(c.rhs, harmonic);
        assert!(c.holds());
    }

    #[test]
    fn divisor_inequalities_hold_on_a_fixed_case() {
        let s = SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0, 2]), 3.0).unwrap();
        for check in lemma_divisor(&s, 50.0, 5.0, 35).unwrap() {
            assert!(check.holds(), "{:?}", check.id);
        }
        assert!(lemma_divisor(&s, 50.0, 5.0, 6).is_err());
        assert!(lemma_shift(&s, 200.0, 11.0).unwrap().holds());
        assert!(lemma_window(&s, 200.0, 11.0).unwrap().holds());
    }
}

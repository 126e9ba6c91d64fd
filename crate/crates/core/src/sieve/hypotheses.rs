//! Empirical certificates for the growth hypotheses on `λ`, `V` and `|S(N)|`.

use serde::Serialize;

use super::sift::{sift, Window};
use super::sums::{to_f64, v_value};
use super::system::SiftingSystem;
use crate::arith::primes_up_to;
use crate::error::{Error, Result};

/// What to scan when fitting the hypothesis constants.
#[derive(Clone, Debug)]
pub struct HypothesisScan {
    pub y_lo: f64,
    pub y_hi: f64,
    /// Sieve dimension; defaults to `max_{p<z} λ(p)`.
    pub kappa: Option<f64>,
    /// `N` values for the density constants `c1`, `c2` (may be empty).
    pub n_samples: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisProfile {
    /// `max λ(p) p^{-1/4}` over `p ∈ P`, `p < z`.
    pub m: f64,
    pub m_argmax: Option<u64>,
    pub t: f64,
    pub t_argmax: f64,
    pub kappa: f64,
    pub y_range: (f64, f64),
    /// `V(y)/log^κ y` still rising at the right edge: `T` is not certified.
    pub kappa_misfit: bool,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
}

/// Fit `M`, `(T, κ)` and `(c1, c2)` for the system over the given ranges.
pub fn check_hypotheses(system: &SiftingSystem, scan: &HypothesisScan) -> Result<HypothesisProfile> {
    if !(scan.y_lo >= 2.0) || scan.y_hi < scan.y_lo {
        return Err(Error::Parameter(format!(
            "y range [{}, {}] must be finite with left endpoint >= 2",
            scan.y_lo, scan.y_hi
        )));
    }
    let (mut m, mut m_argmax) = (0.0f64, None);
    for p in system.sieving_primes() {
        let v = system.lambda(p) as f64 * (p as f64).powf(-0.25);
        if v > m {
            m = v;
            m_argmax = Some(p);
        }
    }
    let kappa = scan.kappa.unwrap_or(system.max_lambda() as f64);

    // V is a step function: V(y)/log^κ y decreases between the jumps just above
    // each p ∈ P, so the supremum sits at y_lo or at one of those right limits.
    let log_pow = |y: f64| y.ln().powf(kappa);
    let mut v = to_f64(&v_value(system, scan.y_lo)?);
    let mut samples = vec![(scan.y_lo, v / log_pow(scan.y_lo))];
    for p in primes_up_to(scan.y_hi.floor() as u64) {
        if (p as f64) < scan.y_lo || !system.contains_prime(p) || !system.cutoff().below(p, scan.y_hi) {
            continue;
        }
        let lam = system.lambda(p);
        if lam == 0 {
            continue;
        }
        if lam >= p {
            return Err(Error::Degenerate { p, lambda: lam });
        }
        v *= p as f64 / (p - lam) as f64;
        samples.push((p as f64, v / log_pow(p as f64)));
    }
    let (t_argmax, t) = samples
        .iter()
        .copied()
        .fold((scan.y_lo, f64::NEG_INFINITY), |acc, (y, r)| if r > acc.1 { (y, r) } else { acc });

    let split = (scan.y_lo * scan.y_hi).sqrt();
    let left = samples.iter().filter(|s| s.0 < split).map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let right = samples.iter().filter(|s| s.0 >= split).map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let kappa_misfit = right.is_finite() && left.is_finite() && right > left;

    let (mut c1, mut c2) = (None::<f64>, None::<f64>);
    if !scan.n_samples.is_empty() {
        let vz = to_f64(&v_value(system, system.z())?);
        for &n in &scan.n_samples {
            let count = sift(system, n, Window::full(system))?.len() as f64;
            let ratio = count * vz / n as f64;
            c1 = Some(c1.map_or(ratio, |c: f64| c.min(ratio)));
            c2 = Some(c2.map_or(ratio, |c: f64| c.max(ratio)));
        }
    }

    Ok(HypothesisProfile {
        m,
        m_argmax,
        t,
        t_argmax,
        kappa,
        y_range: (scan.y_lo, scan.y_hi),
        kappa_misfit,
        c1,
        c2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::system::{PrimeRule, ResidueRule};

    #[test]
    fn all_primes_dimension_one() {
        let s = SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), 100.0).unwrap();
        let prof = check_hypotheses(
            &s,
            &HypothesisScan { y_lo: 2.0, y_hi: 100.0, kappa: Some(1.0), n_samples: vec![] },
        )
        .unwrap();
        assert_eq!(prof.m_argmax, Some(2));
        assert!((prof.m - 2f64.powf(-0.25)).abs() < 1e-15);
        // the supremum is reached just above p = 2: V = 2, log 2
        assert_eq!(prof.t_argmax, 2.0);
        assert!((prof.t - 2.0 / 2f64.ln()).abs() < 1e-12);
        assert!(!prof.kappa_misfit);
        // T bounds every sampled V(y)
        for y in [2.5, 3.0, 7.5, 30.0, 99.0] {
            let v = to_f64(&v_value(&s, y).unwrap());
            assert!(v <= prof.t * y.ln() + 1e-12);
        }
    }

    #[test]
    fn empty_prime_set_has_dimension_zero() {
        let s = SiftingSystem::trivial(50.0).unwrap();
        let prof = check_hypotheses(
            &s,
            &HypothesisScan { y_lo: 2.0, y_hi: 1000.0, kappa: None, n_samples: vec![100, 1000] },
        )
        .unwrap();
        assert_eq!(prof.kappa, 0.0);
        assert_eq!(prof.t, 1.0);
        assert_eq!(prof.m, 0.0);
        assert_eq!(prof.c1, Some(1.0));
        assert_eq!(prof.c2, Some(1.0));
    }

    #[test]
    fn undersized_kappa_is_flagged() {
        let s = SiftingSystem::new(PrimeRule::classes(4, &[3]).unwrap(), ResidueRule::Fixed(vec![0]), 10.0).unwrap();
        let half = check_hypotheses(
            &s,
            &HypothesisScan { y_lo: 2.0, y_hi: 1e5, kappa: Some(0.5), n_samples: vec![] },
        )
        .unwrap();
        assert!(half.t.is_finite() && half.t > 0.0);
        let tiny = check_hypotheses(
            &s,
            &HypothesisScan { y_lo: 2.0, y_hi: 1e5, kappa: Some(0.05), n_samples: vec![] },
        )
        .unwrap();
        assert!(tiny.kappa_misfit);
    }

    #[test]
    fn density_constants_bracket_each_sample() {
        let s = SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), 8.0).unwrap();
        let ns = vec![1000, 5000, 20000];
        let prof = check_hypotheses(
            &s,
            &HypothesisScan { y_lo: 2.0, y_hi: 10.0, kappa: None, n_samples: ns.clone() },
        )
        .unwrap();
        let vz = to_f64(&v_value(&s, 8.0).unwrap());
        for n in ns {
            let count = sift(&s, n, Window::full(&s)).unwrap().len() as f64;
            assert!(prof.c1.unwrap() * n as f64 / vz <= count + 1e-9);
            assert!(count <= prof.c2.unwrap() * n as f64 / vz + 1e-9);
        }
    }
}

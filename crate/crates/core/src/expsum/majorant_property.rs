use std::f64::consts::PI;

use serde::Serialize;

use super::kernel::eval_naive;
use super::profile::CoefficientProfile;
use super::quadrature::{lp_norm, LpNorm};
use crate::error::{Error, Result};
use crate::sieve::SiftedSet;

/// `∫|Σ a_n e(nα)|^ℓ` against `∫|Σ_{n∈S} e(nα)|^ℓ`.
#[derive(Clone, Debug, Serialize)]
pub struct MajorantRatio {
    pub ell: f64,
    pub lhs: LpNorm,
    pub rhs: LpNorm,
    pub ratio: f64,
    pub lower_bound: LowerBoundCheck,
}

/// `|Σ_{n∈S} e(nα)| ≥ c1 N / (3V(z))` for `0 ≤ α ≤ c1 / (3π c2 N)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerBoundCheck {
    pub c1: f64,
    pub c2: f64,
    pub alpha_max: f64,
    /// `min_α |Σ e(nα)| / (c1 N / (3V))` over the sampled `α`.
    pub min_margin: f64,
    pub holds: bool,
}

/// Samples of `α` used by the lower-bound check.
pub const ALPHA_SAMPLES: usize = 33;

/// `(c1, c2)` default to `|S(N)| V(z) / N` (both).
pub fn majorant_ratio(
    profile: &CoefficientProfile,
    sifted: &SiftedSet,
    ell: f64,
    v_z: f64,
    h3: Option<(f64, f64)>,
) -> Result<MajorantRatio> {
    if let Some((n, a)) = profile.iter().find(|(_, a)| a.norm() > 1.0 + 1e-12) {
        return Err(Error::CoefficientBound { n, modulus: a.norm() });
    }
    if let Some(&n) = profile.support().iter().find(|&&n| !sifted.contains(n)) {
        return Err(Error::Support { n });
    }
    if !(ell >= 2.0) {
        return Err(Error::Parameter(format!("ℓ must be at least 2, got {ell}")));
    }
    let indicator = CoefficientProfile::indicator(sifted);
    let lhs = lp_norm(profile, ell)?;
    let rhs = lp_norm(&indicator, ell)?;
    let ratio = if rhs.value == 0.0 { 0.0 } else { lhs.value / rhs.value };

    let n = sifted.n_max as f64;
    let (c1, c2) = h3.unwrap_or_else(|| {
        let c = sifted.len() as f64 * v_z / n;
        (c, c)
    });
    let alpha_max = if c2 > 0.0 { c1 / (3.0 * PI * c2 * n) } else { 0.0 };
    let alphas: Vec<f64> = (0..ALPHA_SAMPLES).map(|i| alpha_max * i as f64 / (ALPHA_SAMPLES - 1) as f64).collect();
    let target = c1 * n / (3.0 * v_z);
    let min_abs = eval_naive(&indicator, &alphas).iter().map(|s| s.norm()).fold(f64::INFINITY, f64::min);
    let min_margin = if target > 0.0 { min_abs / target } else { f64::INFINITY };
    Ok(MajorantRatio {
        ell,
        lhs,
        rhs,
        ratio,
        lower_bound: LowerBoundCheck { c1, c2, alpha_max, min_margin, holds: min_margin >= 1.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::expsum::kernel::e;
    use crate::sieve::{sift, PrimeRule, ResidueRule, SiftingSystem, Window};

    fn setup() -> SiftedSet {
        let s = SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), 4.0).unwrap();
        sift(&s, 256, Window::full(&s)).unwrap()
    }

    #[test]
    fn indicator_and_rotation_have_ratio_one() {
        let set = setup();
        let ind = CoefficientProfile::indicator(&set);
        let r = majorant_ratio(&ind, &set, 4.0, 3.0, None).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
        assert!(r.lower_bound.holds);
        let rot = CoefficientProfile::from_fn(&set, |n| e(0.3 * n as f64));
        let r = majorant_ratio(&rot, &set, 4.0, 3.0, None).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn parseval_ratio_and_bounds() {
        let set = setup();
        let half = CoefficientProfile::from_fn(&set, |n| Complex64::new(if n % 3 == 1 { 1.0 } else { 0.5 }, 0.0));
        let r = majorant_ratio(&half, &set, 2.0, 3.0, None).unwrap();
        assert!((r.ratio - half.l2_sq() / set.len() as f64).abs() < 1e-9);
        let big = CoefficientProfile::from_fn(&set, |_| Complex64::new(2.0, 0.0));
        assert!(matches!(majorant_ratio(&big, &set, 4.0, 3.0, None), Err(Error::CoefficientBound { .. })));
    }
}

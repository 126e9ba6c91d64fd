use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::profile::CoefficientProfile;
use super::summation::pairwise_sum;
use crate::error::{Error, Result};

/// Initial grid is at least this large.
pub const MIN_POINTS: usize = 1024;
/// Doubling stops here and reports non-convergence.
pub const MAX_POINTS: usize = 1 << 24;
/// Relative change between successive doublings accepted as converged.
pub const REL_TOL: f64 = 1e-6;

/// `∫₀¹ |Σ a_n e(nα)|^ℓ dα` by the periodic rectangle rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LpNorm {
    pub value: f64,
    /// `|value - value at half the grid|`.
    pub error: f64,
    pub points: usize,
    pub converged: bool,
}

/// Rectangle rule on `M` equispaced nodes, all values from one inverse FFT.
pub fn rectangle_rule(profile: &CoefficientProfile, ell: f64, m: usize) -> f64 {
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (n, a) in profile.iter() {
        buf[(n % m as u64) as usize] += a;
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let powers: Vec<f64> = buf.par_iter().map(|s| s.norm().powf(ell)).collect();
    pairwise_sum(&powers) / m as f64
}

/// Start at `M = 2^⌈log2 max(2N+1, 1024)⌉` and double until the relative change
/// drops below `1e-6` or the grid reaches `2^24` points.
pub fn lp_norm(profile: &CoefficientProfile, ell: f64) -> Result<LpNorm> {
    lp_norm_with(profile, ell, REL_TOL, MAX_POINTS)
}

pub fn lp_norm_with(profile: &CoefficientProfile, ell: f64, rel_tol: f64, max_points: usize) -> Result<LpNorm> {
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(Error::Parameter(format!("ℓ must be positive and finite, got {ell}")));
    }
    if profile.is_empty() {
        return Ok(LpNorm { value: 0.0, error: 0.0, points: 0, converged: true });
    }
    let n = profile.n_max() as usize;
    let mut m = (2 * n + 1).max(MIN_POINTS).next_power_of_two().min(max_points.next_power_of_two());
    let mut prev = rectangle_rule(profile, ell, m);
    loop {
        if 2 * m > max_points {
            return Ok(LpNorm { value: prev, error: f64::NAN, points: m, converged: false });
        }
        m *= 2;
        let cur = rectangle_rule(profile, ell, m);
        let diff = (cur - prev).abs();
        if diff <= rel_tol * cur.abs() || cur == 0.0 {
            return Ok(LpNorm { value: cur, error: diff, points: m, converged: true });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{sift, SiftingSystem, Window};

    fn ones(n: u64) -> CoefficientProfile {
        let s = SiftingSystem::trivial(2.0).unwrap();
        CoefficientProfile::indicator(&sift(&s, n, Window::full(&s)).unwrap())
    }

    #[test]
    fn parseval() {
        let p = ones(100);
        let r = lp_norm(&p, 2.0).unwrap();
        assert!((r.value - 100.0).abs() < 1e-9 * 100.0);
        assert!(r.converged);
    }

    #[test]
    fn additive_quadruples_of_three() {
        let r = lp_norm(&ones(3), 4.0).unwrap();
        assert!((r.value - 19.0).abs() < 1e-9);
    }

    #[test]
    fn single_point() {
        let p = CoefficientProfile::unchecked(10, vec![7], vec![Complex64::new(0.0, 2.0)]);
        let r = lp_norm(&p, 3.3).unwrap();
        assert!((r.value - 2f64.powf(3.3)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_exponent_and_reports_cap() {
        assert!(lp_norm(&ones(3), 0.0).is_err());
        let r = lp_norm_with(&ones(50), 2.5, 0.0, 2048).unwrap();
        assert!(!r.converged);
    }
}

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::profile::CoefficientProfile;
use super::summation::pairwise_sum_complex;

/// `e(x) = exp(2πix)`, reducing `x` mod 1 first.
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (TAU * x.rem_euclid(1.0)).sin_cos();
    Complex64::new(c, s)
}

// e(n b) with n·b split exactly into a rounded product and its FMA residual,
// so the reduction mod 1 loses nothing for n < 2^53.
fn e_int(n: u64, b: f64) -> Complex64 {
    let x = n as f64;
    let p = x * b;
    let err = x.mul_add(b, -p);
    e(p.rem_euclid(1.0) + err)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    Naive,
    Fast,
    #[default]
    Auto,
}

/// Values `S(b) = Σ a_n e(nb)` with an a-priori absolute error bound.
#[derive(Clone, Debug)]
pub struct ExpSums {
    pub values: Vec<Complex64>,
    pub error_bound: f64,
    pub kernel: Kernel,
}

/// Direct summation, the reference kernel.
pub fn eval_naive(profile: &CoefficientProfile, points: &[f64]) -> Vec<Complex64> {
    points
        .par_iter()
        .map(|&b| {
            let terms: Vec<Complex64> = profile.iter().map(|(n, a)| a * e_int(n, b)).collect();
            pairwise_sum_complex(&terms)
        })
        .collect()
}

/// Nearest-grid FFT with a Taylor correction in the offset.
///
/// With `b = j/M + ε`, `|ε| ≤ 1/(2M)`, centre `n_c` and half-width `H`,
/// `S(b) = e(n_c ε) Σ_t (2πiεH)^t / t! · F_t(j)` where `F_t` is the DFT of
/// `a_n ((n - n_c)/H)^t`. Truncation after `T` terms costs at most
/// `‖a‖₁ x^T/T! e^x` with `x = πH/M`.
pub fn eval_fast(profile: &CoefficientProfile, points: &[f64], tol: f64) -> ExpSums {
    if profile.is_empty() {
        return ExpSums { values: vec![Complex64::new(0.0, 0.0); points.len()], error_bound: 0.0, kernel: Kernel::Fast };
    }
    let lo = profile.support()[0];
    let hi = *profile.support().last().unwrap();
    let centre = lo + (hi - lo) / 2;
    let half = ((hi - lo) as f64 / 2.0).max(1.0);
    let m = ((4 * (hi - lo + 1)).max(64) as usize).next_power_of_two();
    let x = PI * half / m as f64;
    let l1 = profile.l1();

    let mut terms = 1usize;
    let mut tail = x; // x^T / T!
    while l1 * tail * x.exp() > tol * l1.max(f64::MIN_POSITIVE) && terms < 40 {
        terms += 1;
        tail *= x / terms as f64;
    }
    let error_bound = l1 * tail * x.exp();

    let fft = FftPlanner::new().plan_fft_inverse(m);
    let grids: Vec<Vec<Complex64>> = (0..terms)
        .into_par_iter()
        .map(|t| {
            let mut buf = vec![Complex64::new(0.0, 0.0); m];
            for (n, a) in profile.iter() {
                let u = (n as f64 - centre as f64) / half;
                buf[(n % m as u64) as usize] += a * u.powi(t as i32);
            }
            fft.process(&mut buf);
            buf
        })
        .collect();

    let values = points
        .par_iter()
        .map(|&b| {
            let b = b.rem_euclid(1.0);
            let j = (b * m as f64).round() as usize % m;
            let eps = b - j as f64 / m as f64;
            let eps = eps - eps.round();
            let step = Complex64::new(0.0, TAU * eps * half);
            let mut coeff = Complex64::new(1.0, 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for (t, grid) in grids.iter().enumerate() {
                if t > 0 {
                    coeff *= step / t as f64;
                }
                acc += coeff * grid[j];
            }
            e_int(centre, eps) * acc
        })
        .collect();
    ExpSums { values, error_bound, kernel: Kernel::Fast }
}

/// `S(b)` at every point, choosing a kernel by estimated cost when `Auto`.
pub fn eval_expsum(profile: &CoefficientProfile, points: &[f64], kernel: Kernel) -> ExpSums {
    let chosen = match kernel {
        Kernel::Auto => {
            let span = profile.support().last().copied().unwrap_or(0) - profile.support().first().copied().unwrap_or(0);
            let m = (4 * (span + 1)).max(64) as f64;
            let naive = profile.len() as f64 * points.len() as f64;
            if naive > 16.0 * m * m.log2() {
                Kernel::Fast
            } else {
                Kernel::Naive
            }
        }
        k => k,
    };
    match chosen {
        Kernel::Fast => eval_fast(profile, points, 1e-13),
        _ => ExpSums {
            values: eval_naive(profile, points),
            error_bound: 1e-15 * profile.l1() * (profile.len().max(1) as f64).log2().max(1.0),
            kernel: Kernel::Naive,
        },
    }
}

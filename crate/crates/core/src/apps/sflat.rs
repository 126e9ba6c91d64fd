use num_complex::Complex64;
use serde::Serialize;

use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::expsum::{lp_norm, CoefficientProfile, InequalityRow, RowContext, TheoremTag};
use crate::sieve::{sift, Cutoff, PrimeRule, ResidueRule, SiftedSet, SiftingSystem, Window};

/// Default truncation of the product defining `C`.
pub const C_CUTOFF: u64 = 1_000_000;

/// `C = √2 Π_{p ≡ 3 mod 4} (1 - 1/p²)^{-1/2}` over `p ≤ cutoff`, and a bound on
/// the relative truncation error, `exp(1/(2·cutoff)) - 1`.
pub fn c_constant(cutoff: u64) -> (f64, f64) {
    let log: f64 = primes_up_to(cutoff)
        .into_iter()
        .filter(|p| p % 4 == 3)
        .map(|p| -0.5 * (1.0 - 1.0 / (p as f64 * p as f64)).ln())
        .sum();
    (2f64.sqrt() * log.exp(), (0.5 / cutoff as f64).exp_m1())
}

/// `S♭` coefficients and the normalizing prefactor.
#[derive(Clone, Debug)]
pub struct SflatProfile {
    pub profile: CoefficientProfile,
    pub sifted: SiftedSet,
    pub system: SiftingSystem,
    /// `4C Π_{p ≤ z, p ≡ 3 mod 4} (1 - 1/p)^{-1}`.
    pub prefactor: f64,
    /// `Π_{p ≤ z, p ≡ 3 mod 4} (1 - 1/p)`.
    pub density: f64,
    pub c_tail: f64,
}

/// `a_n = 1/√log n` on `5 ≤ n ≤ N`, `n ≡ 1 mod 4`, `gcd(n, P_{4,3}(z)) = 1`.
pub fn sflat_profile(n_max: u64, z: f64) -> Result<SflatProfile> {
    if n_max < 3 || !(z >= 2.0) {
        return Err(Error::Parameter(format!("need N >= 3 and z >= 2, got N = {n_max}, z = {z}")));
    }
    let system = SiftingSystem::with_options(
        PrimeRule::classes(4, &[2, 3])?,
        ResidueRule::Fixed(vec![0]),
        z,
        Cutoff::Weak,
        Default::default(),
    )?;
    let sifted = sift(&system, n_max, Window::full(&system))?;
    let (support, values): (Vec<u64>, Vec<Complex64>) = sifted
        .members
        .iter()
        .filter(|&&n| n >= 5 && n % 4 == 1)
        .map(|&n| (n, Complex64::new(1.0 / (n as f64).ln().sqrt(), 0.0)))
        .unzip();
    let profile = CoefficientProfile::new(&sifted, support, values)?;
    let density: f64 = system.primes_in(3.0, z).iter().map(|&p| 1.0 - 1.0 / p as f64).product();
    let (c, c_tail) = c_constant(C_CUTOFF);
    Ok(SflatProfile { profile, sifted, system, prefactor: 4.0 * c / density, density, c_tail })
}

/// Measured constant of `∫|S♭|^ℓ` against `N^{ℓ-1}/(log N)^{ℓ/2}`.
#[derive(Clone, Debug, Serialize)]
pub struct SflatMeasure {
    pub row: InequalityRow,
    /// `N^{ℓ-1}/log^ℓ N · Π(1 - 1/p)^ℓ`.
    pub intermediate_kernel: f64,
}

pub fn two_squares_measure(n_max: u64, z: f64, ell: f64) -> Result<SflatMeasure> {
    if !(ell > 2.0) {
        return Err(Error::Parameter(format!("ℓ must exceed 2, got {ell}")));
    }
    let sf = sflat_profile(n_max, z)?;
    let norm = lp_norm(&sf.profile, ell)?;
    let scale = sf.prefactor.powf(ell);
    let n = n_max as f64;
    let kernel = n.powf(ell - 1.0) / n.ln().powf(ell / 2.0);
    let ctx = RowContext::new(&sf.system, n_max, Some(1.0))?;
    let mut row = ctx.row(TheoremTag::TwoSquares, scale * norm.value, kernel);
    row.ell = Some(ell);
    row.lhs_error = scale * norm.error;
    row.converged = norm.converged;
    row.warnings.clear();
    let intermediate_kernel = n.powf(ell - 1.0) / n.ln().powf(ell) * sf.density.powf(ell);
    Ok(SflatMeasure { row, intermediate_kernel })
}

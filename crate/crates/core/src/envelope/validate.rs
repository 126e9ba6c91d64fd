use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::complement::ComplementSystem;
use super::majorant::{FourierMajorant, MajorantParams, Variant};
use crate::arith::{self, crt};
use crate::error::{Error, Result};
use crate::sieve::sums::{g_total, to_f64, v_value};
use crate::sieve::{sift, survives, SiftingSystem, Window};

/// Largest period evaluated by a single FFT.
pub const FULL_PERIOD_LIMIT: u64 = 1 << 22;
/// Most window primes handled by residue-class enumeration.
pub const MAX_CLASS_PRIMES: usize = 20;
/// Direct evaluations against the sifted set are capped at this `n`.
pub const DIRECT_LIMIT: u64 = 2000;

pub const SIFTED_TOL: f64 = 1e-6;
pub const IMAG_TOL: f64 = 1e-9;
pub const MEAN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationMode {
    /// `β` on every residue mod the period, via one inverse FFT.
    FullPeriod,
    /// `β` on representatives of each pattern of window primes hitting `n`.
    ResidueClasses,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub variant: String,
    pub mode: ValidationMode,
    pub period: Option<u64>,
    pub evaluations: usize,
    pub min_beta: f64,
    /// Minimum of `β` over `n` removed by exactly one window prime.
    pub min_beta_single: Option<f64>,
    pub max_imag: f64,
    pub max_dev_sifted: f64,
    pub min_beta_sifted: f64,
    pub sifted_checked: usize,
    pub mean: f64,
    pub w_one: f64,
    pub mean_error: f64,
    /// Spread of `β` between two representatives of the same class pattern.
    pub class_spread: f64,
    pub failed_majorant: bool,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.max_dev_sifted < SIFTED_TOL && self.max_imag < IMAG_TOL && self.mean_error <= MEAN_TOL * self.w_one.abs().max(1.0)
    }

    pub fn nonnegative(&self) -> bool {
        self.min_beta >= -SIFTED_TOL
    }
}

#[derive(Default)]
struct Acc {
    evaluations: usize,
    min_beta: f64,
    min_single: Option<f64>,
    max_imag: f64,
    max_dev: f64,
    min_sifted: f64,
    sifted: usize,
}

impl Acc {
    fn new() -> Self {
        Acc { min_beta: f64::INFINITY, min_sifted: f64::INFINITY, ..Default::default() }
    }

    fn record(&mut self, v: Complex64, hits: usize, member: bool) {
        self.evaluations += 1;
        self.min_beta = self.min_beta.min(v.re);
        self.max_imag = self.max_imag.max(v.im.abs());
        if hits == 1 {
            self.min_single = Some(self.min_single.map_or(v.re, |m| m.min(v.re)));
        }
        if member {
            self.sifted += 1;
            self.max_dev = self.max_dev.max((v.re - 1.0).abs());
            self.min_sifted = self.min_sifted.min(v.re);
        }
    }
}

fn hits(system: &SiftingSystem, primes: &[u64], n: u64) -> usize {
    primes.iter().filter(|&&p| system.residues(p).binary_search(&(n % p)).is_ok()).count()
}

/// Evaluate `β` for the given variant and compare it with the sifted set `S'`.
pub fn majorant_validate(
    system: &SiftingSystem,
    params: MajorantParams,
    variant: Variant,
    n_max: u64,
) -> Result<ValidationReport> {
    let maj = FourierMajorant::build(system, params, variant)?;
    validate_table(system, &maj, n_max)
}

/// Same as [`majorant_validate`] for an already built table.
pub fn validate_table(system: &SiftingSystem, maj: &FourierMajorant, n_max: u64) -> Result<ValidationReport> {
    let window = Window::new(maj.params.z0, maj.params.z);
    let primes = system.primes_in(maj.params.z0.max(2.0), maj.params.z);
    let period = maj.period();
    let mut acc = Acc::new();
    let (mode, mean, class_spread) = match period {
        Some(q) if q <= FULL_PERIOD_LIMIT => (ValidationMode::FullPeriod, full_period(system, maj, &primes, q, &mut acc)?, 0.0),
        _ => {
            let (mean, spread) = residue_classes(system, maj, &mut acc)?;
            (ValidationMode::ResidueClasses, mean, spread)
        }
    };

    // Direct evaluation on an initial segment, membership from the sieve.
    let direct_max = n_max.min(DIRECT_LIMIT);
    if direct_max > 0 {
        let set = sift(system, direct_max, window)?;
        for n in 1..=direct_max {
            let v = maj.beta_complex(n);
            acc.record(v, hits(system, &primes, n), set.contains(n));
        }
    }

    let w_one = maj.w_one();
    let min_sifted = acc.min_sifted;
    Ok(ValidationReport {
        variant: maj.variant.label(),
        mode,
        period,
        evaluations: acc.evaluations,
        min_beta: acc.min_beta,
        min_beta_single: acc.min_single,
        max_imag: acc.max_imag,
        max_dev_sifted: acc.max_dev,
        min_beta_sifted: min_sifted,
        sifted_checked: acc.sifted,
        mean,
        w_one,
        mean_error: (mean - w_one).abs(),
        class_spread,
        failed_majorant: min_sifted < 1.0 - SIFTED_TOL,
    })
}

fn full_period(
    system: &SiftingSystem,
    maj: &FourierMajorant,
    primes: &[u64],
    q: u64,
    acc: &mut Acc,
) -> Result<f64> {
    let len = q as usize;
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for row in maj.rows() {
        let j = ((row.a % row.q) as u128 * (q / row.q) as u128 % q as u128) as usize;
        buf[j] += row.w;
    }
    FftPlanner::new().plan_fft_inverse(len).process(&mut buf);
    let set = sift(system, q, Window::new(maj.params.z0, maj.params.z))?;
    let mut members = vec![false; len];
    for &n in &set.members {
        members[(n % q) as usize] = true;
    }
    for (n, &v) in buf.iter().enumerate() {
        acc.record(v, hits(system, primes, n as u64), members[n]);
    }
    let sum: f64 = crate::expsum::summation::pairwise_sum(&buf.iter().map(|v| v.re).collect::<Vec<_>>());
    Ok(sum / q as f64)
}

// β depends on n only through the set E of window primes with n mod p ∈ L_p,
// so one representative per E (plus a second one as a consistency check)
// covers the whole period.
fn residue_classes(system: &SiftingSystem, maj: &FourierMajorant, acc: &mut Acc) -> Result<(f64, f64)> {
    let comp = ComplementSystem::new(system, maj.params.z0, maj.params.z)?;
    let primes = comp.window_primes();
    if primes.len() > MAX_CLASS_PRIMES {
        return Err(Error::Parameter(format!(
            "{} window primes exceed the class-enumeration limit {MAX_CLASS_PRIMES}",
            primes.len()
        )));
    }
    let window = Window::new(maj.params.z0, maj.params.z);
    let mut mean = 0.0;
    let mut spread = 0.0f64;
    for mask in 0u64..(1 << primes.len()) {
        let mut first = Vec::with_capacity(primes.len());
        let mut last = Vec::with_capacity(primes.len());
        let mut prob = 1.0;
        for (i, &p) in primes.iter().enumerate() {
            let hit = mask >> i & 1 == 1;
            let lam = comp.lambda(p);
            let pool: Vec<u64> = if hit { system.residues(p) } else { comp.complement(p).unwrap_or(&[]).to_vec() };
            first.push((pool[0], p));
            last.push((pool[pool.len() - 1], p));
            prob *= if hit { lam as f64 } else { (p - lam) as f64 } / p as f64;
        }
        let (n1, _) = crt(&first);
        let (n2, _) = crt(&last);
        let b1 = maj.beta_complex(n1);
        let b2 = maj.beta_complex(n2);
        let k = mask.count_ones() as usize;
        let member = survives(system, n1, window);
        if member != (mask == 0) || survives(system, n2, window) != (mask == 0) {
            return Err(Error::Parameter(format!("class representative {n1} has inconsistent membership")));
        }
        acc.record(b1, k, member);
        acc.record(b2, k, member);
        spread = spread.max((b1 - b2).norm());
        mean += prob * b1.re;
    }
    Ok((mean, spread))
}

/// Every variant's report, shipped default first.
pub fn variant_harness(system: &SiftingSystem, params: MajorantParams, n_max: u64) -> Result<Vec<ValidationReport>> {
    Variant::all().into_iter().map(|v| majorant_validate(system, params, v, n_max)).collect()
}

/// The first variant (default first) whose majorant equals 1 on `S'`.
pub fn select_variant(system: &SiftingSystem, params: MajorantParams, n_max: u64) -> Result<(Variant, ValidationReport)> {
    for v in Variant::all() {
        let report = majorant_validate(system, params, v, n_max)?;
        if report.passes() {
            return Ok((v, report));
        }
    }
    Err(Error::Parameter("no interpretation variant reproduces the sifted set".into()))
}

/// Measured constants of the coefficient bound.
#[derive(Clone, Debug, Serialize)]
pub struct CoefficientBounds {
    /// `max |w(a/q)| √q G(z) / V(z0)` over the table.
    pub scaled_max: f64,
    pub scaled_argmax: (u64, u64),
    /// `max (|character_sum(a, q)| - Π λ/(p - λ))`; should not exceed `1e-12`.
    pub char_excess: f64,
    /// `max 3^{ω(q)} Π_{p|q} λ(p)/(p - λ(p)) · √q` over table moduli.
    pub c_m: f64,
}

pub fn coefficient_bounds(system: &SiftingSystem, maj: &FourierMajorant) -> Result<CoefficientBounds> {
    let comp = ComplementSystem::new(system, maj.params.z0, maj.params.z)?;
    let g = to_f64(&g_total(system, maj.params.z)?);
    let v = to_f64(&v_value(system, maj.params.z0)?);
    let mut out = CoefficientBounds { scaled_max: 0.0, scaled_argmax: (1, 1), char_excess: f64::NEG_INFINITY, c_m: 0.0 };
    for block in &maj.blocks {
        let q = block.q;
        let bound = comp.character_bound(q);
        out.c_m = out.c_m.max(3f64.powi(arith::omega(q) as i32) * bound * (q as f64).sqrt());
        for &(a, w) in &block.entries {
            let s = w.norm() * (q as f64).sqrt() * g / v;
            if s > out.scaled_max {
                out.scaled_max = s;
                out.scaled_argmax = (q, a);
            }
            let cs = comp.character_sum(a % q, q)?;
            out.char_excess = out.char_excess.max(cs.norm() - bound);
        }
    }
    Ok(out)
}

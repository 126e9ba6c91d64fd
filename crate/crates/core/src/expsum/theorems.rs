//! Both sides of the restriction and large-sieve inequalities, with the
//! measured constant `lhs / kernel`.

use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{e, eval_expsum, Kernel};
use super::profile::{CoefficientProfile, FrequencyFunction};
use super::quadrature::lp_norm;
use super::summation::{pairwise_sum, pairwise_sum_complex};
use super::wellspaced::WellSpacedSet;
use crate::error::{Error, Result};
use crate::sieve::sums::{to_f64, v_value};
use crate::sieve::{SiftedSet, SiftingSystem};

/// Relative slack of the classical large-sieve ceiling.
pub const CEILING_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremTag {
    /// `∫|S|^ℓ` against `(1/N)(2N/V(z) Σ|a_n|²)^{ℓ/2}`.
    Restriction,
    /// `Σ_b |S(b)|^ℓ` against `((N+δ⁻¹)/V(z) Σ|a_n|²)^{ℓ/2}`.
    WellSpaced,
    /// `Σ_n |Σ_b f(b)e(nb)|²` against `(N+δ⁻¹)/V(z) log^κ(2‖f‖₁²/‖f‖₂²) ‖f‖₂²`.
    Dual,
    /// `Σ_b |S(b)|²` against `(N+δ⁻¹)/V(z) log^κ(2|B|) Σ|a_n|²`.
    LargeSieve,
    /// `∫|S_a|^ℓ` against `∫|S_1|^ℓ` for `|a_n| ≤ 1`.
    Majorant,
    /// Weighted restriction on the sums-of-two-squares set.
    TwoSquares,
}

impl TheoremTag {
    pub fn label(self) -> &'static str {
        match self {
            TheoremTag::Restriction => "restriction",
            TheoremTag::WellSpaced => "well-spaced",
            TheoremTag::Dual => "dual",
            TheoremTag::LargeSieve => "large-sieve",
            TheoremTag::Majorant => "majorant",
            TheoremTag::TwoSquares => "two-squares",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            TheoremTag::Restriction,
            TheoremTag::WellSpaced,
            TheoremTag::Dual,
            TheoremTag::LargeSieve,
            TheoremTag::Majorant,
            TheoremTag::TwoSquares,
        ]
        .into_iter()
        .find(|t| t.label() == s)
    }
}

/// One evaluated inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityRow {
    pub theorem: TheoremTag,
    pub n: u64,
    pub z: f64,
    pub delta: Option<f64>,
    pub ell: Option<f64>,
    pub kappa: f64,
    pub lhs: f64,
    pub kernel: f64,
    /// `lhs / kernel`; zero for an empty profile.
    pub constant: f64,
    /// Quadrature error estimate of `lhs` (zero for finite sums).
    pub lhs_error: f64,
    pub converged: bool,
    /// `(N+δ⁻¹) Σ|a_n|²`, for large-sieve rows.
    pub ceiling: Option<f64>,
    /// `(2‖f‖₁²/‖f‖₂²)²`, for dual rows.
    pub z0: Option<f64>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub runtime_ms: f64,
}

impl InequalityRow {
    /// `lhs ≤ ceiling` up to [`CEILING_SLACK`]; `true` when no ceiling applies.
    pub fn within_ceiling(&self) -> bool {
        self.ceiling.is_none_or(|c| self.lhs <= c * (1.0 + CEILING_SLACK))
    }

    /// `z0 ≤ z` for dual rows.
    pub fn z0_within(&self) -> Option<bool> {
        self.z0.map(|z0| z0 <= self.z)
    }
}

/// Parameters shared by every row of one configuration.
#[derive(Clone, Copy, Debug)]
pub struct RowContext {
    pub n: u64,
    pub z: f64,
    pub kappa: f64,
    pub v_z: f64,
}

impl RowContext {
    /// `κ` defaults to `max λ(p)`.
    pub fn new(system: &SiftingSystem, n: u64, kappa: Option<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("N must be at least 1".into()));
        }
        Ok(RowContext {
            n,
            z: system.z(),
            kappa: kappa.unwrap_or(system.max_lambda() as f64),
            v_z: to_f64(&v_value(system, system.z())?),
        })
    }

    fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.z > (self.n as f64).powf(0.25) * (1.0 + 1e-12) {
            w.push(format!("z = {} exceeds N^(1/4) = {:.6}", self.z, (self.n as f64).powf(0.25)));
        }
        w
    }

    pub(crate) fn row(&self, theorem: TheoremTag, lhs: f64, kernel: f64) -> InequalityRow {
        InequalityRow {
            theorem,
            n: self.n,
            z: self.z,
            delta: None,
            ell: None,
            kappa: self.kappa,
            lhs,
            kernel,
            constant: ratio(lhs, kernel),
            lhs_error: 0.0,
            converged: true,
            ceiling: None,
            z0: None,
            warnings: self.warnings(),
            runtime_ms: 0.0,
        }
    }
}

fn ratio(lhs: f64, kernel: f64) -> f64 {
    if kernel == 0.0 {
        0.0
    } else {
        lhs / kernel
    }
}

fn log_kappa(x: f64, kappa: f64) -> f64 {
    if kappa == 0.0 {
        1.0
    } else {
        x.ln().powf(kappa)
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64() * 1e3))
}

/// `∫₀¹|Σ a_n e(nα)|^ℓ dα` against `(1/N)(2N/V(z) Σ|a_n|²)^{ℓ/2}`.
pub fn restriction_row(profile: &CoefficientProfile, ell: f64, ctx: &RowContext) -> Result<InequalityRow> {
    let (norm, ms) = timed(|| lp_norm(profile, ell))?;
    let n = ctx.n as f64;
    let kernel = (2.0 * n / ctx.v_z * profile.l2_sq()).powf(ell / 2.0) / n;
    let mut row = ctx.row(TheoremTag::Restriction, norm.value, kernel);
    row.ell = Some(ell);
    row.lhs_error = norm.error;
    row.converged = norm.converged;
    row.runtime_ms = ms;
    if ell <= 2.0 {
        row.warnings.push(format!("ℓ = {ell} is at or below the endpoint 2"));
    }
    if !norm.converged {
        row.warnings.push("quadrature did not converge".into());
    }
    Ok(row)
}

/// `Σ_{b∈B} |S(b)|^ℓ` against `((N+δ⁻¹)/V(z) Σ|a_n|²)^{ℓ/2}`.
pub fn wellspaced_row(profile: &CoefficientProfile, set: &WellSpacedSet, ell: f64, ctx: &RowContext) -> Result<InequalityRow> {
    if !(ell > 0.0) {
        return Err(Error::Parameter(format!("ℓ must be positive, got {ell}")));
    }
    let (sums, ms) = timed(|| Ok(eval_expsum(profile, set.points(), Kernel::Auto)))?;
    let powers: Vec<f64> = sums.values.iter().map(|s| s.norm().powf(ell)).collect();
    let lhs = pairwise_sum(&powers);
    let u2 = (ctx.n as f64 + 1.0 / set.delta()) / ctx.v_z * profile.l2_sq();
    let mut row = ctx.row(TheoremTag::WellSpaced, lhs, u2.powf(ell / 2.0));
    row.delta = Some(set.delta());
    row.ell = Some(ell);
    row.lhs_error = sums.error_bound * ell * sums.values.iter().map(|s| s.norm().powf(ell - 1.0)).fold(0.0, f64::max) * set.len() as f64;
    row.runtime_ms = ms;
    Ok(row)
}

/// `T(n) = Σ_b f(b) e(nb)` for each member `n`.
pub fn dual_sums(f: &FrequencyFunction, members: &[u64]) -> Vec<Complex64> {
    let pts = f.set.points();
    members
        .par_iter()
        .map(|&n| {
            let terms: Vec<Complex64> = pts.iter().zip(&f.values).map(|(&b, &v)| v * e_nb(n, b)).collect();
            pairwise_sum_complex(&terms)
        })
        .collect()
}

fn e_nb(n: u64, b: f64) -> Complex64 {
    let x = n as f64;
    let p = x * b;
    e(p.rem_euclid(1.0) + x.mul_add(b, -p))
}

/// `Σ_{n∈S(N)} |Σ_b f(b)e(nb)|²` against `(N+δ⁻¹)/V(z) log^κ(2‖f‖₁²/‖f‖₂²) ‖f‖₂²`.
pub fn dual_row(f: &FrequencyFunction, sifted: &SiftedSet, ctx: &RowContext) -> Result<InequalityRow> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let (t, ms) = timed(|| Ok(dual_sums(f, &sifted.members)))?;
    let lhs = pairwise_sum(&t.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>());
    let l1 = f.l1();
    let l2 = f.l2_sq();
    let r = 2.0 * l1 * l1 / l2;
    let kernel = (ctx.n as f64 + 1.0 / f.set.delta()) / ctx.v_z * log_kappa(r, ctx.kappa) * l2;
    let mut row = ctx.row(TheoremTag::Dual, lhs, kernel);
    row.delta = Some(f.set.delta());
    row.z0 = Some(r * r);
    row.runtime_ms = ms;
    Ok(row)
}

/// `Σ_b |S(b)|²` against `(N+δ⁻¹)/V(z) log^κ(2|B|) Σ|a_n|²`, with the classical
/// ceiling `(N+δ⁻¹) Σ|a_n|²`.
pub fn large_sieve_row(profile: &CoefficientProfile, set: &WellSpacedSet, ctx: &RowContext) -> Result<InequalityRow> {
    let (sums, ms) = timed(|| Ok(eval_expsum(profile, set.points(), Kernel::Auto)))?;
    let lhs = pairwise_sum(&sums.values.iter().map(|s| s.norm_sqr()).collect::<Vec<_>>());
    let base = (ctx.n as f64 + 1.0 / set.delta()) * profile.l2_sq();
    let kernel = base / ctx.v_z * log_kappa(2.0 * set.len() as f64, ctx.kappa);
    let mut row = ctx.row(TheoremTag::LargeSieve, lhs, kernel);
    row.delta = Some(set.delta());
    row.ell = Some(2.0);
    row.ceiling = Some(base);
    row.lhs_error = 2.0 * sums.error_bound * sums.values.iter().map(|s| s.norm()).fold(0.0, f64::max) * set.len() as f64;
    row.runtime_ms = ms;
    Ok(row)
}

/// `(Σ_b|S(b)|²)² ≤ Σ|a_n|² · Σ_{n∈S}|Σ_b conj(S(b)) e(nb)|²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DualityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn duality_check(profile: &CoefficientProfile, set: &WellSpacedSet, sifted: &SiftedSet) -> Result<DualityCheck> {
    let sums = eval_expsum(profile, set.points(), Kernel::Naive);
    let ls = pairwise_sum(&sums.values.iter().map(|s| s.norm_sqr()).collect::<Vec<_>>());
    let f = FrequencyFunction::new(set.clone(), sums.values.iter().map(|s| s.conj()).collect())?;
    let t = dual_sums(&f, &sifted.members);
    let dual = pairwise_sum(&t.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>());
    let lhs = ls * ls;
    let rhs = profile.l2_sq() * dual;
    Ok(DualityCheck { lhs, rhs, holds: lhs <= rhs * (1.0 + 1e-10) + 1e-12 })
}

pub const CSV_HEADER: &str = "theorem,N,z,delta,ell,kappa,lhs,kernel,constant,runtime_ms";

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:e}"))
}

/// Rows as CSV; `runtime_ms` is left blank unless `with_runtime` is set, so
/// that repeated runs produce identical bytes.
pub fn rows_to_csv(rows: &[InequalityRow], with_runtime: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let runtime = if with_runtime { format!("{:.3}", r.runtime_ms) } else { String::new() };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:e},{:e},{:e},{}",
            r.theorem.label(),
            r.n,
            r.z,
            opt(r.delta),
            opt(r.ell),
            r.kappa,
            r.lhs,
            r.kernel,
            r.constant,
            runtime
        );
    }
    out
}

/// One JSON object per line.
pub fn rows_to_jsonl(rows: &[InequalityRow]) -> Result<String> {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r).map_err(|e| Error::Parse(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complement::{unit_root, ComplementSystem};
use crate::arith::{self, gcd, mobius};
use crate::error::{Error, Result};
use crate::sieve::sums::{g_window, squarefree_sum, to_f64};
use crate::sieve::SiftingSystem;

/// Which `r` enter `ρ(d) = Σ_r μ(r)` in the Selberg weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RRange {
    /// Squarefree `r ≤ R/d`.
    Unrestricted,
    /// Squarefree `r ≤ R/d` with `gcd(r, d·P(z0, z)) = 1`.
    CoprimeToWindow,
    /// `r | P(z0, z)`, `rd ≤ R`.
    WindowDivisors,
    /// `r | P(z0, z)`, `gcd(r, d) = 1`, `rd ≤ R`.
    WindowCoprime,
}

/// Which `G` normalizes the coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `Σ h_[z0,z](ℓ)` over `ℓ ≤ z`.
    Window,
    /// `G(z; z0)` of the whole system.
    Global,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variant {
    pub r_range: RRange,
    pub normalization: Normalization,
}

impl Default for Variant {
    fn default() -> Self {
        Variant { r_range: RRange::WindowCoprime, normalization: Normalization::Window }
    }
}

impl Variant {
    /// Every variant, shipped default first.
    pub fn all() -> Vec<Variant> {
        let mut out = vec![Variant::default()];
        for normalization in [Normalization::Window, Normalization::Global] {
            for r_range in [RRange::WindowCoprime, RRange::WindowDivisors, RRange::CoprimeToWindow, RRange::Unrestricted] {
                let v = Variant { r_range, normalization };
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let r = match self.r_range {
            RRange::Unrestricted => "unrestricted",
            RRange::CoprimeToWindow => "coprime-to-window",
            RRange::WindowDivisors => "window-divisors",
            RRange::WindowCoprime => "window-coprime",
        };
        let g = match self.normalization {
            Normalization::Window => "window-g",
            Normalization::Global => "global-g",
        };
        format!("{r}/{g}")
    }
}

/// Sieve parameters `z0`, `z` and the Selberg level `R` (default `R = z`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorantParams {
    pub z0: f64,
    pub z: f64,
    pub r: f64,
}

impl MajorantParams {
    pub fn new(z0: f64, z: f64) -> Self {
        MajorantParams { z0, z, r: z }
    }

    pub fn with_level(self, r: f64) -> Self {
        MajorantParams { r, ..self }
    }
}

/// All coefficients sharing one modulus: `w(a/q) = scale · character_sum(a, q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MajorantBlock {
    pub q: u64,
    pub scale: f64,
    pub entries: Vec<(u64, Complex64)>,
}

/// One exported coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MajorantRow {
    pub q: u64,
    pub a: u64,
    pub w: Complex64,
}

/// The coefficient table `{(q, a, w(a/q))}` of the enveloping sieve.
#[derive(Clone, Debug)]
pub struct FourierMajorant {
    pub params: MajorantParams,
    pub variant: Variant,
    pub g_window: BigRational,
    pub window_primes: Vec<u64>,
    pub blocks: Vec<MajorantBlock>,
}

// Squarefree products of `primes` not exceeding `limit`, sorted.
fn squarefree_products(primes: &[u64], limit: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for &p in primes {
        let extra: Vec<u64> = out.iter().filter_map(|&d| d.checked_mul(p)).filter(|&m| m <= limit).collect();
        out.extend(extra);
    }
    out.sort_unstable();
    out
}

fn divisors_of_squarefree(n: u64) -> Vec<u64> {
    squarefree_products(&arith::prime_divisors(n), n)
}

fn rho(variant: RRange, d: u64, level: u64, window: &[u64]) -> i64 {
    let cap = level / d;
    match variant {
        RRange::Unrestricted => (1..=cap).map(mobius).sum(),
        RRange::CoprimeToWindow => (1..=cap)
            .filter(|&r| window.iter().all(|&p| r % p != 0))
            .map(mobius)
            .sum(),
        RRange::WindowDivisors => squarefree_products(window, cap).into_iter().map(mobius).sum(),
        RRange::WindowCoprime => squarefree_products(window, cap)
            .into_iter()
            .filter(|&r| gcd(r, d) == 1)
            .map(mobius)
            .sum(),
    }
}

impl FourierMajorant {
    pub fn build(system: &SiftingSystem, params: MajorantParams, variant: Variant) -> Result<Self> {
        let MajorantParams { z0, z, r } = params;
        if !(z0 >= 1.0) || !(r >= 1.0) {
            return Err(Error::Parameter(format!("need z0 >= 1 and R >= 1, got z0 = {z0}, R = {r}")));
        }
        let comp = ComplementSystem::new(system, z0, z)?;
        let window = comp.window_primes();
        let level = arith::floor_u64(r);
        let z_floor = arith::floor_u64(z);
        let q_max = arith::floor_u64(z * z);

        let weights: Vec<(u64, BigRational)> = window.iter().map(|&p| (p, comp.h_window(p))).collect();
        let g_norm = match variant.normalization {
            Normalization::Window => squarefree_sum(&weights, 0, z_floor),
            Normalization::Global => g_window(system, z, z0)?,
        };
        if g_norm.is_zero() {
            return Err(Error::Parameter("normalizing G vanishes".into()));
        }

        let small = squarefree_products(&window, level);
        let rhos: Vec<(u64, i64)> = small
            .iter()
            .map(|&d| (d, rho(variant.r_range, d, level, &window)))
            .filter(|&(_, c)| c != 0)
            .collect();

        // H(g) = Σ_{k | g, k ≤ z} h_[z0,z](k), g ranging over gcds of small divisors.
        let mut h_cache: BTreeMap<u64, BigRational> = BTreeMap::new();
        let mut t: BTreeMap<u64, BigRational> = BTreeMap::new();
        for &(d1, r1) in &rhos {
            for &(d2, r2) in &rhos {
                let g = gcd(d1, d2);
                let hg = h_cache
                    .entry(g)
                    .or_insert_with(|| {
                        divisors_of_squarefree(g)
                            .into_iter()
                            .filter(|&k| k <= z_floor)
                            .fold(BigRational::zero(), |acc, k| acc + comp.h_window(k))
                    })
                    .clone();
                let c = hg * BigInt::from(r1 * r2);
                if c.is_zero() {
                    continue;
                }
                for q in divisors_of_squarefree(d1 / g * d2) {
                    if q <= q_max {
                        *t.entry(q).or_insert_with(BigRational::zero) += &c;
                    }
                }
            }
        }

        let g2 = &g_norm * &g_norm;
        let scaled: Vec<(u64, f64)> = t
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(q, v)| (q, to_f64(&(v / &g2))))
            .collect();
        let blocks = scaled
            .into_par_iter()
            .map(|(q, scale)| {
                let entries = (1..=q)
                    .filter(|&a| gcd(a, q) == 1)
                    .map(|a| comp.character_sum(a % q, q).map(|cs| (a, cs * scale)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(MajorantBlock { q, scale, entries })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(FourierMajorant { params, variant, g_window: g_norm, window_primes: window, blocks })
    }

    /// Rebuild from exported rows; `scale` is recovered from the `q`-blocks as `|w|` maximum.
    pub fn from_rows(params: MajorantParams, variant: Variant, rows: &[MajorantRow]) -> Self {
        let mut grouped: BTreeMap<u64, Vec<(u64, Complex64)>> = BTreeMap::new();
        for row in rows {
            grouped.entry(row.q).or_default().push((row.a, row.w));
        }
        let mut primes: Vec<u64> = grouped.keys().flat_map(|&q| arith::prime_divisors(q)).collect();
        primes.sort_unstable();
        primes.dedup();
        let blocks = grouped
            .into_iter()
            .map(|(q, mut entries)| {
                entries.sort_by_key(|e| e.0);
                let scale = entries.iter().map(|e| e.1.norm()).fold(0.0, f64::max);
                MajorantBlock { q, scale, entries }
            })
            .collect();
        FourierMajorant { params, variant, g_window: BigRational::one(), window_primes: primes, blocks }
    }

    pub fn rows(&self) -> Vec<MajorantRow> {
        self.blocks
            .iter()
            .flat_map(|b| b.entries.iter().map(move |&(a, w)| MajorantRow { q: b.q, a, w }))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.entries.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn coefficient(&self, a: u64, q: u64) -> Option<Complex64> {
        let block = self.blocks.iter().find(|b| b.q == q)?;
        let a = if q == 1 { 1 } else { a % q };
        block.entries.iter().find(|e| e.0 == a).map(|e| e.1)
    }

    /// The `q = 1` coefficient, i.e. the mean of `β` over a period.
    pub fn w_one(&self) -> f64 {
        self.coefficient(1, 1).map_or(0.0, |w| w.re)
    }

    /// `Q = lcm` of the table moduli, if it fits in `u64`.
    pub fn period(&self) -> Option<u64> {
        self.blocks.iter().try_fold(1u64, |acc, b| {
            let g = gcd(acc, b.q);
            acc.checked_mul(b.q / g)
        })
    }

    /// `Σ_q Σ_a w(a/q) e(an/q)` without discarding the imaginary part.
    pub fn beta_complex(&self, n: u64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for b in &self.blocks {
            let r = n % b.q;
            let mut part = Complex64::new(0.0, 0.0);
            for &(a, w) in &b.entries {
                part += w * unit_root(((a as u128 * r as u128) % b.q as u128) as u64, b.q);
            }
            total += part;
        }
        total
    }

    /// `β(n)`; the imaginary part is bounded by `1e-9` by Hermitian symmetry.
    pub fn beta(&self, n: u64) -> f64 {
        let v = self.beta_complex(n);
        debug_assert!(v.im.abs() < 1e-9, "Im β({n}) = {}", v.im);
        v.re
    }

    /// `max |w(-a/q) - conj w(a/q)|` over the table.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for b in &self.blocks {
            let map: BTreeMap<u64, Complex64> = b.entries.iter().copied().collect();
            for (&a, &w) in &map {
                let mirror = if b.q == 1 { 1 } else { b.q - a };
                let other = map.get(&mirror).copied().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                worst = worst.max((other - w.conj()).norm());
            }
        }
        worst
    }

    /// CSV with header `q,a,re,im`; reals printed with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,a,re,im\n");
        for row in self.rows() {
            let _ = writeln!(out, "{},{},{:.16e},{:.16e}", row.q, row.a, row.w.re, row.w.im);
        }
        out
    }
}

/// Parse the output of [`FourierMajorant::to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<MajorantRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "q,a,re,im" => {}
        other => return Err(Error::Parse(format!("unexpected header {other:?}"))),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!("line {}: expected 4 fields", i + 2)));
        }
        let bad = |e: &dyn std::fmt::Display| Error::Parse(format!("line {}: {e}", i + 2));
        rows.push(MajorantRow {
            q: fields[0].trim().parse().map_err(|e| bad(&e))?,
            a: fields[1].trim().parse().map_err(|e| bad(&e))?,
            w: Complex64::new(
                fields[2].trim().parse().map_err(|e| bad(&e))?,
                fields[3].trim().parse().map_err(|e| bad(&e))?,
            ),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{PrimeRule, ResidueRule};

    fn all_primes(residues: Vec<i64>, z: f64) -> SiftingSystem {
        SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(residues), z).unwrap()
    }

    #[test]
    fn empty_window_is_constant_one() {
        let s = all_primes(vec![0], 10.0);
        let m = FourierMajorant::build(&s, MajorantParams::new(10.0, 10.0), Variant::default()).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.w_one(), 1.0);
        for n in 0..50 {
            assert!((m.beta(n) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn one_on_sifted_set_small_window() {
        let s = all_primes(vec![0], 4.0);
        let m = FourierMajorant::build(&s, MajorantParams::new(2.0, 4.0), Variant::default()).unwrap();
        assert_eq!(m.period(), Some(6));
        for n in [1u64, 5, 7, 11] {
            assert!((m.beta(n) - 1.0).abs() < 1e-12, "n={n} β={}", m.beta(n));
        }
        for n in 0..12 {
            assert!(m.beta(n) > -1e-12);
        }
    }

    #[test]
    fn table_moduli_divide_window_product() {
        let s = all_primes(vec![0, 2], 20.0);
        let m = FourierMajorant::build(&s, MajorantParams::new(3.0, 20.0), Variant::default()).unwrap();
        let prod: u64 = m.window_primes.iter().product();
        for b in &m.blocks {
            assert_eq!(prod % b.q, 0);
            assert!(b.q as f64 <= 400.0);
        }
        assert!(m.hermitian_defect() < 1e-15);
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let s = all_primes(vec![0, 2], 14.0);
        let m = FourierMajorant::build(&s, MajorantParams::new(3.0, 14.0), Variant::default()).unwrap();
        let rows = parse_csv(&m.to_csv()).unwrap();
        assert_eq!(rows, m.rows());
        let back = FourierMajorant::from_rows(m.params, m.variant, &rows);
        for n in 0..100 {
            assert_eq!(back.beta(n).to_bits(), m.beta(n).to_bits());
        }
        assert!(parse_csv("q,a\n").is_err());
        assert!(parse_csv("q,a,re,im\n1,1,x,0\n").is_err());
    }

    #[test]
    fn variants_are_distinct() {
        let all = Variant::all();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], Variant::default());
    }
}

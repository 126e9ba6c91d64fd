//! Campaign execution.

use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use siftlab_core::apps::{
    poly_system, two_squares_measure, two_squares_sets, b4_certificate, x_of_f, x_of_f_certificate, Certificate,
    LinearFactorization,
};
use siftlab_core::envelope::{majorant_validate, MajorantParams, Variant};
use siftlab_core::expsum::{
    carlitz_check, c_kappa, duality_check, dual_row, eulerian, explicit_constant, large_sieve_row, level_set_census,
    lp_norm, majorant_ratio, restriction_row, wellspaced_row, CoefficientProfile, FrequencyFunction, InequalityRow,
    RowContext, TheoremTag, WellSpacedSet,
};
use siftlab_core::sieve::lemmas::{
    lemma_divisor, lemma_product_probe, lemma_shift, lemma_smooth_lower, lemma_window, LemmaCheck,
};
use siftlab_core::sieve::{build_system, sift, SiftedSet, SiftingSystem, Window};

use crate::config::{Campaign, ProfileSpec, RunConfig, Tolerances};
use crate::error::{CliError, Result};
use crate::report::{Diagnostic, LemmaRow, LevelRow, ReportBundle, RunReport, Status};

/// Execution settings that do not belong to the configuration file.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

/// Worker count: option, then config, then `SIFTLAB_WORKERS`, then all cores.
pub fn resolve_workers(campaign: &Campaign, opts: &RunOptions) -> usize {
    opts.workers
        .or(campaign.workers)
        .or_else(|| std::env::var("SIFTLAB_WORKERS").ok().and_then(|v| v.parse().ok()))
        .filter(|&w| w > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Run every configured check; nothing is written to disk.
pub fn run_campaign(campaign: &Campaign, opts: &RunOptions) -> Result<ReportBundle> {
    execute(campaign, opts, None)
}

/// Run the campaign and write the bundle to `out`. Runs execute in batches of
/// `workers`; each finished batch is flushed so an interruption keeps the
/// completed runs.
pub fn run_campaign_to(campaign: &Campaign, opts: &RunOptions, out: &Path) -> Result<ReportBundle> {
    execute(campaign, opts, Some(out))
}

fn execute(campaign: &Campaign, opts: &RunOptions, out: Option<&Path>) -> Result<ReportBundle> {
    let workers = resolve_workers(campaign, opts);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::config("workers", e.to_string()))?;
    let seed = opts.seed.unwrap_or(campaign.seed);
    let mut bundle = ReportBundle::new(workers, seed);
    if let Some(dir) = out {
        bundle.write(dir)?;
    }
    let indexed: Vec<(usize, &RunConfig)> = campaign.runs.iter().enumerate().collect();
    for batch in indexed.chunks(workers) {
        let reports: Vec<Result<RunReport>> = pool.install(|| {
            batch
                .par_iter()
                .map(|&(i, run)| execute_run(i, run, run.seed.unwrap_or(seed), &campaign.tolerance))
                .collect()
        });
        for r in reports {
            bundle.runs.push(r?);
        }
        if let Some(dir) = out {
            bundle.write(dir)?;
        }
    }
    Ok(bundle)
}

/// Random coefficients in the unit disc; the stream depends only on the run
/// and `N`, never on scheduling.
fn random_profile(set: &SiftedSet, density: f64, seed: u64, run: usize, n_index: usize) -> CoefficientProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((run as u64) << 32) | n_index as u64);
    let mut support = Vec::new();
    let mut values = Vec::new();
    for &n in &set.members {
        if rng.gen_bool(density) {
            let r = rng.gen::<f64>().sqrt();
            let t = rng.gen::<f64>() * std::f64::consts::TAU;
            support.push(n);
            values.push(Complex64::from_polar(r, t));
        }
    }
    CoefficientProfile::new(set, support, values).expect("support drawn from the sifted set")
}

struct RunState<'a> {
    name: &'a str,
    report: RunReport,
}

impl RunState<'_> {
    fn diag(&mut self, check: &str, n: Option<u64>, value: f64, threshold: Option<f64>, status: Status, note: String) {
        self.report.diagnostics.push(Diagnostic {
            run: self.name.to_string(),
            check: check.to_string(),
            n,
            value,
            threshold,
            hard: matches!(status, Status::Pass | Status::Fail),
            status,
            note,
        });
    }

    fn hard(&mut self, check: &str, n: Option<u64>, value: f64, threshold: Option<f64>, ok: bool, note: String) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.diag(check, n, value, threshold, status, note);
    }

    fn lemma(&mut self, c: &LemmaCheck) {
        self.report.lemmas.push(LemmaRow::from_check(self.name, c));
        if c.id.asserted() {
            self.hard(&format!("lemma:{}", c.id.label()), None, c.y, None, c.holds(), format!("z0={} d={}", c.z0, c.d));
        } else {
            let note = if c.holds() { "holds".to_string() } else { format!("counterexample: {} < {}", c.lhs, c.rhs) };
            self.diag(&format!("lemma:{}", c.id.label()), None, c.y, None, Status::NotAsserted, note);
        }
    }

    fn certificate(&mut self, c: &Certificate) {
        let note = format!("range=({}, {}] checked={} excluded={}", c.range.0, c.range.1, c.checked, c.excluded.len());
        self.hard(&format!("certificate:{}", c.name), Some(c.range.1), c.violations.len() as f64, Some(0.0), c.passes(), note);
    }
}

fn execute_run(index: usize, run: &RunConfig, seed: u64, tol: &Tolerances) -> Result<RunReport> {
    let start = Instant::now();
    let mut st = RunState { name: &run.name, report: RunReport::new(&run.name) };

    for (k, &n) in run.n.iter().enumerate() {
        let system = build_system(&run.system, Some(n))?;
        let sifted = sift(&system, n, Window::full(&system))?;
        let profile = match run.profile {
            ProfileSpec::Indicator => CoefficientProfile::indicator(&sifted),
            ProfileSpec::Random { density } => random_profile(&sifted, density, seed, index, k),
        };
        let ctx = RowContext::new(&system, n, run.kappa)?;
        st.diag("sifted-count", Some(n), sifted.len() as f64, None, Status::Soft, format!("z={}", system.z()));
        parseval(&mut st, &profile, n, tol)?;
        let set = run.well_spaced.as_ref().map(|w| w.build(n)).transpose()?;
        for &theorem in &run.theorems {
            theorem_rows(&mut st, theorem, run, &profile, &sifted, set.as_ref(), &ctx, tol)?;
        }
        if let (Some(c), Some(set)) = (&run.census, &set) {
            census(&mut st, &profile, set, &ctx, c.gamma, c.k)?;
        }
    }

    if run.lemmas.is_some() || !run.product_probe.is_empty() {
        let system = build_system(&run.system, run.n.first().copied())?;
        lemma_suite(&mut st, run, &system)?;
    }
    if let Some(m) = &run.majorant {
        let system = build_system(&run.system, run.n.first().copied())?;
        let r = majorant_validate(&system, MajorantParams::new(m.z0, m.z), Variant::default(), m.n_max)?;
        let note = format!("variant={} mode={:?} evaluations={}", r.variant, r.mode, r.evaluations);
        st.hard("majorant:sifted-deviation", Some(m.n_max), r.max_dev_sifted, Some(1e-6), r.passes(), note);
        st.hard("majorant:nonnegative", Some(m.n_max), r.min_beta, Some(0.0), r.nonnegative(), String::new());
    }
    if let Some(apps) = &run.apps {
        applications(&mut st, apps)?;
    }
    if let Some(c) = &run.constants {
        constants(&mut st, c, tol)?;
    }
    annotate_trends(&mut st);
    st.report.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(st.report)
}

fn parseval(st: &mut RunState, profile: &CoefficientProfile, n: u64, tol: &Tolerances) -> Result<()> {
    let exact = profile.l2_sq();
    let r = lp_norm(profile, 2.0)?;
    let rel = if exact == 0.0 { r.value.abs() } else { (r.value - exact).abs() / exact };
    st.hard("parseval", Some(n), rel, Some(tol.parseval), rel <= tol.parseval, format!("points={}", r.points));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn theorem_rows(
    st: &mut RunState,
    theorem: TheoremTag,
    run: &RunConfig,
    profile: &CoefficientProfile,
    sifted: &SiftedSet,
    set: Option<&WellSpacedSet>,
    ctx: &RowContext,
    tol: &Tolerances,
) -> Result<()> {
    let n = Some(ctx.n);
    match theorem {
        TheoremTag::Restriction => {
            for &ell in &run.ell {
                let row = restriction_row(profile, ell, ctx)?;
                if !row.converged {
                    st.diag("quadrature", n, row.lhs_error, None, Status::Soft, format!("ℓ={ell} not converged"));
                }
                st.report.rows.push(row);
            }
        }
        TheoremTag::WellSpaced => {
            let set = set.expect("validated");
            for &ell in &run.ell {
                st.report.rows.push(wellspaced_row(profile, set, ell, ctx)?);
            }
        }
        TheoremTag::LargeSieve => {
            let set = set.expect("validated");
            let row = large_sieve_row(profile, set, ctx)?;
            let ceiling = row.ceiling.unwrap_or(f64::INFINITY);
            let ok = row.lhs <= ceiling * (1.0 + tol.ceiling);
            st.hard("large-sieve-ceiling", n, row.lhs, Some(ceiling), ok, format!("delta={:e}", set.delta()));
            st.report.rows.push(row);
        }
        TheoremTag::Dual => {
            let set = set.expect("validated");
            let f = FrequencyFunction::constant(set.clone(), Complex64::new(1.0, 0.0));
            st.report.rows.push(dual_row(&f, sifted, ctx)?);
            if !profile.is_empty() {
                let d = duality_check(profile, set, sifted)?;
                let ok = d.lhs <= d.rhs * (1.0 + tol.duality) + 1e-12;
                st.hard("duality", n, d.lhs, Some(d.rhs), ok, String::new());
            }
        }
        TheoremTag::Majorant => {
            for &ell in &run.ell {
                if ell < 2.0 {
                    continue;
                }
                let m = majorant_ratio(profile, sifted, ell, ctx.v_z, None)?;
                let mut row = ctx_row(ctx, TheoremTag::Majorant, m.lhs.value, m.rhs.value);
                row.ell = Some(ell);
                row.lhs_error = m.lhs.error;
                row.converged = m.lhs.converged && m.rhs.converged;
                st.report.rows.push(row);
                let note = format!("c1={:e} margin={:e}", m.lower_bound.c1, m.lower_bound.min_margin);
                st.diag("majorant-lower-bound", n, m.lower_bound.min_margin, Some(1.0), Status::Soft, note);
            }
        }
        TheoremTag::TwoSquares => unreachable!("rejected by validation"),
    }
    Ok(())
}

/// A row for a ratio computed outside the core row builders.
fn ctx_row(ctx: &RowContext, theorem: TheoremTag, lhs: f64, kernel: f64) -> InequalityRow {
    InequalityRow {
        theorem,
        n: ctx.n,
        z: ctx.z,
        delta: None,
        ell: None,
        kappa: ctx.kappa,
        lhs,
        kernel,
        constant: if kernel == 0.0 { 0.0 } else { lhs / kernel },
        lhs_error: 0.0,
        converged: true,
        ceiling: None,
        z0: None,
        warnings: Vec::new(),
        runtime_ms: 0.0,
    }
}

fn census(st: &mut RunState, profile: &CoefficientProfile, set: &WellSpacedSet, ctx: &RowContext, gamma: f64, k: f64) -> Result<()> {
    if profile.is_empty() {
        return Ok(());
    }
    let c = level_set_census(profile, set, ctx, gamma, k)?;
    for l in &c.levels {
        st.report.levels.push(LevelRow { run: st.name.to_string(), n: ctx.n, j: l.j, xi: l.xi, count: l.count, bound: l.bound });
    }
    let n = Some(ctx.n);
    st.hard("census-monotone", n, c.levels.len() as f64, None, c.monotone(), String::new());
    let status = if c.within_bounds() { "within bounds" } else { "exceeds bound" };
    st.diag("census-bound", n, c.sup_ratio, None, Status::Soft, status.to_string());
    Ok(())
}

fn lemma_suite(st: &mut RunState, run: &RunConfig, system: &SiftingSystem) -> Result<()> {
    if let Some(spec) = &run.lemmas {
        for &y in &spec.ys {
            for &z0 in &spec.z0s {
                for &d in &spec.ds {
                    // d must be squarefree and coprime to the window; skip the others
                    if let Ok(checks) = lemma_divisor(system, y, z0, d) {
                        for c in &checks {
                            st.lemma(c);
                        }
                    }
                }
                st.lemma(&lemma_window(system, y, z0)?);
            }
            for &z1 in &spec.z1s {
                st.lemma(&lemma_shift(system, y, z1)?);
            }
            st.lemma(&lemma_smooth_lower(system, y)?);
        }
    }
    for &y in &run.product_probe {
        st.lemma(&lemma_product_probe(system, y)?);
    }
    Ok(())
}

fn applications(st: &mut RunState, apps: &crate::config::AppsSpec) -> Result<()> {
    if let Some(factors) = &apps.poly {
        let n = apps.n.expect("validated");
        let f = LinearFactorization::new(factors.clone())?;
        let ps = poly_system(&f, n)?;
        for w in &ps.warnings {
            st.diag("poly-system", Some(n), 0.0, None, Status::Soft, w.clone());
        }
        st.certificate(&x_of_f_certificate(&f, &ps, &x_of_f(&f, n)));
    }
    if apps.two_squares {
        let n = apps.n.expect("validated");
        let (_, b4) = two_squares_sets(n);
        st.certificate(&b4_certificate(&b4)?);
    }
    if let Some(sf) = &apps.sflat {
        for &n in &sf.n {
            for &z in &sf.z {
                let m = two_squares_measure(n, z, sf.ell)?;
                st.report.rows.push(m.row);
            }
        }
    }
    Ok(())
}

fn constants(st: &mut RunState, spec: &crate::config::ConstantsSpec, tol: &Tolerances) -> Result<()> {
    for &kappa in &spec.kappa {
        st.diag("c-kappa", None, c_kappa(kappa), None, Status::Soft, format!("kappa={kappa}"));
        for &ell in &spec.explicit_ell {
            match explicit_constant(ell, kappa, spec.k) {
                Ok(c) => {
                    let note = c.blowup_factor.map_or(String::new(), |b| format!("blowup={b:e}"));
                    st.diag("explicit-constant", None, c.value, None, Status::Soft, format!("ell={ell} kappa={kappa} {note}"));
                }
                Err(e) => st.diag("explicit-constant", None, f64::INFINITY, None, Status::Soft, e.to_string()),
            }
        }
    }
    let mut factorial = 1u64;
    for n in 1..=spec.eulerian {
        factorial *= n as u64;
        let total: BigUint = eulerian(n).iter().sum();
        st.hard("eulerian-row-sum", None, n as f64, None, total == BigUint::from(factorial), format!("n={n}"));
        for &t in &spec.carlitz_t {
            let r = carlitz_check(n, t, 4000);
            let ok = r.residual < tol.carlitz + r.tail_bound;
            st.hard("carlitz", None, r.residual, Some(tol.carlitz), ok, format!("n={n} t={t}"));
        }
    }
    Ok(())
}

/// Soft trend annotation per measured-constant series across `N`.
fn annotate_trends(st: &mut RunState) {
    let mut series: Vec<(String, Vec<f64>)> = Vec::new();
    for r in &st.report.rows {
        let key = crate::report::series_key(r);
        match series.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(r.constant),
            None => series.push((key, vec![r.constant])),
        }
    }
    for (key, values) in series {
        if values.len() < 2 {
            continue;
        }
        let max = values.iter().copied().fold(f64::MIN, f64::max);
        let min = values.iter().copied().fold(f64::MAX, f64::min);
        let up = values.windows(2).all(|w| w[1] >= w[0]);
        let down = values.windows(2).all(|w| w[1] <= w[0]);
        let trend = match (up, down) {
            (true, true) => "flat",
            (true, false) => "increasing",
            (false, true) => "decreasing",
            _ => "mixed",
        };
        let ratio = if min > 0.0 { max / min } else { f64::INFINITY };
        st.diag(&format!("trend:{key}"), None, ratio, None, Status::Soft, trend.to_string());
    }
}

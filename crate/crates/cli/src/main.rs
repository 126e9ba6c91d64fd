use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use siftlab_cli::campaign::{run_campaign_to, RunOptions};
use siftlab_cli::{emit_plot_data, Campaign, CliError};
use siftlab_core::apps::sflat::C_CUTOFF;
use siftlab_core::apps::{
    b4_certificate, poly_system, singular_series, two_squares_measure, two_squares_sets, x_of_f, x_of_f_certificate,
    LinearFactorization,
};
use siftlab_core::envelope::{majorant_validate, variant_harness, FourierMajorant, MajorantParams, Variant};
use siftlab_core::expsum::{
    c_kappa, c_kappa_k, carlitz_check, dual_row, eulerian, explicit_constant, farey_set, grid_set, large_sieve_row,
    lp_norm, restriction_row, rows_to_csv, wellspaced_row, CoefficientProfile, FrequencyFunction, RowContext,
    TheoremTag, WellSpacedSet,
};
use siftlab_core::sieve::lemmas::{lemma_product_probe, LemmaId};
use siftlab_core::sieve::{build_system, sift, ResidueRule, PrimeRule, SieveSums, SiftingSystem, SystemConfig, Window};

/// Exit status for a completed command whose hard checks failed.
/// Writes to stdout; a closed pipe ends the process quietly.
fn emit(r: std::io::Result<()>) {
    if let Err(e) = r {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("stdout: {e}");
    }
}

macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        emit(write!(std::io::stdout().lock(), $($t)*))
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        emit(writeln!(std::io::stdout().lock(), $($t)*))
    }};
}

const HARD_FAILURE: u8 = 1;
/// Exit status for invalid input or an internal error.
const ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "siftlab", version, about = "Sifted sets, enveloping-sieve majorants and restriction estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sift [1, N] and print or export the survivors.
    Sift(SiftArgs),
    /// Print the exact sums h, G and V at one parameter point.
    Sums(SumsArgs),
    /// Build and validate a Fourier majorant table.
    Majorant(MajorantArgs),
    /// Evaluate one inequality family on one system.
    Verify(VerifyArgs),
    /// Run the application pipelines and containment certificates.
    Apps(AppsArgs),
    /// Evaluate c(κ), the explicit constants and the Eulerian tables.
    Constants(ConstantsArgs),
    /// Execute a campaign configuration and write the report bundle.
    Campaign(CampaignArgs),
    /// Emit long-format plot data from a report bundle.
    Plot(PlotArgs),
}

#[derive(Args)]
struct SystemArgs {
    /// Sifting-system JSON (default: all primes, L_p = {0}).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sieving level, overriding the configuration.
    #[arg(long)]
    z: Option<f64>,
}

#[derive(Args)]
struct SiftArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    n: u64,
    /// Write members one per line to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SumsArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    y: f64,
    #[arg(long, default_value_t = 2.0)]
    z0: f64,
    #[arg(long, default_value_t = 1)]
    d: u64,
    /// Tabulate h(l) for l up to this bound.
    #[arg(long, default_value_t = 10)]
    h_table: u64,
}

#[derive(Args)]
struct MajorantArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long)]
    z0: f64,
    /// Validation range for the direct comparison with the sifted set.
    #[arg(long, default_value_t = 2000)]
    n_max: u64,
    /// Write the coefficient table as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Validate every interpretation variant, not only the default.
    #[arg(long)]
    all_variants: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// restriction | well-spaced | dual | large-sieve
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    n: u64,
    #[arg(long, value_delimiter = ',', default_value = "4")]
    ell: Vec<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// Farey set of order Q.
    #[arg(long, conflicts_with = "grid")]
    farey: Option<u64>,
    /// Grid set {β + j/N}.
    #[arg(long)]
    grid: bool,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
}

#[derive(Args)]
struct AppsArgs {
    #[arg(long)]
    n: u64,
    /// Linear factors "a,b;c,d" of F(x) = (ax+b)(cx+d).
    #[arg(long)]
    poly: Option<String>,
    #[arg(long)]
    two_squares: bool,
    /// Levels z for the weighted two-squares measurement.
    #[arg(long, value_delimiter = ',')]
    sflat_z: Vec<f64>,
    #[arg(long, default_value_t = 4.0)]
    ell: f64,
    /// Directory for member lists and certificates.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long, value_delimiter = ',')]
    kappa: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    ell: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Print Eulerian numbers up to this n.
    #[arg(long, default_value_t = 0)]
    eulerian: usize,
    #[arg(long, value_delimiter = ',')]
    carlitz_t: Vec<f64>,
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, env = "SIFTLAB_WORKERS")]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Threshold override, e.g. parseval=1e-8 (repeatable).
    #[arg(long)]
    tolerance: Vec<String>,
}

#[derive(Args)]
struct PlotArgs {
    /// Directory written by `campaign`.
    #[arg(long)]
    bundle: PathBuf,
    /// constant-vs-N | constant-vs-ell | levelsets | ell-sweep
    #[arg(long)]
    selector: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(HARD_FAILURE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ERROR)
        }
    }
}

/// `Ok(false)` when a hard check failed.
fn dispatch(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Sift(a) => cmd_sift(a),
        Command::Sums(a) => cmd_sums(a),
        Command::Majorant(a) => cmd_majorant(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Apps(a) => cmd_apps(a),
        Command::Constants(a) => cmd_constants(a),
        Command::Campaign(a) => cmd_campaign(a),
        Command::Plot(a) => cmd_plot(a),
    }
}

fn load_system(args: &SystemArgs, n: Option<u64>, default_z: f64) -> Result<SiftingSystem, CliError> {
    match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let mut cfg = SystemConfig::from_json(&text)?;
            if let Some(z) = args.z {
                cfg.z = siftlab_core::sieve::config::ZSpec::Value(z);
            }
            Ok(build_system(&cfg, n)?)
        }
        None => Ok(SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), args.z.unwrap_or(default_z))?),
    }
}

fn write_file(path: &std::path::Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::io(path, e))
}

fn cmd_sift(a: SiftArgs) -> Result<bool, CliError> {
    let system = load_system(&a.system, Some(a.n), (a.n as f64).powf(0.25).max(2.0))?;
    let set = sift(&system, a.n, Window::full(&system))?;
    outln!("N = {}, z = {}, sieving primes = {:?}", a.n, system.z(), system.sieving_primes());
    outln!("|S(N)| = {}", set.len());
    match a.out {
        Some(path) => {
            let body: String = set.members.iter().map(|n| format!("{n}\n")).collect();
            write_file(&path, &body)?;
            outln!("members written to {}", path.display());
        }
        None => {
            let shown: Vec<String> = set.members.iter().take(50).map(u64::to_string).collect();
            let more = if set.len() > 50 { ", ..." } else { "" };
            outln!("members: {}{more}", shown.join(", "));
        }
    }
    Ok(true)
}

fn cmd_sums(a: SumsArgs) -> Result<bool, CliError> {
    let system = load_system(&a.system, None, a.y.max(2.0))?;
    let s = SieveSums::compute(&system, a.y, a.z0, a.d, a.h_table)?;
    for (l, h) in &s.h {
        outln!("h({l}) = {h}");
    }
    outln!("G({}) = {}", a.y, s.g);
    outln!("G({}; z0 = {}) = {}", a.y, a.z0, s.g_window);
    outln!("G_{}({}; z0 = {}) = {}", a.d, a.y, a.z0, s.g_d);
    outln!("sum_(delta | {}) h(delta) = {}", a.d, s.divisor_sum);
    outln!("V({}) = {}", a.y, s.v);
    let probe = lemma_product_probe(&system, a.y)?;
    let verdict = if probe.holds() { "holds" } else { "violated" };
    outln!(
        "{}: G({}) = {} vs {} ({verdict}, NOT-ASSERTED)",
        LemmaId::ProductProbe.label(),
        a.y,
        probe.lhs,
        probe.rhs
    );
    Ok(true)
}

fn cmd_majorant(a: MajorantArgs) -> Result<bool, CliError> {
    let system = load_system(&a.system, None, 10.0)?;
    let params = MajorantParams::new(a.z0, system.z());
    let reports = if a.all_variants {
        variant_harness(&system, params, a.n_max)?
    } else {
        vec![majorant_validate(&system, params, Variant::default(), a.n_max)?]
    };
    for r in &reports {
        outln!(
            "{}: mode={:?} evaluations={} min_beta={:e} max|beta-1| on S'={:e} max|Im|={:e} mean error={:e} pass={}",
            r.variant,
            r.mode,
            r.evaluations,
            r.min_beta,
            r.max_dev_sifted,
            r.max_imag,
            r.mean_error,
            r.passes() && r.nonnegative()
        );
    }
    if let Some(path) = a.out {
        let table = FourierMajorant::build(&system, params, Variant::default())?;
        write_file(&path, &table.to_csv())?;
        outln!("{} coefficients written to {}", table.len(), path.display());
    }
    Ok(reports[0].passes() && reports[0].nonnegative())
}

fn well_spaced(a: &VerifyArgs) -> Result<WellSpacedSet, CliError> {
    match (a.farey, a.grid) {
        (Some(q), _) => Ok(farey_set(q)?),
        (None, true) => Ok(grid_set(a.n, a.beta)?),
        (None, false) => Err(CliError::config("--farey/--grid", "a well-spaced set is required")),
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<bool, CliError> {
    let theorem = TheoremTag::parse(&a.theorem)
        .ok_or_else(|| CliError::config("--theorem", format!("unknown theorem '{}'", a.theorem)))?;
    let system = load_system(&a.system, Some(a.n), (a.n as f64).powf(0.25).max(2.0))?;
    let sifted = sift(&system, a.n, Window::full(&system))?;
    let profile = CoefficientProfile::indicator(&sifted);
    let ctx = RowContext::new(&system, a.n, a.kappa)?;
    let mut ok = true;
    let parseval = lp_norm(&profile, 2.0)?;
    let exact = profile.l2_sq();
    if exact > 0.0 && (parseval.value - exact).abs() > 1e-9 * exact {
        eprintln!("Parseval check FAILED: {} vs {exact}", parseval.value);
        ok = false;
    }
    let mut rows = Vec::new();
    match theorem {
        TheoremTag::Restriction => {
            for &ell in &a.ell {
                rows.push(restriction_row(&profile, ell, &ctx)?);
            }
        }
        TheoremTag::WellSpaced => {
            let set = well_spaced(&a)?;
            for &ell in &a.ell {
                rows.push(wellspaced_row(&profile, &set, ell, &ctx)?);
            }
        }
        TheoremTag::Dual => {
            let f = FrequencyFunction::constant(well_spaced(&a)?, Complex64::new(1.0, 0.0));
            rows.push(dual_row(&f, &sifted, &ctx)?);
        }
        TheoremTag::LargeSieve => {
            let row = large_sieve_row(&profile, &well_spaced(&a)?, &ctx)?;
            let within = row.within_ceiling();
            outln!(
                "classical ceiling: lhs = {:e} <= {:e}: {}",
                row.lhs,
                row.ceiling.unwrap_or(f64::NAN),
                if within { "PASS" } else { "FAIL" }
            );
            ok &= within;
            rows.push(row);
        }
        other => return Err(CliError::config("--theorem", format!("'{}' is not available here", other.label()))),
    }
    out!("{}", rows_to_csv(&rows, true));
    for w in rows.iter().flat_map(|r| &r.warnings) {
        eprintln!("warning: {w}");
    }
    Ok(ok)
}

fn parse_factors(s: &str) -> Result<Vec<(i64, i64)>, CliError> {
    s.split(';')
        .map(|pair| {
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| CliError::config("--poly", format!("expected 'a,b', got '{pair}'")))?;
            let p = |t: &str| t.trim().parse::<i64>().map_err(|_| CliError::config("--poly", format!("bad integer '{t}'")));
            Ok((p(a)?, p(b)?))
        })
        .collect()
}

fn cmd_apps(a: AppsArgs) -> Result<bool, CliError> {
    let mut ok = true;
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    if let Some(spec) = &a.poly {
        let f = LinearFactorization::new(parse_factors(spec)?)?;
        let ps = poly_system(&f, a.n)?;
        for w in &ps.warnings {
            eprintln!("warning: {w}");
        }
        let set = x_of_f(&f, a.n);
        let cert = x_of_f_certificate(&f, &ps, &set);
        let series = singular_series(&f, C_CUTOFF);
        outln!("X(F): {} members up to {}; singular series ~ {:.12} (tail factor {:e})", set.members.len(), a.n, series.value, series.tail_note);
        outln!("certificate {}: checked {} violations {}", cert.name, cert.checked, cert.violations.len());
        ok &= cert.passes();
        if let Some(dir) = &a.out {
            write_file(&dir.join("x_of_f.txt"), &set.to_lines())?;
            write_file(&dir.join("x_of_f.certificate.json"), &serde_json::to_string_pretty(&cert)?)?;
        }
    }
    if a.two_squares {
        let (b, b4) = two_squares_sets(a.n);
        let cert = b4_certificate(&b4)?;
        outln!("B: {} members, B4: {} members up to {}", b.members.len(), b4.members.len(), a.n);
        outln!("certificate {}: checked {} violations {}", cert.name, cert.checked, cert.violations.len());
        ok &= cert.passes();
        if let Some(dir) = &a.out {
            write_file(&dir.join("b.txt"), &b.to_lines())?;
            write_file(&dir.join("b4.txt"), &b4.to_lines())?;
            write_file(&dir.join("b4.certificate.json"), &serde_json::to_string_pretty(&cert)?)?;
        }
    }
    if !a.sflat_z.is_empty() {
        let rows = a
            .sflat_z
            .iter()
            .map(|&z| two_squares_measure(a.n, z, a.ell).map(|m| m.row))
            .collect::<Result<Vec<_>, _>>()?;
        out!("{}", rows_to_csv(&rows, true));
    }
    Ok(ok)
}

fn cmd_constants(a: ConstantsArgs) -> Result<bool, CliError> {
    let mut ok = true;
    for &kappa in &a.kappa {
        outln!("c({kappa}) = {}", c_kappa(kappa));
        outln!("c({kappa}, {}) = {}", a.k, c_kappa_k(kappa, a.k));
        for &ell in &a.ell {
            match explicit_constant(ell, kappa, a.k) {
                Ok(c) => match c.blowup_factor {
                    Some(b) => outln!("explicit constant at ell = {ell}: {:e} (blow-up factor {b:e})", c.value),
                    None => outln!("explicit constant at ell = {ell}: {:e}", c.value),
                },
                Err(e) => outln!("explicit constant at ell = {ell}: {e}"),
            }
        }
    }
    for n in 1..=a.eulerian {
        let row: Vec<String> = eulerian(n).iter().map(ToString::to_string).collect();
        outln!("A_{n}: {}", row.join(" "));
        for &t in &a.carlitz_t {
            let r = carlitz_check(n, t, 4000);
            let pass = r.residual < 1e-10 + r.tail_bound;
            ok &= pass;
            outln!("  t = {t}: residual {:e} ({})", r.residual, if pass { "PASS" } else { "FAIL" });
        }
    }
    Ok(ok)
}

fn cmd_campaign(a: CampaignArgs) -> Result<bool, CliError> {
    let mut campaign = Campaign::from_file(&a.config)?;
    for t in &a.tolerance {
        campaign.tolerance.set(t)?;
    }
    let bundle = run_campaign_to(&campaign, &RunOptions { workers: a.workers, seed: a.seed }, &a.out)?;
    for r in &bundle.runs {
        let verdict = if r.hard_failures() == 0 { "PASS" } else { "FAIL" };
        outln!("{verdict} {} ({} hard failures, {:.0} ms)", r.name, r.hard_failures(), r.runtime_ms);
    }
    outln!("report written to {}", a.out.display());
    Ok(bundle.pass())
}

fn cmd_plot(a: PlotArgs) -> Result<bool, CliError> {
    let csv = emit_plot_data(&a.bundle, &a.selector)?;
    match a.out {
        Some(path) => write_file(&path, &csv)?,
        None => out!("{csv}"),
    }
    Ok(true)
}

//! Campaign configuration.
//!
//! ```json
//! {
//!   "seed": 7,
//!   "workers": 4,
//!   "tolerance": {"parseval": 1e-9, "ceiling": 1e-12},
//!   "runs": [{
//!     "name": "rough-numbers",
//!     "system": {"primes": "all", "residues": {"fixed": [0]}, "z": {"powerOfN": "1/4"}},
//!     "n": [1024, 4096],
//!     "profile": "indicator",
//!     "wellSpaced": {"farey": 16},
//!     "ell": [4],
//!     "theorems": ["restriction", "well-spaced", "large-sieve", "dual"]
//!   }]
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use siftlab_core::expsum::{farey_set, grid_set, WellSpacedSet};
use siftlab_core::sieve::{build_system, SystemConfig};
use siftlab_core::TheoremTag;

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Campaign {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub tolerance: Tolerances,
    pub runs: Vec<RunConfig>,
}

/// Thresholds of the hard checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative error of `ℓ = 2` quadrature against `Σ|a_n|²`.
    #[serde(default = "Tolerances::default_parseval")]
    pub parseval: f64,
    /// Relative slack of the classical large-sieve ceiling.
    #[serde(default = "Tolerances::default_ceiling")]
    pub ceiling: f64,
    /// Relative slack of the duality inequality.
    #[serde(default = "Tolerances::default_duality")]
    pub duality: f64,
    /// Absolute residual of the generating-function identity.
    #[serde(default = "Tolerances::default_carlitz")]
    pub carlitz: f64,
}

impl Tolerances {
    fn default_parseval() -> f64 {
        1e-9
    }
    fn default_ceiling() -> f64 {
        1e-12
    }
    fn default_duality() -> f64 {
        1e-10
    }
    fn default_carlitz() -> f64 {
        1e-10
    }

    /// Apply a `key=value` override.
    pub fn set(&mut self, spec: &str) -> Result<()> {
        let (key, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError::config("--tolerance", format!("expected key=value, got '{spec}'")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("--tolerance {key}"), format!("not a number: '{value}'")))?;
        if !(v >= 0.0) {
            return Err(CliError::config(format!("--tolerance {key}"), "must be non-negative"));
        }
        match key.trim() {
            "parseval" => self.parseval = v,
            "ceiling" => self.ceiling = v,
            "duality" => self.duality = v,
            "carlitz" => self.carlitz = v,
            other => return Err(CliError::config(format!("--tolerance {other}"), "unknown tolerance key")),
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            parseval: Self::default_parseval(),
            ceiling: Self::default_ceiling(),
            duality: Self::default_duality(),
            carlitz: Self::default_carlitz(),
        }
    }
}

/// Coefficients `a_n` on the sifted set.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ProfileSpec {
    #[default]
    Indicator,
    /// Each member kept with probability `density`, value uniform in the unit disc.
    Random { density: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum WellSpacedSpec {
    /// Reduced fractions `a/q` in `[0, 1)` with `q ≤ Q`.
    Farey(u64),
    /// `{β + j/N}` for the run's `N`.
    Grid { beta: f64 },
    /// Explicit points in `[0, 1)`.
    Points(Vec<f64>),
}

impl WellSpacedSpec {
    pub fn build(&self, n: u64) -> siftlab_core::Result<WellSpacedSet> {
        match self {
            WellSpacedSpec::Farey(q) => farey_set(*q),
            WellSpacedSpec::Grid { beta } => grid_set(n, *beta),
            WellSpacedSpec::Points(p) => WellSpacedSet::new(p.iter().copied()),
        }
    }
}

/// Exact `G`-sum inequalities over a parameter grid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct LemmaSpec {
    pub ys: Vec<f64>,
    #[serde(default)]
    pub z0s: Vec<f64>,
    #[serde(default)]
    pub z1s: Vec<f64>,
    #[serde(default)]
    pub ds: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusSpec {
    pub gamma: f64,
    /// Hypothesis constant `K` in the level-set bound.
    pub k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct MajorantSpec {
    pub z0: f64,
    pub z: f64,
    pub n_max: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SflatSpec {
    pub n: Vec<u64>,
    pub z: Vec<f64>,
    pub ell: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct AppsSpec {
    /// Certification range for the containments.
    #[serde(default)]
    pub n: Option<u64>,
    /// Linear factors `(a, b)` of `F(x) = Π (a x + b)`.
    #[serde(default)]
    pub poly: Option<Vec<(i64, i64)>>,
    #[serde(default)]
    pub two_squares: bool,
    #[serde(default)]
    pub sflat: Option<SflatSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ConstantsSpec {
    #[serde(default)]
    pub kappa: Vec<f64>,
    /// Largest `n` of the Eulerian tables.
    #[serde(default)]
    pub eulerian: usize,
    #[serde(default)]
    pub carlitz_t: Vec<f64>,
    /// `ℓ` values for the explicit constant, evaluated at `K = k`.
    #[serde(default)]
    pub explicit_ell: Vec<f64>,
    #[serde(default = "ConstantsSpec::default_k")]
    pub k: f64,
}

impl ConstantsSpec {
    fn default_k() -> f64 {
        1.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct RunConfig {
    pub name: String,
    pub system: SystemConfig,
    #[serde(default)]
    pub n: Vec<u64>,
    #[serde(default)]
    pub profile: ProfileSpec,
    #[serde(default)]
    pub well_spaced: Option<WellSpacedSpec>,
    #[serde(default = "RunConfig::default_ell")]
    pub ell: Vec<f64>,
    #[serde(default)]
    pub theorems: Vec<TheoremTag>,
    #[serde(default)]
    pub kappa: Option<f64>,
    /// Overrides the campaign seed for this run.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub lemmas: Option<LemmaSpec>,
    /// `y` values at which the printed product bound is probed.
    #[serde(default)]
    pub product_probe: Vec<f64>,
    #[serde(default)]
    pub census: Option<CensusSpec>,
    #[serde(default)]
    pub majorant: Option<MajorantSpec>,
    #[serde(default)]
    pub apps: Option<AppsSpec>,
    #[serde(default)]
    pub constants: Option<ConstantsSpec>,
}

impl RunConfig {
    fn default_ell() -> Vec<f64> {
        vec![4.0]
    }
}

impl Campaign {
    /// Parse and validate; errors name the failing path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let campaign: Campaign = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::config(path, e.into_inner().to_string())
        })?;
        campaign.validate()?;
        Ok(campaign)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers == Some(0) {
            return Err(CliError::config("workers", "must be at least 1"));
        }
        let mut names = BTreeMap::new();
        for (i, run) in self.runs.iter().enumerate() {
            let at = |field: &str| format!("runs[{i}].{field}");
            if let Some(j) = names.insert(run.name.clone(), i) {
                return Err(CliError::config(at("name"), format!("duplicate of runs[{j}]")));
            }
            for (k, &n) in run.n.iter().enumerate() {
                if n == 0 {
                    return Err(CliError::config(at(&format!("n[{k}]")), "N must be at least 1"));
                }
                build_system(&run.system, Some(n)).map_err(|e| CliError::config(at("system"), e.to_string()))?;
            }
            for (k, &l) in run.ell.iter().enumerate() {
                if !(l > 0.0) || !l.is_finite() {
                    return Err(CliError::config(at(&format!("ell[{k}]")), "ℓ must be positive"));
                }
            }
            if let ProfileSpec::Random { density } = run.profile {
                if !(0.0..=1.0).contains(&density) {
                    return Err(CliError::config(at("profile.random.density"), "must lie in [0, 1]"));
                }
            }
            let needs_set = run
                .theorems
                .iter()
                .any(|t| matches!(t, TheoremTag::WellSpaced | TheoremTag::LargeSieve | TheoremTag::Dual))
                || run.census.is_some();
            if needs_set && run.well_spaced.is_none() {
                return Err(CliError::config(at("wellSpaced"), "required by the selected theorems"));
            }
            if run.theorems.contains(&TheoremTag::TwoSquares) {
                return Err(CliError::config(at("theorems"), "two-squares rows come from apps.sflat"));
            }
            if let Some(c) = &run.census {
                if !(c.gamma > 1.0) || !(c.k > 0.0) {
                    return Err(CliError::config(at("census"), "need gamma > 1 and k > 0"));
                }
            }
            if run.lemmas.is_some() || !run.product_probe.is_empty() || run.majorant.is_some() {
                let n = run.n.first().copied();
                build_system(&run.system, n).map_err(|e| CliError::config(at("system"), e.to_string()))?;
            }
            if let Some(apps) = &run.apps {
                if let Some(sf) = &apps.sflat {
                    if !(sf.ell > 2.0) {
                        return Err(CliError::config(at("apps.sflat.ell"), "ℓ must exceed 2"));
                    }
                }
                if (apps.poly.is_some() || apps.two_squares) && apps.n.is_none() {
                    return Err(CliError::config(at("apps.n"), "required for containment certificates"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"runs": [{"name": "empty", "system": {"primes": "none", "residues": {"fixed": [0]}, "z": 2},
        "n": [256], "ell": [4], "theorems": ["restriction"]}]}"#;

    #[test]
    fn minimal_config_parses() {
        let c = Campaign::from_json(MINIMAL).unwrap();
        assert_eq!(c.runs[0].theorems, vec![TheoremTag::Restriction]);
        assert_eq!(c.tolerance, Tolerances::default());
    }

    #[test]
    fn errors_name_the_path() {
        let bad = MINIMAL.replace("\"restriction\"", "\"nonsense\"");
        match Campaign::from_json(&bad) {
            Err(CliError::ConfigInvalid { path, .. }) => assert_eq!(path, "runs[0].theorems[0]"),
            other => panic!("{other:?}"),
        }
        let bad = MINIMAL.replace("\"n\": [256]", "\"n\": [0]");
        match Campaign::from_json(&bad) {
            Err(CliError::ConfigInvalid { path, .. }) => assert_eq!(path, "runs[0].n[0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_set_is_rejected() {
        let bad = MINIMAL.replace("\"restriction\"", "\"large-sieve\"");
        assert!(matches!(Campaign::from_json(&bad), Err(CliError::ConfigInvalid { .. })));
    }

    #[test]
    fn tolerance_overrides() {
        let mut t = Tolerances::default();
        t.set("parseval=1e-6").unwrap();
        assert_eq!(t.parseval, 1e-6);
        assert!(t.set("bogus=1").is_err());
        assert!(t.set("parseval").is_err());
    }
}

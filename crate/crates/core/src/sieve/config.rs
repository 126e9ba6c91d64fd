//! JSON description of a sifting system.
//!
//! ```json
//! {
//!   "primes":   "all" | "none" | {"mod": 4, "classes": [2, 3]} | {"list": [2, 3, 7]},
//!   "residues": {"fixed": [0, -4]} | {"perPrime": {"3": [0, 1]}} | {"polyRoots": [0, 2, 1]}
//!             | {"linearFactors": [[1, 0], [1, 2]]},
//!   "z":        10 | {"powerOfN": 0.25} | {"powerOfN": "1/4"},
//!   "cutoff":   "strict" | "weak"          (optional, default "strict"),
//!   "exclude":  [2]                        (optional, primes removed from P)
//! }
//! ```
//!
//! Polynomial coefficients are listed in ascending degree.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::system::{Cutoff, PrimeRule, ResidueRule, SiftingSystem};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrimesSpec {
    Keyword(String),
    Classes {
        #[serde(rename = "mod")]
        modulus: u64,
        classes: Vec<u64>,
    },
    List {
        list: Vec<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ResiduesSpec {
    Fixed(Vec<i64>),
    PerPrime(BTreeMap<u64, Vec<u64>>),
    PolyRoots(Vec<i64>),
    LinearFactors(Vec<(i64, i64)>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Number(f64),
    Fraction(String),
}

impl Exponent {
    pub fn value(&self) -> Result<f64> {
        match self {
            Exponent::Number(x) => Ok(*x),
            Exponent::Fraction(s) => {
                let parse = |t: &str| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("bad exponent '{s}'")))
                };
                match s.split_once('/') {
                    Some((a, b)) => Ok(parse(a)? / parse(b)?),
                    None => parse(s),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZSpec {
    Value(f64),
    Power {
        #[serde(rename = "powerOfN")]
        power_of_n: Exponent,
    },
}

impl ZSpec {
    /// Resolve the level; `N^e` is snapped to the nearest integer when within `1e-9`.
    pub fn resolve(&self, n: Option<u64>) -> Result<f64> {
        match self {
            ZSpec::Value(z) => Ok(*z),
            ZSpec::Power { power_of_n } => {
                let n = n.ok_or_else(|| Error::Config("z = N^e requires N".into()))?;
                let z = (n as f64).powf(power_of_n.value()?);
                let r = z.round();
                Ok(if (z - r).abs() < 1e-9 * r.max(1.0) { r } else { z })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub primes: PrimesSpec,
    pub residues: ResiduesSpec,
    pub z: ZSpec,
    #[serde(default)]
    pub cutoff: Cutoff,
    #[serde(default)]
    pub exclude: Vec<u64>,
}

impl SystemConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Validate a configuration and build the sieve (`n` is needed when `z` is a power of `N`).
pub fn build_system(config: &SystemConfig, n: Option<u64>) -> Result<SiftingSystem> {
    let primes = match &config.primes {
        PrimesSpec::Keyword(k) if k == "all" => PrimeRule::All,
        PrimesSpec::Keyword(k) if k == "none" => PrimeRule::List(Vec::new()),
        PrimesSpec::Keyword(k) => return Err(Error::Config(format!("unknown prime rule '{k}'"))),
        PrimesSpec::Classes { modulus, classes } => PrimeRule::classes(*modulus, classes)?,
        PrimesSpec::List { list } => PrimeRule::list(list)?,
    };
    let residues = match &config.residues {
        ResiduesSpec::Fixed(cs) => {
            if cs.is_empty() {
                return Err(Error::Config("fixed residue list is empty".into()));
            }
            ResidueRule::Fixed(cs.clone())
        }
        ResiduesSpec::PerPrime(map) => ResidueRule::per_prime(map.clone())?,
        ResiduesSpec::PolyRoots(cs) => {
            if cs.iter().all(|&c| c == 0) {
                return Err(Error::Config("zero polynomial".into()));
            }
            ResidueRule::PolyRoots(cs.clone())
        }
        ResiduesSpec::LinearFactors(fs) => {
            if fs.is_empty() || fs.iter().any(|&(a, _)| a == 0) {
                return Err(Error::Config("linear factors need a_i != 0".into()));
            }
            ResidueRule::LinearFactors(fs.clone())
        }
    };
    let z = config.z.resolve(n)?;
    let excluded: BTreeSet<u64> = config.exclude.iter().copied().collect();
    SiftingSystem::with_options(primes, residues, z, config.cutoff, excluded)
}

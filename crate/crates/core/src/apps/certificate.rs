use serde::Serialize;

/// Result of scanning a containment `A ∩ (lo, hi] ⊆ S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: String,
    pub range: (u64, u64),
    pub checked: usize,
    /// Members outside the certified range (e.g. a factor is itself a small prime).
    pub excluded: Vec<u64>,
    pub violations: Vec<u64>,
}

impl Certificate {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A set of integers with optional weights, e.g. `X(F)` or `B₄`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApplicationSet {
    pub tag: String,
    pub n_max: u64,
    pub members: Vec<u64>,
    pub weights: Option<Vec<f64>>,
}

impl ApplicationSet {
    pub fn new(tag: impl Into<String>, n_max: u64, members: Vec<u64>) -> Self {
        ApplicationSet { tag: tag.into(), n_max, members, weights: None }
    }

    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }

    /// Newline-separated members.
    pub fn to_lines(&self) -> String {
        self.members.iter().map(|n| format!("{n}\n")).collect()
    }
}

use num_complex::Complex64;

use super::summation::pairwise_sum;
use super::wellspaced::WellSpacedSet;
use crate::error::{Error, Result};
use crate::sieve::SiftedSet;

/// Coefficients `(a_n)_{n ≤ N}` supported on a sifted set.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientProfile {
    n_max: u64,
    support: Vec<u64>,
    values: Vec<Complex64>,
    l2_sq: f64,
}

impl CoefficientProfile {
    /// `values[i]` sits at `support[i]`; every support point must lie in `set`.
    pub fn new(set: &SiftedSet, support: Vec<u64>, values: Vec<Complex64>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::Parameter(format!(
                "{} support points but {} values",
                support.len(),
                values.len()
            )));
        }
        if let Some(&n) = support.iter().find(|&&n| !set.contains(n)) {
            return Err(Error::Support { n });
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("support must be strictly increasing".into()));
        }
        Ok(Self::unchecked(set.n_max, support, values))
    }

    pub(crate) fn unchecked(n_max: u64, support: Vec<u64>, values: Vec<Complex64>) -> Self {
        let l2_sq = pairwise_sum(&values.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>());
        CoefficientProfile { n_max, support, values, l2_sq }
    }

    /// `a_n = f(n)` on every member of `set`.
    pub fn from_fn(set: &SiftedSet, f: impl Fn(u64) -> Complex64) -> Self {
        let values = set.members.iter().map(|&n| f(n)).collect();
        Self::unchecked(set.n_max, set.members.clone(), values)
    }

    /// The indicator of `set`.
    pub fn indicator(set: &SiftedSet) -> Self {
        Self::from_fn(set, |_| Complex64::new(1.0, 0.0))
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `Σ |a_n|²`, cached.
    pub fn l2_sq(&self) -> f64 {
        self.l2_sq
    }

    pub fn l1(&self) -> f64 {
        pairwise_sum(&self.values.iter().map(|v| v.norm()).collect::<Vec<_>>())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.support.iter().copied().zip(self.values.iter().copied())
    }
}

/// `f: B → C` on a well-spaced set.
#[derive(Clone, Debug)]
pub struct FrequencyFunction {
    pub set: WellSpacedSet,
    pub values: Vec<Complex64>,
}

impl FrequencyFunction {
    pub fn new(set: WellSpacedSet, values: Vec<Complex64>) -> Result<Self> {
        if set.len() != values.len() {
            return Err(Error::Parameter(format!("{} points but {} values", set.len(), values.len())));
        }
        Ok(FrequencyFunction { set, values })
    }

    pub fn constant(set: WellSpacedSet, c: Complex64) -> Self {
        let values = vec![c; set.len()];
        FrequencyFunction { set, values }
    }

    pub fn l1(&self) -> f64 {
        pairwise_sum(&self.values.iter().map(|v| v.norm()).collect::<Vec<_>>())
    }

    pub fn l2_sq(&self) -> f64 {
        pairwise_sum(&self.values.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{sift, PrimeRule, ResidueRule, SiftingSystem, Window};

    #[test]
    fn support_is_checked() {
        let s = SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), 4.0).unwrap();
        let set = sift(&s, 20, Window::full(&s)).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(CoefficientProfile::new(&set, vec![1, 5], vec![one, one]).is_ok());
        assert_eq!(CoefficientProfile::new(&set, vec![1, 6], vec![one, one]), Err(Error::Support { n: 6 }));
        assert!(CoefficientProfile::new(&set, vec![1], vec![one, one]).is_err());
        let ind = CoefficientProfile::indicator(&set);
        assert_eq!(ind.l2_sq(), 7.0);
        assert_eq!(ind.l1(), 7.0);
    }
}

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

/// Circular distance `‖x‖ = min_k |x + k|`.
pub fn circle_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Minimal circular gap of sorted points in `[0, 1)`; `1` for a single point.
pub fn min_gap(points: &[f64]) -> f64 {
    if points.len() < 2 {
        return 1.0;
    }
    let wrap = points[0] + 1.0 - points[points.len() - 1];
    points.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::min)
}

/// Finite `δ`-well-spaced subset of `R/Z`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WellSpacedSet {
    points: Vec<f64>,
    delta: f64,
    /// Exact points `a/q` when the set is rational.
    #[serde(skip)]
    exact: Option<Vec<Ratio<u64>>>,
}

impl WellSpacedSet {
    /// Points are reduced mod 1 and sorted; coincident points are rejected.
    pub fn new(points: impl IntoIterator<Item = f64>) -> Result<Self> {
        let mut pts: Vec<f64> = points.into_iter().map(|x| x.rem_euclid(1.0)).map(|x| if x >= 1.0 { 0.0 } else { x }).collect();
        if pts.is_empty() {
            return Err(Error::Parameter("a well-spaced set needs at least one point".into()));
        }
        if pts.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("non-finite frequency".into()));
        }
        pts.sort_by(f64::total_cmp);
        let delta = min_gap(&pts);
        if delta <= 0.0 {
            return Err(Error::Parameter("coincident frequencies".into()));
        }
        Ok(WellSpacedSet { points: pts, delta, exact: None })
    }

    /// Rational points `a/q`, with `δ` computed exactly.
    pub fn from_rationals(mut fracs: Vec<Ratio<u64>>) -> Result<Self> {
        for f in fracs.iter_mut() {
            *f = Ratio::new(f.numer() % f.denom(), *f.denom());
        }
        fracs.sort();
        fracs.dedup();
        if fracs.is_empty() {
            return Err(Error::Parameter("a well-spaced set needs at least one point".into()));
        }
        let delta = exact_min_gap(&fracs);
        let points = fracs.iter().map(|f| *f.numer() as f64 / *f.denom() as f64).collect();
        Ok(WellSpacedSet { points, delta: *delta.numer() as f64 / *delta.denom() as f64, exact: Some(fracs) })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn rationals(&self) -> Option<&[Ratio<u64>]> {
        self.exact.as_deref()
    }

    /// Exact minimal gap for rational sets.
    pub fn delta_exact(&self) -> Option<Ratio<u64>> {
        self.exact.as_deref().map(exact_min_gap)
    }
}

fn exact_min_gap(fracs: &[Ratio<u64>]) -> Ratio<u64> {
    if fracs.len() < 2 {
        return Ratio::from_integer(1);
    }
    let one = Ratio::from_integer(1u64);
    let wrap = fracs[0] + one - fracs[fracs.len() - 1];
    fracs.windows(2).map(|w| w[1] - w[0]).fold(wrap, |a, b| a.min(b))
}

/// Reduced fractions `a/q ∈ [0, 1)` with `q ≤ Q`.
pub fn farey_set(q_max: u64) -> Result<WellSpacedSet> {
    if q_max == 0 {
        return Err(Error::Parameter("Q must be at least 1".into()));
    }
    let mut fracs = Vec::new();
    for q in 1..=q_max {
        for a in 0..q {
            if a.gcd(&q) == 1 {
                fracs.push(Ratio::new_raw(a, q));
            }
        }
    }
    WellSpacedSet::from_rationals(fracs)
}

/// `{β + k/N : 0 ≤ k < N}` with `δ = 1/N`.
pub fn grid_set(n: u64, beta: f64) -> Result<WellSpacedSet> {
    if n == 0 {
        return Err(Error::Parameter("grid size must be at least 1".into()));
    }
    let mut set = WellSpacedSet::new((0..n).map(|k| beta + k as f64 / n as f64))?;
    set.delta = 1.0 / n as f64;
    if beta.rem_euclid(1.0) == 0.0 {
        set.exact = Some((0..n).map(|k| Ratio::new(k, n)).collect());
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn farey_three() {
        let f = farey_set(3).unwrap();
        assert_eq!(f.points(), &[0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0]);
        assert_eq!(f.delta_exact(), Some(Ratio::new(1, 6)));
    }

    #[test]
    fn farey_sizes_and_gaps() {
        assert_eq!(farey_set(1).unwrap().delta(), 1.0);
        let f5 = farey_set(5).unwrap();
        assert_eq!(f5.len(), 10);
        assert_eq!(f5.delta_exact(), Some(Ratio::new(1, 20)));
        assert!(farey_set(0).is_err());
    }

    #[test]
    fn grids() {
        let g = grid_set(4, 0.0).unwrap();
        assert_eq!(g.points(), &[0.0, 0.25, 0.5, 0.75]);
        assert_eq!(g.delta(), 0.25);
        let s = grid_set(4, 0.1).unwrap();
        assert!((min_gap(s.points()) - 0.25).abs() < 1e-15);
        let one = grid_set(1, 0.3).unwrap();
        assert_eq!(one.points(), &[0.3]);
        assert_eq!(one.delta(), 1.0);
    }

    #[test]
    fn wraparound_gap_counts() {
        let s = WellSpacedSet::new([0.05, 0.5, 0.97]).unwrap();
        assert!((s.delta() - 0.08).abs() < 1e-12);
        assert!(WellSpacedSet::new([0.25, 1.25]).is_err());
        assert!((circle_dist(0.95, 0.05) - 0.1).abs() < 1e-15);
    }
}

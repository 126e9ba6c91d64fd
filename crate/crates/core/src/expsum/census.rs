use serde::Serialize;

use super::constants::c_kappa;
use super::kernel::{eval_expsum, Kernel};
use super::profile::CoefficientProfile;
use super::theorems::RowContext;
use super::wellspaced::WellSpacedSet;
use crate::error::{Error, Result};

/// `B_ξ = {b : |S(b)| ≥ ξU}` at `ξ = γ^{-j}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LevelSet {
    pub j: u32,
    pub xi: f64,
    pub count: usize,
    /// `c(κ) (K/ξ²) log^κ(2K/ξ²)`.
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub u: f64,
    /// `max_b |S(b)| / U`.
    pub sup_ratio: f64,
    pub levels: Vec<LevelSet>,
    /// No point reaches level `ξ > 1`.
    pub above_one_empty: bool,
}

impl Census {
    /// Counts never decrease as `ξ` shrinks.
    pub fn monotone(&self) -> bool {
        self.levels.windows(2).all(|w| w[0].count <= w[1].count)
    }

    pub fn within_bounds(&self) -> bool {
        self.levels.iter().all(|l| l.count as f64 <= l.bound)
    }
}

/// Level sets down to `B_ξ = B`, at most `max_levels` of them.
pub fn level_set_census(
    profile: &CoefficientProfile,
    set: &WellSpacedSet,
    ctx: &RowContext,
    gamma: f64,
    k_meas: f64,
) -> Result<Census> {
    if !(gamma > 1.0) {
        return Err(Error::Parameter(format!("γ must exceed 1, got {gamma}")));
    }
    let u = ((ctx.n as f64 + 1.0 / set.delta()) / ctx.v_z * profile.l2_sq()).sqrt();
    if !(u > 0.0) {
        return Err(Error::Parameter("U vanishes for an empty profile".into()));
    }
    let mut ratios: Vec<f64> = eval_expsum(profile, set.points(), Kernel::Auto).values.iter().map(|s| s.norm() / u).collect();
    ratios.sort_by(|a, b| b.total_cmp(a));
    let sup_ratio = ratios.first().copied().unwrap_or(0.0);
    let min_ratio = ratios.last().copied().unwrap_or(0.0);

    let mut levels = Vec::new();
    for j in 0..=200u32 {
        let xi = gamma.powi(-(j as i32));
        let count = ratios.partition_point(|&r| r >= xi);
        let kk = k_meas / (xi * xi);
        let bound = c_kappa(ctx.kappa) * kk * if ctx.kappa == 0.0 { 1.0 } else { (2.0 * kk).ln().powf(ctx.kappa) };
        levels.push(LevelSet { j, xi, count, bound });
        if count == ratios.len() || xi < min_ratio.max(1e-300) {
            break;
        }
    }
    Ok(Census { u, sup_ratio, levels, above_one_empty: sup_ratio <= 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::wellspaced::grid_set;
    use crate::sieve::{sift, SiftingSystem, Window};

    #[test]
    fn grid_census_no_sieving() {
        let s = SiftingSystem::trivial(2.0).unwrap();
        let set = sift(&s, 64, Window::full(&s)).unwrap();
        let p = CoefficientProfile::indicator(&set);
        let ctx = RowContext::new(&s, 64, None).unwrap();
        let c = level_set_census(&p, &grid_set(64, 0.0).unwrap(), &ctx, 2.0, 1.0).unwrap();
        assert!(c.monotone());
        assert!(c.above_one_empty);
        // only b = 0 carries mass: |S(0)| = 64 = U / √2
        assert_eq!(c.levels[0].count, 0);
        assert_eq!(c.levels[1].count, 1);
        assert!((c.sup_ratio - 0.5f64.sqrt()).abs() < 1e-12);
        for l in &c.levels {
            if l.xi > c.sup_ratio {
                assert_eq!(l.count, 0);
            }
        }
    }
}

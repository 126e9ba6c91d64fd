//! Fixed-tree pairwise summation: the grouping depends only on the length,
//! so serial and parallel producers of the same vector sum identically.

use num_complex::Complex64;

const LEAF: usize = 32;

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

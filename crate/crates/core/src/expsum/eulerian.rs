use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Coefficients of `A_n(t) = Σ_k A(n, k) t^k`, `A(n, k)` counting permutations
/// of `n` letters with `k` descents; `A_0 = 1`.
pub fn eulerian(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        let mut next = vec![BigUint::zero(); m];
        for (k, slot) in next.iter_mut().enumerate() {
            if k < row.len() {
                *slot += &row[k] * BigUint::from(k + 1);
            }
            if k >= 1 && k - 1 < row.len() {
                *slot += &row[k - 1] * BigUint::from(m - k);
            }
        }
        row = next;
    }
    row
}

/// `A_n(t)` in double precision (Horner).
pub fn eulerian_eval(n: usize, t: f64) -> f64 {
    eulerian(n).iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::INFINITY))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CarlitzResidual {
    pub n: usize,
    pub t: f64,
    pub terms: usize,
    pub partial: f64,
    pub closed: f64,
    pub residual: f64,
    /// Upper bound for the omitted tail `Σ_{k ≥ terms} (k+1)^n t^k`.
    pub tail_bound: f64,
}

/// Compare `Σ_{k<terms} (k+1)^n t^k` with `A_n(t)/(1-t)^{n+1}`.
pub fn carlitz_check(n: usize, t: f64, terms: usize) -> CarlitzResidual {
    assert!(t > 0.0 && t < 1.0, "t must lie in (0, 1)");
    let mut partial = 0.0;
    let mut tk = 1.0;
    for k in 0..terms {
        partial += ((k + 1) as f64).powi(n as i32) * tk;
        tk *= t;
    }
    let closed = eulerian_eval(n, t) / (1.0 - t).powi(n as i32 + 1);
    // successive term ratios are at most t ((K+2)/(K+1))^n beyond K = terms
    let first = ((terms + 1) as f64).powi(n as i32) * t.powi(terms as i32);
    let ratio = t * ((terms + 2) as f64 / (terms + 1) as f64).powi(n as i32);
    let tail_bound = if ratio < 1.0 { first / (1.0 - ratio) } else { f64::INFINITY };
    CarlitzResidual { n, t, terms, partial, closed, residual: (partial - closed).abs(), tail_bound }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize) -> Vec<u64> {
        eulerian(n).iter().map(|c| c.to_u64().unwrap()).collect()
    }

    #[test]
    fn small_rows() {
        assert_eq!(row(0), vec![1]);
        assert_eq!(row(1), vec![1]);
        assert_eq!(row(2), vec![1, 1]);
        assert_eq!(row(3), vec![1, 4, 1]);
        assert_eq!(row(4), vec![1, 11, 11, 1]);
    }

    #[test]
    fn row_sums_are_factorials() {
        let mut fact = BigUint::one();
        for n in 1..=20usize {
            fact *= BigUint::from(n);
            let r = eulerian(n);
            assert_eq!(r.iter().sum::<BigUint>(), fact);
            let rev: Vec<_> = r.iter().rev().cloned().collect();
            assert_eq!(r, rev);
        }
    }

    #[test]
    fn carlitz_small_cases() {
        assert!((carlitz_check(0, 0.5, 200).closed - 2.0).abs() < 1e-15);
        assert!((carlitz_check(1, 0.5, 200).closed - 4.0).abs() < 1e-15);
        let c = carlitz_check(3, 1.0 / 3.0, 200);
        let expected = (1.0 + 4.0 / 3.0 + 1.0 / 9.0) / (2.0f64 / 3.0).powi(4);
        assert!((c.closed - expected).abs() < 1e-12);
        assert!(c.residual < 1e-10);
        assert!(c.tail_bound < 1e-10);
    }
}

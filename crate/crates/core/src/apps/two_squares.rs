use rayon::prelude::*;

use super::certificate::{ApplicationSet, Certificate};
use crate::arith::{factorize, gcd};
use crate::error::Result;
use crate::sieve::{sift, PrimeRule, ResidueRule, SiftingSystem, Window};

/// Odd `n` all of whose prime factors are `≡ 1 (mod 4)`; includes `1`.
pub fn in_b(n: u64) -> bool {
    n % 2 == 1 && factorize(n).iter().all(|&(p, _)| p % 4 == 1)
}

/// Odd `n = x² + y²` with `gcd(x, y) = 1`, by direct search.
pub fn in_b_direct(n: u64) -> bool {
    if n % 2 == 0 {
        return false;
    }
    let mut x = 0u64;
    while 2 * x * x <= n {
        let rest = n - x * x;
        let y = rest.isqrt();
        if y * y == rest && gcd(x, y) == 1 {
            return true;
        }
        x += 1;
    }
    false
}

/// `(B ∩ [1, N], B₄ ∩ [1, N])` with `B₄ = {b ∈ B : b + 4 ∈ B}`.
pub fn two_squares_sets(n_max: u64) -> (ApplicationSet, ApplicationSet) {
    let flags: Vec<bool> = (1..=n_max + 4).into_par_iter().map(in_b).collect();
    let b: Vec<u64> = (1..=n_max).filter(|&n| flags[(n - 1) as usize]).collect();
    let b4: Vec<u64> = b.iter().copied().filter(|&n| flags[(n + 3) as usize]).collect();
    (ApplicationSet::new("B", n_max, b), ApplicationSet::new("B4", n_max, b4))
}

/// `P = {2} ∪ {p ≡ 3 mod 4}`, `L_p = {0, -4}`, `z = max(N^{1/4}, 2)`.
pub fn b4_system(n_max: u64) -> Result<SiftingSystem> {
    SiftingSystem::new(
        PrimeRule::classes(4, &[2, 3])?,
        ResidueRule::Fixed(vec![0, -4]),
        ((n_max as f64).powf(0.25)).max(2.0),
    )
}

/// `B₄ ∩ [1, N] ⊆ S(N)`.
pub fn b4_certificate(b4: &ApplicationSet) -> Result<Certificate> {
    let system = b4_system(b4.n_max)?;
    let sifted = sift(&system, b4.n_max, Window::full(&system))?;
    let violations = b4.members.iter().copied().filter(|&n| !sifted.contains(n)).collect();
    Ok(Certificate {
        name: "B4 in S(N)".into(),
        range: (0, b4.n_max),
        checked: b4.members.len(),
        excluded: Vec::new(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        assert!(in_b(25) && in_b_direct(25));
        assert!(!in_b(9) && !in_b_direct(9));
        assert!(in_b(1) && in_b_direct(1));
    }

    #[test]
    fn b4_to_thirty() {
        let (_, b4) = two_squares_sets(30);
        assert_eq!(b4.members, vec![1, 13, 25]);
    }

    #[test]
    fn criteria_agree() {
        for n in 1..=2000 {
            assert_eq!(in_b(n), in_b_direct(n), "n = {n}");
        }
    }

    #[test]
    fn certificate_passes() {
        let (_, b4) = two_squares_sets(10_000);
        assert!(b4_certificate(&b4).unwrap().passes());
    }
}

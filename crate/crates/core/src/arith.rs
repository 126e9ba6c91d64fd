//! Small-integer number theory used throughout the crate: prime tables,
//! deterministic primality for `u64`, factorisation by trial division and
//! the usual multiplicative helpers.

use num_integer::Integer;

/// All primes `p <= limit`, by a plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation as `(p, exponent)` pairs in increasing order of `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of `n`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn mobius(n: u64) -> i64 {
    if n == 0 {
        return 0;
    }
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn omega(n: u64) -> u32 {
    factorize(n).len() as u32
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce_mod(x: i64, m: u64) -> u64 {
    (x as i128).rem_euclid(m as i128) as u64
}

/// Solve `x ≡ r_i (mod m_i)` for pairwise coprime moduli; returns `(x, Π m_i)`.
pub fn crt(residues: &[(u64, u64)]) -> (u64, u64) {
    let mut x: u128 = 0;
    let mut modulus: u128 = 1;
    for &(r, m) in residues {
        // x + modulus * t ≡ r (mod m)
        let m128 = m as u128;
        let cur = (x % m128) as u64;
        let diff = (r as i128 - cur as i128).rem_euclid(m as i128) as u64;
        let inv = inv_mod((modulus % m128) as u64, m).expect("moduli must be coprime");
        let t = (diff as u128 * inv as u128) % m128;
        x += modulus * t;
        modulus *= m128;
    }
    (x as u64, modulus as u64)
}

/// Integer `floor(x)` for a nonnegative real bound, clamped to `u64`.
pub fn floor_u64(x: f64) -> u64 {
    if x <= 0.0 {
        0
    } else if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x.floor() as u64
    }
}

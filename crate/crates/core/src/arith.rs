//! Small-integer number theory helpers.

use crate::fp::pow_mod;

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors.
pub fn prime_factors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(q, _)| q).collect()
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n as usize {
        if sieve[i] {
            for j in (i * i..=n as usize).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// Legendre symbol (a / p) for an odd prime p, as -1, 0 or 1.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Squarefree part of a nonzero integer, keeping the sign.
pub fn squarefree_kernel(d: i64) -> i64 {
    let sign = d.signum();
    let mut out = 1i64;
    for (q, e) in factorize(d.unsigned_abs()) {
        if e % 2 == 1 {
            out *= q as i64;
        }
    }
    sign * out
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Fundamental discriminants, including 1.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    let r = d.rem_euclid(4);
    if r == 1 {
        return is_squarefree(d.unsigned_abs());
    }
    if r == 0 {
        let m = d / 4;
        let mr = m.rem_euclid(4);
        return (mr == 2 || mr == 3) && is_squarefree(m.unsigned_abs());
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_small() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(prime_factors(97), vec![97]);
    }

    #[test]
    fn legendre_matches_squares() {
        for p in [3u64, 5, 7, 11, 13] {
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 1..p as i64 {
                let expect = if squares.contains(&(a as u64)) { 1 } else { -1 };
                assert_eq!(legendre(a, p), expect);
            }
        }
    }

    #[test]
    fn fundamental_discriminants() {
        let small: Vec<i64> = (-20..=20).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(small, vec![-20, -19, -15, -11, -8, -7, -4, -3, 1, 5, 8, 12, 13, 17]);
        assert_eq!(squarefree_kernel(-12), -3);
        assert_eq!(squarefree_kernel(8), 2);
    }

    #[test]
    fn sieve() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}

//! Small exact integer helpers shared by the field and spectrum code.

use alloc::vec::Vec;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Trial division; inputs here never exceed 2^32.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut i = 3u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Legendre symbol of `a` modulo an odd prime `p`, as -1, 0 or 1.
pub fn legendre(a: i64, p: u64) -> i64 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Splits `q` as `p^n` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let mut r = q;
    let mut n = 0;
    while r.is_multiple_of(p) {
        r /= p;
        n += 1;
    }
    (r == 1).then_some((p, n))
}

/// Every prime power `q = p^n <= q_max` with `p >= 5`, ordered by `q`.
pub fn admissible_prime_powers(q_max: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 5u64;
    while p <= q_max {
        if is_prime(p) {
            let mut q = p;
            let mut n = 1u32;
            loop {
                out.push((p, n));
                match q.checked_mul(p) {
                    Some(next) if next <= q_max => {
                        q = next;
                        n += 1;
                    }
                    _ => break,
                }
            }
        }
        p += 2;
    }
    out.sort_by_key(|&(p, n)| (p.pow(n), p));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_powers() {
        assert!(is_prime(5) && is_prime(2003) && !is_prime(2001) && !is_prime(1));
        assert_eq!(prime_power(343), Some((7, 3)));
        assert_eq!(prime_power(29), Some((29, 1)));
        assert_eq!(prime_power(100), None);
        let qs: Vec<u64> = admissible_prime_powers(50)
            .iter()
            .map(|&(p, n)| p.pow(n))
            .collect();
        assert_eq!(
            qs,
            [5, 7, 11, 13, 17, 19, 23, 25, 29, 31, 37, 41, 43, 47, 49]
        );
    }

    #[test]
    fn legendre_small() {
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(-1, 13), 1);
        assert_eq!(legendre(-1, 7), -1);
        assert_eq!(legendre(14, 7), 0);
    }
}

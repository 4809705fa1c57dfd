//! Dense polynomials over the prime field F_p, used only to pick and check
//! the defining modulus of an extension field. Coefficients are stored
//! constant term first.

use alloc::vec;
use alloc::vec::Vec;

use crate::num::mod_pow;

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo `m` (m need not be monic, only nonzero).
fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = degree(m).expect("modulus is nonzero");
    let lead_inv = mod_pow(m[dm], p - 2, p);
    let mut r: Vec<u64> = a.to_vec();
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let t = (r[dr] as u128 * lead_inv as u128 % p as u128) as u64;
        let shift = dr - dm;
        for (i, &mc) in m.iter().enumerate().take(dm + 1) {
            let sub = (t as u128 * mc as u128 % p as u128) as u64;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
    }
    r.truncate(dm.max(1));
    trim(r)
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    rem(&prod, m, p)
}

fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !is_zero(&y) {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Evaluates `a` at `x` in F_p.
pub(crate) fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0u128, |acc, &c| (acc * x as u128 + c as u128) % p as u128) as u64
}

/// Roots are looked for directly only while F_p is this small; the gcd
/// step covers linear factors anyway.
const ROOT_SCAN_MAX_P: u64 = 1 << 12;

/// Irreducibility of a monic polynomial of degree >= 1 over F_p.
///
/// Degree one is always irreducible. Otherwise `m` has no factor of degree
/// `k <= deg/2` iff `gcd(x^(p^k) - x, m) = 1` for each such `k`.
pub(crate) fn is_irreducible(m: &[u64], p: u64) -> bool {
    let n = match degree(m) {
        Some(n) => n,
        None => return false,
    };
    if n == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    if p <= ROOT_SCAN_MAX_P && (0..p).any(|x| eval(m, x, p) == 0) {
        return false;
    }
    let x_poly = [0u64, 1];
    let mut h = x_poly.to_vec();
    for _ in 1..=n / 2 {
        h = pow_mod(&h, p, m, p);
        let mut diff = h.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let g = gcd(m, &trim(diff), p);
        if degree(&g).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of degree
/// `n` over F_p, comparing coefficient sequences constant term first.
pub(crate) fn smallest_irreducible(p: u64, n: u32) -> Vec<u64> {
    let n = n as usize;
    let mut m = vec![0u64; n + 1];
    m[n] = 1;
    if n == 1 {
        return m;
    }
    // Odometer over (a0, ..., a_{n-1}) with a0 the most significant digit.
    loop {
        if is_irreducible(&m, p) {
            return m;
        }
        let mut i = n - 1;
        loop {
            m[i] += 1;
            if m[i] < p {
                break;
            }
            m[i] = 0;
            assert!(i > 0, "an irreducible of every degree exists");
            i -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratics_over_f7() {
        // x^2 + 1 is irreducible (7 = 3 mod 4), x^2 - 1 is not.
        assert!(is_irreducible(&[1, 0, 1], 7));
        assert!(!is_irreducible(&[6, 0, 1], 7));
        assert_eq!(smallest_irreducible(7, 2), [1, 0, 1]);
    }

    #[test]
    fn quartic_without_roots_can_be_reducible() {
        // (x^2 + 1)^2 over F_7 has no roots but is reducible.
        assert!(!is_irreducible(&[1, 0, 2, 0, 1], 7));
        let m = smallest_irreducible(7, 4);
        assert!(is_irreducible(&m, 7));
    }

    #[test]
    fn degree_one_is_x() {
        assert_eq!(smallest_irreducible(11, 1), [0, 1]);
    }
}

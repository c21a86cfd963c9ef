//! Dense univariate polynomials over F_p, low degree first, used to test
//! irreducibility of candidate moduli.

pub(crate) fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a as u64, (p - 2) as u64, p as u64) as u32
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    let p64 = p as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] as u64 * lead_inv % p64;
        let shift = top - dm;
        for (j, &mj) in m.iter().enumerate() {
            let sub = c * mj as u64 % p64;
            r[shift + j] = ((r[shift + j] as u64 + p64 - sub) % p64) as u32;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(a, b, p), m, p)
}

fn pow_poly_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: monic `m` of degree k is irreducible iff x^(p^k) = x mod m
/// and gcd(x^(p^(k/r)) - x, m) = 1 for every prime r | k.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let k = m.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    // frob[i] = x^(p^i) mod m
    let mut frob = Vec::with_capacity(k + 1);
    frob.push(rem(&x, m, p));
    for i in 0..k {
        let next = pow_poly_mod(&frob[i], p as u64, m, p);
        frob.push(next);
    }
    if sub(&frob[k], &x, p) != Vec::<u32>::new() {
        return false;
    }
    prime_divisors(k as u32).into_iter().all(|r| {
        let d = sub(&frob[k / r as usize], &x, p);
        let g = gcd(m, &d, p);
        g.len() == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        // x^2 + 1 over F_3 is irreducible, over F_5 it is not (2^2 = -1).
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // x^2 + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 1], 2));
        // (x^2 + 1)^2 over F_3
        assert!(!is_irreducible(&mul(&[1, 0, 1], &[1, 0, 1], 3), 3));
    }

    #[test]
    fn count_irreducible_quartics_over_f2() {
        // There are 3 monic irreducible quartics over F_2.
        let count = (0..16u32)
            .filter(|bits| {
                let m: Vec<u32> = (0..4).map(|i| (bits >> i) & 1).chain([1]).collect();
                is_irreducible(&m, 2)
            })
            .count();
        assert_eq!(count, 3);
    }
}

//! Dense polynomial arithmetic over F_p, used to validate and pick the residue
//! polynomial of an unramified extension.
//!
//! Polynomials are coefficient vectors, lowest degree first, with no trailing zeros
//! (the zero polynomial is the empty vector).

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: usize) -> Vec<usize> {
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

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulmod_u64(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    // Fermat; p is prime here.
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, base, p);
        }
        base = mulmod_u64(base, base, p);
        e >>= 1;
    }
    acc
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod_p(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let c = mulmod_u64(r[top], lead_inv, p);
        for (j, &fj) in f.iter().enumerate() {
            let idx = top - df + j;
            r[idx] = (r[idx] + p - mulmod_u64(c, fj, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod_u64(x, y, p)) % p;
        }
    }
    rem(&prod, f, p)
}

fn powmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = rem(a, f, p);
    let mut acc = rem(&[1], f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, f, p);
        }
        base = mulmod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

/// x^(p^k) mod f, by k successive p-th powers.
fn x_pow_p_pow(k: usize, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[0, 1], f, p);
    for _ in 0..k {
        acc = powmod(&acc, p, f, p);
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: a monic f of degree m is irreducible over F_p iff
/// x^(p^m) = x mod f and gcd(x^(p^(m/r)) - x, f) = 1 for every prime r | m.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.iter().map(|c| c % p).collect());
    if f.len() < 2 || *f.last().unwrap() != 1 {
        return false;
    }
    let m = f.len() - 1;
    let x = rem(&[0, 1], &f, p);
    if x_pow_p_pow(m, &f, p) != x {
        return false;
    }
    prime_factors(m).into_iter().all(|r| {
        let h = sub(&x_pow_p_pow(m / r, &f, p), &x, p);
        gcd(&f, &h, p).len() == 1
    })
}

/// The first monic irreducible polynomial of degree `m` over F_p, ordering candidates
/// lexicographically on (c_{m-1}, ..., c_1, c_0).
pub(crate) fn first_irreducible(p: u64, m: usize) -> Vec<u64> {
    let mut lower = vec![0u64; m];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // Increment with c_0 as the least significant digit.
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
            assert!(i < m, "every degree has an irreducible polynomial over F_p");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }

    #[test]
    fn irreducibility_matches_brute_force_for_small_degrees() {
        // A quadratic or cubic is irreducible iff it has no root in F_p.
        for p in [3u64, 5, 7] {
            for m in [2usize, 3] {
                let total = p.pow(m as u32);
                for code in 0..total {
                    let mut f: Vec<u64> = (0..m).map(|i| (code / p.pow(i as u32)) % p).collect();
                    f.push(1);
                    let has_root = (0..p).any(|x| {
                        f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0
                    });
                    assert_eq!(is_irreducible(&f, p), !has_root, "p={p} f={f:?}");
                }
            }
        }
    }

    #[test]
    fn quartic_product_of_quadratics_is_reducible() {
        // (x^2 + 2)^2 = x^4 + 4x^2 + 4 over F_5 has no roots but is reducible.
        assert!(!is_irreducible(&[4, 0, 4, 0, 1], 5));
        assert!(is_irreducible(&[2, 0, 1], 5));
    }

    #[test]
    fn default_polynomials() {
        assert_eq!(first_irreducible(5, 1), vec![0, 1]);
        assert_eq!(first_irreducible(5, 2), vec![2, 0, 1]);
        assert_eq!(first_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(first_irreducible(7, 2), vec![1, 0, 1]);
    }
}

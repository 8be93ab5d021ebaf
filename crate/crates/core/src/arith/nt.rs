//! Small-integer number theory: primes, factorizations, residue symbols, discrete logs.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes `p <= bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Multiplicative order of `a` modulo `m`, or `None` when `gcd(a, m) != 1`.
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if gcd(a % m, m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
    }
    Some(k)
}

/// Smallest generator of `(Z/p)^*`.
pub fn primitive_root(p: u64) -> u64 {
    assert!(is_prime(p), "{p} is not prime");
    (1..p).find(|&g| mult_order(g, p) == Some(p - 1)).unwrap()
}

/// The exponent `r` in `0..p-1` with `s^r = x (mod p)`; exhaustive search.
pub fn discrete_log(s: u64, x: u64, p: u64) -> Option<u64> {
    let x = x % p;
    let mut acc = 1 % p;
    for r in 0..p - 1 {
        if acc == x {
            return Some(r);
        }
        acc = acc * (s % p) % p;
    }
    None
}

/// Solves `t = residues[i] (mod moduli[i])` for pairwise coprime moduli; result in `0..prod`.
pub fn crt(residues: &[u64], moduli: &[u64]) -> u64 {
    let m: u64 = moduli.iter().product();
    let mut t = 0u64;
    for (&r, &mi) in residues.iter().zip(moduli) {
        let rest = m / mi;
        let inv = (1..mi.max(2)).find(|k| rest % mi * k % mi == 1 % mi).unwrap_or(0);
        t = (t + (r % mi) * rest % m * inv) % m;
    }
    t
}

/// Kronecker symbol `(a/p)` for a prime `p`; `(a/2)` follows `a mod 8`.
pub fn kronecker(a: i64, p: u64) -> i32 {
    assert!(is_prime(p));
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if p == 2 {
        return match a.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn is_perfect_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i64;
    (r.saturating_sub(2)..=r + 2).any(|k| k >= 0 && k * k == n)
}

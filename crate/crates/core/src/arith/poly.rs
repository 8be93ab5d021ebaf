//! Dense integer polynomials, stored low degree first.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::nt;

pub type IntPoly = Vec<BigInt>;

pub fn trim(mut p: IntPoly) -> IntPoly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return vec![BigInt::zero()];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division by a monic polynomial; panics if the remainder is nonzero.
pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let (q, r) = divrem_monic(a, b);
    assert!(r.iter().all(Zero::is_zero), "inexact polynomial division");
    q
}

/// Quotient and remainder by a monic divisor.
pub fn divrem_monic(a: &[BigInt], b: &[BigInt]) -> (IntPoly, IntPoly) {
    let b = trim(b.to_vec());
    assert!(b.last().is_some_and(One::is_one), "divisor must be monic");
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (vec![BigInt::zero()], trim(r));
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

/// `x^k - 1`.
pub fn x_pow_minus_one(k: usize) -> IntPoly {
    let mut p = vec![BigInt::zero(); k + 1];
    p[0] = BigInt::from(-1);
    p[k] = BigInt::one();
    p
}

/// The `q`-th cyclotomic polynomial, by dividing `x^q - 1` by the lower cyclotomic factors.
pub fn cyclotomic(q: u64) -> IntPoly {
    let mut p = x_pow_minus_one(q as usize);
    for d in nt::divisors(q) {
        if d < q {
            p = div_exact(&p, &cyclotomic(d));
        }
    }
    p
}

/// Evaluates `p(x)` with `x` given by coordinates, reducing with `reduce`.
pub fn compose_mod(p: &[BigInt], x: &[BigInt], modulus: &[BigInt]) -> IntPoly {
    let mut acc = vec![BigInt::zero()];
    for c in p.iter().rev() {
        acc = mul(&acc, x);
        acc[0] += c;
        acc = divrem_monic(&acc, modulus).1;
    }
    acc
}

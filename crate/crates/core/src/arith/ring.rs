//! Monogenic number rings `Z[xi]` inside `Q(xi)`, with explicit Galois maps.
//!
//! Elements are stored in the power basis `1, xi, ..., xi^{n-1}`, fully reduced
//! modulo the minimal polynomial. Every constructor only accepts data for which
//! `Z[xi]` is the full ring of integers, so p-integrality can be read off the
//! power-basis denominators.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{self, IntPoly};
use super::{nt, Rational};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Cyclotomic { q: u64 },
    Quadratic { r: i64, s: i64 },
}

/// A ring endomorphism determined by the image of `xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisMap {
    /// Power-basis coordinates of the image of `xi`.
    pub image: Vec<BigInt>,
    /// `t` when the map is `xi -> xi^t`.
    pub exponent: Option<u64>,
    /// Column `k` holds the coordinates of the image of `xi^k`.
    matrix: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonogenicRing {
    degree: usize,
    min_poly: IntPoly,
    kind: RingKind,
    galois_maps: Vec<GaloisMap>,
    /// Coordinates of `xi^k` for `k < 2n - 1`.
    reduction: Vec<Vec<BigInt>>,
}

/// An element of `Q(xi)` in power-basis coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    pub coords: Vec<Rational>,
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c:?}")?,
                1 => write!(f, "({c:?})xi")?,
                _ => write!(f, "({c:?})xi^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl MonogenicRing {
    fn from_parts(min_poly: IntPoly, kind: RingKind, images: Vec<(IntPoly, Option<u64>)>) -> Self {
        let n = min_poly.len() - 1;
        let reduction = (0..2 * n - 1)
            .map(|k| {
                let mut mono = vec![BigInt::zero(); k + 1];
                mono[k] = BigInt::one();
                pad(poly::divrem_monic(&mono, &min_poly).1, n)
            })
            .collect();
        let galois_maps = images
            .into_iter()
            .map(|(image, exponent)| {
                let image = pad(image, n);
                let matrix = (0..n)
                    .map(|k| {
                        let mut mono = vec![BigInt::zero(); k + 1];
                        mono[k] = BigInt::one();
                        pad(poly::compose_mod(&mono, &image, &min_poly), n)
                    })
                    .collect();
                GaloisMap { image, exponent, matrix }
            })
            .collect();
        let ring = MonogenicRing { degree: n, min_poly, kind, galois_maps, reduction };
        for g in &ring.galois_maps {
            debug_assert!(poly::compose_mod(&ring.min_poly, &g.image, &ring.min_poly).iter().all(Zero::is_zero));
        }
        ring
    }

    /// `Z[zeta_q]` for squarefree `q >= 3`, with every map `xi -> xi^t`, `gcd(t, q) = 1`,
    /// listed by ascending `t` (so index 0 is the identity).
    pub fn cyclotomic(q: u64) -> Result<Self, Error> {
        if q < 3 {
            return Err(Error::Spec(format!("conductor {q} must be at least 3")));
        }
        if !nt::is_squarefree(q) {
            return Err(Error::Spec(format!(
                "conductor {q} is not squarefree; the extension would be wildly ramified"
            )));
        }
        let min_poly = poly::cyclotomic(q);
        let images = (1..q)
            .filter(|&t| nt::gcd(t, q) == 1)
            .map(|t| {
                let mut mono = vec![BigInt::zero(); t as usize + 1];
                mono[t as usize] = BigInt::one();
                (poly::divrem_monic(&mono, &min_poly).1, Some(t))
            })
            .collect();
        Ok(Self::from_parts(min_poly, RingKind::Cyclotomic { q }, images))
    }

    /// `Z[xi]` with `xi^2 - r xi + s = 0`; the discriminant must be odd, squarefree and
    /// not a square.
    pub fn quadratic(r: i64, s: i64) -> Result<Self, Error> {
        let q = r * r - 4 * s;
        if q % 2 == 0 {
            return Err(Error::Spec(format!("discriminant {q} of (r,s)=({r},{s}) is even")));
        }
        if nt::is_perfect_square(q) {
            return Err(Error::Spec(format!("discriminant {q} of (r,s)=({r},{s}) is a square")));
        }
        if !nt::is_squarefree(q.unsigned_abs()) {
            return Err(Error::Spec(format!(
                "discriminant {q} of (r,s)=({r},{s}) is not squarefree, so Z[xi] is not maximal"
            )));
        }
        let min_poly = vec![BigInt::from(s), BigInt::from(-r), BigInt::one()];
        let images = vec![(vec![BigInt::zero(), BigInt::one()], None), (vec![BigInt::from(r), BigInt::from(-1)], None)];
        Ok(Self::from_parts(min_poly, RingKind::Quadratic { r, s }, images))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn galois_maps(&self) -> &[GaloisMap] {
        &self.galois_maps
    }

    /// Discriminant of the quadratic ring, or the conductor of the cyclotomic one.
    pub fn conductor(&self) -> i64 {
        match self.kind {
            RingKind::Cyclotomic { q } => q as i64,
            RingKind::Quadratic { r, s } => r * r - 4 * s,
        }
    }

    pub fn zero(&self) -> CyclotomicNumber {
        CyclotomicNumber { coords: vec![Rational::zero(); self.degree] }
    }

    pub fn from_rational(&self, c: &Rational) -> CyclotomicNumber {
        let mut z = self.zero();
        z.coords[0] = c.clone();
        z
    }

    pub fn one(&self) -> CyclotomicNumber {
        self.from_rational(&Rational::one())
    }

    /// The generator `xi`.
    pub fn xi(&self) -> CyclotomicNumber {
        self.from_int_coords(&self.reduction[1])
    }

    pub fn from_int_coords(&self, c: &[BigInt]) -> CyclotomicNumber {
        let mut z = self.zero();
        for (k, v) in c.iter().enumerate() {
            z.coords[k] = Rational::from_bigint(v.clone());
        }
        z
    }

    /// `xi^k`, reduced.
    pub fn xi_pow(&self, k: usize) -> CyclotomicNumber {
        let mut mono = vec![BigInt::zero(); k + 1];
        mono[k] = BigInt::one();
        self.from_int_coords(&pad(poly::divrem_monic(&mono, &self.min_poly).1, self.degree))
    }

    pub fn is_zero(&self, a: &CyclotomicNumber) -> bool {
        a.coords.iter().all(Rational::is_zero)
    }

    pub fn add(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber { coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &CyclotomicNumber, c: &Rational) -> CyclotomicNumber {
        CyclotomicNumber { coords: a.coords.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        let n = self.degree;
        let mut conv = vec![Rational::zero(); 2 * n - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                conv[i + j].add_mul(x, y);
            }
        }
        let mut out = conv[..n].to_vec();
        for (k, c) in conv.iter().enumerate().skip(n) {
            if c.is_zero() {
                continue;
            }
            for (j, r) in self.reduction[k].iter().enumerate() {
                if !r.is_zero() {
                    out[j].add_mul(c, &Rational::from_bigint(r.clone()));
                }
            }
        }
        CyclotomicNumber { coords: out }
    }

    pub fn pow(&self, a: &CyclotomicNumber, e: u32) -> CyclotomicNumber {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Applies the Galois map with the given index.
    pub fn galois_apply(&self, index: usize, a: &CyclotomicNumber) -> CyclotomicNumber {
        let g = &self.galois_maps[index];
        let mut out = self.zero();
        for (k, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, m) in g.matrix[k].iter().enumerate() {
                if !m.is_zero() {
                    out.coords[j].add_mul(c, &Rational::from_bigint(m.clone()));
                }
            }
        }
        out
    }

    /// Matrix of a Galois map on the power basis, columns are images of `xi^k`.
    pub fn galois_matrix(&self, index: usize) -> Vec<Vec<BigInt>> {
        let m = &self.galois_maps[index].matrix;
        (0..self.degree).map(|i| (0..self.degree).map(|k| m[k][i].clone()).collect()).collect()
    }

    /// Index of the map `xi -> xi^t` (cyclotomic rings only).
    pub fn map_with_exponent(&self, t: u64) -> Option<usize> {
        let q = match self.kind {
            RingKind::Cyclotomic { q } => q,
            RingKind::Quadratic { .. } => return None,
        };
        self.galois_maps.iter().position(|g| g.exponent == Some(t % q))
    }

    /// Index of the arithmetic Frobenius at an unramified prime `p`.
    ///
    /// For the quadratic ring the Frobenius is the identity when `(q/p) = 1` and the
    /// conjugation otherwise.
    pub fn frobenius_index(&self, p: u64) -> Result<usize, Error> {
        let q = self.conductor();
        if q.unsigned_abs().is_multiple_of(p) {
            return Err(Error::Ramified { p, q });
        }
        match self.kind {
            RingKind::Cyclotomic { q } => Ok(self.map_with_exponent(p % q).expect("unit exponent")),
            RingKind::Quadratic { .. } => Ok(if nt::kronecker(q, p) == 1 { 0 } else { 1 }),
        }
    }

    /// Order of a Galois map under composition.
    pub fn galois_order(&self, index: usize) -> usize {
        let xi = self.xi();
        let mut x = self.galois_apply(index, &xi);
        let mut k = 1;
        while x != xi {
            x = self.galois_apply(index, &x);
            k += 1;
        }
        k
    }

    /// True iff every power-basis coordinate has denominator prime to `p`.
    pub fn is_p_integral(&self, a: &CyclotomicNumber, p: u64) -> bool {
        a.coords.iter().all(|c| c.is_p_integral(p))
    }

    pub fn is_integral(&self, a: &CyclotomicNumber) -> bool {
        a.coords.iter().all(Rational::is_integer)
    }
}

fn pad(mut v: IntPoly, n: usize) -> IntPoly {
    v.resize(n.max(v.len()), BigInt::zero());
    v.truncate(n);
    v
}

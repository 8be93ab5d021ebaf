//! Exponent vectors with cached total degree.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A monomial `x_1^{e_1} ... x_m^{e_m}`; exponents are bounded by the degree cap (at most 255).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u16,
    exps: SmallVec<[u8; 16]>,
}

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial { deg: 0, exps: SmallVec::from_elem(0, num_vars) }
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut m = Self::one(num_vars);
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        let deg: u32 = exps.iter().sum();
        assert!(exps.iter().all(|&e| e <= u8::MAX as u32), "exponent exceeds 255");
        Monomial { deg: deg as u16, exps: exps.iter().map(|&e| e as u8).collect() }
    }

    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exps(&self) -> Vec<u32> {
        self.exps.iter().map(|&e| e as u32).collect()
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial { deg: self.deg + other.deg, exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    /// Multiplies every exponent by `k`; `None` if some exponent would exceed 255.
    pub fn scaled(&self, k: u32) -> Option<Monomial> {
        let mut exps = SmallVec::with_capacity(self.exps.len());
        for &e in &self.exps {
            exps.push(u8::try_from(e as u32 * k).ok()?);
        }
        Some(Monomial { deg: (self.deg as u32 * k) as u16, exps })
    }

    /// Re-indexes variables: variable `i` becomes `map[i]` in a space of `num_vars` variables.
    pub fn remap(&self, num_vars: usize, map: &[usize]) -> Monomial {
        let mut m = Self::one(num_vars);
        for (i, &e) in self.exps.iter().enumerate() {
            m.exps[map[i]] += e;
        }
        m.deg = self.deg;
        m
    }

    /// `self / x_i`, if `x_i` divides `self`.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[i] -= 1;
        m.deg -= 1;
        Some(m)
    }
}

/// Graded order: total degree first, then exponent vectors in descending lexicographic
/// order, so `x1^2 < x1 x2 < x2^2` within degree 2.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deg == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order() {
        let mut v = [
            Monomial::from_exps(&[0, 2]),
            Monomial::from_exps(&[1, 0]),
            Monomial::from_exps(&[2, 0]),
            Monomial::from_exps(&[1, 1]),
            Monomial::from_exps(&[0, 0]),
        ];
        v.sort();
        let got: Vec<Vec<u32>> = v.iter().map(Monomial::exps).collect();
        assert_eq!(got, vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn arithmetic() {
        let a = Monomial::from_exps(&[1, 2]);
        let b = Monomial::from_exps(&[3, 0]);
        assert_eq!(a.mul(&b), Monomial::from_exps(&[4, 2]));
        assert_eq!(a.scaled(3).unwrap(), Monomial::from_exps(&[3, 6]));
        assert_eq!(a.remap(4, &[3, 0]), Monomial::from_exps(&[2, 0, 0, 1]));
        assert_eq!(a.div_var(1).unwrap(), Monomial::from_exps(&[1, 1]));
        assert!(b.div_var(1).is_none());
        assert_eq!(format!("{a:?}"), "x1*x2^2");
    }
}

//! Sparse multivariate power series over an exact ring, truncated by total degree.

mod compose;
mod monomial;
mod serial;
mod tuple;

use std::fmt;

use rustc_hash::FxHashMap;

use crate::arith::{CoeffRing, Integrality, Rational};
use crate::error::Error;

pub use compose::invert_tuple;
pub(crate) use compose::Substitution;
pub use monomial::Monomial;
pub use serial::{series_from_json, series_to_json, tuple_from_json, tuple_to_json};
pub use tuple::SeriesTuple;

/// Ambient ring `R[[x_1..x_m]] / (deg > N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesContext<R: CoeffRing> {
    num_vars: usize,
    max_degree: u32,
    ring: R,
}

impl<R: CoeffRing> SeriesContext<R> {
    pub fn new(ring: R, num_vars: usize, max_degree: u32) -> Result<Self, Error> {
        if !(2..=255).contains(&max_degree) {
            return Err(Error::Context(format!("degree cap {max_degree} outside 2..=255")));
        }
        if num_vars == 0 {
            return Err(Error::Context("series need at least one variable".into()));
        }
        Ok(SeriesContext { num_vars, max_degree, ring })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn with_vars(&self, num_vars: usize) -> Self {
        SeriesContext { num_vars, ..self.clone() }
    }

    pub fn with_degree(&self, max_degree: u32) -> Self {
        SeriesContext { max_degree, ..self.clone() }
    }

    pub fn with_ring<S: CoeffRing>(&self, ring: S) -> SeriesContext<S> {
        SeriesContext { num_vars: self.num_vars, max_degree: self.max_degree, ring }
    }

    fn check(&self, other: &Self) -> Result<(), Error> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Context(format!(
                "({} vars, N={}) vs ({} vars, N={})",
                self.num_vars, self.max_degree, other.num_vars, other.max_degree
            )))
        }
    }
}

/// A truncated power series; terms are kept sorted in graded order without zeros.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<R: CoeffRing> {
    ctx: SeriesContext<R>,
    terms: Vec<(Monomial, R::Elem)>,
}

impl<R: CoeffRing> fmt::Debug for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})*{m:?}")?;
        }
        Ok(())
    }
}

impl<R: CoeffRing> TruncatedSeries<R> {
    pub fn zero(ctx: &SeriesContext<R>) -> Self {
        TruncatedSeries { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn constant(ctx: &SeriesContext<R>, c: R::Elem) -> Self {
        Self::from_terms(ctx, [(Monomial::one(ctx.num_vars), c)])
    }

    pub fn var(ctx: &SeriesContext<R>, i: usize) -> Self {
        assert!(i < ctx.num_vars, "variable index out of range");
        Self::from_terms(ctx, [(Monomial::var(ctx.num_vars, i), ctx.ring.one())])
    }

    /// Builds a series from arbitrary terms: merges duplicates, drops zeros and terms above N.
    pub fn from_terms(ctx: &SeriesContext<R>, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> Self {
        let ring = &ctx.ring;
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        for (m, c) in terms {
            assert_eq!(m.num_vars(), ctx.num_vars, "monomial arity mismatch");
            if m.degree() > ctx.max_degree {
                continue;
            }
            match acc.get_mut(&m) {
                Some(v) => ring.add_assign(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(ctx, acc)
    }

    fn from_map(ctx: &SeriesContext<R>, acc: FxHashMap<Monomial, R::Elem>) -> Self {
        let ring = &ctx.ring;
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        TruncatedSeries { ctx: ctx.clone(), terms }
    }

    /// Builds from terms already sorted, merged and nonzero.
    fn from_sorted(ctx: &SeriesContext<R>, terms: Vec<(Monomial, R::Elem)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        TruncatedSeries { ctx: ctx.clone(), terms }
    }

    pub fn ctx(&self) -> &SeriesContext<R> {
        &self.ctx
    }

    pub fn ring(&self) -> &R {
        &self.ctx.ring
    }

    pub fn terms(&self) -> &[(Monomial, R::Elem)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> R::Elem {
        match self.terms.binary_search_by(|t| t.0.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ctx.ring.zero(),
        }
    }

    /// Coefficient of the monomial with the given exponents.
    pub fn coeff_of(&self, exps: &[u32]) -> R::Elem {
        self.coeff(&Monomial::from_exps(exps))
    }

    pub fn constant_term(&self) -> R::Elem {
        self.coeff(&Monomial::one(self.ctx.num_vars))
    }

    /// Lowest total degree present, or `None` for the zero series.
    pub fn order(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.degree())
    }

    /// Index of the first term with degree greater than `deg`.
    fn degree_end(&self, deg: u32) -> usize {
        self.terms.partition_point(|t| t.0.degree() <= deg)
    }

    pub fn truncate(&self, cap: u32) -> Self {
        Self::from_sorted(&self.ctx, self.terms[..self.degree_end(cap)].to_vec())
    }

    pub fn homogeneous_part(&self, deg: u32) -> Self {
        let lo = self.terms.partition_point(|t| t.0.degree() < deg);
        let hi = self.degree_end(deg);
        Self::from_sorted(&self.ctx, self.terms[lo..hi].to_vec())
    }

    /// Moves the series into a context with the same variables and ring but another cap.
    pub fn recap(&self, max_degree: u32) -> Self {
        let ctx = self.ctx.with_degree(max_degree);
        let end = self.degree_end(max_degree);
        TruncatedSeries { ctx, terms: self.terms[..end].to_vec() }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let ring = &self.ctx.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let fix = |c: &R::Elem| if negate_other { ring.neg(c) } else { c.clone() };
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0.clone(), fix(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other { ring.sub(&a[i].1, &b[j].1) } else { ring.add(&a[i].1, &b[j].1) };
                    if !ring.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Self::from_sorted(&self.ctx, out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        self.ctx.check(&other.ctx)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, Error> {
        self.ctx.check(&other.ctx)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, Error> {
        self.ctx.check(&other.ctx)?;
        Ok(self.mul_capped(other, self.ctx.max_degree))
    }

    /// Panicking variants for callers that built both operands in one context.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("context mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("context mismatch")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("context mismatch")
    }

    pub fn neg(&self) -> Self {
        let ring = &self.ctx.ring;
        Self::from_sorted(&self.ctx, self.terms.iter().map(|(m, c)| (m.clone(), ring.neg(c))).collect())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let ring = &self.ctx.ring;
        if ring.is_zero(c) {
            return Self::zero(&self.ctx);
        }
        let terms =
            self.terms.iter().map(|(m, a)| (m.clone(), ring.mul(a, c))).filter(|(_, a)| !ring.is_zero(a)).collect();
        Self::from_sorted(&self.ctx, terms)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&self.ctx.ring.from_rational(c))
    }

    /// Product truncated at total degree `cap` (which must not exceed the context cap).
    pub fn mul_capped(&self, other: &Self, cap: u32) -> Self {
        let ring = &self.ctx.ring;
        let cap = cap.min(self.ctx.max_degree);
        let (a, b) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let (Some(oa), Some(ob)) = (a.order(), b.order()) else {
            return Self::zero(&self.ctx);
        };
        if oa + ob > cap {
            return Self::zero(&self.ctx);
        }
        let mut acc: FxHashMap<Monomial, R::Elem> = FxHashMap::default();
        acc.reserve(a.terms.len() * 4);
        for (ma, ca) in &a.terms[..a.degree_end(cap - ob)] {
            let end = b.degree_end(cap - ma.degree());
            for (mb, cb) in &b.terms[..end] {
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(v) => ring.add_mul(v, ca, cb),
                    None => {
                        acc.insert(m, ring.mul(ca, cb));
                    }
                }
            }
        }
        Self::from_map(&self.ctx, acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.ctx, self.ctx.ring.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse of a series with invertible constant term `c0` in `Q` or `R`;
    /// `c0` must be a unit given as a rational.
    pub fn inverse_with_constant(&self, c0_inv: &Rational) -> Self {
        // 1/f = c^{-1} sum_k (1 - c^{-1} f)^k; the tail has positive order.
        let one = Self::constant(&self.ctx, self.ctx.ring.one());
        let normalized = self.scale_rational(c0_inv);
        let tail = one.sub(&normalized);
        assert!(tail.constant_term() == self.ctx.ring.zero(), "constant term mismatch");
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.ctx.max_degree {
            power = power.mul(&tail);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        acc.scale_rational(c0_inv)
    }

    /// `f(x_1^p, ..., x_m^p)` with coefficients passed through `coeff_map`; terms pushed
    /// above the cap vanish.
    pub fn frobenius_substitute(&self, p: u32, coeff_map: &dyn Fn(&R::Elem) -> R::Elem) -> Self {
        let n = self.ctx.max_degree;
        let terms = self
            .terms
            .iter()
            .take_while(|(m, _)| m.degree() * p <= n)
            .map(|(m, c)| (m.scaled(p).expect("bounded by cap"), coeff_map(c)))
            .filter(|(_, c)| !self.ctx.ring.is_zero(c))
            .collect();
        Self::from_sorted(&self.ctx, terms)
    }

    /// Re-indexes variables into `ctx`: variable `i` becomes `map[i]`.
    pub fn embed(&self, ctx: &SeriesContext<R>, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.ctx.num_vars);
        Self::from_terms(ctx, self.terms.iter().map(|(m, c)| (m.remap(ctx.num_vars, map), c.clone())))
    }

    /// Sets the listed variables to zero and drops them; the rest keep their order.
    pub fn set_vars_zero(&self, vars: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.ctx.num_vars).filter(|v| !vars.contains(v)).collect();
        let ctx = self.ctx.with_vars(keep.len());
        let terms = self.terms.iter().filter(|(m, _)| vars.iter().all(|&v| m.exp(v) == 0)).map(|(m, c)| {
            let exps: Vec<u32> = keep.iter().map(|&v| m.exp(v)).collect();
            (Monomial::from_exps(&exps), c.clone())
        });
        Self::from_terms(&ctx, terms)
    }

    /// Applies a coefficient map into another ring over the same variables.
    pub fn map_ring<S: CoeffRing>(&self, ring: &S, f: impl Fn(&R::Elem) -> S::Elem) -> TruncatedSeries<S> {
        let ctx = self.ctx.with_ring(ring.clone());
        let terms: Vec<_> =
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))).filter(|(_, c)| !ring.is_zero(c)).collect();
        TruncatedSeries { ctx, terms }
    }

    pub fn map_coeffs(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        self.map_ring(&self.ctx.ring.clone(), f)
    }

    /// First term whose coefficient fails the integrality test.
    pub fn first_non_integral(&self, mode: Integrality) -> Option<(Monomial, R::Elem)> {
        self.terms.iter().find(|(_, c)| !self.ctx.ring.is_integral(c, mode)).cloned()
    }

    pub fn is_integral(&self, mode: Integrality) -> bool {
        self.first_non_integral(mode).is_none()
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let ring = &self.ctx.ring;
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(i);
            m.div_var(i).map(|d| (d, ring.scale(c, &Rational::from_int(e as i64))))
        });
        Self::from_terms(&self.ctx, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rationals;

    pub(crate) fn ctx(vars: usize, n: u32) -> SeriesContext<Rationals> {
        SeriesContext::new(Rationals, vars, n).unwrap()
    }

    fn q(a: i64, b: i64) -> Rational {
        Rational::frac(a, b)
    }

    #[test]
    fn arithmetic_examples() {
        let c = ctx(2, 6);
        let x = TruncatedSeries::var(&c, 0);
        let y = TruncatedSeries::var(&c, 1);
        let lhs = x.add(&y).mul(&x.sub(&y));
        let rhs = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(lhs, rhs);
        let c1 = ctx(1, 4);
        let x = TruncatedSeries::var(&c1, 0);
        assert!(x.pow(4).mul(&x).is_zero());
        let a = x.scale_rational(&q(1, 2));
        let b = x.scale_rational(&q(2, 3));
        assert_eq!(a.mul(&b).coeff_of(&[2]), q(1, 3));
        assert_eq!(a.mul(&b).num_terms(), 1);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = TruncatedSeries::var(&ctx(1, 4), 0);
        let b = TruncatedSeries::var(&ctx(1, 5), 0);
        assert!(a.try_add(&b).is_err());
        assert!(a.try_mul(&b).is_err());
        assert!(SeriesContext::new(Rationals, 1, 1).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let c = ctx(1, 5);
        let x = TruncatedSeries::var(&c, 0);
        let f = x.add(&x.mul(&x));
        let g = f.frobenius_substitute(2, &|a| a.clone());
        assert_eq!(g, x.pow(2).add(&x.pow(4)));
        assert!(TruncatedSeries::zero(&c).frobenius_substitute(3, &|a| a.clone()).is_zero());
    }

    #[test]
    fn inverse_series() {
        let c = ctx(2, 6);
        let x = TruncatedSeries::var(&c, 0);
        let y = TruncatedSeries::var(&c, 1);
        let one = TruncatedSeries::constant(&c, Rational::one());
        let f = one.add(&x.mul(&y).scale_rational(&q(3, 1)));
        let inv = f.inverse_with_constant(&Rational::one());
        assert_eq!(f.mul(&inv), one);
        let g = one.scale_rational(&q(2, 1)).add(&x);
        let ginv = g.inverse_with_constant(&q(1, 2));
        assert_eq!(g.mul(&ginv), one);
    }

    #[test]
    fn set_vars_zero_and_embed() {
        let c = ctx(2, 4);
        let x = TruncatedSeries::var(&c, 0);
        let y = TruncatedSeries::var(&c, 1);
        let f = x.add(&y).add(&x.mul(&y)).add(&x.mul(&x));
        let g = f.set_vars_zero(&[1]);
        let c1 = ctx(1, 4);
        let t = TruncatedSeries::var(&c1, 0);
        assert_eq!(g, t.add(&t.mul(&t)));
        let back = g.embed(&c, &[1]);
        assert_eq!(back, y.add(&y.mul(&y)));
    }

    #[test]
    fn derivative() {
        let c = ctx(2, 5);
        let x = TruncatedSeries::var(&c, 0);
        let y = TruncatedSeries::var(&c, 1);
        let f = x.pow(3).mul(&y);
        assert_eq!(f.derivative(0), x.pow(2).mul(&y).scale_rational(&q(3, 1)));
    }
}

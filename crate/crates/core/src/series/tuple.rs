//! Ordered tuples of series sharing one context.

use super::{Monomial, SeriesContext, TruncatedSeries};
use crate::arith::{CoeffRing, Integrality, Rational};

#[derive(Clone, PartialEq, Debug)]
pub struct SeriesTuple<R: CoeffRing> {
    ctx: SeriesContext<R>,
    comps: Vec<TruncatedSeries<R>>,
}

impl<R: CoeffRing> SeriesTuple<R> {
    pub fn new(ctx: &SeriesContext<R>, comps: Vec<TruncatedSeries<R>>) -> Self {
        assert!(comps.iter().all(|c| c.ctx() == ctx), "components must share the context");
        SeriesTuple { ctx: ctx.clone(), comps }
    }

    /// `(x_1, ..., x_d)`.
    pub fn identity(ctx: &SeriesContext<R>, d: usize) -> Self {
        Self::new(ctx, (0..d).map(|i| TruncatedSeries::var(ctx, i)).collect())
    }

    /// `(x_{offset}, ..., x_{offset+d-1})`.
    pub fn variables(ctx: &SeriesContext<R>, offset: usize, d: usize) -> Self {
        Self::new(ctx, (offset..offset + d).map(|i| TruncatedSeries::var(ctx, i)).collect())
    }

    pub fn zero(ctx: &SeriesContext<R>, d: usize) -> Self {
        Self::new(ctx, vec![TruncatedSeries::zero(ctx); d])
    }

    pub fn ctx(&self) -> &SeriesContext<R> {
        &self.ctx
    }

    pub fn ring(&self) -> &R {
        self.ctx.ring()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> &[TruncatedSeries<R>] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &TruncatedSeries<R> {
        &self.comps[i]
    }

    pub fn into_components(self) -> Vec<TruncatedSeries<R>> {
        self.comps
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self::new(&self.ctx, self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self::new(&self.ctx, self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn map(&self, f: impl Fn(&TruncatedSeries<R>) -> TruncatedSeries<R>) -> Self {
        let comps: Vec<_> = self.comps.iter().map(f).collect();
        let ctx = comps.first().map_or(self.ctx.clone(), |c| c.ctx().clone());
        SeriesTuple { ctx, comps }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        Self::new(&self.ctx, comps)
    }

    /// `M * self` for a `rows x len` matrix of ring elements.
    pub fn left_mul(&self, m: &[Vec<R::Elem>]) -> Self {
        let ring = self.ring();
        let comps = m
            .iter()
            .map(|row| {
                assert_eq!(row.len(), self.len(), "matrix width mismatch");
                row.iter().zip(&self.comps).fold(TruncatedSeries::zero(&self.ctx), |acc, (c, s)| {
                    if ring.is_zero(c) {
                        acc
                    } else {
                        acc.add(&s.scale(c))
                    }
                })
            })
            .collect();
        Self::new(&self.ctx, comps)
    }

    /// `M * self` for a rational matrix.
    pub fn left_mul_rational(&self, m: &[Vec<Rational>]) -> Self {
        let ring = self.ring().clone();
        let lifted: Vec<Vec<R::Elem>> =
            m.iter().map(|row| row.iter().map(|c| ring.from_rational(c)).collect()).collect();
        self.left_mul(&lifted)
    }

    /// `D` with `f(X) = D X mod deg 2`, as rows of ring elements.
    pub fn linear_coefficient(&self) -> Vec<Vec<R::Elem>> {
        let n = self.ctx.num_vars();
        self.comps.iter().map(|c| (0..n).map(|j| c.coeff(&Monomial::var(n, j))).collect()).collect()
    }

    /// True when there are no constant terms and the linear coefficient is the identity.
    pub fn is_tangent_to_identity(&self) -> bool {
        let ring = self.ring();
        let lin = self.linear_coefficient();
        self.comps.iter().all(|c| ring.is_zero(&c.constant_term()))
            && lin.iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, c)| if i == j { *c == ring.one() } else { ring.is_zero(c) })
            })
    }

    pub fn frobenius_substitute(&self, p: u32, coeff_map: &dyn Fn(&R::Elem) -> R::Elem) -> Self {
        self.map(|c| c.frobenius_substitute(p, coeff_map))
    }

    pub fn embed(&self, ctx: &SeriesContext<R>, map: &[usize]) -> Self {
        Self::new(ctx, self.comps.iter().map(|c| c.embed(ctx, map)).collect())
    }

    pub fn truncate(&self, cap: u32) -> Self {
        self.map(|c| c.truncate(cap))
    }

    pub fn recap(&self, max_degree: u32) -> Self {
        self.map(|c| c.recap(max_degree))
    }

    pub fn set_vars_zero(&self, vars: &[usize]) -> Self {
        self.map(|c| c.set_vars_zero(vars))
    }

    pub fn map_ring<S: CoeffRing>(&self, ring: &S, f: impl Fn(&R::Elem) -> S::Elem) -> SeriesTuple<S> {
        let ctx = self.ctx.with_ring(ring.clone());
        let comps = self.comps.iter().map(|c| c.map_ring(ring, &f)).collect();
        SeriesTuple::new(&ctx, comps)
    }

    /// First (component, monomial, coefficient) failing the integrality test.
    pub fn first_non_integral(&self, mode: Integrality) -> Option<(usize, Monomial, R::Elem)> {
        self.comps.iter().enumerate().find_map(|(i, c)| c.first_non_integral(mode).map(|(m, v)| (i, m, v)))
    }

    pub fn is_integral(&self, mode: Integrality) -> bool {
        self.first_non_integral(mode).is_none()
    }

    /// First (component, monomial) where the two tuples differ, in graded order.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, Monomial, R::Elem, R::Elem)> {
        for (i, (a, b)) in self.comps.iter().zip(&other.comps).enumerate() {
            let diff = a.sub(b);
            if let Some((m, _)) = diff.terms().first() {
                return Some((i, m.clone(), a.coeff(m), b.coeff(m)));
            }
        }
        None
    }

    pub fn total_terms(&self) -> usize {
        self.comps.iter().map(TruncatedSeries::num_terms).sum()
    }
}

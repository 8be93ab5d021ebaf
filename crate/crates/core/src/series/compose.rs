//! Substitution of series into series, and compositional inversion.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{Monomial, SeriesTuple, TruncatedSeries};
use crate::arith::CoeffRing;
use crate::error::Error;

/// Precomputed powers of the inner series, reusable across many outer series.
pub(crate) struct Substitution<'a, R: CoeffRing> {
    inner: &'a [TruncatedSeries<R>],
    orders: Vec<Option<u32>>,
    powers: Vec<Vec<TruncatedSeries<R>>>,
    cap: u32,
}

impl<'a, R: CoeffRing> Substitution<'a, R> {
    fn new(inner: &'a [TruncatedSeries<R>], outers: &[&TruncatedSeries<R>], cap: u32) -> Result<Self, Error> {
        let mut max_exp = vec![0u32; inner.len()];
        for g in outers {
            if g.ctx().num_vars() != inner.len() {
                return Err(Error::Context(format!(
                    "outer series has {} variables but {} inner series were given",
                    g.ctx().num_vars(),
                    inner.len()
                )));
            }
            for (m, _) in g.terms() {
                for (j, me) in max_exp.iter_mut().enumerate() {
                    *me = (*me).max(m.exp(j));
                }
            }
        }
        Self::with_exponents(inner, &max_exp, cap)
    }

    /// Prepares powers up to `max_exp[j]` of each inner series.
    pub(crate) fn with_exponents(inner: &'a [TruncatedSeries<R>], max_exp: &[u32], cap: u32) -> Result<Self, Error> {
        let ctx = inner[0].ctx();
        for (i, h) in inner.iter().enumerate() {
            if h.ctx() != ctx {
                return Err(Error::Context("inner components live in different contexts".into()));
            }
            if !ctx.ring().is_zero(&h.constant_term()) {
                return Err(Error::ConstantTerm(i));
            }
        }
        let cap = cap.min(ctx.max_degree());
        let orders: Vec<Option<u32>> = inner.iter().map(TruncatedSeries::order).collect();
        let powers = inner
            .par_iter()
            .enumerate()
            .map(|(j, h)| {
                let limit = match orders[j] {
                    Some(o) => max_exp[j].min(cap / o),
                    None => 0,
                };
                let mut pw = Vec::with_capacity(limit as usize + 1);
                pw.push(TruncatedSeries::constant(ctx, ctx.ring().one()));
                for e in 1..=limit {
                    let next = if e == 1 { h.truncate(cap) } else { pw[e as usize - 1].mul_capped(h, cap) };
                    pw.push(next);
                }
                pw
            })
            .collect();
        Ok(Substitution { inner, orders, powers, cap })
    }

    /// `outer(inner)`; exponents of `outer` must not exceed those prepared.
    pub(crate) fn eval(&self, outer: &TruncatedSeries<R>) -> TruncatedSeries<R> {
        let refs: Vec<&(Monomial, R::Elem)> = outer.terms().iter().collect();
        self.eval_rec(&refs, 0, self.cap)
    }

    fn eval_rec(&self, terms: &[&(Monomial, R::Elem)], j: usize, cap: u32) -> TruncatedSeries<R> {
        let ctx = self.inner[0].ctx();
        if j == self.inner.len() {
            debug_assert_eq!(terms.len(), 1);
            return TruncatedSeries::constant(ctx, terms[0].1.clone());
        }
        let mut groups: BTreeMap<u32, Vec<&(Monomial, R::Elem)>> = BTreeMap::new();
        for t in terms {
            groups.entry(t.0.exp(j)).or_default().push(t);
        }
        let mut acc = TruncatedSeries::zero(ctx);
        for (e, group) in groups {
            let low = match (e, self.orders[j]) {
                (0, _) => 0,
                (_, None) => continue,
                (e, Some(o)) => e * o,
            };
            if low > cap {
                continue;
            }
            let sub = self.eval_rec(&group, j + 1, cap - low);
            if sub.is_zero() {
                continue;
            }
            let term = if e == 0 {
                sub
            } else if sub.terms().len() == 1 && sub.terms()[0].0.is_one() {
                self.powers[j][e as usize].truncate(cap).scale(&sub.terms()[0].1)
            } else {
                self.powers[j][e as usize].mul_capped(&sub, cap)
            };
            acc = acc.add(&term);
        }
        acc
    }
}

impl<R: CoeffRing> TruncatedSeries<R> {
    /// `self(inner_1, ..., inner_m)`, exact up to the inner context's cap.
    pub fn compose(&self, inner: &[TruncatedSeries<R>]) -> Result<TruncatedSeries<R>, Error> {
        let cap = inner.first().map_or(0, |h| h.ctx().max_degree());
        self.compose_capped(inner, cap)
    }

    /// Composition keeping only total degrees `<= cap`.
    pub fn compose_capped(&self, inner: &[TruncatedSeries<R>], cap: u32) -> Result<TruncatedSeries<R>, Error> {
        if inner.is_empty() {
            return Err(Error::Context("no inner series".into()));
        }
        let sub = Substitution::new(inner, &[self], cap)?;
        Ok(sub.eval(self))
    }
}

impl<R: CoeffRing> SeriesTuple<R> {
    /// Componentwise `self(inner)`.
    pub fn compose(&self, inner: &SeriesTuple<R>) -> Result<SeriesTuple<R>, Error> {
        self.compose_capped(inner, inner.ctx().max_degree())
    }

    pub fn compose_capped(&self, inner: &SeriesTuple<R>, cap: u32) -> Result<SeriesTuple<R>, Error> {
        let outers: Vec<&TruncatedSeries<R>> = self.components().iter().collect();
        let sub = Substitution::new(inner.components(), &outers, cap)?;
        let comps: Vec<_> = outers.par_iter().map(|g| sub.eval(g)).collect();
        Ok(SeriesTuple::new(inner.ctx(), comps))
    }
}

/// Compositional inverse of `f = X + (higher terms)`.
pub fn invert_tuple<R: CoeffRing>(f: &SeriesTuple<R>) -> Result<SeriesTuple<R>, Error> {
    let ctx = f.ctx();
    let d = f.len();
    if ctx.num_vars() != d {
        return Err(Error::Context(format!("{d} components in {} variables", ctx.num_vars())));
    }
    let id = SeriesTuple::identity(ctx, d);
    if !f.is_tangent_to_identity() {
        return Err(Error::LinearPart);
    }
    let tail = f.sub(&id);
    let mut g = id.clone();
    for k in 2..=ctx.max_degree() {
        g = id.sub(&tail.compose_capped(&g, k)?);
    }
    Ok(g)
}

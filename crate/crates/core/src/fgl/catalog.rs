//! Explicit laws: additive, multiplicative, `F_{r,s}` and `F_q`.

use super::FormalGroupLaw;
use crate::arith::{CoeffRing, MonogenicRing, NumberRing, Rational, Rationals, RingKind};
use crate::error::Error;
use crate::series::{Monomial, SeriesContext, SeriesTuple, TruncatedSeries};

/// `log(1+x) = sum (-1)^{i+1} x^i / i` in a one-variable context.
pub fn log_m<R: CoeffRing>(ctx: &SeriesContext<R>, var: usize) -> TruncatedSeries<R> {
    let ring = ctx.ring();
    let n = ctx.num_vars();
    let terms = (1..=ctx.max_degree()).map(|i| {
        let sign = if i % 2 == 1 { 1 } else { -1 };
        let mut exps = vec![0; n];
        exps[var] = i;
        (Monomial::from_exps(&exps), ring.from_rational(&Rational::frac(sign, i as i64)))
    });
    TruncatedSeries::from_terms(ctx, terms)
}

/// `exp(x) - 1`, the compositional inverse of [`log_m`].
pub fn exp_minus_one<R: CoeffRing>(ctx: &SeriesContext<R>, var: usize) -> TruncatedSeries<R> {
    let ring = ctx.ring();
    let n = ctx.num_vars();
    let mut fact = Rational::one();
    let terms: Vec<_> = (1..=ctx.max_degree())
        .map(|i| {
            fact = &fact * &Rational::from_int(i as i64);
            let mut exps = vec![0; n];
            exps[var] = i;
            (Monomial::from_exps(&exps), ring.from_rational(&fact.recip()))
        })
        .collect();
    TruncatedSeries::from_terms(ctx, terms)
}

fn ctx2<R: CoeffRing>(ring: R, d: usize, degree: u32) -> Result<SeriesContext<R>, Error> {
    SeriesContext::new(ring, 2 * d, degree)
}

/// `X + Y` with logarithm `X`.
pub fn additive<R: CoeffRing>(ring: R, d: usize, degree: u32) -> Result<FormalGroupLaw<R>, Error> {
    let ctx = SeriesContext::new(ring, d, degree)?;
    FormalGroupLaw::from_logarithm_and_inverse(&SeriesTuple::identity(&ctx, d), &SeriesTuple::identity(&ctx, d))
}

/// `x + y + xy` with logarithm `log(1+x)`.
pub fn multiplicative<R: CoeffRing>(ring: R, degree: u32) -> Result<FormalGroupLaw<R>, Error> {
    multiplicative_power(ring, 1, degree)
}

/// `d` independent copies of the multiplicative law.
pub fn multiplicative_power<R: CoeffRing>(ring: R, d: usize, degree: u32) -> Result<FormalGroupLaw<R>, Error> {
    let c2 = ctx2(ring, d, degree)?;
    let law = (0..d)
        .map(|i| {
            let x = TruncatedSeries::var(&c2, i);
            let y = TruncatedSeries::var(&c2, i + d);
            x.add(&y).add(&x.mul(&y))
        })
        .collect();
    let out = FormalGroupLaw::new(SeriesTuple::new(&c2, law))?;
    let c1 = c2.with_vars(d);
    let log = SeriesTuple::new(&c1, (0..d).map(|i| log_m(&c1, i)).collect());
    let inv = SeriesTuple::new(&c1, (0..d).map(|i| exp_minus_one(&c1, i)).collect());
    let _ = out.log.set(log);
    let _ = out.log_inverse.set(inv);
    Ok(out)
}

/// `F_{r,s}(x,y) = (x + y + rxy)(1 - sxy)^{-1}` over `Q`.
pub fn f_rs(r: i64, s: i64, degree: u32) -> Result<FormalGroupLaw<Rationals>, Error> {
    let c = ctx2(Rationals, 1, degree)?;
    let x = TruncatedSeries::var(&c, 0);
    let y = TruncatedSeries::var(&c, 1);
    let xy = x.mul(&y);
    let num = x.add(&y).add(&xy.scale_rational(&Rational::from_int(r)));
    let one = TruncatedSeries::constant(&c, Rational::one());
    let den = one.sub(&xy.scale_rational(&Rational::from_int(s)));
    let law = num.mul(&den.inverse_with_constant(&Rational::one()));
    FormalGroupLaw::new(SeriesTuple::new(&c, vec![law]))
}

/// `F_q(x,y) = x + y + sqrt(q) xy` over `Z[xi]` with `sqrt(q) = r - 2 xi`.
pub fn f_q(ring: &NumberRing, degree: u32) -> Result<FormalGroupLaw<NumberRing>, Error> {
    let RingKind::Quadratic { r, .. } = *ring.kind() else {
        return Err(Error::Spec("F_q needs a quadratic ring".into()));
    };
    let sqrt_q = MonogenicRing::sub(ring, &ring.from_int(r), &ring.scale(&ring.xi(), &Rational::from_int(2)));
    let c = ctx2(ring.clone(), 1, degree)?;
    let x = TruncatedSeries::var(&c, 0);
    let y = TruncatedSeries::var(&c, 1);
    let law = x.add(&y).add(&x.mul(&y).scale(&sqrt_q));
    FormalGroupLaw::new(SeriesTuple::new(&c, vec![law]))
}

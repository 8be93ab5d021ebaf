//! JSON form of series: graded-sorted records `{exponents, coefficient}`.

use serde_json::{json, Value};

use super::{Monomial, SeriesContext, SeriesTuple, TruncatedSeries};
use crate::arith::CoeffRing;
use crate::error::ParseError;

pub fn series_to_json<R: CoeffRing>(s: &TruncatedSeries<R>) -> Value {
    let ring = s.ring();
    Value::Array(
        s.terms().iter().map(|(m, c)| json!({ "exponents": m.exps(), "coefficient": ring.elem_to_json(c) })).collect(),
    )
}

pub fn series_from_json<R: CoeffRing>(ctx: &SeriesContext<R>, v: &Value) -> Result<TruncatedSeries<R>, ParseError> {
    let records = v.as_array().ok_or_else(|| ParseError::Json("series must be an array".into()))?;
    let mut terms = Vec::with_capacity(records.len());
    for r in records {
        let exps: Vec<u32> = r
            .get("exponents")
            .and_then(Value::as_array)
            .ok_or_else(|| ParseError::Json("record without exponents".into()))?
            .iter()
            .map(|e| e.as_u64().map(|e| e as u32).ok_or_else(|| ParseError::Json(format!("bad exponent {e}"))))
            .collect::<Result<_, _>>()?;
        if exps.len() != ctx.num_vars() {
            return Err(ParseError::Shape(format!("{} exponents, expected {}", exps.len(), ctx.num_vars())));
        }
        if exps.iter().sum::<u32>() > ctx.max_degree() {
            return Err(ParseError::Shape(format!("monomial {exps:?} exceeds the degree cap")));
        }
        let c = ctx.ring().elem_from_json(
            r.get("coefficient").ok_or_else(|| ParseError::Json("record without coefficient".into()))?,
        )?;
        terms.push((Monomial::from_exps(&exps), c));
    }
    Ok(TruncatedSeries::from_terms(ctx, terms))
}

pub fn tuple_to_json<R: CoeffRing>(t: &SeriesTuple<R>) -> Value {
    Value::Array(t.components().iter().map(series_to_json).collect())
}

pub fn tuple_from_json<R: CoeffRing>(ctx: &SeriesContext<R>, v: &Value) -> Result<SeriesTuple<R>, ParseError> {
    let comps = v
        .as_array()
        .ok_or_else(|| ParseError::Json("tuple must be an array".into()))?
        .iter()
        .map(|c| series_from_json(ctx, c))
        .collect::<Result<_, _>>()?;
    Ok(SeriesTuple::new(ctx, comps))
}

//! The coefficient-ring abstraction used by the series engine.

use std::fmt::Debug;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{CyclotomicNumber, MonogenicRing, Rational, RingKind};
use crate::error::ParseError;

/// Which coefficients count as integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrality {
    /// Denominator 1 in every coordinate (`Z` or `Z[xi]`).
    Global,
    /// Denominators prime to `p` (`Z_(p)` or `Z_(p)[xi]`).
    Local(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingDescriptor {
    Rationals,
    Cyclotomic { q: u64 },
    Quadratic { r: i64, s: i64 },
}

/// An exact commutative ring of characteristic 0 containing `Q`.
#[allow(clippy::wrong_self_convention)]
pub trait CoeffRing: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem);
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `acc += a * b`.
    fn add_mul(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem);
    fn from_rational(&self, c: &Rational) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &Rational) -> Self::Elem;
    fn is_integral(&self, a: &Self::Elem, mode: Integrality) -> bool;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem, ParseError>;
    fn descriptor(&self) -> RingDescriptor;

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&Rational::from_int(n))
    }
}

/// The field `Q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn add_assign(&self, a: &mut Rational, b: &Rational) {
        *a += b;
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn add_mul(&self, acc: &mut Rational, a: &Rational, b: &Rational) {
        acc.add_mul(a, b);
    }
    fn from_rational(&self, c: &Rational) -> Rational {
        c.clone()
    }
    fn scale(&self, a: &Rational, c: &Rational) -> Rational {
        a * c
    }
    fn is_integral(&self, a: &Rational, mode: Integrality) -> bool {
        match mode {
            Integrality::Global => a.is_integer(),
            Integrality::Local(p) => a.is_p_integral(p),
        }
    }
    fn elem_to_json(&self, a: &Rational) -> Value {
        Value::String(a.to_string())
    }
    fn elem_from_json(&self, v: &Value) -> Result<Rational, ParseError> {
        v.as_str().ok_or_else(|| ParseError::Rational(v.to_string()))?.parse()
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Rationals
    }
}

/// A shared handle on a monogenic ring, usable as a coefficient ring.
pub type NumberRing = Arc<MonogenicRing>;

impl CoeffRing for NumberRing {
    type Elem = CyclotomicNumber;

    fn zero(&self) -> CyclotomicNumber {
        MonogenicRing::zero(self)
    }
    fn one(&self) -> CyclotomicNumber {
        MonogenicRing::one(self)
    }
    fn is_zero(&self, a: &CyclotomicNumber) -> bool {
        MonogenicRing::is_zero(self, a)
    }
    fn add(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        MonogenicRing::add(self, a, b)
    }
    fn add_assign(&self, a: &mut CyclotomicNumber, b: &CyclotomicNumber) {
        for (x, y) in a.coords.iter_mut().zip(&b.coords) {
            *x += y;
        }
    }
    fn sub(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        MonogenicRing::sub(self, a, b)
    }
    fn neg(&self, a: &CyclotomicNumber) -> CyclotomicNumber {
        MonogenicRing::neg(self, a)
    }
    fn mul(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        MonogenicRing::mul(self, a, b)
    }
    fn add_mul(&self, acc: &mut CyclotomicNumber, a: &CyclotomicNumber, b: &CyclotomicNumber) {
        let p = MonogenicRing::mul(self, a, b);
        self.add_assign(acc, &p);
    }
    fn from_rational(&self, c: &Rational) -> CyclotomicNumber {
        MonogenicRing::from_rational(self, c)
    }
    fn scale(&self, a: &CyclotomicNumber, c: &Rational) -> CyclotomicNumber {
        MonogenicRing::scale(self, a, c)
    }
    fn is_integral(&self, a: &CyclotomicNumber, mode: Integrality) -> bool {
        match mode {
            Integrality::Global => MonogenicRing::is_integral(self, a),
            Integrality::Local(p) => self.is_p_integral(a, p),
        }
    }
    fn elem_to_json(&self, a: &CyclotomicNumber) -> Value {
        Value::Array(a.coords.iter().map(|c| Value::String(c.to_string())).collect())
    }
    fn elem_from_json(&self, v: &Value) -> Result<CyclotomicNumber, ParseError> {
        let arr = v.as_array().ok_or_else(|| ParseError::Rational(v.to_string()))?;
        if arr.len() != self.degree() {
            return Err(ParseError::Shape(format!("expected {} coordinates, found {}", self.degree(), arr.len())));
        }
        let coords = arr.iter().map(|c| Rationals.elem_from_json(c)).collect::<Result<_, _>>()?;
        Ok(CyclotomicNumber { coords })
    }
    fn descriptor(&self) -> RingDescriptor {
        match *self.kind() {
            RingKind::Cyclotomic { q } => RingDescriptor::Cyclotomic { q },
            RingKind::Quadratic { r, s } => RingDescriptor::Quadratic { r, s },
        }
    }
}

//! Honda operators `u = sum_i C_i D^i` acting on logarithms, types, and the laws `F_Xi`.
//!
//! `D` acts on series by `x_i -> x_i^p` together with a coefficient map `sigma`. The
//! coefficient matrices `C_i` are rational, so `sigma` fixes them and `D a = sigma(a) D`
//! reduces to `D a = a D`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::nt::{factorize, is_prime, primes_up_to};
use crate::arith::{CoeffRing, Integrality, Rational, Rationals};
use crate::error::Error;
use crate::fgl::{witness, FormalGroupLaw, IntegralityWitness};
use crate::lattice::{IntMatrix, RatMatrix};
use crate::series::{Monomial, SeriesContext, SeriesTuple, TruncatedSeries};

/// A truncated element `sum_i C_i D^i` of `M_{r,c}(E_p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrobeniusPolynomial {
    p: u64,
    coeffs: Vec<RatMatrix>,
}

/// Result of a type check: the first coefficient of `u lambda` not divisible by `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeCheck {
    pub p: u64,
    pub degree: u32,
    pub witness: Option<IntegralityWitness>,
}

impl TypeCheck {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

fn rows_of(m: &RatMatrix) -> Vec<Vec<Rational>> {
    m.to_rows()
}

impl FrobeniusPolynomial {
    pub fn new(p: u64, coeffs: Vec<RatMatrix>) -> Result<Self, Error> {
        if !is_prime(p) {
            return Err(Error::Spec(format!("{p} is not prime")));
        }
        let Some(first) = coeffs.first() else {
            return Err(Error::Spec("empty Frobenius polynomial".into()));
        };
        let shape = (first.rows(), first.cols());
        if coeffs.iter().any(|c| (c.rows(), c.cols()) != shape) {
            return Err(Error::Spec("coefficient matrices differ in shape".into()));
        }
        Ok(Self::trimmed(p, coeffs))
    }

    fn trimmed(p: u64, mut coeffs: Vec<RatMatrix>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(RatMatrix::is_zero) {
            coeffs.pop();
        }
        FrobeniusPolynomial { p, coeffs }
    }

    /// `p I_d - sum_{i>=1} tail[i-1] D^i`.
    pub fn from_type_tail(p: u64, d: usize, tail: &[IntMatrix]) -> Result<Self, Error> {
        let mut coeffs = vec![RatMatrix::scalar(d, Rational::from_int(p as i64))];
        coeffs.extend(tail.iter().map(|c| c.to_rational().neg()));
        Self::new(p, coeffs)
    }

    /// `p I_d - c D`.
    pub fn linear_type(p: u64, c: &IntMatrix) -> Result<Self, Error> {
        Self::from_type_tail(p, c.rows(), std::slice::from_ref(c))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.coeffs[0].cols()
    }

    pub fn coeffs(&self) -> &[RatMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatMatrix {
        self.coeffs.get(i).cloned().unwrap_or_else(|| RatMatrix::zeros(self.rows(), self.cols()))
    }

    /// Whether `C_0 = p I`.
    pub fn is_type_shape(&self) -> bool {
        self.rows() == self.cols()
            && self.coeffs[0] == RatMatrix::scalar(self.rows(), Rational::from_int(self.p as i64))
    }

    /// `A u B` coefficient-wise.
    pub fn sandwich(&self, a: &RatMatrix, b: &RatMatrix) -> Self {
        Self::trimmed(self.p, self.coeffs.iter().map(|c| a.mul(c).mul(b)).collect())
    }

    /// The upper-left `e x e` corner of every coefficient.
    pub fn upper_left(&self, e: usize) -> Self {
        Self::trimmed(self.p, self.coeffs.iter().map(|c| c.submatrix(0, 0, e, e)).collect())
    }

    /// `(u lambda)(X) = sum_i C_i sigma^i(lambda)(X^{p^i})`.
    pub fn apply<R: CoeffRing>(&self, lambda: &SeriesTuple<R>, sigma: &dyn Fn(&R::Elem) -> R::Elem) -> SeriesTuple<R> {
        assert_eq!(lambda.len(), self.cols(), "operator and series tuple differ in size");
        let ctx = lambda.ctx();
        let p = self.p as u32;
        let mut acc = SeriesTuple::zero(ctx, self.rows());
        let mut shifted = lambda.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                shifted = shifted.frobenius_substitute(p, sigma);
                if shifted.components().iter().all(TruncatedSeries::is_zero) {
                    break;
                }
            }
            if !c.is_zero() {
                acc = acc.add(&shifted.left_mul_rational(&rows_of(c)));
            }
        }
        acc
    }

    /// `lambda` is of type `u` up to `degree` when every coefficient of `u lambda` is in `p Z_(p)`.
    pub fn is_type<R: CoeffRing>(
        &self,
        lambda: &SeriesTuple<R>,
        degree: u32,
        sigma: &dyn Fn(&R::Elem) -> R::Elem,
    ) -> TypeCheck {
        let degree = degree.min(lambda.ctx().max_degree());
        let image = self.apply(lambda, sigma).truncate(degree);
        let scaled = image.map(|s| s.scale_rational(&Rational::frac(1, self.p as i64)));
        let witness =
            scaled.first_non_integral(Integrality::Local(self.p)).map(|(component, m, _)| IntegralityWitness {
                component,
                monomial: m.exps(),
                coefficient: format!("{:?}", image.component(component).coeff(&m)),
            });
        TypeCheck { p: self.p, degree, witness }
    }

    /// The logarithm `(u^{-1} p)(X)`: the solution of
    /// `lambda = X - (1/p) sum_{i>=1} C_i sigma^i(lambda)(X^{p^i})`.
    pub fn lambda_from_type<R: CoeffRing>(
        &self,
        ctx: &SeriesContext<R>,
        sigma: &dyn Fn(&R::Elem) -> R::Elem,
    ) -> Result<SeriesTuple<R>, Error> {
        if !self.is_type_shape() {
            return Err(Error::Spec("a type must satisfy u = pI mod D".into()));
        }
        let d = self.rows();
        let x = SeriesTuple::identity(ctx, d);
        let tail = FrobeniusPolynomial {
            p: self.p,
            coeffs: std::iter::once(RatMatrix::zeros(d, d))
                .chain(self.coeffs[1..].iter().map(|c| c.scale(&Rational::frac(-1, self.p as i64))))
                .collect(),
        };
        let mut lambda = x.clone();
        let mut reach = 1u64;
        while reach <= ctx.max_degree() as u64 {
            lambda = x.add(&tail.apply(&lambda, sigma));
            reach *= self.p;
        }
        Ok(lambda)
    }
}

impl fmt::Display for FrobeniusPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}")?;
            match i {
                0 => {}
                1 => write!(f, "D")?,
                _ => write!(f, "D^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Where a map `Xi` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Torus,
    User,
}

/// A map from primes to pairwise commuting integer matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct XiMap {
    d: usize,
    entries: BTreeMap<u64, IntMatrix>,
    provenance: Provenance,
}

impl XiMap {
    pub fn new(d: usize, entries: BTreeMap<u64, IntMatrix>, provenance: Provenance) -> Result<Self, Error> {
        for (&p, m) in &entries {
            if !is_prime(p) {
                return Err(Error::Spec(format!("Xi is indexed by {p}, which is not prime")));
            }
            if m.rows() != d || m.cols() != d {
                return Err(Error::Spec(format!("Xi({p}) is not {d}x{d}")));
            }
        }
        let list: Vec<_> = entries.iter().collect();
        for (i, (p, a)) in list.iter().enumerate() {
            for (q, b) in &list[i + 1..] {
                if a.mul(b) != b.mul(a) {
                    return Err(Error::Spec(format!("Xi({p}) and Xi({q}) do not commute")));
                }
            }
        }
        Ok(XiMap { d, entries, provenance })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn entries(&self) -> &BTreeMap<u64, IntMatrix> {
        &self.entries
    }

    pub fn get(&self, p: u64) -> Option<&IntMatrix> {
        self.entries.get(&p)
    }

    /// Whether every prime up to `bound` has an entry.
    pub fn covers(&self, bound: u64) -> bool {
        primes_up_to(bound).iter().all(|p| self.entries.contains_key(p))
    }

    /// `A_m = prod Xi(p_i)^{t_i}` for `m = prod p_i^{t_i}`.
    pub fn a_m(&self, m: u64) -> Result<IntMatrix, Error> {
        let mut acc = IntMatrix::identity(self.d);
        for (p, t) in factorize(m) {
            let xi = self.entries.get(&p).ok_or_else(|| Error::Spec(format!("Xi({p}) is missing")))?;
            acc = acc.mul(&xi.pow(t));
        }
        Ok(acc)
    }

    /// `p I - Xi(p) D_p`.
    pub fn type_at(&self, p: u64) -> Result<FrobeniusPolynomial, Error> {
        let xi = self.entries.get(&p).ok_or_else(|| Error::Spec(format!("Xi({p}) is missing")))?;
        FrobeniusPolynomial::linear_type(p, xi)
    }
}

/// `lambda_Xi = sum_m A_m X^m / m` truncated at the context's cap.
pub fn xi_lambda(xi: &XiMap, ctx: &SeriesContext<Rationals>) -> Result<SeriesTuple<Rationals>, Error> {
    let d = xi.dim();
    if ctx.num_vars() != d {
        return Err(Error::Context(format!("lambda_Xi needs {d} variables")));
    }
    let n = ctx.max_degree();
    if !xi.covers(n as u64) {
        return Err(Error::Spec(format!("Xi must be defined at every prime up to {n}")));
    }
    let mut comps: Vec<Vec<(Vec<u32>, Rational)>> = vec![Vec::new(); d];
    for m in 1..=n {
        let a = xi.a_m(m as u64)?;
        for (l, comp) in comps.iter_mut().enumerate() {
            for k in 0..d {
                let c = &a[(l, k)];
                if *c != BigInt::from(0) {
                    let mut exps = vec![0; d];
                    exps[k] = m;
                    comp.push((exps, Rational::new(c.clone(), BigInt::from(m))));
                }
            }
        }
    }
    let comps = comps
        .into_iter()
        .map(|terms| TruncatedSeries::from_terms(ctx, terms.into_iter().map(|(e, c)| (Monomial::from_exps(&e), c))))
        .collect();
    Ok(SeriesTuple::new(ctx, comps))
}

/// `F_Xi = lambda_Xi^{-1}(lambda_Xi(X) + lambda_Xi(Y))`, with the first non-integer
/// coefficient if there is one.
pub fn xi_fgl(xi: &XiMap, degree: u32) -> Result<(FormalGroupLaw<Rationals>, Option<IntegralityWitness>), Error> {
    let ctx = SeriesContext::new(Rationals, xi.dim(), degree)?;
    let lambda = xi_lambda(xi, &ctx)?;
    let law = FormalGroupLaw::from_logarithm(&lambda)?;
    let w = witness(law.law(), Integrality::Global);
    Ok((law, w))
}

/// Solution of `u' D = w u` in `M(E_p)`, or the first step where `w_j` leaves `Z_(p)`.
#[derive(Clone, Debug, PartialEq)]
pub enum HomCriterion {
    Witness(FrobeniusPolynomial),
    Failure { step: usize, value: RatMatrix },
}

impl HomCriterion {
    pub fn succeeded(&self) -> bool {
        matches!(self, HomCriterion::Witness(_))
    }
}

/// Default `D`-degree bound: one past the largest power of `p` at or below `degree`.
pub fn delta_degree_bound(p: u64, degree: u32) -> usize {
    let mut k = 0;
    let mut pk = p;
    while pk <= degree as u64 {
        k += 1;
        pk *= p;
    }
    k + 1
}

/// Solves `u' D = w u` for `w = sum_j w_j D^j`, `j < bound`, recursively:
/// `p w_j = C'_j D - sum_{i>=1} w_{j-i} C_i`. Succeeds iff every `w_j` is `p`-integral.
pub fn hom_criterion_witness(
    u_prime: &FrobeniusPolynomial,
    d: &RatMatrix,
    u: &FrobeniusPolynomial,
    bound: usize,
) -> Result<HomCriterion, Error> {
    if u.p() != u_prime.p() {
        return Err(Error::Spec("types at different primes".into()));
    }
    if !u.is_type_shape() || !u_prime.is_type_shape() {
        return Err(Error::Spec("a type must satisfy u = pI mod D".into()));
    }
    if d.rows() != u_prime.rows() || d.cols() != u.rows() {
        return Err(Error::Spec("D has the wrong shape".into()));
    }
    let p = u.p();
    let inv_p = Rational::frac(1, p as i64);
    let mut w: Vec<RatMatrix> = Vec::with_capacity(bound);
    for j in 0..bound {
        let mut rhs = u_prime.coeff(j).mul(d);
        for i in 1..=j {
            rhs = rhs.sub(&w[j - i].mul(&u.coeff(i)));
        }
        let wj = rhs.scale(&inv_p);
        if wj.to_rows().iter().flatten().any(|c| !c.is_p_integral(p)) {
            return Ok(HomCriterion::Failure { step: j, value: wj });
        }
        w.push(wj);
    }
    Ok(HomCriterion::Witness(FrobeniusPolynomial::new(p, w)?))
}

/// Both directions of Honda's criterion for `lambda'^{-1} o D lambda` to be an isomorphism:
/// `u D = w u'` and `u' D^{-1} = w' u`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsoCriterion {
    pub forward: HomCriterion,
    pub backward: Option<HomCriterion>,
}

impl IsoCriterion {
    pub fn succeeded(&self) -> bool {
        self.forward.succeeded() && self.backward.as_ref().is_some_and(HomCriterion::succeeded)
    }
}

pub fn iso_criterion(
    u: &FrobeniusPolynomial,
    d: &RatMatrix,
    u_prime: &FrobeniusPolynomial,
    bound: usize,
) -> Result<IsoCriterion, Error> {
    let forward = hom_criterion_witness(u, d, u_prime, bound)?;
    let backward = match d.inverse() {
        Some(inv) => Some(hom_criterion_witness(u_prime, &inv, u, bound)?),
        None => None,
    };
    Ok(IsoCriterion { forward, backward })
}

/// Identity coefficient map, the Frobenius of `Q_p` on rational coefficients.
pub fn trivial_sigma(c: &Rational) -> Rational {
    c.clone()
}

#[cfg(test)]
mod tests;

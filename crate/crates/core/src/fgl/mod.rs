//! Formal group laws, their logarithms and homomorphisms.
//!
//! A `d`-dimensional law is a tuple of `d` series in `2d` variables, `X` first and then
//! `Y`. Logarithms live in the `d`-variable context of the same ring and degree cap.

mod catalog;

use std::fmt;
use std::sync::OnceLock;

use crate::arith::{CoeffRing, Integrality, Rational};
use crate::error::Error;
use crate::series::{invert_tuple, Monomial, SeriesContext, SeriesTuple, Substitution, TruncatedSeries};

pub use catalog::{additive, exp_minus_one, f_q, f_rs, log_m, multiplicative, multiplicative_power};

#[derive(Clone)]
pub struct FormalGroupLaw<R: CoeffRing> {
    dim: usize,
    law: SeriesTuple<R>,
    log: OnceLock<SeriesTuple<R>>,
    log_inverse: OnceLock<SeriesTuple<R>>,
}

impl<R: CoeffRing> fmt::Debug for FormalGroupLaw<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormalGroupLaw").field("dim", &self.dim).field("law", &self.law).finish()
    }
}

impl<R: CoeffRing> PartialEq for FormalGroupLaw<R> {
    fn eq(&self, other: &Self) -> bool {
        self.law == other.law
    }
}

/// Which identity a failure refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Identity,
    Commutativity,
    Associativity,
    /// `lambda(F(X,Y)) = lambda(X) + lambda(Y)`.
    Logarithm,
    /// `f(F(X,Y)) = F'(f(X), f(Y))`.
    Homomorphism,
    /// `g o f = f` for a group element `g`.
    Equivariance,
}

/// The first coefficient where the two sides of an axiom disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub component: usize,
    pub monomial: Vec<u32>,
    pub degree: u32,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} fails in component {} at monomial {:?} (degree {}): {} vs {}",
            self.axiom, self.component, self.monomial, self.degree, self.lhs, self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub degree: u32,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failure(&self, axiom: Axiom) -> Option<&AxiomFailure> {
        self.failures.iter().find(|f| f.axiom == axiom)
    }
}

impl<R: CoeffRing> FormalGroupLaw<R> {
    /// Wraps a tuple of `d` series in `2d` variables; requires `F = X + Y mod deg 2`.
    pub fn new(law: SeriesTuple<R>) -> Result<Self, Error> {
        let d = law.len();
        if law.ctx().num_vars() != 2 * d {
            return Err(Error::Context(format!("{d} components in {} variables", law.ctx().num_vars())));
        }
        let ring = law.ring();
        let lin = law.linear_coefficient();
        for (i, c) in law.components().iter().enumerate() {
            let ok_lin = (0..2 * d).all(|j| {
                let want = j == i || j == i + d;
                if want {
                    lin[i][j] == ring.one()
                } else {
                    ring.is_zero(&lin[i][j])
                }
            });
            if !ring.is_zero(&c.constant_term()) || !ok_lin {
                return Err(Error::Axioms(format!("component {i} is not X+Y modulo degree 2")));
            }
        }
        Ok(FormalGroupLaw { dim: d, law, log: OnceLock::new(), log_inverse: OnceLock::new() })
    }

    /// `F(X,Y) = lambda^{-1}(lambda(X) + lambda(Y))`.
    pub fn from_logarithm(log: &SeriesTuple<R>) -> Result<Self, Error> {
        let inverse = invert_tuple(log)?;
        Self::from_logarithm_and_inverse(log, &inverse)
    }

    /// As [`Self::from_logarithm`], with the compositional inverse supplied by the caller.
    pub fn from_logarithm_and_inverse(log: &SeriesTuple<R>, inverse: &SeriesTuple<R>) -> Result<Self, Error> {
        let d = log.len();
        if !log.is_tangent_to_identity() {
            return Err(Error::LinearPart);
        }
        let ctx2 = log.ctx().with_vars(2 * d);
        let x: Vec<usize> = (0..d).collect();
        let y: Vec<usize> = (d..2 * d).collect();
        let sum = log.embed(&ctx2, &x).add(&log.embed(&ctx2, &y));
        let law = inverse.compose(&sum)?;
        let out = Self::new(law)?;
        let _ = out.log.set(log.clone());
        let _ = out.log_inverse.set(inverse.clone());
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// A law together with a logarithm and its inverse computed independently; see
    /// [`Self::check_logarithm`] to verify the pairing.
    pub fn with_logarithms(law: SeriesTuple<R>, log: SeriesTuple<R>, inverse: SeriesTuple<R>) -> Result<Self, Error> {
        if !log.is_tangent_to_identity() || !inverse.is_tangent_to_identity() {
            return Err(Error::LinearPart);
        }
        let out = Self::new(law)?;
        if log.len() != out.dim || inverse.len() != out.dim {
            return Err(Error::Context("logarithm and law differ in dimension".into()));
        }
        let _ = out.log.set(log);
        let _ = out.log_inverse.set(inverse);
        Ok(out)
    }

    /// First coefficient up to `degree` where `lambda(F(X,Y))` and `lambda(X) + lambda(Y)`
    /// differ.
    pub fn check_logarithm(&self, degree: u32) -> Result<Option<AxiomFailure>, Error> {
        let d = self.dim;
        let degree = degree.min(self.max_degree());
        let log = self.logarithm()?.recap(degree);
        let law = self.law.recap(degree);
        let ctx2 = law.ctx().clone();
        let lhs = log.compose(&law)?;
        let rhs = log.embed(&ctx2, &(0..d).collect::<Vec<_>>()).add(&log.embed(&ctx2, &(d..2 * d).collect::<Vec<_>>()));
        Ok(first_failure(Axiom::Logarithm, &lhs, &rhs))
    }

    pub fn law(&self) -> &SeriesTuple<R> {
        &self.law
    }

    pub fn ring(&self) -> &R {
        self.law.ring()
    }

    pub fn max_degree(&self) -> u32 {
        self.law.ctx().max_degree()
    }

    /// The `d`-variable context logarithms and homomorphisms of this law live in.
    pub fn point_ctx(&self) -> SeriesContext<R> {
        self.law.ctx().with_vars(self.dim)
    }

    /// `F(a, b)` for tuples `a`, `b` in a common context.
    pub fn apply(&self, a: &SeriesTuple<R>, b: &SeriesTuple<R>) -> Result<SeriesTuple<R>, Error> {
        self.law.compose(&a.concat(b))
    }

    /// Checks `F(X,0) = X`, commutativity and associativity up to `degree`.
    pub fn check_axioms(&self, degree: u32) -> AxiomReport {
        let d = self.dim;
        let degree = degree.min(self.max_degree());
        let law = self.law.recap(degree);
        let ctx2 = law.ctx().clone();
        let mut failures = Vec::new();

        let ctx1 = ctx2.with_vars(d);
        let at_zero = law.set_vars_zero(&(d..2 * d).collect::<Vec<_>>());
        if let Some(f) = first_failure(Axiom::Identity, &at_zero, &SeriesTuple::identity(&ctx1, d)) {
            failures.push(f);
        }

        let swap: Vec<usize> = (d..2 * d).chain(0..d).collect();
        if let Some(f) = first_failure(Axiom::Commutativity, &law, &law.embed(&ctx2, &swap)) {
            failures.push(f);
        }

        let ctx3 = ctx2.with_vars(3 * d);
        let xy = law.embed(&ctx3, &(0..2 * d).collect::<Vec<_>>());
        let yz = law.embed(&ctx3, &(d..3 * d).collect::<Vec<_>>());
        let x = SeriesTuple::variables(&ctx3, 0, d);
        let z = SeriesTuple::variables(&ctx3, 2 * d, d);
        let lhs = law.compose(&x.concat(&yz)).expect("shapes agree");
        let rhs = law.compose(&xy.concat(&z)).expect("shapes agree");
        if let Some(f) = first_failure(Axiom::Associativity, &lhs, &rhs) {
            failures.push(f);
        }
        AxiomReport { degree, failures }
    }

    /// The logarithm, computed on first use by the triangular solve of
    /// `lambda(F(X,Y)) = lambda(X) + lambda(Y)` one total degree at a time.
    pub fn logarithm(&self) -> Result<&SeriesTuple<R>, Error> {
        if let Some(l) = self.log.get() {
            return Ok(l);
        }
        let l = solve_logarithm(self)?;
        Ok(self.log.get_or_init(|| l))
    }

    pub fn logarithm_inverse(&self) -> Result<&SeriesTuple<R>, Error> {
        if let Some(l) = self.log_inverse.get() {
            return Ok(l);
        }
        let inv = invert_tuple(self.logarithm()?)?;
        Ok(self.log_inverse.get_or_init(|| inv))
    }

    /// Componentwise direct sum on disjoint variables.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, Error> {
        let (d1, d2) = (self.dim, other.dim);
        let d = d1 + d2;
        let ctx = self.law.ctx().with_vars(2 * d);
        // self: X-block 0..d1, Y-block d..d+d1; other: X-block d1..d, Y-block d+d1..2d.
        let map1: Vec<usize> = (0..d1).chain(d..d + d1).collect();
        let map2: Vec<usize> = (d1..d).chain(d + d1..2 * d).collect();
        let law = self.law.embed(&ctx, &map1).concat(&other.law.embed(&ctx, &map2));
        let out = Self::new(law)?;
        if let (Some(a), Some(b)) = (self.log.get(), other.log.get()) {
            let pctx = ctx.with_vars(d);
            let l = a.embed(&pctx, &(0..d1).collect::<Vec<_>>()).concat(&b.embed(&pctx, &(d1..d).collect::<Vec<_>>()));
            let _ = out.log.set(l);
        }
        Ok(out)
    }

    /// Same law with a smaller degree cap.
    pub fn recap(&self, degree: u32) -> Self {
        let out = Self::new(self.law.recap(degree)).expect("truncation keeps the linear part");
        if let Some(l) = self.log.get() {
            let _ = out.log.set(l.recap(degree));
        }
        if let Some(l) = self.log_inverse.get() {
            let _ = out.log_inverse.set(l.recap(degree));
        }
        out
    }
}

/// First coefficient where `lhs` and `rhs` differ, tagged with `axiom`.
pub fn first_failure<R: CoeffRing>(axiom: Axiom, lhs: &SeriesTuple<R>, rhs: &SeriesTuple<R>) -> Option<AxiomFailure> {
    lhs.first_difference(rhs).map(|(component, m, a, b)| AxiomFailure {
        axiom,
        component,
        monomial: m.exps(),
        degree: m.degree(),
        lhs: format!("{a:?}"),
        rhs: format!("{b:?}"),
    })
}

fn solve_logarithm<R: CoeffRing>(law: &FormalGroupLaw<R>) -> Result<SeriesTuple<R>, Error> {
    let d = law.dim;
    let n = law.max_degree();
    let ring = law.ring().clone();
    let ctx2 = law.law.ctx().clone();
    let ctx1 = ctx2.with_vars(d);
    let sum_xy: Vec<TruncatedSeries<R>> =
        (0..d).map(|i| TruncatedSeries::var(&ctx2, i).add(&TruncatedSeries::var(&ctx2, i + d))).collect();
    let via_law = Substitution::with_exponents(law.law.components(), &vec![n; d], n)?;
    let via_sum = Substitution::with_exponents(&sum_xy, &vec![n; d], n)?;
    let x_map: Vec<usize> = (0..d).collect();
    let y_map: Vec<usize> = (d..2 * d).collect();

    let mut log: Vec<TruncatedSeries<R>> = (0..d).map(|i| TruncatedSeries::var(&ctx1, i)).collect();
    // acc_l = lambda_{<k}(F(X,Y)) - lambda_{<k}(X) - lambda_{<k}(Y), exact through degree n.
    let mut acc: Vec<TruncatedSeries<R>> = law.law.components().iter().zip(&sum_xy).map(|(f, s)| f.sub(s)).collect();
    for k in 2..=n {
        for l in 0..d {
            let residual = acc[l].homogeneous_part(k);
            // Coefficient of X^{m - e_j} Y^{e_j} in (X+Y)^m is m_j.
            let mut terms = Vec::new();
            for (mono, c) in residual.terms() {
                let Some(j) = (d..2 * d).find(|&j| mono.exp(j) == 1) else { continue };
                if (d..2 * d).any(|i| i != j && mono.exp(i) > 0) {
                    continue;
                }
                let mut exps: Vec<u32> = (0..d).map(|i| mono.exp(i)).collect();
                exps[j - d] += 1;
                // Only the first such j is used; the consistency check below covers the rest.
                if (0..j - d).any(|i| exps[i] > 0) {
                    continue;
                }
                let mj = exps[j - d] as i64;
                terms.push((Monomial::from_exps(&exps), ring.scale(c, &Rational::frac(-1, mj))));
            }
            let part = TruncatedSeries::from_terms(&ctx1, terms);
            let correction = via_sum.eval(&part).sub(&part.embed(&ctx2, &x_map)).sub(&part.embed(&ctx2, &y_map));
            let check = residual.add(&correction.homogeneous_part(k));
            if let Some((m, _)) = check.terms().first() {
                return Err(Error::Axioms(format!(
                    "logarithm equation inconsistent in component {l} at monomial {m:?} (degree {k})"
                )));
            }
            acc[l] = acc[l].add(&via_law.eval(&part)).sub(&part.embed(&ctx2, &x_map)).sub(&part.embed(&ctx2, &y_map));
            log[l] = log[l].add(&part);
        }
    }
    Ok(SeriesTuple::new(&ctx1, log))
}

/// A homomorphism `f: F -> F'` given by `d'` series in `d` variables.
#[derive(Clone, Debug)]
pub struct FglHom<R: CoeffRing> {
    pub source: FormalGroupLaw<R>,
    pub target: FormalGroupLaw<R>,
    pub map: SeriesTuple<R>,
}

/// A coefficient that failed an integrality test.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralityWitness {
    pub component: usize,
    pub monomial: Vec<u32>,
    pub coefficient: String,
}

impl fmt::Display for IntegralityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "component {} monomial {:?} coefficient {}", self.component, self.monomial, self.coefficient)
    }
}

/// The outcome of building `lambda'^{-1}(D lambda)`.
#[derive(Clone, Debug)]
pub struct HomOutcome<R: CoeffRing> {
    pub hom: FglHom<R>,
    pub witness: Option<IntegralityWitness>,
}

impl<R: CoeffRing> HomOutcome<R> {
    pub fn integral(&self) -> bool {
        self.witness.is_none()
    }
}

impl<R: CoeffRing> FglHom<R> {
    pub fn linear_coefficient(&self) -> Vec<Vec<R::Elem>> {
        self.map.linear_coefficient()
    }

    /// First coefficient where `f(F(X,Y))` and `F'(f(X), f(Y))` differ.
    pub fn hom_defect(&self) -> Option<AxiomFailure> {
        hom_defect(&self.map, &self.source, &self.target)
    }

    pub fn integrality_witness(&self, mode: Integrality) -> Option<IntegralityWitness> {
        witness(&self.map, mode)
    }
}

pub fn witness<R: CoeffRing>(t: &SeriesTuple<R>, mode: Integrality) -> Option<IntegralityWitness> {
    t.first_non_integral(mode).map(|(component, m, c)| IntegralityWitness {
        component,
        monomial: m.exps(),
        coefficient: format!("{c:?}"),
    })
}

/// First coefficient where `map(F(X,Y))` and `F'(map(X), map(Y))` differ.
pub fn hom_defect<R: CoeffRing>(
    map: &SeriesTuple<R>,
    source: &FormalGroupLaw<R>,
    target: &FormalGroupLaw<R>,
) -> Option<AxiomFailure> {
    let d = source.dim;
    let ctx2 = source.law.ctx().clone();
    let lhs = map.compose(&source.law).expect("shapes agree");
    let fx = map.embed(&ctx2, &(0..d).collect::<Vec<_>>());
    let fy = map.embed(&ctx2, &(d..2 * d).collect::<Vec<_>>());
    let rhs = target.apply(&fx, &fy).expect("shapes agree");
    first_failure(Axiom::Homomorphism, &lhs, &rhs)
}

/// `f = lambda'^{-1} o (D lambda)` with an integrality verdict under `mode`.
pub fn hom_from_linear<R: CoeffRing>(
    d: &[Vec<R::Elem>],
    source: &FormalGroupLaw<R>,
    target: &FormalGroupLaw<R>,
    mode: Integrality,
) -> Result<HomOutcome<R>, Error> {
    if d.len() != target.dim || d.iter().any(|row| row.len() != source.dim) {
        return Err(Error::Context("linear coefficient has the wrong shape".into()));
    }
    let inner = source.logarithm()?.left_mul(d);
    let map = target.logarithm_inverse()?.compose(&inner)?;
    let witness = witness(&map, mode);
    Ok(HomOutcome { hom: FglHom { source: source.clone(), target: target.clone(), map }, witness })
}

/// `lambda_b^{-1} o D lambda_a` computed directly from two logarithms in one context.
pub fn transport<R: CoeffRing>(
    d: &[Vec<R::Elem>],
    log_a: &SeriesTuple<R>,
    log_b_inverse: &SeriesTuple<R>,
) -> Result<SeriesTuple<R>, Error> {
    log_b_inverse.compose(&log_a.left_mul(d))
}

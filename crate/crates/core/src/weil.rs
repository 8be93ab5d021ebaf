//! Weil restriction of formal group laws along a free basis of `Z[xi]` over `Z`.
//!
//! Variable `z_{jd+l}` (0-based `j d + l`) is the `e_j`-coordinate of the `l`-th input,
//! so that `x_l = sum_j e_j z_{jd+l}`. A law restricts with its `X` block first and its
//! `Y` block second, each of size `nd`.

use serde::Serialize;

use crate::arith::nt::{discrete_log, factorize, is_prime, kronecker, primitive_root};
use crate::arith::{CoeffRing, CyclotomicNumber, Integrality, NumberRing, Rational, Rationals, RingKind};
use crate::error::Error;
use crate::fgl::{exp_minus_one, hom_defect, log_m, multiplicative_power, witness, FglHom, FormalGroupLaw};
use crate::honda::FrobeniusPolynomial;
use crate::lattice::{IntMatrix, RatMatrix};
use crate::series::{Monomial, SeriesContext, SeriesTuple, TruncatedSeries};

/// How the basis elements were chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisLayout {
    /// `1, xi, ..., xi^{n-1}`.
    Power,
    /// `e_{gamma(alpha)} = prod_i xi_i^{s_i^{alpha_i}}` with `xi_i = xi^{q/p_i}`.
    Gamma {
        primes: Vec<u64>,
        s: Vec<u64>,
    },
    Custom,
}

#[derive(Clone, Debug)]
pub struct ExtensionBasis {
    ring: NumberRing,
    elements: Vec<CyclotomicNumber>,
    /// Column `j` holds the power-basis coordinates of `e_j`.
    matrix: RatMatrix,
    inverse: RatMatrix,
    layout: BasisLayout,
}

/// `gamma(alpha) = sum_i alpha_i n_i` with `n_1 = 1`, `n_i = prod_{j<i} (p_j - 1)`.
pub fn gamma_index(alpha: &[u64], primes: &[u64]) -> usize {
    let mut n_i = 1usize;
    let mut g = 0usize;
    for (&a, &p) in alpha.iter().zip(primes) {
        g += a as usize * n_i;
        n_i *= (p - 1) as usize;
    }
    g
}

/// Inverse of [`gamma_index`].
pub fn gamma_digits(mut g: usize, primes: &[u64]) -> Vec<u64> {
    primes
        .iter()
        .map(|&p| {
            let m = (p - 1) as usize;
            let a = g % m;
            g /= m;
            a as u64
        })
        .collect()
}

impl ExtensionBasis {
    pub fn custom(ring: &NumberRing, elements: Vec<CyclotomicNumber>) -> Result<Self, Error> {
        Self::build(ring, elements, BasisLayout::Custom)
    }

    fn build(ring: &NumberRing, elements: Vec<CyclotomicNumber>, layout: BasisLayout) -> Result<Self, Error> {
        let n = ring.degree();
        if elements.len() != n {
            return Err(Error::Spec(format!("a basis of Z[xi] needs {n} elements")));
        }
        let matrix = RatMatrix::from_fn(n, n, |i, j| elements[j].coords[i].clone());
        let inverse = matrix.inverse().ok_or_else(|| Error::Spec("basis elements are linearly dependent".into()))?;
        Ok(ExtensionBasis { ring: ring.clone(), elements, matrix, inverse, layout })
    }

    pub fn power(ring: &NumberRing) -> Self {
        let elements = (0..ring.degree()).map(|k| ring.xi_pow(k)).collect();
        Self::build(ring, elements, BasisLayout::Power).expect("power basis is a basis")
    }

    /// The basis `e_{gamma(alpha)}` of a squarefree cyclotomic ring. `s` lists a
    /// primitive root modulo each prime factor, in ascending order of primes; `None`
    /// picks the smallest ones.
    pub fn gamma(ring: &NumberRing, s: Option<&[u64]>) -> Result<Self, Error> {
        let RingKind::Cyclotomic { q } = *ring.kind() else {
            return Err(Error::Spec("the gamma basis needs a cyclotomic ring".into()));
        };
        let primes: Vec<u64> = factorize(q).into_iter().map(|(p, _)| p).collect();
        let s: Vec<u64> = match s {
            Some(s) => s.to_vec(),
            None => primes.iter().map(|&p| primitive_root(p)).collect(),
        };
        if s.len() != primes.len() {
            return Err(Error::Spec(format!("expected {} generator choices, got {}", primes.len(), s.len())));
        }
        for (&si, &p) in s.iter().zip(&primes) {
            if crate::arith::nt::mult_order(si % p, p) != Some(p - 1) {
                return Err(Error::Spec(format!("{si} is not a primitive root modulo {p}")));
            }
        }
        let n = ring.degree();
        let elements = (0..n)
            .map(|g| {
                let alpha = gamma_digits(g, &primes);
                let e: u64 = alpha
                    .iter()
                    .zip(&primes)
                    .zip(&s)
                    .map(|((&a, &p), &si)| (q / p) * crate::arith::nt::pow_mod(si, a, p))
                    .sum();
                ring.xi_pow((e % q) as usize)
            })
            .collect();
        Self::build(ring, elements, BasisLayout::Gamma { primes, s })
    }

    pub fn ring(&self) -> &NumberRing {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CyclotomicNumber] {
        &self.elements
    }

    /// Column `j` holds the power-basis coordinates of `e_j`.
    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &BasisLayout {
        &self.layout
    }

    pub fn first_is_one(&self) -> bool {
        self.elements[0] == self.ring.one()
    }

    /// Coordinates of `c` in this basis.
    pub fn coords(&self, c: &CyclotomicNumber) -> Vec<Rational> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = Rational::zero();
                for (k, v) in c.coords.iter().enumerate() {
                    if !v.is_zero() {
                        acc.add_mul(&self.inverse[(i, k)], v);
                    }
                }
                acc
            })
            .collect()
    }

    /// `W` with `other_j = sum_i W_{ij} self_i`.
    pub fn transition_from(&self, other: &ExtensionBasis) -> RatMatrix {
        let n = self.len();
        let cols: Vec<Vec<Rational>> = other.elements.iter().map(|e| self.coords(e)).collect();
        RatMatrix::from_fn(n, n, |i, j| cols[j][i].clone())
    }

    /// `M_sigma`: column `j` holds the coordinates of `sigma(e_j)`; an error if the
    /// basis lattice is not preserved.
    pub fn galois_matrix(&self, map_index: usize) -> Result<IntMatrix, Error> {
        let n = self.len();
        let cols: Vec<Vec<Rational>> =
            self.elements.iter().map(|e| self.coords(&self.ring.galois_apply(map_index, e))).collect();
        RatMatrix::from_fn(n, n, |i, j| cols[j][i].clone())
            .to_integer()
            .ok_or_else(|| Error::Spec("the Galois map does not preserve the basis lattice".into()))
    }

    /// Generators `sigma_i` of the gamma layout: `xi -> xi^t`, `t = s_i mod p_i`, `t = 1`
    /// modulo the other primes. Returned as Galois-map indices.
    pub fn gamma_generators(&self) -> Result<Vec<usize>, Error> {
        let BasisLayout::Gamma { primes, s } = &self.layout else {
            return Err(Error::Spec("generators are defined for the gamma basis".into()));
        };
        (0..primes.len())
            .map(|i| {
                let residues: Vec<u64> = (0..primes.len()).map(|j| if j == i { s[i] } else { 1 }).collect();
                let t = crate::arith::nt::crt(&residues, primes);
                self.ring.map_with_exponent(t).ok_or_else(|| Error::Spec(format!("no Galois map xi -> xi^{t}")))
            })
            .collect()
    }

    /// `r_i(p)` with `p = s_i^{r_i(p)} mod p_i` (exhaustive search); `None` where `p = p_i`.
    pub fn frobenius_exponents(&self, p: u64) -> Result<Vec<Option<u64>>, Error> {
        let BasisLayout::Gamma { primes, s } = &self.layout else {
            return Err(Error::Spec("exponents are defined for the gamma basis".into()));
        };
        Ok(primes.iter().zip(s).map(|(&pi, &si)| if pi == p { None } else { discrete_log(si, p, pi) }).collect())
    }
}

/// Weil restriction of a tuple of series over `Z[xi]` whose variables form blocks of
/// size `block`: variable `b block + l` becomes `sum_j e_j z_{b n block + j block + l}`
/// and component `l` splits into components `j d' + l`.
pub fn restrict_tuple(
    f: &SeriesTuple<NumberRing>,
    block: usize,
    basis: &ExtensionBasis,
) -> Result<SeriesTuple<Rationals>, Error> {
    let ring = f.ring().clone();
    if ring.degree() != basis.len() || *ring != **basis.ring() {
        return Err(Error::Context("basis belongs to a different ring".into()));
    }
    let vars = f.ctx().num_vars();
    if block == 0 || !vars.is_multiple_of(block) {
        return Err(Error::Context(format!("{vars} variables do not split into blocks of {block}")));
    }
    let n = basis.len();
    let out_vars = vars * n;
    let kctx = f.ctx().with_vars(out_vars);
    let inner: Vec<TruncatedSeries<NumberRing>> = (0..vars)
        .map(|v| {
            let (b, l) = (v / block, v % block);
            let terms =
                (0..n).map(|j| (Monomial::var(out_vars, b * n * block + j * block + l), basis.elements[j].clone()));
            TruncatedSeries::from_terms(&kctx, terms)
        })
        .collect();
    let image = f.compose(&SeriesTuple::new(&kctx, inner))?;
    let dd = f.len();
    let qctx = SeriesContext::new(Rationals, out_vars, f.ctx().max_degree())?;
    let mut comps: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); n * dd];
    for (l, g) in image.components().iter().enumerate() {
        for (m, c) in g.terms() {
            for (j, v) in basis.coords(c).into_iter().enumerate() {
                if !v.is_zero() {
                    comps[j * dd + l].push((m.clone(), v));
                }
            }
        }
    }
    let comps = comps.into_iter().map(|t| TruncatedSeries::from_terms(&qctx, t)).collect();
    Ok(SeriesTuple::new(&qctx, comps))
}

/// `R(lambda)` for a logarithm over `Z[xi]`.
pub fn restrict_logarithm(
    lambda: &SeriesTuple<NumberRing>,
    basis: &ExtensionBasis,
) -> Result<SeriesTuple<Rationals>, Error> {
    restrict_tuple(lambda, lambda.len(), basis)
}

/// `Phi = R(F_m^d)` with logarithm `Lambda = R(log(1+x))` and inverse `R(exp(x) - 1)`.
#[derive(Clone, Debug)]
pub struct RestrictedLaw {
    law: FormalGroupLaw<Rationals>,
    source_dim: usize,
    basis: ExtensionBasis,
}

impl RestrictedLaw {
    /// Builds `Phi`, `Lambda` and `Lambda^{-1}` by direct restriction; see [`Self::verify`].
    pub fn new(basis: &ExtensionBasis, d: usize, degree: u32) -> Result<Self, Error> {
        let ring = basis.ring().clone();
        let mult = multiplicative_power(ring.clone(), d, degree)?;
        let law = restrict_tuple(mult.law(), d, basis)?;
        let kctx = SeriesContext::new(ring, d, degree)?;
        let log = SeriesTuple::new(&kctx, (0..d).map(|l| log_m(&kctx, l)).collect());
        let exp = SeriesTuple::new(&kctx, (0..d).map(|l| exp_minus_one(&kctx, l)).collect());
        let lambda = restrict_logarithm(&log, basis)?;
        let lambda_inv = restrict_logarithm(&exp, basis)?;
        let law = FormalGroupLaw::with_logarithms(law, lambda, lambda_inv)?;
        Ok(RestrictedLaw { law, source_dim: d, basis: basis.clone() })
    }

    /// Integer coefficients, `Lambda(Phi(X,Y)) = Lambda(X) + Lambda(Y)`, and the axioms,
    /// all up to `degree`.
    pub fn verify(&self, degree: u32) -> Result<(), Error> {
        if let Some(w) = witness(self.law.law(), Integrality::Global) {
            return Err(Error::Integrality(format!("Phi: {w}")));
        }
        if let Some(f) = self.law.check_logarithm(degree)? {
            return Err(Error::Verification(format!("Lambda is not the logarithm of Phi: {f:?}")));
        }
        let axioms = self.law.check_axioms(degree);
        if let Some(f) = axioms.failures.first() {
            return Err(Error::Axioms(format!("Phi: {f:?}")));
        }
        Ok(())
    }

    pub fn law(&self) -> &FormalGroupLaw<Rationals> {
        &self.law
    }

    /// `nd`.
    pub fn dim(&self) -> usize {
        self.law.dim()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn basis(&self) -> &ExtensionBasis {
        &self.basis
    }

    pub fn logarithm(&self) -> &SeriesTuple<Rationals> {
        self.law.logarithm().expect("set at construction")
    }

    pub fn logarithm_inverse(&self) -> &SeriesTuple<Rationals> {
        self.law.logarithm_inverse().expect("set at construction")
    }
}

/// `Phi = R(F_m^d)`, verified integral and a formal group law with logarithm `Lambda`.
pub fn build_phi(basis: &ExtensionBasis, d: usize, degree: u32) -> Result<RestrictedLaw, Error> {
    let phi = RestrictedLaw::new(basis, d, degree)?;
    phi.verify(degree)?;
    Ok(phi)
}

/// The homomorphism `R_new(F) -> R_old(F)` with linear coefficient `I_d (x) W`.
#[derive(Clone, Debug)]
pub struct BasisChange {
    pub w: RatMatrix,
    pub hom: FglHom<Rationals>,
}

/// Builds `Lambda_old^{-1} o (I_d (x) W) Lambda_new` for `F = F_m^d` and checks that it
/// is a homomorphism equal to the linear substitution `z -> (I_d (x) W) z'`.
pub fn basis_change_hom(
    old: &ExtensionBasis,
    new: &ExtensionBasis,
    d: usize,
    degree: u32,
) -> Result<BasisChange, Error> {
    let w = old.transition_from(new);
    let phi_old = RestrictedLaw::new(old, d, degree)?;
    let phi_new = RestrictedLaw::new(new, d, degree)?;
    let lin = RatMatrix::identity(d).kron(&w);
    let inner = phi_new.logarithm().left_mul_rational(&lin.to_rows());
    let map = phi_old.logarithm_inverse().compose(&inner)?;
    let linear = SeriesTuple::identity(map.ctx(), map.len()).left_mul_rational(&lin.to_rows());
    if let Some((c, m, a, b)) = map.first_difference(&linear) {
        return Err(Error::Verification(format!(
            "basis change is not linear: component {c} monomial {:?}: {a:?} vs {b:?}",
            m.exps()
        )));
    }
    let hom = FglHom { source: phi_new.law.clone(), target: phi_old.law.clone(), map };
    if let Some(f) = hom.hom_defect() {
        return Err(Error::Verification(format!("basis change is not a homomorphism: {f:?}")));
    }
    Ok(BasisChange { w, hom })
}

/// Whether a type of `Phi` was derived for an unramified prime or copied from the
/// ramified statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeStatus {
    Unramified,
    /// Ramified branch, taken as stated: its derivation goes through a uniformizer and is
    /// not re-derived. The type condition itself is still checkable on the rational `Lambda`.
    Stated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiType {
    pub v: FrobeniusPolynomial,
    pub status: TypeStatus,
}

/// `V_p` for the basis `(1, xi)` of a quadratic ring or the gamma basis of a cyclotomic one.
pub fn phi_v_matrix(basis: &ExtensionBasis, p: u64) -> Result<(RatMatrix, TypeStatus), Error> {
    if !is_prime(p) {
        return Err(Error::Spec(format!("{p} is not prime")));
    }
    let ring = basis.ring();
    match (ring.kind(), basis.layout()) {
        (&RingKind::Quadratic { r, .. }, BasisLayout::Power) => {
            let q = ring.conductor();
            if q.unsigned_abs().is_multiple_of(p) {
                let v = RatMatrix::from_rows(vec![
                    vec![Rational::one(), Rational::frac(r, 2)],
                    vec![Rational::zero(), Rational::zero()],
                ]);
                return Ok((v, TypeStatus::Stated));
            }
            let v = if kronecker(q, p) == 1 {
                RatMatrix::identity(2)
            } else {
                RatMatrix::from_i64(&[vec![1, r], vec![0, -1]])
            };
            Ok((v, TypeStatus::Unramified))
        }
        (RingKind::Cyclotomic { .. }, BasisLayout::Gamma { primes, .. }) => {
            let exps = basis.frobenius_exponents(p)?;
            let mut v = RatMatrix::identity(1);
            let mut status = TypeStatus::Unramified;
            for (&pi, r) in primes.iter().zip(exps) {
                let m = (pi - 1) as usize;
                let factor = match r {
                    Some(r) => RatMatrix::shift(m).pow(r as u32),
                    None => {
                        status = TypeStatus::Stated;
                        RatMatrix::scalar(m, Rational::from_int(pi as i64)).sub(&RatMatrix::ones(m))
                    }
                };
                v = v.kron(&factor);
            }
            Ok((v, status))
        }
        _ => Err(Error::Spec("types of Phi are available for the quadratic power basis and the gamma basis".into())),
    }
}

/// `v_p = p I_{nd} - (I_d (x) V_p) D_p`.
pub fn phi_type(basis: &ExtensionBasis, d: usize, p: u64) -> Result<PhiType, Error> {
    let (v, status) = phi_v_matrix(basis, p)?;
    let lin = RatMatrix::identity(d).kron(&v);
    let nd = lin.rows();
    let poly = FrobeniusPolynomial::new(p, vec![RatMatrix::scalar(nd, Rational::from_int(p as i64)), lin.neg()])?;
    Ok(PhiType { v: poly, status })
}

/// The action `Lambda^{-1} o M Lambda` of an integer matrix on `Phi`.
#[derive(Clone, Debug)]
pub struct RealizedAction {
    pub matrix: IntMatrix,
    pub map: SeriesTuple<Rationals>,
}

/// `Lambda^{-1} o theta^T Lambda`, required to have integer coefficients.
pub fn realize_action(phi: &RestrictedLaw, theta_t: &IntMatrix) -> Result<RealizedAction, Error> {
    let r = phi.dim();
    if theta_t.rows() != r || theta_t.cols() != r {
        return Err(Error::Spec(format!("action matrix must be {r}x{r}")));
    }
    if !theta_t.is_unimodular() {
        return Err(Error::Spec("action matrix is not invertible over Z".into()));
    }
    let rows = theta_t.to_rational().to_rows();
    let map = phi.logarithm_inverse().compose(&phi.logarithm().left_mul_rational(&rows))?;
    if let Some(w) = witness(&map, Integrality::Global) {
        return Err(Error::Integrality(format!("realized action is not integral: {w}")));
    }
    Ok(RealizedAction { matrix: theta_t.clone(), map })
}

impl RealizedAction {
    /// First coefficient where this map fails to be an endomorphism of `Phi`, up to `degree`.
    pub fn endomorphism_defect(&self, phi: &RestrictedLaw, degree: u32) -> Option<crate::fgl::AxiomFailure> {
        let law = phi.law().recap(degree);
        hom_defect(&self.map.recap(degree), &law, &law)
    }
}

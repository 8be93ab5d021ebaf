//! Tori split over tame abelian extensions: the JSON spec, Galois representations, the
//! matrices `psi`, `theta`, the local split into `d_s + d_a`, and the map `Xi`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::snf::{complete_unimodular, kernel};
use crate::arith::nt::{crt, factorize, is_prime, is_squarefree, kronecker, mult_order, primes_up_to, primitive_root};
use crate::arith::{MonogenicRing, NumberRing};
use crate::error::Error;
use crate::honda::{Provenance, XiMap};
use crate::weil::ExtensionBasis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RationalBase {
    Q,
}

/// `"Q"` or `{"Qp": p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Base {
    Rational(RationalBase),
    Local {
        #[serde(rename = "Qp")]
        p: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticData {
    pub r: i64,
    pub s: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalData {
    pub n1: u64,
    pub n2: u64,
}

/// `q`, `{"quadratic": {"r", "s"}}` or `{"local": {"n1", "n2"}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Conductor {
    Cyclotomic(u64),
    Quadratic { quadratic: QuadraticData },
    Local { local: LocalData },
}

/// One generator image, row-major flat or as rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChiMatrix {
    Flat(Vec<i64>),
    Rows(Vec<Vec<i64>>),
}

/// The torus description consumed by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusSpec {
    pub base: Base,
    pub conductor: Conductor,
    pub dimension: usize,
    pub chi: Vec<ChiMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_choices: Option<Vec<u64>>,
}

/// Abelian Galois group given by commuting generators of known orders, with `chi` on
/// each generator.
#[derive(Clone, Debug, PartialEq)]
pub struct GaloisRep {
    pub d: usize,
    pub generators: Vec<IntMatrix>,
    pub orders: Vec<u64>,
}

impl GaloisRep {
    pub fn new(d: usize, generators: Vec<IntMatrix>, orders: Vec<u64>) -> Result<Self, Error> {
        if generators.len() != orders.len() {
            return Err(Error::Spec("each generator needs an order".into()));
        }
        for (i, (g, &o)) in generators.iter().zip(&orders).enumerate() {
            if g.rows() != d || g.cols() != d {
                return Err(Error::Spec(format!("chi(sigma_{}) is not {d}x{d}", i + 1)));
            }
            if !g.pow(o as u32).is_identity() {
                return Err(Error::Spec(format!("chi(sigma_{})^{o} is not the identity", i + 1)));
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if generators[i].mul(&generators[j]) != generators[j].mul(&generators[i]) {
                    return Err(Error::Spec(format!("chi(sigma_{}) and chi(sigma_{}) do not commute", i + 1, j + 1)));
                }
            }
        }
        Ok(GaloisRep { d, generators, orders })
    }

    /// `U_i = chi(sigma_i)^T`.
    pub fn u(&self, i: usize) -> IntMatrix {
        self.generators[i].transpose()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(IntMatrix::is_identity)
    }
}

/// Which extension a validated spec describes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorusKind {
    /// `Q(zeta_q)/Q`, generators `sigma_i` attached to the primes `p_i | q` and the chosen
    /// primitive roots `s_i`.
    Cyclotomic { q: u64, primes: Vec<u64>, s: Vec<u64> },
    /// `Q(xi)/Q` with `xi^2 - r xi + s = 0`.
    Quadratic { r: i64, s: i64 },
    /// Over `Q_p`: unramified of degree `n1` (generator `sigma_1`) times totally tamely
    /// ramified of degree `n2` (generator `sigma_2`).
    Local { p: u64, n1: u64, n2: u64 },
}

/// A spec that passed validation.
#[derive(Clone, Debug, PartialEq)]
pub struct Torus {
    pub spec: TorusSpec,
    pub kind: TorusKind,
    pub rep: GaloisRep,
}

fn chi_matrix(m: &ChiMatrix, d: usize) -> Result<IntMatrix, Error> {
    match m {
        ChiMatrix::Flat(v) => {
            if v.len() != d * d {
                return Err(Error::Spec(format!("chi entry has {} values, expected {}", v.len(), d * d)));
            }
            Ok(IntMatrix::from_fn(d, d, |i, j| BigInt::from(v[i * d + j])))
        }
        ChiMatrix::Rows(rows) => {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::Spec(format!("chi entry is not {d}x{d}")));
            }
            Ok(IntMatrix::from_i64(rows))
        }
    }
}

impl TorusSpec {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Spec(format!("malformed torus spec: {e}")))
    }

    pub fn validate(&self) -> Result<Torus, Error> {
        let d = self.dimension;
        if d == 0 {
            return Err(Error::Spec("dimension must be positive".into()));
        }
        let gens: Vec<IntMatrix> = self.chi.iter().map(|m| chi_matrix(m, d)).collect::<Result<_, _>>()?;
        let (kind, orders) = match (self.base, self.conductor) {
            (Base::Rational(_), Conductor::Cyclotomic(q)) => {
                if q < 3 || !is_squarefree(q) {
                    return Err(Error::Spec(format!(
                        "conductor {q} is not squarefree and at least 3; wild ramification"
                    )));
                }
                if q % 2 == 0 {
                    return Err(Error::Spec(format!(
                        "even conductor {q}: Q(zeta_{q}) = Q(zeta_{}), use the odd conductor",
                        q / 2
                    )));
                }
                let primes: Vec<u64> = factorize(q).into_iter().map(|(p, _)| p).collect();
                let s = match &self.s_choices {
                    Some(s) => s.clone(),
                    None => primes.iter().map(|&p| primitive_root(p)).collect(),
                };
                if s.len() != primes.len() {
                    return Err(Error::Spec(format!("expected {} generator choices", primes.len())));
                }
                for (&p, &si) in primes.iter().zip(&s) {
                    if mult_order(si % p, p) != Some(p - 1) {
                        return Err(Error::Spec(format!("{si} is not a primitive root modulo {p}")));
                    }
                }
                let orders = primes.iter().map(|p| p - 1).collect();
                (TorusKind::Cyclotomic { q, primes, s }, orders)
            }
            (Base::Rational(_), Conductor::Quadratic { quadratic: QuadraticData { r, s } }) => {
                MonogenicRing::quadratic(r, s)?;
                if self.s_choices.is_some() {
                    return Err(Error::Spec("s_choices apply to cyclotomic conductors".into()));
                }
                (TorusKind::Quadratic { r, s }, vec![2])
            }
            (Base::Local { p }, Conductor::Local { local: LocalData { n1, n2 } }) => {
                if !is_prime(p) {
                    return Err(Error::Spec(format!("{p} is not prime")));
                }
                if n1 == 0 || n2 == 0 || (p - 1) % n2 != 0 {
                    return Err(Error::Spec(format!(
                        "ramification index {n2} does not divide p - 1 = {}; only tame abelian extensions are supported",
                        p - 1
                    )));
                }
                (TorusKind::Local { p, n1, n2 }, vec![n1, n2])
            }
            _ => return Err(Error::Spec("base field and conductor do not match".into())),
        };
        if gens.len() != orders.len() {
            return Err(Error::Spec(format!("expected {} chi matrices, got {}", orders.len(), gens.len())));
        }
        let rep = GaloisRep::new(d, gens, orders)?;
        for (i, g) in rep.generators.iter().enumerate() {
            if !g.is_unimodular() {
                return Err(Error::Spec(format!("chi(sigma_{}) is not invertible over Z", i + 1)));
            }
        }
        if let TorusKind::Quadratic { .. } = kind {
            let g = &rep.generators[0];
            let one = IntMatrix::identity(d);
            if *g != one && *g != one.neg() {
                return Err(Error::Spec("quadratic tori are supported for chi(sigma) = I or -I".into()));
            }
        }
        Ok(Torus { spec: self.clone(), kind, rep })
    }
}

impl Torus {
    pub fn dim(&self) -> usize {
        self.rep.d
    }

    /// The splitting ring over `Z`; tori over `Q_p` have none.
    pub fn ring(&self) -> Result<NumberRing, Error> {
        match self.kind {
            TorusKind::Cyclotomic { q, .. } => Ok(Arc::new(MonogenicRing::cyclotomic(q)?)),
            TorusKind::Quadratic { r, s } => Ok(Arc::new(MonogenicRing::quadratic(r, s)?)),
            TorusKind::Local { .. } => Err(Error::Spec("tori over Q_p have no global splitting ring".into())),
        }
    }

    /// Galois-map indices of the generators `sigma_i` in `ring`.
    pub fn generator_maps(&self, ring: &NumberRing) -> Result<Vec<usize>, Error> {
        match &self.kind {
            TorusKind::Cyclotomic { primes, s, .. } => (0..primes.len())
                .map(|i| {
                    let residues: Vec<u64> = (0..primes.len()).map(|j| if j == i { s[i] } else { 1 }).collect();
                    let t = crt(&residues, primes);
                    ring.map_with_exponent(t).ok_or_else(|| Error::Spec(format!("no Galois map xi -> xi^{t}")))
                })
                .collect(),
            TorusKind::Quadratic { .. } => Ok(vec![1]),
            TorusKind::Local { .. } => Err(Error::Spec("tori over Q_p have no global splitting ring".into())),
        }
    }

    /// `theta(sigma_i)` for every generator, relative to `basis`.
    pub fn thetas(&self, basis: &ExtensionBasis) -> Result<Vec<IntMatrix>, Error> {
        let maps = self.generator_maps(basis.ring())?;
        maps.iter().zip(&self.rep.generators).map(|(&m, chi)| Ok(theta(chi, &psi_matrix(basis, m)?))).collect()
    }
}

/// `psi(sigma) = (M_sigma^{-1})^T` for the matrix `M_sigma` of `sigma` on the basis.
pub fn psi_matrix(basis: &ExtensionBasis, map_index: usize) -> Result<IntMatrix, Error> {
    let m = basis.galois_matrix(map_index)?;
    let inv = m.inverse_unimodular().ok_or_else(|| Error::Spec("M_sigma is not invertible over Z".into()))?;
    Ok(inv.transpose())
}

/// `theta(sigma) = chi(sigma) (x) psi(sigma)`.
pub fn theta(chi: &IntMatrix, psi: &IntMatrix) -> IntMatrix {
    chi.kron(psi)
}

/// The quotient `X / Ker rho_s` for `rho_s = sum_j sigma_2^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnisotropicSplit {
    pub d_s: usize,
    pub d_a: usize,
    /// `U~_1 = chi~(sigma_1)^T` on `X / Ker rho_s`.
    pub u1_tilde: IntMatrix,
    /// Unimodular basis of `X` whose last `d_a` columns span `Ker rho_s`.
    pub basis: IntMatrix,
    pub rho_s: IntMatrix,
    pub rho_a: IntMatrix,
}

pub fn split_anisotropic_dims(chi1: &IntMatrix, chi2: &IntMatrix, n2: u64) -> Result<AnisotropicSplit, Error> {
    let d = chi1.rows();
    if !chi2.pow(n2 as u32).is_identity() {
        return Err(Error::Spec(format!("chi(sigma_2) does not have order dividing {n2}")));
    }
    let mut rho_s = IntMatrix::zeros(d, d);
    let mut power = IntMatrix::identity(d);
    for _ in 0..n2 {
        rho_s = rho_s.add(&power);
        power = power.mul(chi2);
    }
    let rho_a = chi2.sub(&IntMatrix::identity(d));
    let k = kernel(&rho_s);
    let d_a = k.cols();
    let d_s = d - d_a;
    let basis = if d_a == 0 {
        IntMatrix::identity(d)
    } else {
        let q = complete_unimodular(&k).expect("kernels are saturated");
        IntMatrix::hstack(&[q.submatrix(0, d_a, d, d_s), k])
    };
    let inv = basis.inverse_unimodular().expect("unimodular");
    let induced = inv.mul(chi1).mul(&basis);
    debug_assert!(induced.submatrix(0, d_s, d_s, d_a).is_zero());
    Ok(AnisotropicSplit { d_s, d_a, u1_tilde: induced.submatrix(0, 0, d_s, d_s).transpose(), basis, rho_s, rho_a })
}

/// The map `Xi` of a torus over `Q` for all primes up to `bound`.
///
/// Cyclotomic: `Xi(p) = prod_i U_i^{r_i(p)}` for `p` prime to `q`, and
/// `Xi(p_i) = (p_i I - sum_{j=0}^{p_i-2} U_i^j) prod_{j != i} U_j^{r_j(p_i)}`.
/// Quadratic: `Xi(p) = I` when `(q/p) = 1`, `U` when `(q/p) = -1`, and at `p | q` the
/// projection `(I + U)/2`, which is `0` for the norm-one torus.
pub fn xi_from_torus(torus: &Torus, bound: u64) -> Result<XiMap, Error> {
    let d = torus.rep.d;
    let mut entries = BTreeMap::new();
    match &torus.kind {
        TorusKind::Cyclotomic { primes, s, .. } => {
            let us: Vec<IntMatrix> = (0..primes.len()).map(|i| torus.rep.u(i)).collect();
            for p in primes_up_to(bound) {
                let mut m = IntMatrix::identity(d);
                for (i, (&pi, &si)) in primes.iter().zip(s).enumerate() {
                    if pi == p {
                        let mut sum = IntMatrix::zeros(d, d);
                        let mut power = IntMatrix::identity(d);
                        for _ in 0..pi - 1 {
                            sum = sum.add(&power);
                            power = power.mul(&us[i]);
                        }
                        m = m.mul(&IntMatrix::scalar(d, BigInt::from(pi)).sub(&sum));
                    } else {
                        let r = crate::arith::nt::discrete_log(si, p, pi).expect("s_i generates (Z/p_i)^*");
                        m = m.mul(&us[i].pow(r as u32));
                    }
                }
                entries.insert(p, m);
            }
        }
        TorusKind::Quadratic { r, s } => {
            let q = r * r - 4 * s;
            let u = torus.rep.u(0);
            let id = IntMatrix::identity(d);
            for p in primes_up_to(bound) {
                let m = match kronecker(q, p) {
                    1 => id.clone(),
                    -1 => u.clone(),
                    _ => {
                        let sum = id.add(&u);
                        sum.to_rational().scale(&crate::arith::Rational::frac(1, 2)).to_integer().expect("chi is +-I")
                    }
                };
                entries.insert(p, m);
            }
        }
        TorusKind::Local { .. } => return Err(Error::Spec("Xi is defined for tori over Q".into())),
    }
    XiMap::new(d, entries, Provenance::Torus)
}

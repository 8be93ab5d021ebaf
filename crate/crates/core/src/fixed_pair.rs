//! Universal fixed pairs for a Galois action on a restricted law `Phi`: the matrix `Q`,
//! the certificate for `Q`, type extraction and the pair `(F, f)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{Integrality, Rationals};
use crate::error::Error;
use crate::fgl::{first_failure, hom_defect, witness, Axiom, FormalGroupLaw};
use crate::honda::FrobeniusPolynomial;
use crate::lattice::{complete_unimodular, kernel, smith, IntMatrix, RatMatrix};
use crate::series::SeriesTuple;
use crate::weil::{gamma_digits, realize_action, RealizedAction, RestrictedLaw};

/// One generator of the action: `theta(sigma)^T` on the `r` coordinates of `Phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionGenerator {
    pub label: String,
    pub theta_t: IntMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionData {
    pub r: usize,
    pub generators: Vec<ActionGenerator>,
}

impl ActionData {
    pub fn new(r: usize, generators: Vec<ActionGenerator>) -> Result<Self, Error> {
        for g in &generators {
            if g.theta_t.rows() != r || g.theta_t.cols() != r || !g.theta_t.is_unimodular() {
                return Err(Error::Spec(format!("{} is not an invertible {r}x{r} integer matrix", g.label)));
            }
        }
        Ok(ActionData { r, generators })
    }

    /// `D = theta(sigma)^T - I` for every generator.
    pub fn d_set(&self) -> Vec<IntMatrix> {
        let id = IntMatrix::identity(self.r);
        self.generators.iter().map(|g| g.theta_t.sub(&id)).collect()
    }
}

/// `e` is the rank of the saturated lattice `cap Ker D`; `Q` puts its Hermite basis
/// (positive leading entries) in the first `e` columns.
pub fn generic_q(d_set: &[IntMatrix], r: usize) -> (IntMatrix, usize) {
    if d_set.is_empty() {
        return (IntMatrix::identity(r), r);
    }
    let stacked = IntMatrix::vstack(d_set);
    let k = kernel(&stacked);
    let e = k.cols();
    if e == 0 {
        return (IntMatrix::identity(r), 0);
    }
    (complete_unimodular(&k).expect("kernels are saturated"), e)
}

/// `Q_1 = [[I, 0], [C^, I]]` with `C^` the column of blocks `U_1^{-k} (x) I_{n_2}`,
/// `k = 1, ..., n_1 - 1`. The first block columns of `Q_1^{-1} D Q_1 - I` vanish only
/// when `U_1^{n_1} = I`.
pub fn explicit_q_unramified(u1: &IntMatrix, n1: usize, n2: usize) -> Result<IntMatrix, Error> {
    let inv = u1.inverse_unimodular().ok_or_else(|| Error::Spec("U_1 is not invertible over Z".into()))?;
    let d = u1.rows();
    let b = n2 * d;
    let mut q = IntMatrix::identity(n1 * b);
    let id = IntMatrix::identity(n2);
    let mut power = IntMatrix::identity(d);
    for k in 1..n1 {
        power = power.mul(&inv);
        q.set_block(k * b, 0, &power.kron(&id));
    }
    Ok(q)
}

/// `Q` with blocks `q_{gamma(alpha), 0} = U_1^{-alpha_1} ... U_k^{-alpha_k}` below the
/// diagonal in the first block column and identity blocks on the diagonal.
pub fn explicit_q_cyclotomic(us: &[IntMatrix], primes: &[u64]) -> Result<IntMatrix, Error> {
    if us.len() != primes.len() || us.is_empty() {
        return Err(Error::Spec("one U_i per prime is required".into()));
    }
    let d = us[0].rows();
    let invs: Vec<IntMatrix> = us
        .iter()
        .map(|u| u.inverse_unimodular().ok_or_else(|| Error::Spec("U_i is not invertible over Z".into())))
        .collect::<Result<_, _>>()?;
    let n: usize = primes.iter().map(|&p| (p - 1) as usize).product();
    let mut q = IntMatrix::identity(n * d);
    for g in 1..n {
        let alpha = gamma_digits(g, primes);
        let block = alpha.iter().zip(&invs).fold(IntMatrix::identity(d), |acc, (&a, inv)| acc.mul(&inv.pow(a as u32)));
        q.set_block(g * d, 0, &block);
    }
    Ok(q)
}

/// Which primes a certificate for `Q` covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    AllPrimes,
    Prime(u64),
}

/// The stacked blocks `D^_i`, `D~_i` of the `Q^{-1} D_i Q` and their Smith invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub mode: CertificateMode,
    pub stacked: IntMatrix,
    #[serde(serialize_with = "as_strings")]
    pub invariant_factors: Vec<BigInt>,
}

fn as_strings<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConditionFailure {
    /// Entry `(row, col)` of `Q^{-1} D Q` is nonzero with `col < e`.
    ColumnsNotVanishing { generator: usize, row: usize, col: usize },
    /// The stacked blocks do not have a left inverse over the requested primes.
    NotInvertible { invariant_factors: Vec<BigInt>, expected_rank: usize },
}

impl std::fmt::Display for ConditionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConditionFailure::ColumnsNotVanishing { generator, row, col } => {
                write!(f, "entry ({row}, {col}) of Q^-1 D_{generator} Q is nonzero")
            }
            ConditionFailure::NotInvertible { invariant_factors, expected_rank } => {
                let inv: Vec<String> = invariant_factors.iter().map(ToString::to_string).collect();
                write!(f, "stacked blocks have invariant factors [{}], need {expected_rank} units", inv.join(", "))
            }
        }
    }
}

/// Criterion on `Q`: the first `e` columns of each `Q^{-1} D Q` vanish and the stacked
/// remaining columns have full rank `r - e` over `Z_p` for every prime (last Smith
/// invariant `1`) or for the given prime.
pub fn verify_condition_iii(
    q: &IntMatrix,
    d_set: &[IntMatrix],
    e: usize,
    mode: CertificateMode,
) -> Result<Certificate, ConditionFailure> {
    let r = q.rows();
    let q_inv = q.inverse_unimodular().expect("Q is unimodular");
    let mut blocks = Vec::with_capacity(d_set.len());
    for (i, d) in d_set.iter().enumerate() {
        let m = q_inv.mul(d).mul(q);
        for col in 0..e {
            if let Some(row) = (0..r).find(|&row| !m[(row, col)].is_zero()) {
                return Err(ConditionFailure::ColumnsNotVanishing { generator: i, row, col });
            }
        }
        blocks.push(m.submatrix(0, e, r, r - e));
    }
    let stacked = if blocks.is_empty() { IntMatrix::zeros(0, r - e) } else { IntMatrix::vstack(&blocks) };
    let invariant_factors =
        if stacked.rows() == 0 || r == e { Vec::new() } else { smith(&stacked).invariant_factors() };
    let units = match mode {
        CertificateMode::AllPrimes => invariant_factors.iter().filter(|f| f.is_one()).count(),
        CertificateMode::Prime(p) => {
            let p = BigInt::from(p);
            invariant_factors.iter().filter(|f| !(*f % &p).is_zero()).count()
        }
    };
    if units < r - e {
        return Err(ConditionFailure::NotInvertible { invariant_factors, expected_rank: r - e });
    }
    Ok(Certificate { mode, stacked, invariant_factors })
}

/// The upper-left `e x e` part of `Q^{-1} v Q`, coefficient by coefficient.
pub fn extract_type(q: &IntMatrix, v: &FrobeniusPolynomial, e: usize) -> FrobeniusPolynomial {
    let q_rat = q.to_rational();
    let q_inv: RatMatrix = q_rat.inverse().expect("Q is invertible");
    v.sandwich(&q_inv, &q_rat).upper_left(e)
}

/// A verified fixed pair `(F, f)` with `f: F -> Phi` of linear coefficient `Q I_{r,e}`.
#[derive(Clone, Debug)]
pub struct FixedPairResult {
    pub q: IntMatrix,
    pub e: usize,
    pub law: FormalGroupLaw<Rationals>,
    pub map: SeriesTuple<Rationals>,
    pub realized: Vec<RealizedAction>,
    pub degree: u32,
}

/// `f = Lambda^{-1} o (Q I_{r,e}) lambda_F`, verified to be integral, a homomorphism
/// `F -> Phi`, and fixed by every generator, all to `degree`.
pub fn build_fixed_pair(
    phi: &RestrictedLaw,
    action: &ActionData,
    q: &IntMatrix,
    e: usize,
    law: &FormalGroupLaw<Rationals>,
    degree: u32,
) -> Result<FixedPairResult, Error> {
    let r = phi.dim();
    if action.r != r || q.rows() != r || law.dim() != e {
        return Err(Error::Spec(format!("fixed pair shapes disagree: r = {r}, e = {e}")));
    }
    let degree = degree.min(phi.law().max_degree()).min(law.max_degree());
    let law = law.recap(degree);
    let phi_law = phi.law().recap(degree);
    let linear = q.submatrix(0, 0, r, e).to_rational().to_rows();
    let inner = law.logarithm()?.left_mul_rational(&linear);
    let map = phi.logarithm_inverse().recap(degree).compose(&inner)?;
    if let Some(w) = witness(&map, Integrality::Global) {
        return Err(Error::Integrality(format!("f is not integral: {w}")));
    }
    if let Some(fail) = hom_defect(&map, &law, &phi_law) {
        return Err(Error::Verification(format!("f is not a homomorphism F -> Phi: {fail}")));
    }
    let mut realized = Vec::with_capacity(action.generators.len());
    for g in &action.generators {
        let act = realize_action(phi, &g.theta_t)?;
        let moved = act.map.recap(degree).compose(&map)?;
        if let Some(fail) = first_failure(Axiom::Equivariance, &moved, &map) {
            return Err(Error::Verification(format!("{} does not fix f: {fail}", g.label)));
        }
        realized.push(act);
    }
    Ok(FixedPairResult { q: q.clone(), e, law, map, realized, degree })
}

#[cfg(test)]
mod tests;

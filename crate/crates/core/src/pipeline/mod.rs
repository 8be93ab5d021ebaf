//! End-to-end completions: from a torus spec to the law `F` representing the completed
//! Neron model, with a verification report.

mod global;
mod hom;
mod local;
mod quadratic;
mod report;
mod text;

use std::collections::BTreeMap;

use crate::arith::{CoeffRing, Integrality, Rationals};
use crate::error::Error;
use crate::fgl::{witness, FormalGroupLaw};
use crate::fixed_pair::{
    build_fixed_pair, extract_type, generic_q, verify_condition_iii, ActionData, ActionGenerator, CertificateMode,
};
use crate::honda::{trivial_sigma, xi_fgl, FrobeniusPolynomial, XiMap};
use crate::lattice::{IntMatrix, Torus, TorusKind, TorusSpec};
use crate::series::{SeriesContext, SeriesTuple};
use crate::weil::{phi_type, ExtensionBasis, RestrictedLaw, TypeStatus};

pub use global::global_completion;
pub use hom::{compare_reports, induced_hom, CompareMode, InducedHom};
pub use local::local_completion;
pub use quadratic::{quadratic_completion, quadratic_q};
pub use report::{
    verify_report, Check, CompletionReport, LocalSummary, ReportKind, Status, VerifyOutcome, REPORT_FORMAT,
};
pub use text::render_text;

/// Default cap on the estimated number of terms `C(2r + N, N)` of `Phi`.
pub const DEFAULT_BUDGET: u64 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub degree: u32,
    pub budget: u64,
}

impl Config {
    pub fn new(degree: u32) -> Self {
        Config { degree, budget: DEFAULT_BUDGET }
    }

    pub fn with_budget(self, budget: u64) -> Self {
        Config { budget, ..self }
    }
}

/// `C(n, k)`, saturating.
pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Estimated size of `Phi` in `r` coordinates to degree `n`.
pub fn phi_cost(r: usize, n: u32) -> u128 {
    binomial(2 * r as u64 + n as u64, n as u64)
}

/// Largest degree `2 <= m <= n` whose cost fits the budget.
pub fn phi_degree(r: usize, n: u32, budget: u64) -> Option<u32> {
    (2..=n).rev().find(|&m| phi_cost(r, m) <= budget as u128)
}

/// Validates `spec` and runs the completion matching its base field and conductor.
pub fn complete(spec: &TorusSpec, config: Config) -> Result<CompletionReport, Error> {
    if config.degree < 2 {
        return Err(Error::Spec("the degree must be at least 2".into()));
    }
    let torus = spec.validate()?;
    match torus.kind {
        TorusKind::Cyclotomic { .. } => global_completion(&torus, config),
        TorusKind::Quadratic { .. } => quadratic_completion(&torus, config),
        TorusKind::Local { .. } => local_completion(&torus, config),
    }
}

pub(crate) fn error_text(e: &Error) -> String {
    e.to_string()
}

/// `theta(sigma_i)^T` for the generators of a global torus.
pub(crate) fn action_data(torus: &Torus, basis: &ExtensionBasis) -> Result<ActionData, Error> {
    let gens = torus
        .thetas(basis)?
        .into_iter()
        .enumerate()
        .map(|(i, th)| ActionGenerator { label: format!("sigma_{}", i + 1), theta_t: th.transpose() })
        .collect();
    ActionData::new(basis.len() * torus.dim(), gens)
}

/// `F_Xi` with its integrality check.
pub(crate) fn xi_law(xi: &XiMap, degree: u32, checks: &mut Vec<Check>) -> Result<FormalGroupLaw<Rationals>, Error> {
    let (law, w) = xi_fgl(xi, degree)?;
    checks.push(match w {
        None => Check::pass("F integral over Z"),
        Some(w) => Check::fail("F integral over Z", w.to_string()),
    });
    Ok(law)
}

/// `p I - Xi(p) D` against `lambda` for every prime of the table.
pub(crate) fn xi_type_checks(xi: &XiMap, lambda: &SeriesTuple<Rationals>, degree: u32, checks: &mut Vec<Check>) {
    for (&p, m) in xi.entries() {
        let name = format!("type p={p}");
        let check = FrobeniusPolynomial::linear_type(p, m).map(|u| u.is_type(lambda, degree, &trivial_sigma));
        checks.push(match check {
            Ok(c) if c.holds() => Check::pass(name),
            Ok(c) => Check::fail(name, c.witness.map(|w| w.to_string()).unwrap_or_default()),
            Err(e) => Check::fail(name, error_text(&e)),
        });
    }
}

/// The criterion on `Q` and agreement of `e` with the generic construction.
pub(crate) fn condition_checks(q: &IntMatrix, action: &ActionData, e: usize, checks: &mut Vec<Check>) {
    let ds = action.d_set();
    checks.push(match verify_condition_iii(q, &ds, e, CertificateMode::AllPrimes) {
        Ok(_) => Check::pass("Q criterion at all primes"),
        Err(f) => Check::fail("Q criterion at all primes", f.to_string()),
    });
    let (_, generic_e) = generic_q(&ds, action.r);
    checks.push(if generic_e == e {
        Check::pass("fixed rank matches the generic Q")
    } else {
        Check::fail("fixed rank matches the generic Q", format!("generic rank {generic_e}, expected {e}"))
    });
}

/// Upper-left part of `Q^{-1} v_p Q` against `p I - Xi(p) D`.
pub(crate) fn extraction_checks(
    basis: &ExtensionBasis,
    d: usize,
    q: &IntMatrix,
    xi: &XiMap,
    checks: &mut Vec<Check>,
) -> Result<(), Error> {
    for (&p, m) in xi.entries() {
        let phi = phi_type(basis, d, p)?;
        let name = match phi.status {
            TypeStatus::Unramified => format!("extracted type p={p}"),
            TypeStatus::Stated => format!("extracted type p={p} (ramified)"),
        };
        let u = extract_type(q, &phi.v, d);
        let expected = FrobeniusPolynomial::linear_type(p, m)?;
        checks.push(if u == expected {
            Check::pass(name)
        } else {
            Check::fail(name, format!("got {u}, expected {expected}"))
        });
    }
    Ok(())
}

/// `Phi`, its types, the realized action and the fixed pair, within the cost budget.
pub(crate) fn phi_checks(
    basis: &ExtensionBasis,
    d: usize,
    action: &ActionData,
    q: &IntMatrix,
    law: &FormalGroupLaw<Rationals>,
    config: Config,
    checks: &mut Vec<Check>,
) -> Result<Option<u32>, Error> {
    let r = basis.len() * d;
    let Some(m) = phi_degree(r, config.degree, config.budget) else {
        let cost = phi_cost(r, 2);
        checks.push(Check::skipped(
            "Phi-level checks",
            format!("{cost} terms at degree 2 exceed the budget {}", config.budget),
        ));
        return Ok(None);
    };
    if m < config.degree {
        checks.push(Check::skipped(
            format!("Phi-level checks above degree {m}"),
            format!("{} terms at degree {} exceed the budget {}", phi_cost(r, m + 1), m + 1, config.budget),
        ));
    }
    let phi = RestrictedLaw::new(basis, d, m)?;
    checks.push(match phi.verify(m) {
        Ok(()) => Check::pass("Phi integral with logarithm Lambda"),
        Err(e) => Check::fail("Phi integral with logarithm Lambda", error_text(&e)),
    });
    for p in crate::arith::nt::primes_up_to(m as u64) {
        let t = phi_type(basis, d, p)?;
        let name = format!("Phi type p={p}");
        let c = t.v.is_type(phi.logarithm(), m, &trivial_sigma);
        checks.push(if c.holds() {
            Check::pass(name)
        } else {
            Check::fail(name, c.witness.map(|w| w.to_string()).unwrap_or_default())
        });
    }
    match build_fixed_pair(&phi, action, q, d, law, m) {
        Ok(pair) => {
            checks.push(Check::pass("fixed pair: f integral, homomorphism F -> Phi, sigma o f = f"));
            for (g, act) in action.generators.iter().zip(&pair.realized) {
                let name = format!("realized {} is an automorphism of Phi", g.label);
                checks.push(match act.endomorphism_defect(&phi, m) {
                    None => Check::pass(name),
                    Some(f) => Check::fail(name, f.to_string()),
                });
            }
        }
        Err(e) => {
            checks.push(Check::fail("fixed pair: f integral, homomorphism F -> Phi, sigma o f = f", error_text(&e)))
        }
    }
    Ok(Some(m))
}

/// Coefficient-wise image of a rational tuple in another ring.
pub(crate) fn lift_tuple<S: CoeffRing>(t: &SeriesTuple<Rationals>, ring: &S) -> Result<SeriesTuple<S>, Error> {
    let ctx = SeriesContext::new(ring.clone(), t.ctx().num_vars(), t.ctx().max_degree())?;
    let comps = t.components().iter().map(|c| c.map_ring(ring, |a| ring.from_rational(a))).collect();
    Ok(SeriesTuple::new(&ctx, comps))
}

pub(crate) fn integrality_check<R: CoeffRing>(
    name: &str,
    t: &SeriesTuple<R>,
    mode: Integrality,
    checks: &mut Vec<Check>,
) -> bool {
    match witness(t, mode) {
        None => {
            checks.push(Check::pass(name));
            true
        }
        Some(w) => {
            checks.push(Check::fail(name, w.to_string()));
            false
        }
    }
}

pub(crate) fn xi_table(xi: &XiMap) -> BTreeMap<u64, IntMatrix> {
    xi.entries().clone()
}

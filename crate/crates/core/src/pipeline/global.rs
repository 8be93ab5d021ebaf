//! Tori over `Q` split by `Q(zeta_q)` with squarefree `q`.

use super::{
    action_data, condition_checks, extraction_checks, phi_checks, xi_law, xi_table, xi_type_checks, Check,
    CompletionReport, Config, ReportKind, REPORT_FORMAT,
};
use crate::error::Error;
use crate::fixed_pair::explicit_q_cyclotomic;
use crate::lattice::{xi_from_torus, IntMatrix, Torus, TorusKind};
use crate::series::tuple_to_json;
use crate::weil::ExtensionBasis;

/// `F_Xi` for a torus split by `Q(zeta_q)`, with the types of `lambda_Xi`, the matrix `Q`
/// with its criterion certificate for `Q`, the extracted types, and (within the budget)
/// the fixed pair on `Phi`.
pub fn global_completion(torus: &Torus, config: Config) -> Result<CompletionReport, Error> {
    let TorusKind::Cyclotomic { primes, s, .. } = &torus.kind else {
        return Err(Error::Spec("global completion needs a cyclotomic conductor".into()));
    };
    let d = torus.dim();
    let n = config.degree;
    let basis = ExtensionBasis::gamma(&torus.ring()?, Some(s))?;
    let xi = xi_from_torus(torus, n as u64)?;
    let mut checks: Vec<Check> = Vec::new();
    let law = xi_law(&xi, n, &mut checks)?;
    let lambda = law.logarithm()?.clone();
    xi_type_checks(&xi, &lambda, n, &mut checks);

    let us: Vec<IntMatrix> = (0..primes.len()).map(|i| torus.rep.u(i)).collect();
    let q = explicit_q_cyclotomic(&us, primes)?;
    let action = action_data(torus, &basis)?;
    condition_checks(&q, &action, d, &mut checks);
    extraction_checks(&basis, d, &q, &xi, &mut checks)?;
    let phi_degree = phi_checks(&basis, d, &action, &q, &law, config, &mut checks)?;

    let verdict = CompletionReport::verdict_of(&checks);
    Ok(CompletionReport {
        format: REPORT_FORMAT.into(),
        kind: ReportKind::Global,
        spec: torus.spec.clone(),
        degree: n,
        budget: config.budget,
        phi_degree,
        dimension: d,
        law: tuple_to_json(law.law()),
        lambda: tuple_to_json(&lambda),
        xi: xi_table(&xi),
        q: Some(q),
        e: Some(d),
        s_choices: Some(s.clone()),
        local: None,
        checks,
        verdict,
    })
}

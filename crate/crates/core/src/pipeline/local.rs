//! Tori over `Q_p` split by a tame abelian extension.

use super::{integrality_check, Check, CompletionReport, Config, LocalSummary, ReportKind, REPORT_FORMAT};
use crate::arith::{Integrality, Rationals};
use crate::error::Error;
use crate::fgl::FormalGroupLaw;
use crate::fixed_pair::{explicit_q_unramified, extract_type, verify_condition_iii, CertificateMode};
use crate::honda::{trivial_sigma, FrobeniusPolynomial};
use crate::lattice::{split_anisotropic_dims, IntMatrix, Torus, TorusKind};
use crate::series::{tuple_to_json, SeriesContext};

/// The law of type `p I - diag(U~_1, 0) D` in the basis adapted to `Ker rho_s`, with
/// `d_s` multiplicative-type and `d_a` additive coordinates.
pub fn local_completion(torus: &Torus, config: Config) -> Result<CompletionReport, Error> {
    let TorusKind::Local { p, n1, n2 } = torus.kind else {
        return Err(Error::Spec("local completion needs a base Q_p".into()));
    };
    let d = torus.dim();
    let n = config.degree;
    let chi1 = &torus.rep.generators[0];
    let chi2 = &torus.rep.generators[1];
    let split = split_anisotropic_dims(chi1, chi2, n2)?;
    let c1 = IntMatrix::block_diag(&[split.u1_tilde.clone(), IntMatrix::zeros(split.d_a, split.d_a)]);
    let u = FrobeniusPolynomial::linear_type(p, &c1)?;
    let ctx = SeriesContext::new(Rationals, d, n)?;
    let lambda = u.lambda_from_type(&ctx, &trivial_sigma)?;
    let law = FormalGroupLaw::from_logarithm(&lambda)?;

    let mut checks: Vec<Check> = Vec::new();
    integrality_check(&format!("F integral over Z_({p})"), law.law(), Integrality::Local(p), &mut checks);
    let tc = u.is_type(&lambda, n, &trivial_sigma);
    checks.push(if tc.holds() {
        Check::pass(format!("type p={p}"))
    } else {
        Check::fail(format!("type p={p}"), tc.witness.map(|w| w.to_string()).unwrap_or_default())
    });
    let axioms = law.check_axioms(n);
    checks.push(match axioms.failures.first() {
        None => Check::pass("F satisfies the group law axioms"),
        Some(f) => Check::fail("F satisfies the group law axioms", f.to_string()),
    });
    let additive_ok =
        (split.d_s..d).all(|i| lambda.component(i) == &crate::series::TruncatedSeries::var(lambda.ctx(), i));
    checks.push(if additive_ok {
        Check::pass("anisotropic coordinates are additive")
    } else {
        Check::fail("anisotropic coordinates are additive", "lambda is not linear on Ker rho_s")
    });

    let mut q_out = None;
    if n2 == 1 {
        let u1 = chi1.transpose();
        let q1 = explicit_q_unramified(&u1, n1 as usize, 1)?;
        let big = u1.kron(&IntMatrix::shift(n1 as usize).transpose());
        let dm = big.sub(&IntMatrix::identity(big.rows()));
        checks.push(match verify_condition_iii(&q1, &[dm], d, CertificateMode::Prime(p)) {
            Ok(_) => Check::pass(format!("Q criterion at p={p}")),
            Err(f) => Check::fail(format!("Q criterion at p={p}"), f.to_string()),
        });
        // Phi over the unramified extension has type p I - (I_d (x) P) D in the Frobenius-orbit basis.
        let v = FrobeniusPolynomial::linear_type(p, &IntMatrix::identity(d).kron(&IntMatrix::shift(n1 as usize)))?;
        let got = extract_type(&q1, &v, d);
        checks.push(if got == u {
            Check::pass(format!("extracted type p={p}"))
        } else {
            Check::fail(format!("extracted type p={p}"), format!("got {got}, expected {u}"))
        });
        q_out = Some(q1);
    }

    let summary = match (split.d_s, split.d_a) {
        (0, a) => format!("{a} additive {}", coordinates(a)),
        (s, 0) => format!("{s} {} of type p - U~_1 D", coordinates(s)),
        (s, a) => format!("{s} {} of type p - U~_1 D and {a} additive {}", coordinates(s), coordinates(a)),
    };
    let verdict = CompletionReport::verdict_of(&checks);
    Ok(CompletionReport {
        format: REPORT_FORMAT.into(),
        kind: ReportKind::Local,
        spec: torus.spec.clone(),
        degree: n,
        budget: config.budget,
        phi_degree: None,
        dimension: d,
        law: tuple_to_json(law.law()),
        lambda: tuple_to_json(&lambda),
        xi: Default::default(),
        q: q_out,
        e: Some(d),
        s_choices: None,
        local: Some(LocalSummary {
            p,
            d_s: split.d_s,
            d_a: split.d_a,
            u1_tilde: split.u1_tilde,
            lattice_basis: split.basis,
            type_coefficient: c1,
            summary,
        }),
        checks,
        verdict,
    })
}

fn coordinates(n: usize) -> &'static str {
    if n == 1 {
        "coordinate"
    } else {
        "coordinates"
    }
}

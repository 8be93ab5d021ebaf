//! Tori over `Q` split by `Q(xi)`, `xi^2 - r xi + s = 0`.

use super::{
    action_data, condition_checks, extraction_checks, integrality_check, lift_tuple, phi_checks, xi_law, xi_table,
    xi_type_checks, Check, CompletionReport, Config, ReportKind, REPORT_FORMAT,
};
use crate::arith::{CoeffRing, Integrality, MonogenicRing, NumberRing, Rational, Rationals};
use crate::error::Error;
use crate::fgl::{f_q, f_rs, hom_defect, transport, FormalGroupLaw};
use crate::fixed_pair::generic_q;
use crate::lattice::{xi_from_torus, IntMatrix, Torus, TorusKind};
use crate::series::{tuple_to_json, SeriesContext, SeriesTuple, TruncatedSeries};
use crate::weil::ExtensionBasis;

/// `[[-r, (r+1)/2], [2, -1]]`, acting on the basis index of each of the `d` coordinates.
pub fn quadratic_q(r: i64, d: usize) -> IntMatrix {
    let q = IntMatrix::from_i64(&[vec![-r, (r + 1) / 2], vec![2, -1]]);
    IntMatrix::identity(d).kron(&q)
}

/// `F_Xi` for a quadratic torus. For the norm-one torus the report also carries the
/// strong isomorphisms to `F_{r,s}` over `Z` and to `F_q` over `Z[xi]`.
pub fn quadratic_completion(torus: &Torus, config: Config) -> Result<CompletionReport, Error> {
    let TorusKind::Quadratic { r, s } = torus.kind else {
        return Err(Error::Spec("quadratic completion needs quadratic data".into()));
    };
    let d = torus.dim();
    let n = config.degree;
    let ring = torus.ring()?;
    let basis = ExtensionBasis::power(&ring);
    let xi = xi_from_torus(torus, n as u64)?;
    let mut checks: Vec<Check> = Vec::new();
    let law = xi_law(&xi, n, &mut checks)?;
    let lambda = law.logarithm()?.clone();
    xi_type_checks(&xi, &lambda, n, &mut checks);

    let action = action_data(torus, &basis)?;
    let norm_one = !torus.rep.is_trivial();
    let (generic, e) = generic_q(&action.d_set(), action.r);
    let q = if norm_one {
        let q = quadratic_q(r, d);
        let explicit = q.submatrix(0, 0, 2 * d, d);
        let spanned = generic.submatrix(0, 0, 2 * d, e);
        checks.push(if e == d && (explicit == spanned || explicit == spanned.neg()) {
            Check::pass("explicit Q matches the generic Q")
        } else {
            Check::fail("explicit Q matches the generic Q", format!("generic first columns {spanned:?}"))
        });
        q
    } else {
        generic
    };
    condition_checks(&q, &action, d, &mut checks);
    extraction_checks(&basis, d, &q, &xi, &mut checks)?;
    let phi_degree = phi_checks(&basis, d, &action, &q, &law, config, &mut checks)?;
    if norm_one && d == 1 {
        isomorphism_checks(&law, r, s, &ring, n, &mut checks)?;
    }

    let verdict = CompletionReport::verdict_of(&checks);
    Ok(CompletionReport {
        format: REPORT_FORMAT.into(),
        kind: ReportKind::Quadratic,
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
        s_choices: None,
        local: None,
        checks,
        verdict,
    })
}

/// `x (1 + c x)^{-1}` in one variable.
fn mobius(ctx: &SeriesContext<NumberRing>, c: &<NumberRing as CoeffRing>::Elem) -> SeriesTuple<NumberRing> {
    let x = TruncatedSeries::var(ctx, 0);
    let one = TruncatedSeries::constant(ctx, ctx.ring().one());
    let den = one.add(&x.scale(c));
    SeriesTuple::new(ctx, vec![x.mul(&den.inverse_with_constant(&Rational::one()))])
}

fn isomorphism_checks(
    law: &FormalGroupLaw<Rationals>,
    r: i64,
    s: i64,
    ring: &NumberRing,
    n: u32,
    checks: &mut Vec<Check>,
) -> Result<(), Error> {
    let id = vec![vec![Rational::one()]];
    let rs = f_rs(r, s, n)?;
    let g = transport(&id, law.logarithm()?, rs.logarithm_inverse()?)?;
    let g_inv = transport(&id, rs.logarithm()?, law.logarithm_inverse()?)?;
    let forward = integrality_check("strong isomorphism F -> F_{r,s} integral", &g, Integrality::Global, checks);
    integrality_check("strong isomorphism F_{r,s} -> F integral", &g_inv, Integrality::Global, checks);
    checks.push(match hom_defect(&g, law, &rs) {
        None => Check::pass("strong isomorphism F -> F_{r,s} is a homomorphism"),
        Some(f) => Check::fail("strong isomorphism F -> F_{r,s} is a homomorphism", f.to_string()),
    });
    if !forward {
        return Ok(());
    }
    let xi = ring.xi();
    let ctx = SeriesContext::new(ring.clone(), 1, n)?;
    let g_k = lift_tuple(&g, ring)?;
    let g_inv_k = lift_tuple(&g_inv, ring)?;
    let to_q = mobius(&ctx, &xi).compose(&g_k)?;
    let from_q = g_inv_k.compose(&mobius(&ctx, &MonogenicRing::neg(ring, &xi)))?;
    integrality_check("strong isomorphism F -> F_q integral over Z[xi]", &to_q, Integrality::Global, checks);
    integrality_check("strong isomorphism F_q -> F integral over Z[xi]", &from_q, Integrality::Global, checks);
    let source = FormalGroupLaw::new(lift_tuple(law.law(), ring)?)?;
    let target = f_q(ring, n)?;
    checks.push(match hom_defect(&to_q, &source, &target) {
        None => Check::pass("strong isomorphism F -> F_q is a homomorphism"),
        Some(f) => Check::fail("strong isomorphism F -> F_q is a homomorphism", f.to_string()),
    });
    Ok(())
}

//! Homomorphisms between completions: those induced by morphisms of tori, and checks
//! between two reports.

use super::{error_text, Check, CompletionReport};
use crate::arith::{Integrality, Rational, Rationals};
use crate::error::Error;
use crate::fgl::{hom_defect, hom_from_linear, transport, witness, AxiomFailure, FormalGroupLaw, IntegralityWitness};
use crate::honda::xi_fgl;
use crate::lattice::{xi_from_torus, IntMatrix, TorusKind, TorusSpec};
use crate::series::SeriesTuple;

/// The homomorphism `F_Xi -> F'_Xi` with linear coefficient `C^T`.
#[derive(Clone, Debug)]
pub struct InducedHom {
    pub linear: IntMatrix,
    pub map: SeriesTuple<Rationals>,
    pub witness: Option<IntegralityWitness>,
    pub defect: Option<AxiomFailure>,
}

impl InducedHom {
    pub fn verified(&self) -> bool {
        self.witness.is_none() && self.defect.is_none()
    }
}

/// The map induced by a morphism `T -> T'` whose map of character lattices
/// `X(T') -> X(T)` has matrix `C` (`d x d'`); requires `chi'(sigma)^T C^T = C^T chi(sigma)^T`.
pub fn induced_hom(a: &TorusSpec, b: &TorusSpec, c: &IntMatrix, degree: u32) -> Result<InducedHom, Error> {
    let ta = a.validate()?;
    let tb = b.validate()?;
    if ta.kind != tb.kind || matches!(ta.kind, TorusKind::Local { .. }) {
        return Err(Error::Spec("both tori must be over Q with the same splitting data".into()));
    }
    let (d, d2) = (ta.dim(), tb.dim());
    if c.rows() != d || c.cols() != d2 {
        return Err(Error::Spec(format!("C must be {d}x{d2}")));
    }
    let ct = c.transpose();
    for (i, (ga, gb)) in ta.rep.generators.iter().zip(&tb.rep.generators).enumerate() {
        if gb.transpose().mul(&ct) != ct.mul(&ga.transpose()) {
            return Err(Error::Spec(format!("C is not equivariant for sigma_{}", i + 1)));
        }
    }
    let (fa, _) = xi_fgl(&xi_from_torus(&ta, degree as u64)?, degree)?;
    let (fb, _) = xi_fgl(&xi_from_torus(&tb, degree as u64)?, degree)?;
    let out = hom_from_linear(&ct.to_rational().to_rows(), &fa, &fb, Integrality::Global)?;
    let defect = out.hom.hom_defect();
    Ok(InducedHom { linear: ct, map: out.hom.map, witness: out.witness, defect })
}

#[derive(Clone, Debug, PartialEq)]
pub enum CompareMode {
    /// `lambda_b^{-1} o lambda_a` and its inverse.
    StrongIso,
    /// `lambda_b^{-1} o D lambda_a` for a `d_b x d_a` matrix `D`.
    Hom(IntMatrix),
}

/// Checks whether `lambda_b^{-1} o D lambda_a` is integral (both ways for strong
/// isomorphisms) and a homomorphism, at the smaller of the two degrees.
pub fn compare_reports(a: &CompletionReport, b: &CompletionReport, mode: &CompareMode) -> Result<Vec<Check>, Error> {
    let degree = a.degree.min(b.degree);
    let (law_a, lambda_a) = a.parse_law()?;
    let (law_b, lambda_b) = b.parse_law()?;
    let (da, db) = (a.dimension, b.dimension);
    let d = match mode {
        CompareMode::StrongIso if da != db => {
            return Err(Error::Spec(format!("dimensions {da} and {db} differ")));
        }
        CompareMode::StrongIso => IntMatrix::identity(da),
        CompareMode::Hom(m) if m.rows() != db || m.cols() != da => {
            return Err(Error::Spec(format!("the matrix must be {db}x{da}")));
        }
        CompareMode::Hom(m) => m.clone(),
    };
    let mode_int = match (&a.local, &b.local) {
        (Some(x), Some(y)) if x.p != y.p => {
            return Err(Error::Spec("local reports over different primes".into()));
        }
        (Some(x), _) | (None, Some(x)) => Integrality::Local(x.p),
        (None, None) => Integrality::Global,
    };
    let ring = match mode_int {
        Integrality::Global => "Z".to_string(),
        Integrality::Local(p) => format!("Z_({p})"),
    };
    let fa = FormalGroupLaw::from_logarithm(&lambda_a.recap(degree))?;
    let fb = FormalGroupLaw::from_logarithm(&lambda_b.recap(degree))?;
    let mut checks = Vec::new();
    for (name, law, f) in [("a", &law_a, &fa), ("b", &law_b, &fb)] {
        checks.push(if law.recap(degree) == *f.law() {
            Check::pass(format!("F of report {name} matches its lambda"))
        } else {
            Check::fail(format!("F of report {name} matches its lambda"), "recomputed law differs")
        });
    }
    let rows: Vec<Vec<Rational>> = d.to_rational().to_rows();
    let forward = transport(&rows, fa.logarithm()?, fb.logarithm_inverse()?)?;
    let name = format!("lambda_b^-1 o D lambda_a integral over {ring}");
    checks.push(match witness(&forward, mode_int) {
        None => Check::pass(name),
        Some(w) => Check::fail(name, w.to_string()),
    });
    checks.push(match hom_defect(&forward, &fa, &fb) {
        None => Check::pass("lambda_b^-1 o D lambda_a is a homomorphism"),
        Some(f) => Check::fail("lambda_b^-1 o D lambda_a is a homomorphism", f.to_string()),
    });
    if *mode == CompareMode::StrongIso {
        let backward = transport(&rows, fb.logarithm()?, fa.logarithm_inverse()?);
        let name = format!("lambda_a^-1 o lambda_b integral over {ring}");
        checks.push(match backward {
            Ok(t) => match witness(&t, mode_int) {
                None => Check::pass(name),
                Some(w) => Check::fail(name, w.to_string()),
            },
            Err(e) => Check::fail(name, error_text(&e)),
        });
    }
    Ok(checks)
}

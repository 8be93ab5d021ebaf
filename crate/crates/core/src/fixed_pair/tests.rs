use super::*;
use crate::honda::{xi_fgl, FrobeniusPolynomial};
use crate::lattice::{xi_from_torus, TorusSpec};
use crate::weil::{build_phi, phi_type, ExtensionBasis};

fn m(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_i64(rows)
}

fn cyclotomic_setup(text: &str, degree: u32) -> (crate::lattice::Torus, ExtensionBasis, ActionData) {
    let t = TorusSpec::from_json(text).unwrap().validate().unwrap();
    let basis = ExtensionBasis::gamma(&t.ring().unwrap(), None).unwrap();
    let gens = t
        .thetas(&basis)
        .unwrap()
        .into_iter()
        .enumerate()
        .map(|(i, th)| ActionGenerator { label: format!("sigma_{}", i + 1), theta_t: th.transpose() })
        .collect();
    let action = ActionData::new(basis.len() * t.dim(), gens).unwrap();
    let _ = degree;
    (t, basis, action)
}

fn us_of(t: &crate::lattice::Torus) -> Vec<IntMatrix> {
    (0..t.rep.generators.len()).map(|i| t.rep.u(i)).collect()
}

#[test]
fn generic_q_examples() {
    let (q, e) = generic_q(&[IntMatrix::zeros(3, 3)], 3);
    assert_eq!((q, e), (IntMatrix::identity(3), 3));

    let (q, e) = generic_q(&[m(&[vec![-1, -1], vec![-1, -1]])], 2);
    assert_eq!(e, 1);
    assert!(q.is_unimodular());
    let col = q.submatrix(0, 0, 2, 1);
    assert!(col == m(&[vec![1], vec![-1]]) || col == m(&[vec![-1], vec![1]]));

    for r in [1i64, 3, -1, 5] {
        let (q, e) = generic_q(&[m(&[vec![-2, -r], vec![0, 0]])], 2);
        assert_eq!(e, 1);
        let col = q.submatrix(0, 0, 2, 1);
        let expected = m(&[vec![-r], vec![2]]);
        assert!(col == expected || col == expected.neg(), "r={r}");
        assert!(col[(0, 0)] > BigInt::zero() || (col[(0, 0)].is_zero() && col[(1, 0)] > BigInt::zero()));
    }

    let (q, e) = generic_q(&[IntMatrix::identity(2).neg().sub(&IntMatrix::identity(2))], 2);
    assert_eq!((q, e), (IntMatrix::identity(2), 0));
}

#[test]
fn explicit_q_unramified_examples() {
    assert_eq!(explicit_q_unramified(&m(&[vec![-1]]), 1, 3).unwrap(), IntMatrix::identity(3));
    assert_eq!(explicit_q_unramified(&m(&[vec![-1]]), 2, 1).unwrap(), m(&[vec![1, 0], vec![-1, 1]]));
    let rot = m(&[vec![0, -1], vec![1, 0]]);
    let q = explicit_q_unramified(&rot, 2, 1).unwrap();
    assert_eq!(q.submatrix(2, 0, 2, 2), rot.inverse_unimodular().unwrap());
    assert_eq!(q.submatrix(0, 0, 2, 2), IntMatrix::identity(2));
    assert!(q.submatrix(0, 2, 2, 2).is_zero());
    assert!(explicit_q_unramified(&m(&[vec![2]]), 2, 1).is_err());

    // First block columns of Q^{-1} D Q vanish and C^ D^ + D~ is invertible.
    for (u, n1, n2) in
        [(m(&[vec![-1]]), 2usize, 3usize), (rot.clone(), 4, 1), (rot.clone(), 4, 2), (m(&[vec![1]]), 4, 1)]
    {
        let d = u.rows();
        let q = explicit_q_unramified(&u, n1, n2).unwrap();
        let big = u.kron(&IntMatrix::identity(n2)).kron(&IntMatrix::shift(n1).transpose());
        let b = n2 * d;
        let n = n1 * b;
        let dm = big.sub(&IntMatrix::identity(n));
        let cert = verify_condition_iii(&q, std::slice::from_ref(&dm), b, CertificateMode::AllPrimes).unwrap();
        assert!(cert.invariant_factors.iter().all(|f| f.is_one()));
        let m_ = q.inverse_unimodular().unwrap().mul(&dm).mul(&q);
        let d_hat = m_.submatrix(0, b, b, n - b);
        let d_tilde = m_.submatrix(b, b, n - b, n - b);
        let c_hat = q.submatrix(b, 0, n - b, b);
        assert!(c_hat.mul(&d_hat).add(&d_tilde).is_unimodular());
    }
}

#[test]
fn explicit_q_cyclotomic_examples() {
    assert_eq!(explicit_q_cyclotomic(&[m(&[vec![-1]])], &[3]).unwrap(), m(&[vec![1, 0], vec![-1, 1]]));
    let q = explicit_q_cyclotomic(&[IntMatrix::identity(2), IntMatrix::identity(2)], &[3, 5]).unwrap();
    for g in 0..8 {
        assert_eq!(q.submatrix(2 * g, 0, 2, 2), IntMatrix::identity(2));
    }
    let i = m(&[vec![0, -1], vec![1, 0]]);
    let q = explicit_q_cyclotomic(std::slice::from_ref(&i), &[5]).unwrap();
    let inv = i.inverse_unimodular().unwrap();
    for k in 1..4 {
        assert_eq!(q.submatrix(2 * k, 0, 2, 2), inv.pow(k as u32));
    }
    assert!(q.is_unimodular());
}

#[test]
fn q_criterion_examples() {
    let (_, _, action) = cyclotomic_setup(r#"{"base":"Q","conductor":3,"dimension":1,"chi":[[-1]]}"#, 4);
    let ds = action.d_set();
    assert_eq!(ds[0], m(&[vec![-1, -1], vec![-1, -1]]));
    let q = explicit_q_cyclotomic(&[m(&[vec![-1]])], &[3]).unwrap();
    assert_eq!(q.inverse_unimodular().unwrap().mul(&ds[0]).mul(&q), m(&[vec![0, -1], vec![0, -2]]));
    let cert = verify_condition_iii(&q, &ds, 1, CertificateMode::AllPrimes).unwrap();
    assert_eq!(cert.stacked, m(&[vec![-1], vec![-2]]));
    assert_eq!(cert.invariant_factors, vec![BigInt::one()]);

    assert!(matches!(
        verify_condition_iii(&IntMatrix::identity(2), &ds, 1, CertificateMode::AllPrimes),
        Err(ConditionFailure::ColumnsNotVanishing { generator: 0, row: 0, col: 0 })
    ));
    let cert = verify_condition_iii(&IntMatrix::identity(2), &[IntMatrix::zeros(2, 2)], 2, CertificateMode::AllPrimes);
    assert!(cert.unwrap().invariant_factors.is_empty());

    let refl = vec![m(&[vec![0, 0], vec![0, -2]])];
    let id = IntMatrix::identity(2);
    assert!(matches!(
        verify_condition_iii(&id, &refl, 1, CertificateMode::AllPrimes),
        Err(ConditionFailure::NotInvertible { .. })
    ));
    assert!(verify_condition_iii(&id, &refl, 1, CertificateMode::Prime(3)).is_ok());
    assert!(verify_condition_iii(&id, &refl, 1, CertificateMode::Prime(2)).is_err());

    for text in [
        r#"{"base":"Q","conductor":5,"dimension":1,"chi":[[-1]]}"#,
        r#"{"base":"Q","conductor":5,"dimension":2,"chi":[[0,-1,1,0]]}"#,
        r#"{"base":"Q","conductor":15,"dimension":1,"chi":[[-1],[-1]]}"#,
        r#"{"base":"Q","conductor":15,"dimension":2,"chi":[[1,0,0,1],[0,-1,1,0]]}"#,
    ] {
        let (t, _, action) = cyclotomic_setup(text, 4);
        let crate::lattice::TorusKind::Cyclotomic { primes, .. } = &t.kind else { unreachable!() };
        let q = explicit_q_cyclotomic(&us_of(&t), primes).unwrap();
        let cert = verify_condition_iii(&q, &action.d_set(), t.dim(), CertificateMode::AllPrimes);
        assert!(cert.is_ok(), "{text}: {}", cert.unwrap_err());
        let (gq, e) = generic_q(&action.d_set(), action.r);
        assert_eq!(e, t.dim(), "{text}");
        assert!(verify_condition_iii(&gq, &action.d_set(), e, CertificateMode::AllPrimes).is_ok());
    }
}

#[test]
fn extracted_types_match_xi() {
    let v = FrobeniusPolynomial::linear_type(3, &m(&[vec![1, 2], vec![0, 1]])).unwrap();
    assert_eq!(extract_type(&IntMatrix::identity(2), &v, 2), v);

    for text in [
        r#"{"base":"Q","conductor":3,"dimension":1,"chi":[[-1]]}"#,
        r#"{"base":"Q","conductor":5,"dimension":1,"chi":[[-1]]}"#,
        r#"{"base":"Q","conductor":5,"dimension":2,"chi":[[0,-1,1,0]]}"#,
        r#"{"base":"Q","conductor":15,"dimension":2,"chi":[[1,0,0,1],[0,-1,1,0]]}"#,
    ] {
        let (t, basis, _) = cyclotomic_setup(text, 4);
        let crate::lattice::TorusKind::Cyclotomic { q: cond, primes, .. } = &t.kind else { unreachable!() };
        let q = explicit_q_cyclotomic(&us_of(&t), primes).unwrap();
        let xi = xi_from_torus(&t, 13).unwrap();
        for &p in xi.entries().keys() {
            let v = phi_type(&basis, t.dim(), p).unwrap().v;
            let u = extract_type(&q, &v, t.dim());
            let expected = FrobeniusPolynomial::linear_type(p, xi.get(p).unwrap()).unwrap();
            assert_eq!(u, expected, "{text} p={p} (q={cond})");
        }
    }
}

#[test]
fn fixed_pairs() {
    let (t, basis, action) = cyclotomic_setup(r#"{"base":"Q","conductor":3,"dimension":1,"chi":[[-1]]}"#, 8);
    let phi = build_phi(&basis, 1, 8).unwrap();
    let q = explicit_q_cyclotomic(&us_of(&t), &[3]).unwrap();
    let (law, w) = xi_fgl(&xi_from_torus(&t, 8).unwrap(), 8).unwrap();
    assert!(w.is_none());
    let pair = build_fixed_pair(&phi, &action, &q, 1, &law, 8).unwrap();
    let lin = pair.map.linear_coefficient();
    assert_eq!(lin, vec![vec![crate::arith::Rational::from_int(1)], vec![crate::arith::Rational::from_int(-1)]]);

    let wrong = build_fixed_pair(&phi, &action, &IntMatrix::identity(2), 1, &law, 8);
    assert!(matches!(wrong, Err(Error::Verification(_)) | Err(Error::Integrality(_))));

    let trivial = ActionData::new(2, Vec::new()).unwrap();
    let pair = build_fixed_pair(&phi, &trivial, &IntMatrix::identity(2), 2, phi.law(), 8).unwrap();
    assert_eq!(pair.map, SeriesTuple::identity(pair.map.ctx(), 2));
}

#[test]
fn generic_and_explicit_pairs_are_isomorphic() {
    let (t, basis, action) = cyclotomic_setup(r#"{"base":"Q","conductor":5,"dimension":1,"chi":[[-1]]}"#, 6);
    let phi = build_phi(&basis, 1, 6).unwrap();
    let q = explicit_q_cyclotomic(&us_of(&t), &[5]).unwrap();
    let (gq, e) = generic_q(&action.d_set(), action.r);
    let gq_inv = gq.inverse_unimodular().unwrap();
    // Z = first e rows of Q_g^{-1} Q I_{r,e}
    let z = gq_inv.mul(&q).submatrix(0, 0, e, 1);
    assert!(z.is_unimodular());
    let xi = xi_from_torus(&t, 6).unwrap();
    let (law, _) = xi_fgl(&xi, 6).unwrap();
    let explicit = build_fixed_pair(&phi, &action, &q, 1, &law, 6).unwrap();
    let generic = build_fixed_pair(&phi, &action, &gq, e, &law, 6).unwrap();
    let log = law.logarithm().unwrap();
    let log_inv = law.logarithm_inverse().unwrap();
    let iso = crate::fgl::transport(&z.to_rational().to_rows(), log, log_inv).unwrap();
    let back = crate::fgl::transport(&z.inverse_unimodular().unwrap().to_rational().to_rows(), log, log_inv).unwrap();
    assert!(witness(&iso, Integrality::Global).is_none());
    assert!(witness(&back, Integrality::Global).is_none());
    assert_eq!(generic.map.compose(&iso).unwrap(), explicit.map);
}

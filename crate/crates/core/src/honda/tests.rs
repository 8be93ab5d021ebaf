use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::arith::nt::kronecker;
use crate::fgl::{hom_from_linear, log_m};

fn ctx(d: usize, n: u32) -> SeriesContext<Rationals> {
    SeriesContext::new(Rationals, d, n).unwrap()
}

fn scalar_type(p: u64, c: i64) -> FrobeniusPolynomial {
    FrobeniusPolynomial::linear_type(p, &IntMatrix::from_i64(&[vec![c]])).unwrap()
}

fn log_m_tuple(n: u32) -> SeriesTuple<Rationals> {
    let c = ctx(1, n);
    SeriesTuple::new(&c, vec![log_m(&c, 0)])
}

fn int(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_i64(rows)
}

fn xi_map(d: usize, entries: &[(u64, IntMatrix)]) -> XiMap {
    XiMap::new(d, entries.iter().cloned().collect(), Provenance::User).unwrap()
}

#[test]
fn apply_examples() {
    let c = ctx(1, 8);
    let x = SeriesTuple::identity(&c, 1);
    let u = FrobeniusPolynomial::new(3, vec![RatMatrix::scalar(1, Rational::from_int(3))]).unwrap();
    assert_eq!(u.apply(&x, &trivial_sigma).component(0).coeff_of(&[1]), Rational::from_int(3));
    let v = scalar_type(3, 1).apply(&x, &trivial_sigma);
    assert_eq!(v.component(0).coeff_of(&[1]), Rational::from_int(3));
    assert_eq!(v.component(0).coeff_of(&[3]), Rational::from_int(-1));
    assert_eq!(v.component(0).num_terms(), 2);
}

#[test]
fn log_m_image_under_p_minus_delta() {
    let sign = |i: u32| if i % 2 == 1 { 1 } else { -1 };
    for p in [2u64, 3, 5] {
        let n = 12;
        let image = scalar_type(p, 1).apply(&log_m_tuple(n), &trivial_sigma);
        for i in 1..=n {
            let mut expected = Rational::frac(sign(i) * p as i64, i as i64);
            if (i as u64).is_multiple_of(p) {
                let j = i / p as u32;
                expected = &expected - &Rational::frac(sign(j), j as i64);
            }
            assert_eq!(image.component(0).coeff_of(&[i]), expected, "p={p} i={i}");
            if p != 2 && (i as u64).is_multiple_of(p) {
                assert!(expected.is_zero());
            }
        }
    }
}

#[test]
fn type_checks() {
    for p in [2, 3, 5] {
        assert!(scalar_type(p, 1).is_type(&log_m_tuple(14), 14, &trivial_sigma).holds());
    }
    let check = scalar_type(3, 2).is_type(&log_m_tuple(14), 14, &trivial_sigma);
    let w = check.witness.unwrap();
    assert_eq!(w.monomial, vec![3]);
    assert_eq!(w.coefficient, "-1");
}

#[test]
fn lambda_from_type_examples() {
    let c = ctx(1, 30);
    let u = FrobeniusPolynomial::new(3, vec![RatMatrix::scalar(1, Rational::from_int(3))]).unwrap();
    assert_eq!(u.lambda_from_type(&c, &trivial_sigma).unwrap(), SeriesTuple::identity(&c, 1));

    for p in [2u64, 3, 5] {
        let lambda = scalar_type(p, 1).lambda_from_type(&c, &trivial_sigma).unwrap();
        let mut expected = Vec::new();
        let mut pk = 1u64;
        while pk <= 30 {
            expected.push((Monomial::from_exps(&[pk as u32]), Rational::new(BigInt::from(1), BigInt::from(pk))));
            pk *= p;
        }
        assert_eq!(*lambda.component(0), TruncatedSeries::from_terms(&c, expected));
    }

    let c2 = ctx(2, 12);
    let u = FrobeniusPolynomial::linear_type(2, &int(&[vec![0, 1], vec![1, 0]])).unwrap();
    let lambda = u.lambda_from_type(&c2, &trivial_sigma).unwrap();
    assert!(u.is_type(&lambda, 12, &trivial_sigma).holds());
    assert_eq!(lambda.component(0).coeff_of(&[0, 2]), Rational::frac(1, 2));
    assert_eq!(lambda.component(0).coeff_of(&[4, 0]), Rational::frac(1, 4));
}

#[test]
fn split_xi_gives_multiplicative_logarithm() {
    let entries: Vec<(u64, IntMatrix)> = primes_up_to(10).into_iter().map(|p| (p, IntMatrix::identity(2))).collect();
    let xi = xi_map(2, &entries);
    let c = ctx(2, 10);
    let lambda = xi_lambda(&xi, &c).unwrap();
    for m in 1..=10u32 {
        assert_eq!(lambda.component(1).coeff_of(&[0, m]), Rational::frac(1, m as i64));
        assert_eq!(lambda.component(1).coeff_of(&[m, 0]), Rational::zero());
    }
    let (law, w) = xi_fgl(&xi, 6).unwrap();
    assert!(w.is_none());
    // sum X^m/m = -log(1-X), so F_Xi = X + Y - XY, which [-1] carries to the multiplicative law.
    let c4 = ctx(4, 6);
    for l in 0..2 {
        let (x, y) = (TruncatedSeries::var(&c4, l), TruncatedSeries::var(&c4, l + 2));
        assert_eq!(*law.law().component(l), x.add(&y).sub(&x.mul(&y)));
    }
    let mult = crate::fgl::multiplicative_power(Rationals, 2, 6).unwrap();
    let minus = RatMatrix::scalar(2, Rational::from_int(-1)).to_rows();
    let iso = hom_from_linear(&minus, &law, &mult, Integrality::Global).unwrap();
    assert!(iso.integral());
    assert_eq!(iso.hom.map, SeriesTuple::identity(&ctx(2, 6), 2).left_mul_rational(&minus));
}

#[test]
fn norm_one_q5_logarithm() {
    let n = 14u32;
    let entries: Vec<(u64, IntMatrix)> =
        primes_up_to(n as u64).into_iter().map(|p| (p, int(&[vec![kronecker(5, p) as i64]]))).collect();
    let xi = xi_map(1, &entries);
    assert_eq!(xi.get(2), Some(&int(&[vec![-1]])));
    assert_eq!(xi.get(5), Some(&int(&[vec![0]])));
    assert_eq!(xi.get(11), Some(&int(&[vec![1]])));
    let lambda = xi_lambda(&xi, &ctx(1, n)).unwrap();
    let expected = [1, -1, -1, 1, 0, 1];
    for (i, e) in expected.iter().enumerate() {
        let m = i as i64 + 1;
        assert_eq!(lambda.component(0).coeff_of(&[m as u32]), Rational::frac(*e, m));
    }
    // Completely multiplicative Kronecker symbol as an independent oracle.
    for m in 1..=n as i64 {
        let a: i32 = factorize(m as u64).iter().map(|&(p, t)| kronecker(5, p).pow(t)).product();
        assert_eq!(lambda.component(0).coeff_of(&[m as u32]), Rational::frac(a as i64, m));
    }
}

#[test]
fn norm_one_q3_with_ramified_entry_three() {
    let n = 12u32;
    let entries: Vec<(u64, IntMatrix)> = primes_up_to(n as u64)
        .into_iter()
        .map(|p| (p, int(&[vec![if p == 3 { 3 } else { kronecker(-3, p) as i64 }]])))
        .collect();
    let xi = xi_map(1, &entries);
    assert_eq!(xi.a_m(3).unwrap(), int(&[vec![3]]));
    assert_eq!(xi.a_m(9).unwrap(), int(&[vec![9]]));
    let (law, w) = xi_fgl(&xi, n).unwrap();
    assert!(w.is_none(), "{w:?}");
    assert!(law.check_axioms(n).passed());
}

#[test]
fn glob_residual_matches_direct_sum() {
    let n = 14u32;
    let entries: Vec<(u64, IntMatrix)> = primes_up_to(n as u64)
        .into_iter()
        .map(|p| match p {
            2 => (p, int(&[vec![0, -1], vec![1, 0]])),
            3 => (p, int(&[vec![3, 0], vec![0, 3]])),
            _ => (p, int(&[vec![0, 1], vec![-1, 0]]).pow((p % 4) as u32)),
        })
        .collect();
    let xi = xi_map(2, &entries);
    let c = ctx(2, n);
    let lambda = xi_lambda(&xi, &c).unwrap();
    for p in primes_up_to(13) {
        let u = xi.type_at(p).unwrap();
        let residual = u.apply(&lambda, &trivial_sigma);
        let mut comps = vec![Vec::new(), Vec::new()];
        for m in (1..=n as u64).filter(|m| m % p != 0) {
            let a = xi.a_m(m).unwrap();
            for (l, comp) in comps.iter_mut().enumerate() {
                for k in 0..2 {
                    let mut e = vec![0; 2];
                    e[k] = m as u32;
                    let coeff = Rational::new(&a[(l, k)] * BigInt::from(p), BigInt::from(m));
                    comp.push((Monomial::from_exps(&e), coeff));
                }
            }
        }
        let expected = SeriesTuple::new(&c, comps.into_iter().map(|t| TruncatedSeries::from_terms(&c, t)).collect());
        assert_eq!(residual, expected, "p={p}");
        assert!(u.is_type(&lambda, n, &trivial_sigma).holds());
    }
}

#[test]
fn non_commuting_xi_is_rejected() {
    let mut entries = BTreeMap::new();
    entries.insert(2, int(&[vec![1, 1], vec![0, 1]]));
    entries.insert(3, int(&[vec![1, 0], vec![1, 1]]));
    assert!(matches!(XiMap::new(2, entries, Provenance::User), Err(Error::Spec(_))));
}

#[test]
fn hom_criterion_identity() {
    let u = FrobeniusPolynomial::linear_type(5, &int(&[vec![1, 0], vec![0, -1]])).unwrap();
    let HomCriterion::Witness(w) = hom_criterion_witness(&u, &RatMatrix::identity(2), &u, 4).unwrap() else {
        panic!("identity must have a witness");
    };
    assert_eq!(w.coeffs(), &[RatMatrix::identity(2)]);
}

#[test]
fn remark_isomorphism_for_odd_primes() {
    let d = RatMatrix::from_i64(&[vec![1, 1], vec![-1, 1]]);
    for p in [2u64, 3, 5, 7] {
        let u = FrobeniusPolynomial::linear_type(p, &int(&[vec![1, 0], vec![0, -1]])).unwrap();
        let u2 = FrobeniusPolynomial::linear_type(p, &int(&[vec![0, 1], vec![1, 0]])).unwrap();
        let iso = iso_criterion(&u, &d, &u2, 4).unwrap();
        let HomCriterion::Witness(w) = &iso.forward else { panic!("u D = D u' holds at every p") };
        assert_eq!(w.coeffs(), std::slice::from_ref(&d));
        assert_eq!(iso.succeeded(), p != 2, "p={p}");
        if p == 2 {
            assert!(matches!(iso.backward, Some(HomCriterion::Failure { step: 0, .. })));
        }
    }
}

#[test]
fn delta_bound() {
    assert_eq!(delta_degree_bound(2, 8), 4);
    assert_eq!(delta_degree_bound(3, 8), 2);
    assert_eq!(delta_degree_bound(11, 8), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witness_implies_integral_hom(p in prop::sample::select(vec![2u64, 3, 5]), c in -3i64..=3, c2 in -3i64..=3, dd in -4i64..=4) {
        prop_assume!(dd != 0);
        let n = 10;
        let u = scalar_type(p, c);
        let u2 = scalar_type(p, c2);
        let cx = ctx(1, n);
        let f = FormalGroupLaw::from_logarithm(&u.lambda_from_type(&cx, &trivial_sigma).unwrap()).unwrap();
        let f2 = FormalGroupLaw::from_logarithm(&u2.lambda_from_type(&cx, &trivial_sigma).unwrap()).unwrap();
        let d = RatMatrix::from_i64(&[vec![dd]]);
        let crit = hom_criterion_witness(&u2, &d, &u, delta_degree_bound(p, n)).unwrap();
        if crit.succeeded() {
            let hom = hom_from_linear(&d.to_rows(), &f, &f2, Integrality::Local(p)).unwrap();
            prop_assert!(hom.integral(), "{:?}", hom.witness);
        }
    }

    #[test]
    fn lambda_from_type_is_of_type(p in prop::sample::select(vec![2u64, 3]), a in -2i64..=2, b in -2i64..=2, c in -2i64..=2, e in -2i64..=2) {
        let u = FrobeniusPolynomial::from_type_tail(p, 2, &[int(&[vec![a, b], vec![c, e]]), int(&[vec![b, 0], vec![a, c]])]).unwrap();
        let lambda = u.lambda_from_type(&ctx(2, 10), &trivial_sigma).unwrap();
        prop_assert!(lambda.is_tangent_to_identity());
        prop_assert!(u.is_type(&lambda, 10, &trivial_sigma).holds());
    }
}

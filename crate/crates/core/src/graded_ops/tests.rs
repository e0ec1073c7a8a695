use proptest::prelude::*;

use super::*;
use crate::algebra::{word, CliffordElement, Mat};
use crate::scalar::{q, ExactComplex};

type E = ExactComplex;
type Op = CliffordOperator<E>;

fn x(n: usize, i: usize) -> Op {
    Op::coordinate(n, 1, i)
}

fn d(n: usize, i: usize) -> Op {
    Op::derivative(n, 1, i)
}

fn one(n: usize) -> Op {
    Op::identity(n, 1)
}

fn cst(n: usize, v: E) -> Op {
    Op::multiplication(CliffordElement::scalar(n, 1, v))
}

fn cword(n: usize, axes: &[usize]) -> Op {
    Op::multiplication(CliffordElement::basis(n, 1, word::from_axes(axes)))
}

fn poly(n: usize, terms: &[(&[(usize, u32)], i64)]) -> JetSection<E, crate::algebra::Clifford> {
    let mut s = JetSection::zero(n, 1, 8);
    for (pairs, c) in terms {
        let m = JetSection::monomial(
            CliffordElement::scalar(n, 1, q(*c, 1)),
            MultiIndex::from_pairs(n, pairs).unwrap(),
            0,
            8,
        )
        .unwrap();
        s = s.try_add(&m).unwrap();
    }
    s
}

#[test]
fn leibniz_examples() {
    assert_eq!(&d(1, 1) * &x(1, 1), &(&x(1, 1) * &d(1, 1)) + &one(1));
    let x2 = &x(1, 1) * &x(1, 1);
    assert_eq!(&d(1, 1) * &x2, &(&x2 * &d(1, 1)) + &cst(1, q(2, 1)).compose(&x(1, 1)).unwrap());
}

#[test]
fn composition_matches_sequential_application_on_monomial_basis() {
    let n = 2;
    let a = &x(n, 1) * &d(n, 2);
    let b = &x(n, 2) * &d(n, 1);
    let claimed = &(&(&x(n, 1) * &x(n, 2)) * &(&d(n, 1) * &d(n, 2))) + &(&x(n, 1) * &d(n, 1));
    assert_eq!(a.compose(&b).unwrap(), claimed);
    let basis: [&[(usize, u32)]; 5] = [&[], &[(1, 1)], &[(2, 1)], &[(1, 1), (2, 1)], &[(1, 2)]];
    for mono in basis {
        let s = poly(n, &[(mono, 1)]);
        let seq = a.apply(&b.apply(&s, &ParamValue::Formal).unwrap(), &ParamValue::Formal).unwrap();
        let direct = claimed.apply(&s, &ParamValue::Formal).unwrap();
        assert!(seq.same_terms(&direct), "monomial {mono:?}");
    }
}

#[test]
fn grading_examples() {
    let n = 3;
    let m = &(&x(n, 1) * &cword(n, &[2])) * &d(n, 3);
    assert_eq!(m.grading_order(&GradingWeights::CLIFFORD), Some(1));
    let px = &Op::parameter(1, 1) * &x(1, 1);
    assert_eq!(px.grading_order(&GradingWeights::LINE_BUNDLE), Some(1));
    let ra = cst(3, q(5, 2)).compose(&Op::parameter(3, 1)).unwrap();
    assert_eq!(ra.grading_order(&GradingWeights::ODD), Some(1));
    assert_eq!(Op::zero(2, 1).grading_order(&GradingWeights::CLIFFORD), None);
}

#[test]
fn top_part_examples() {
    let a = &d(1, 1) + &x(1, 1);
    assert_eq!(a.top_part(&GradingWeights::CLIFFORD), d(1, 1));
    let b = &x(1, 1) * &d(1, 1);
    assert_eq!(b.top_part(&GradingWeights::CLIFFORD), b);
}

#[test]
fn top_part_of_line_bundle_connection() {
    // ∂_1 + p Γ^L_1 with Γ^L_1 = -½ x_2 F_12, plus lower-order ½Γ^det_1 + Γ^E_1 linear jets.
    let n = 2;
    let p = Op::parameter(n, 1);
    let gamma_l = cst(n, q(-1, 2)).compose(&x(n, 2)).unwrap().scale(&E::new(q(0, 1).re, q(3, 1).re));
    let lower = cst(n, q(1, 3)).compose(&x(n, 1)).unwrap() + cst(n, q(-2, 5)).compose(&x(n, 2)).unwrap();
    let conn = &(&d(n, 1) + &(&p * &gamma_l)) + &lower;
    let top = conn.top_part(&GradingWeights::LINE_BUNDLE);
    assert_eq!(top, &d(n, 1) + &(&p * &gamma_l));
    assert!(lower.grading_order(&GradingWeights::LINE_BUNDLE).unwrap() <= -1);
}

#[test]
fn model_operator_examples() {
    let n = 2;
    let a = &cword(n, &[1, 2]) * &d(n, 1);
    let m = a.model_operator(&GradingWeights::CLIFFORD).unwrap();
    let want = ExteriorOperator::term(
        crate::algebra::ExteriorElement::basis(n, 1, 0b11),
        MultiIndex::unit(n),
        MultiIndex::axis(n, 1, 1),
        0,
    );
    assert_eq!(m, want);
    let plain = &(&d(n, 1) * &d(n, 1)) + &(&x(n, 1) * &d(n, 2));
    let m = plain.model_operator(&GradingWeights::CLIFFORD).unwrap();
    assert_eq!(m, (&d(n, 1) * &d(n, 1)).map_coefficients(crate::algebra::exterior_symbol));
    assert!(plain.model_operator(&GradingWeights::LINE_BUNDLE).is_err());
}

#[test]
fn apply_examples() {
    let s = poly(1, &[(&[(1, 2)], 1)]);
    let r = d(1, 1).apply(&s, &ParamValue::Formal).unwrap();
    assert!(r.same_terms(&poly(1, &[(&[(1, 1)], 2)])));
    let s = poly(1, &[(&[(1, 1)], 1)]);
    let r = (&x(1, 1) * &d(1, 1)).apply(&s, &ParamValue::Formal).unwrap();
    assert!(r.same_terms(&s));
}

#[test]
fn apply_reports_overflow_on_exact_jets() {
    let s = JetSection::monomial(CliffordElement::<E>::one(1, 1), MultiIndex::axis(1, 1, 2), 0, 2).unwrap();
    let err = x(1, 1).apply(&s, &ParamValue::Formal).unwrap_err();
    assert_eq!(err, crate::Error::TruncationOverflow { degree: 3, bound: 2 });
}

#[test]
fn apply_loses_validity_on_truncated_jets() {
    let mut s = poly(2, &[(&[], 1), (&[(1, 2)], 3), (&[(1, 1), (2, 2)], 1)]);
    s.truncate_validity(3);
    let lap = Op::laplacian(2, 1);
    let r = lap.apply(&s, &ParamValue::Formal).unwrap();
    assert_eq!(r.valid_through(), Some(1));
    let r2 = lap.apply(&r, &ParamValue::Formal);
    assert!(matches!(r2, Err(crate::Error::InsufficientPrecision(_))));
}

/// `Q_p = -(∂_i - (p/2) x_j F_ij)² - p(2ω + τ)` on the constant section, against the
/// hand expansion `-(p²/4) Σ_i (Σ_j F_ij x_j)² - p(2ω + τ)`.
#[test]
fn line_bundle_model_on_constant_section() {
    let n = 2;
    let f12 = E::new(q(0, 1).re, q(3, 2).re);
    let fmat = [[E::new(q(0, 1).re, q(0, 1).re), f12.clone()], [-f12.clone(), q(0, 1)]];
    let twist = 2;
    let omega = Mat::diagonal(vec![q(0, 1), q(-3, 2)]);
    let tau = q(3, 2);
    let id = || CliffordElement::<E>::one(n, twist);
    let p = Op::parameter(n, twist);
    let mut qp = Op::zero(n, twist);
    for i in 1..=n {
        let mut conn = Op::derivative(n, twist, i);
        for j in 1..=n {
            let c = fmat[i - 1][j - 1].clone() * q(-1, 2);
            conn = conn + (&p * &Op::coordinate(n, twist, j)).compose(&Op::multiplication(id().scale(&c))).unwrap();
        }
        qp = qp - &conn * &conn;
    }
    let pot = omega.scale(&q(2, 1)) + Mat::scalar(twist, tau.clone());
    qp = qp - &p * &Op::multiplication(CliffordElement::matrix(n, pot.clone()));
    let one_jet = JetSection::constant(id(), 4);
    let got = qp.apply(&one_jet, &ParamValue::Formal).unwrap();

    let mut want = JetSection::zero(n, twist, 4);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let c = fmat[i][j].clone() * fmat[i][k].clone() * q(-1, 4);
                let xm = MultiIndex::axis(n, j + 1, 1).plus(&MultiIndex::axis(n, k + 1, 1));
                want = want.try_add(&JetSection::monomial(id().scale(&c), xm, 2, 4).unwrap()).unwrap();
            }
        }
    }
    want = want
        .try_add(&JetSection::monomial(CliffordElement::matrix(n, -pot), MultiIndex::unit(n), 1, 4).unwrap())
        .unwrap();
    assert!(got.same_terms(&want));
    assert_eq!(qp.grading_order(&GradingWeights::LINE_BUNDLE), Some(2));
}

pub(crate) fn arb_operator(n: usize, max_terms: usize) -> impl Strategy<Value = Op> {
    let mono = (
        prop::collection::vec(0u32..3, n),
        prop::collection::vec(0u32..3, n),
        0u32..(1 << n),
        0u32..3,
        -4i64..5,
        1i64..4,
    );
    prop::collection::vec(mono, 1..=max_terms).prop_map(move |ms| {
        let mut op = Op::zero(n, 1);
        for (xe, de, w, p, num, den) in ms {
            op.add_term(
                MonomialKey {
                    x: MultiIndex::from_exponents(xe),
                    d: MultiIndex::from_exponents(de),
                    param: p,
                },
                CliffordElement::from_word(n, Mat::scalar(1, q(num, den)), w),
            );
        }
        op
    })
}

fn arb_triple() -> impl Strategy<Value = (Op, Op, Op)> {
    (1usize..=3).prop_flat_map(|n| (arb_operator(n, 4), arb_operator(n, 4), arb_operator(n, 4)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn filtration_inequality((a, b, _) in arb_triple()) {
        let ab = a.compose(&b).unwrap();
        for (_, w) in GradingWeights::PRESETS {
            if let (Some(oab), Some(oa), Some(ob)) = (ab.grading_order(&w), a.grading_order(&w), b.grading_order(&w)) {
                prop_assert!(oab <= oa + ob);
            }
        }
    }

    #[test]
    fn composition_is_associative((a, b, c) in arb_triple()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn top_part_is_idempotent((a, _, _) in arb_triple()) {
        for (_, w) in GradingWeights::PRESETS {
            let t = a.top_part(&w);
            prop_assert_eq!(t.top_part(&w), t);
        }
    }

    #[test]
    fn apply_is_a_homomorphism((a, b, _) in arb_triple(), coeffs in prop::collection::vec(-3i64..4, 4)) {
        let n = a.dim();
        let mut s = JetSection::zero(n, 1, 16);
        for (k, c) in coeffs.iter().enumerate() {
            let xm = MultiIndex::axis(n, 1 + k % n, (k / n) as u32 + (k % 2) as u32);
            s = s.try_add(&JetSection::monomial(CliffordElement::scalar(n, 1, q(*c, 1)), xm, 0, 16).unwrap()).unwrap();
        }
        let lhs = a.compose(&b).unwrap().apply(&s, &ParamValue::Formal).unwrap();
        let rhs = a.apply(&b.apply(&s, &ParamValue::Formal).unwrap(), &ParamValue::Formal).unwrap();
        prop_assert!(lhs.same_terms(&rhs));
    }
}

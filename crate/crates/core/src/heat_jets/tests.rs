use super::*;
use crate::algebra::word;
use crate::graded_ops::{GradingWeights, MultiIndex};
use crate::scalar::{factorial, q, qc, ExactComplex};

type E = ExactComplex;
type Op = CliffordOperator<E>;

/// Defects of the transport equations `(j + x·∂) Φ_j + D2 Φ_{j-1} = 0` and `x·∂ Φ_0 = 0`,
/// which are what `(∂_t + D2)(q_t Σ t^j Φ_j) = q_t t^J D2 Φ_J` reduces to for a flat
/// metric and a radial-gauge operator.
fn transport_defects(d2: &Op, phis: &[JetSection<E, Clifford>]) -> Vec<JetSection<E, Clifford>> {
    let mut out = vec![phis[0].euler()];
    for j in 1..phis.len() {
        let lhs = phis[j].scale(&E::from_int(j as i64)).try_add(&phis[j].euler()).unwrap();
        let rhs = d2.apply(&phis[j - 1], &ParamValue::Formal).unwrap();
        out.push(lhs.try_add(&rhs).unwrap());
    }
    out
}

/// Taylor coefficients of `e^{-tV}` in `t`: `(-V)^j / j!`.
fn exp_coefficients(v: &CliffordElement<E>, j_max: usize) -> Vec<CliffordElement<E>> {
    (0..=j_max)
        .map(|j| {
            let inv = E::new(num::BigRational::new(1.into(), factorial(j as u32)), num::zero());
            (-v).pow(j as u32).scale(&inv)
        })
        .collect()
}

fn minus_laplacian(n: usize, twist: usize) -> Op {
    -Op::laplacian(n, twist)
}

#[test]
fn constant_potential_gives_exponential_coefficients() {
    let cases: Vec<CliffordElement<E>> = vec![
        CliffordElement::matrix(1, Mat::scalar(1, q(3, 2))),
        CliffordElement::matrix(
            2,
            Mat::from_rows(vec![vec![q(1, 2), qc((0, 1), (1, 3))], vec![qc((-2, 1), (0, 1)), q(1, 1)]]).unwrap(),
        ),
        &CliffordElement::matrix(3, Mat::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(0, 1), q(-1, 1)]]).unwrap())
            + &CliffordElement::from_word(3, Mat::scalar(2, qc((0, 1), (1, 2))), word::from_axes(&[1, 3])),
    ];
    for v in cases {
        let (n, twist) = (v.dim(), v.twist());
        let d2 = minus_laplacian(n, twist) + Op::multiplication(v.clone());
        let hc = theta_recursion(&d2, &GeometryJets::flat(n, twist), 6, 14).unwrap();
        let want = exp_coefficients(&v, 6);
        let phis: Vec<_> = want.iter().map(|c| JetSection::constant(c.clone(), 14)).collect();
        for d in transport_defects(&d2, &phis) {
            assert!(d.is_zero(), "oracle coefficients must solve the transport equations");
        }
        for (j, theta) in hc.thetas.iter().enumerate() {
            assert!(theta.same_terms(&phis[j]), "n={n} j={j}");
        }
    }
}

#[test]
fn theta_zero_is_identity_in_flat_geometry() {
    let n = 2;
    let d2 = minus_laplacian(n, 1)
        + Op::coordinate(n, 1, 1).compose(&Op::derivative(n, 1, 2)).unwrap()
        + Op::multiplication(CliffordElement::basis(n, 1, 0b11));
    let hc = theta_recursion(&d2, &GeometryJets::flat(n, 1), 2, 6).unwrap();
    assert!(hc.thetas[0].same_terms(&JetSection::constant(CliffordElement::one(n, 1), 6)));
}

#[test]
fn free_laplacian_has_no_corrections() {
    let hc = theta_recursion(&minus_laplacian(3, 1), &GeometryJets::flat(3, 1), 4, 8).unwrap();
    assert!(hc.thetas[1..].iter().all(|t| t.is_zero()));
}

fn sample_twist_curvature() -> TwistCurvature<E> {
    let mut fe = TwistCurvature::zero(2, 2);
    fe.set(0, 1, Mat::from_rows(vec![vec![qc((0, 1), (1, 1)), q(0, 1)], vec![q(0, 1), qc((0, 1), (-1, 2))]]).unwrap());
    fe
}

#[test]
fn recursion_solves_transport_equations_with_radial_gauge_field() {
    let fe = sample_twist_curvature();
    let geo = GeometryJets::flat(2, 2).with_twist_connection(&fe);
    let harmonic = Op::coordinate(2, 2, 1).compose(&Op::coordinate(2, 2, 1)).unwrap().scale(&q(1, 3));
    let d2 = dirac_squared(&geo, &fe) + harmonic;
    let hc = theta_recursion(&d2, &geo, 4, 10).unwrap();
    for (j, d) in transport_defects(&d2, &hc.thetas).iter().enumerate() {
        assert!(d.is_zero(), "defect at j={j}: {d:?}");
    }
}

#[test]
fn grading_bounds_are_checked_on_every_step() {
    let fe = sample_twist_curvature();
    let geo = GeometryJets::flat(2, 2).with_twist_connection(&fe);
    let hc = theta_recursion(&dirac_squared(&geo, &fe), &geo, 3, 8).unwrap();
    let cg: Vec<_> = hc.grading_checks.iter().filter(|c| c.preset == "cG").collect();
    assert_eq!(cg.len(), 4);
    for c in cg {
        assert!(c.order.map_or(true, |o| o <= 2 * c.j as i64));
    }
}

fn sample_curvature() -> CurvatureTensor<E> {
    let h = Mat::from_rows(vec![
        vec![q(1, 1), q(1, 2), q(0, 1), q(0, 1)],
        vec![q(1, 2), q(-1, 1), q(1, 3), q(0, 1)],
        vec![q(0, 1), q(1, 3), q(2, 1), q(1, 1)],
        vec![q(0, 1), q(0, 1), q(1, 1), q(1, 2)],
    ])
    .unwrap();
    let k = Mat::from_rows(vec![
        vec![q(0, 1), q(1, 1), q(0, 1), q(1, 1)],
        vec![q(1, 1), q(1, 1), q(0, 1), q(0, 1)],
        vec![q(0, 1), q(0, 1), q(-1, 1), q(0, 1)],
        vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)],
    ])
    .unwrap();
    CurvatureTensor::kulkarni_nomizu(&h, &k).add(&CurvatureTensor::constant(4, q(1, 5)))
}

#[test]
fn curvature_tensor_symmetries() {
    assert!(sample_curvature().is_algebraic());
    let sphere = CurvatureTensor::constant(3, q(1, 1));
    assert_eq!(*sphere.get(0, 1, 0, 1), q(1, 1));
    assert_eq!(sphere.scalar_curvature(), q(6, 1));
}

#[test]
fn top_part_commutes_with_recursion() {
    let rm = sample_curvature();
    let mut fe = TwistCurvature::zero(4, 1);
    fe.set(0, 1, Mat::scalar(1, qc((0, 1), (1, 1))));
    fe.set(2, 3, Mat::scalar(1, qc((0, 1), (-2, 1))));
    let geo = GeometryJets::from_curvature(&rm, 1).with_twist_connection(&fe);
    let d2 = dirac_squared(&geo, &fe);
    let w = GradingWeights::CLIFFORD;
    assert_eq!(d2.grading_order(&w), Some(2));
    let top = d2.top_part(&w);
    let j_max = 2;
    let full = theta_recursion(&d2, &geo, j_max, 8).unwrap();
    let truncated = theta_recursion(&top, &geo, j_max, 8).unwrap();
    for j in 0..=j_max {
        let a = full.thetas[j].weight_part(&w, 2 * j as i64);
        let b = truncated.thetas[j].weight_part(&w, 2 * j as i64);
        assert!(a.same_terms(&b), "j={j}");
    }
    assert!(!full.thetas[2].weight_part(&w, 4).is_zero());
}

#[test]
fn supertrace_density_of_twist_term() {
    let f12 = qc((0, 1), (3, 1));
    let mut fe = TwistCurvature::zero(2, 1);
    fe.set(0, 1, Mat::scalar(1, f12.clone()));
    let geo = GeometryJets::flat(2, 1).with_twist_connection(&fe);
    let hc = theta_recursion(&dirac_squared(&geo, &fe), &geo, 1, 4).unwrap();
    let theta1 = hc.thetas[1].value_at_origin(&ParamValue::Formal);
    assert_eq!(theta1.coefficient(0b11), Mat::scalar(1, -f12.clone()));
    let density = hc.supertrace_density().unwrap();
    // (4π)^{-1} (-2i)(-F_12) = i F_12 / (2π)
    assert_eq!(density.pi_power, -1);
    assert_eq!(density.coeff, f12 * qc((0, 1), (1, 2)));
}

#[test]
fn supertrace_density_vanishes_without_clifford_content() {
    let d2 = minus_laplacian(2, 1) + Op::multiplication(CliffordElement::scalar(2, 1, q(2, 1)));
    let hc = theta_recursion(&d2, &GeometryJets::flat(2, 1), 1, 4).unwrap();
    assert_eq!(hc.supertrace_density().unwrap().coeff, q(0, 1));
    let free = theta_recursion(&minus_laplacian(2, 1), &GeometryJets::flat(2, 1), 1, 4).unwrap();
    assert_eq!(free.supertrace_density().unwrap().coeff, q(0, 1));
    let odd = theta_recursion(&minus_laplacian(3, 1), &GeometryJets::flat(3, 1), 2, 4).unwrap();
    assert_eq!(odd.supertrace_density(), Err(Error::OddDimension(3)));
}

fn taylor_exp(a: &Mat<C64>) -> Mat<C64> {
    let mut term = Mat::identity(a.dim());
    let mut acc = term.clone();
    for k in 1..40 {
        term = term.matmul(a).scale(&C64::new(1.0 / k as f64, 0.0));
        acc = acc + term.clone();
    }
    acc
}

#[test]
fn diagonal_value_tracks_exact_kernel() {
    let v = Mat::from_rows(vec![vec![q(1, 2), q(1, 4)], vec![q(1, 4), q(1, 1)]]).unwrap();
    let d2 = minus_laplacian(2, 2) + Op::multiplication(CliffordElement::matrix(2, v.clone()));
    let hc = theta_recursion(&d2, &GeometryJets::flat(2, 2), 6, 12).unwrap();
    let t = q(1, 10);
    let got = hc.diagonal_value(&t, &ParamValue::Formal, 2).coefficient(0);
    let exact = taylor_exp(&v.to_c64().scale(&C64::new(-0.1, 0.0)));
    let pref = 1.0 / (4.0 * std::f64::consts::PI * 0.1);
    let err = (got - exact.scale(&C64::new(pref, 0.0))).max_abs();
    assert!(err < 1e-8 * pref, "err = {err}");
    let j0 = theta_recursion(&d2, &GeometryJets::flat(2, 2), 0, 2).unwrap();
    let val = j0.diagonal_value(&q(1, 2), &ParamValue::Formal, 2);
    assert!((val.coefficient(0) - Mat::scalar(2, C64::new(1.0 / (2.0 * std::f64::consts::PI), 0.0))).max_abs() < 1e-15);
}

#[test]
fn parameter_ladder_in_line_bundle_model() {
    // Q_p = -(∂_i - (p/2) x_j F_ij)² - p(2ω + τ) with m = 1.
    let n = 2;
    let f12 = qc((0, 1), (-1, 1));
    let p = Op::parameter(n, 2);
    let mut qp = Op::zero(n, 2);
    for (i, j, f) in [(1, 2, f12.clone()), (2, 1, -f12.clone())] {
        let conn = Op::derivative(n, 2, i) + (&p * &Op::coordinate(n, 2, j)).scale(&(f * q(-1, 2)));
        qp = qp - &conn * &conn;
    }
    let pot = Mat::diagonal(vec![q(-1, 1), q(1, 1)]);
    qp = qp + &p * &Op::multiplication(CliffordElement::matrix(n, pot));
    assert_eq!(qp.grading_order(&GradingWeights::LINE_BUNDLE), Some(2));
    let hc = theta_recursion(&qp, &GeometryJets::flat(n, 2), 4, 10).unwrap();
    for (j, theta) in hc.thetas.iter().enumerate() {
        assert!(theta.grading_order(&GradingWeights::LINE_BUNDLE).map_or(true, |o| o <= 2 * j as i64));
        for p_exp in theta.at_origin().keys() {
            assert!(*p_exp as usize <= j, "Θ_{j}(0) has p^{p_exp}");
        }
    }
    assert!(hc.thetas[2].at_origin().contains_key(&2));
}

#[test]
fn curved_recursion_tracks_precision() {
    let rm = CurvatureTensor::constant(2, q(1, 1));
    let geo = GeometryJets::from_curvature(&rm, 1);
    let d2 = dirac_squared(&geo, &TwistCurvature::zero(2, 1));
    let hc = theta_recursion(&d2, &geo, 2, 6).unwrap();
    assert_eq!(hc.thetas[0].valid_through(), Some(6));
    assert_eq!(hc.thetas[2].valid_through(), Some(2));
    assert!(!hc.thetas[1].value_at_origin(&ParamValue::Formal).is_zero());
}

#[test]
fn rejects_bad_bounds_and_overflow() {
    let d2 = minus_laplacian(1, 1);
    assert!(matches!(theta_recursion(&d2, &GeometryJets::flat(1, 1), 3, 5), Err(Error::InvalidInput(_))));
    let cubic = Op::term(CliffordElement::one(1, 1), MultiIndex::axis(1, 1, 3), MultiIndex::unit(1), 0);
    let err = theta_recursion(&(d2 + cubic), &GeometryJets::flat(1, 1), 3, 6).unwrap_err();
    assert!(matches!(err, Error::TruncationOverflow { .. }));
}

use num::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::scalar::{q, ExactComplex};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rot(b: C64) -> Mat<C64> {
    Mat::from_rows(vec![vec![C64::zero(), b], vec![-b, C64::zero()]]).unwrap()
}

fn close(a: &Mat<C64>, b: &Mat<C64>, tol: f64) -> bool {
    (a.clone() - b.clone()).max_abs() <= tol
}

#[test]
fn removable_singularities_at_zero() {
    for f in EvenSeries::ALL {
        assert!(close(&matrix_fn(f, &Mat::zeros(3)).unwrap(), &Mat::identity(3), 1e-15), "{}", f.name());
    }
    let nil = Mat::from_rows(vec![vec![C64::zero(), c(1.0, 0.0)], vec![C64::zero(), C64::zero()]]).unwrap();
    assert!(close(&matrix_fn(EvenSeries::XOverSinh, &nil).unwrap(), &Mat::identity(2), 1e-15));
    assert!(close(&matrix_fn(EvenSeries::XCoth, &nil).unwrap(), &Mat::identity(2), 1e-15));
}

#[test]
fn exact_series_coefficients() {
    let s: Vec<ExactComplex> = EvenSeries::XOverSinh.coefficients(4);
    assert_eq!(s, vec![q(1, 1), q(-1, 6), q(7, 360), q(-31, 15120)]);
    let c: Vec<ExactComplex> = EvenSeries::XCoth.coefficients(4);
    assert_eq!(c, vec![q(1, 1), q(1, 3), q(-1, 45), q(2, 945)]);
    let h: Vec<ExactComplex> = EvenSeries::HalfXOverSinhHalf.coefficients(3);
    assert_eq!(h, vec![q(1, 1), q(-1, 24), q(7, 5760)]);
    assert_eq!(h, EvenSeries::XOverExpDiff.coefficients::<ExactComplex>(3));
    let e: Vec<ExactComplex> = EvenSeries::Exp.coefficients(4);
    assert_eq!(e, vec![q(1, 1), q(1, 1), q(1, 2), q(1, 6)]);
}

#[test]
fn rotation_generator_determinant() {
    for (t, b) in [(0.5, 1.0), (1.0, 3.0), (2.0, 0.7)] {
        let m = rot(c(0.0, t * b));
        let v = matrix_fn(EvenSeries::XOverSinh, &m.scale(&c(0.5, 0.0))).unwrap();
        let det = v.get(0, 0) * v.get(1, 1) - v.get(0, 1) * v.get(1, 0);
        // eigenvalues of M are ∓tb, so the oracle is the scalar function squared
        let x: f64 = t * b / 2.0;
        let want = (x / x.sinh()).powi(2);
        assert!((det - want).norm() < 1e-13 * want, "t={t} b={b}");
        assert!((sqrt_det(&v).unwrap() - x / x.sinh()).norm() < 1e-13);
    }
}

#[test]
fn expdiff_and_half_sinh_agree() {
    let m = rot(c(0.3, 1.1));
    let a = matrix_fn(EvenSeries::XOverExpDiff, &m).unwrap();
    let b = matrix_fn(EvenSeries::HalfXOverSinhHalf, &m).unwrap();
    let direct = matrix_fn(EvenSeries::XOverSinh, &m.scale(&c(0.5, 0.0))).unwrap();
    assert!(close(&a, &b, 0.0) && close(&a, &direct, 1e-15));
}

#[test]
fn pole_is_reported() {
    let m = rot(c(std::f64::consts::PI, 0.0));
    assert!(matches!(matrix_fn(EvenSeries::XOverSinh, &m), Err(Error::NonConvergence(_))));
}

#[test]
fn large_arguments_are_reduced() {
    let m = rot(c(0.0, 12.0));
    let got = matrix_fn(EvenSeries::XCoth, &m).unwrap();
    let want = matrix_fn_normal(EvenSeries::XCoth, &m).unwrap();
    assert!(close(&got, &want, 1e-11 * 12.0));
    let e = matrix_fn(EvenSeries::Exp, &m).unwrap();
    assert!((e.get(0, 0) - c(12f64.cosh(), 0.0)).norm() < 1e-12 * 12f64.cosh());
}

#[test]
fn sqrt_det_examples() {
    assert_eq!(sqrt_det(&Mat::identity(3)).unwrap(), c(1.0, 0.0));
    let d = Mat::diagonal(vec![c(2.5, 0.0), c(2.5, 0.0)]);
    assert!((sqrt_det(&d).unwrap() - c(2.5, 0.0)).norm() < 1e-14);
    let big = Mat::diagonal(vec![c(40.0, 0.0), c(0.01, 0.0), c(3.0, 0.5)]);
    let want = (c(40.0 * 0.01, 0.0) * c(3.0, 0.5)).sqrt();
    assert!((sqrt_det(&big).unwrap() - want).norm() < 1e-12);
    let neg = Mat::diagonal(vec![c(-1.0, 0.0), c(1.0, 0.0)]);
    assert_eq!(sqrt_det(&neg), Err(Error::BranchCut));
    assert_eq!(sqrt_det(&Mat::diagonal(vec![c(0.0, 0.0), c(1.0, 0.0)])), Err(Error::BranchCut));
}

fn omega() -> FormScalar<ExactComplex> {
    FormScalar::two_form(1, 2)
}

#[test]
fn nilpotent_sqrt_det() {
    let mut m: Mat<FormScalar<ExactComplex>> = Mat::identity(2);
    m.set(0, 0, FormScalar::one() + omega());
    assert_eq!(sqrt_det_nilpotent(&m).unwrap(), FormScalar::one() + omega().scale(&q(1, 2)));
    assert!(sqrt_det_nilpotent(&Mat::<FormScalar<ExactComplex>>::scalar(2, FormScalar::constant(q(2, 1)))).is_err());
}

#[test]
fn nilpotent_series_terminate() {
    let e34 = FormScalar::<ExactComplex>::two_form(3, 4);
    let r = Mat::from_rows(vec![vec![FormScalar::zero(), omega() + e34.clone()], vec![-(omega() + e34.clone()), FormScalar::zero()]]).unwrap();
    let v = matrix_fn_nilpotent(EvenSeries::XOverSinh, &r).unwrap();
    // M² = -(ω + η)² I = -2 ω∧η I, so x/sinh x gives 1 - (1/6)(-2ωη)
    let want = FormScalar::one() + (omega() * e34).scale(&q(1, 3));
    assert_eq!(v, Mat::scalar(2, want));
    let dense = Mat::scalar(2, FormScalar::constant(q(1, 1)));
    assert!(matrix_fn_nilpotent(EvenSeries::Exp, &dense).is_err());
}

#[test]
fn euclidean_limit_of_kernel() {
    let t = 0.7;
    let x = [0.3, -1.1];
    let free = mehler_kernel(&ModelData::new(Mat::zeros(2), Mat::zeros(1), t).unwrap(), &x).unwrap();
    let r2 = x[0] * x[0] + x[1] * x[1];
    let heat = (-r2 / (4.0 * t)).exp() / (4.0 * std::f64::consts::PI * t);
    assert!((free.get(0, 0) - c(heat, 0.0)).norm() < 1e-15);
    let mut last = f64::INFINITY;
    for eps in [1e-1, 1e-2, 1e-3] {
        let m = ModelData::new(rot(c(0.0, eps)), Mat::zeros(1), t).unwrap();
        let diff = (mehler_kernel(&m, &x).unwrap().get(0, 0) - c(heat, 0.0)).norm();
        assert!(diff < last && diff < eps * eps);
        last = diff;
    }
}

#[test]
fn kernel_at_origin_and_constant_field() {
    // R = iβJ is a field of strength β/2; the Landau sum gives B / (4π sinh tB).
    for (t, beta) in [(0.5, 2.0), (1.0, 0.5), (0.25, 6.0)] {
        let f = Mat::from_rows(vec![vec![c(0.2, 0.0), c(0.1, 0.0)], vec![c(0.1, 0.0), c(-0.3, 0.0)]]).unwrap();
        let m = ModelData::new(rot(c(0.0, beta)), f.clone(), t).unwrap();
        let v = mehler_value(&m).unwrap();
        let b: f64 = beta / 2.0;
        let landau = b / (4.0 * std::f64::consts::PI * (t * b).sinh());
        let at0 = v.at(&[0.0, 0.0]).unwrap();
        let want = matrix_fn_normal(EvenSeries::Exp, &f.scale(&c(-t, 0.0))).unwrap().scale(&c(landau, 0.0));
        assert!(close(&at0, &want, 1e-13 * landau));
    }
}

#[test]
fn odd_dimension_evaluates() {
    let mut r = Mat::zeros(3);
    r.set(0, 1, c(1.5, 0.0));
    r.set(1, 0, c(-1.5, 0.0));
    let m = ModelData::new(r, Mat::zeros(1), 0.8).unwrap();
    let v = mehler_value(&m).unwrap();
    assert!((v.quadform.get(2, 2) - c(1.0, 0.0)).norm() < 1e-15);
    let x: f64 = 0.8 * 1.5 / 2.0;
    assert!((v.detfactor - c(x / x.sin(), 0.0)).norm() < 1e-13);
    assert!((v.prefactor - (4.0 * std::f64::consts::PI * 0.8f64).powf(-1.5)).abs() < 1e-16);
}

#[test]
fn rejects_bad_model_data() {
    assert!(ModelData::new(Mat::identity(2), Mat::zeros(1), 1.0).is_err());
    assert!(ModelData::new(Mat::zeros(2), Mat::zeros(1), 0.0).is_err());
    let m = ModelData::new(Mat::zeros(2), Mat::zeros(1), 1.0).unwrap();
    assert!(matches!(mehler_kernel(&m, &[0.0]), Err(Error::DimensionMismatch(_))));
}

#[test]
fn initial_condition_by_quadrature() {
    // ∫ p_t(x) φ(x) dx → φ(0) for φ = 1 + x_1 + x_1² x_2², error O(t).
    let phi = |x: &[f64]| 1.0 + x[0] + x[0] * x[0] * x[1] * x[1];
    let mut last = f64::INFINITY;
    for t in [0.1, 0.01, 0.001] {
        let m = ModelData::new(rot(c(0.0, 1.3)), Mat::zeros(1), t).unwrap();
        let half = 8.0 * f64::sqrt(t);
        let k = 120;
        let h = half / k as f64;
        let pts: Vec<Vec<f64>> = (-k..=k)
            .flat_map(|i| (-k..=k).map(move |j| vec![i as f64 * h, j as f64 * h]))
            .collect();
        let vals = mehler_kernel_grid(&m, &pts).unwrap();
        let integral: f64 = pts.iter().zip(&vals).map(|(x, v)| v.get(0, 0).re * phi(x)).sum::<f64>() * h * h;
        let err = (integral - 1.0).abs();
        assert!(err < last, "t={t} err={err}");
        last = err;
    }
    assert!(last < 1e-2);
}

#[test]
fn nilpotent_kernel_examples() {
    let zero2 = Mat::<FormScalar<ExactComplex>>::zeros(2);
    let free = mehler_nilpotent(&zero2, &Mat::zeros(1), &q(1, 2)).unwrap();
    assert_eq!(free.value(), Mat::identity(1));
    assert_eq!(free.prefactor().unwrap(), PiScaled { coeff: q(1, 2), pi_power: -1 });
    let f = q(3, 1);
    let fm = Mat::scalar(1, omega().scale(&f));
    let twisted = mehler_nilpotent(&zero2, &fm, &q(1, 2)).unwrap();
    assert_eq!(twisted.value(), Mat::scalar(1, FormScalar::one() - omega().scale(&(q(1, 2) * f))));
    let odd = mehler_nilpotent(&Mat::zeros(3), &Mat::zeros(1), &q(1, 1)).unwrap();
    assert_eq!(odd.prefactor(), Err(Error::OddDimension(3)));
}

fn arb_antisymmetric(n: usize) -> impl Strategy<Value = Mat<C64>> {
    proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n).prop_map(move |v| {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let z = c(v[i * n + j].0, v[i * n + j].1);
                m.set(i, j, z);
                m.set(j, i, -z);
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_path_matches_eigen_path(re in arb_antisymmetric(3).prop_map(|m| m.map(|z| c(z.re, 0.0))), s in 0.1f64..2.0) {
        // real antisymmetric matrices are normal
        let m = re.scale(&c(s, 0.0));
        for f in [EvenSeries::XOverSinh, EvenSeries::XCoth, EvenSeries::Exp, EvenSeries::HalfXOverSinhHalf] {
            let a = matrix_fn(f, &m);
            let b = matrix_fn_normal(f, &m);
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert!(close(&a, &b, 1e-9 * b.max_abs().max(1.0)), "{}", f.name());
            }
        }
    }

    #[test]
    fn sqrt_det_squares_to_det(m in arb_antisymmetric(4), s in 0.05f64..0.6) {
        let v = matrix_fn(EvenSeries::XOverSinh, &m.scale(&c(s, 0.0))).unwrap();
        let sd = sqrt_det(&v).unwrap();
        let det: C64 = eigenvalues(&v).unwrap().into_iter().product();
        prop_assert!((sd * sd - det).norm() < 1e-9 * det.norm().max(1.0));
        prop_assert!(sd.re > 0.0);
    }

    #[test]
    fn exp_inverse(m in arb_antisymmetric(3)) {
        let a = matrix_fn(EvenSeries::Exp, &m).unwrap();
        let b = matrix_fn(EvenSeries::Exp, &(-m)).unwrap();
        prop_assert!(close(&a.matmul(&b), &Mat::identity(3), 1e-10 * a.max_abs() * b.max_abs()));
    }
}

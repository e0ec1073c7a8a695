//! Named matrix functions in two regimes: numeric complex matrices (argument
//! reduction plus truncated series) and matrices over nilpotent form
//! coefficients (terminating series, exact).

use nalgebra::DMatrix;
use num::{One, Zero};

use crate::algebra::{FormScalar, Mat};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvenSeries {
    /// `x / sinh x`
    XOverSinh,
    /// `x coth x`
    XCoth,
    /// `e^x` (not even; evaluated by scaling and squaring).
    Exp,
    /// `(x/2) / sinh(x/2)`
    HalfXOverSinhHalf,
    /// `x / (e^{x/2} - e^{-x/2})`, the same function as [`EvenSeries::HalfXOverSinhHalf`].
    XOverExpDiff,
}

impl EvenSeries {
    pub const ALL: [EvenSeries; 5] = [
        EvenSeries::XOverSinh,
        EvenSeries::XCoth,
        EvenSeries::Exp,
        EvenSeries::HalfXOverSinhHalf,
        EvenSeries::XOverExpDiff,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EvenSeries::XOverSinh => "x/sinh(x)",
            EvenSeries::XCoth => "x*coth(x)",
            EvenSeries::Exp => "exp(x)",
            EvenSeries::HalfXOverSinhHalf => "(x/2)/sinh(x/2)",
            EvenSeries::XOverExpDiff => "x/(exp(x/2)-exp(-x/2))",
        }
    }

    pub fn is_even(&self) -> bool {
        !matches!(self, EvenSeries::Exp)
    }

    /// Pointwise value, with the removable singularity at 0 filled in.
    pub fn eval_scalar(&self, z: C64) -> C64 {
        match self {
            EvenSeries::Exp => z.exp(),
            EvenSeries::HalfXOverSinhHalf | EvenSeries::XOverExpDiff => EvenSeries::XOverSinh.eval_scalar(z / 2.0),
            EvenSeries::XOverSinh | EvenSeries::XCoth => {
                if z.norm() < 1e-3 {
                    let coeffs: Vec<C64> = self.coefficients(6);
                    let y = z * z;
                    coeffs.iter().rev().fold(C64::zero(), |acc, c| acc * y + c)
                } else if *self == EvenSeries::XOverSinh {
                    z / z.sinh()
                } else {
                    z * z.cosh() / z.sinh()
                }
            }
        }
    }

    /// Taylor coefficients: in `x^k` for `Exp`, in `(x²)^k` for the even functions.
    pub fn coefficients<S: Scalar>(&self, terms: usize) -> Vec<S> {
        let sinhc = even_coefficients::<S>(terms, 1);
        let cosh = even_coefficients::<S>(terms, 0);
        match self {
            EvenSeries::Exp => {
                let mut out = Vec::with_capacity(terms);
                let mut c = S::one();
                for k in 0..terms {
                    if k > 0 {
                        c = c * S::from_ratio(1, k as i64);
                    }
                    out.push(c.clone());
                }
                out
            }
            EvenSeries::XOverSinh => divide_series(&unit_series(terms), &sinhc),
            EvenSeries::XCoth => divide_series(&cosh, &sinhc),
            EvenSeries::HalfXOverSinhHalf | EvenSeries::XOverExpDiff => {
                let mut scale = S::one();
                EvenSeries::XOverSinh
                    .coefficients::<S>(terms)
                    .into_iter()
                    .map(|c| {
                        let v = c * scale.clone();
                        scale = scale.clone() * S::from_ratio(1, 4);
                        v
                    })
                    .collect()
            }
        }
    }
}

/// `Σ y^k / (2k + shift)!` coefficients, shift 0 for cosh and 1 for sinh(x)/x.
fn even_coefficients<S: Scalar>(terms: usize, shift: i64) -> Vec<S> {
    let mut out = Vec::with_capacity(terms);
    let mut c = S::one();
    for k in 0..terms as i64 {
        if k > 0 {
            let (a, b) = (2 * k - 1 + shift, 2 * k + shift);
            c = c * S::from_ratio(1, a * b);
        }
        out.push(c.clone());
    }
    out
}

fn unit_series<S: Scalar>(terms: usize) -> Vec<S> {
    let mut out = vec![S::zero(); terms];
    if terms > 0 {
        out[0] = S::one();
    }
    out
}

/// Power-series quotient `a / b` with `b_0 = 1`.
fn divide_series<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out: Vec<S> = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        let mut v = a[k].clone();
        for i in 1..=k {
            v = v - b[i].clone() * out[k - i].clone();
        }
        out.push(v);
    }
    out
}

const SERIES_TERMS: usize = 12;
const REDUCED_NORM: f64 = 0.25;

fn scaled(m: &Mat<C64>, factor: f64) -> Mat<C64> {
    m.scale(&C64::new(factor, 0.0))
}

/// `sinh(M)/M` and `cosh(M)` together, by halving the argument until the
/// series converge and doubling back.
fn sinhc_cosh(m: &Mat<C64>) -> Result<(Mat<C64>, Mat<C64>)> {
    let norm = m.norm1();
    if !norm.is_finite() {
        return Err(Error::NonConvergence("non-finite matrix entry".into()));
    }
    let mut steps = 0u32;
    while norm * 0.5f64.powi(steps as i32) > REDUCED_NORM {
        steps += 1;
        if steps > 60 {
            return Err(Error::NonConvergence(format!("argument norm {norm} too large")));
        }
    }
    let reduced = scaled(m, 0.5f64.powi(steps as i32));
    let y = reduced.matmul(&reduced);
    let eval = |coeffs: &[f64]| {
        let mut acc = Mat::zeros(m.dim());
        for c in coeffs.iter().rev() {
            acc = acc.matmul(&y) + Mat::scalar(m.dim(), C64::new(*c, 0.0));
        }
        acc
    };
    // (0.25²)^12 / 25! is far below double precision.
    let s_coeffs: Vec<f64> = even_coefficients::<C64>(SERIES_TERMS, 1).iter().map(|c| c.re).collect();
    let c_coeffs: Vec<f64> = even_coefficients::<C64>(SERIES_TERMS, 0).iter().map(|c| c.re).collect();
    let mut s = eval(&s_coeffs);
    let mut c = eval(&c_coeffs);
    let id = Mat::identity(m.dim());
    for _ in 0..steps {
        let s_next = s.matmul(&c);
        let c_next = scaled(&c.matmul(&c), 2.0) - id.clone();
        s = s_next;
        c = c_next;
    }
    if !(s.max_abs().is_finite() && c.max_abs().is_finite()) {
        return Err(Error::NonConvergence("overflow while doubling".into()));
    }
    Ok((s, c))
}

fn matrix_exp(m: &Mat<C64>) -> Result<Mat<C64>> {
    let norm = m.norm1();
    if !norm.is_finite() {
        return Err(Error::NonConvergence("non-finite matrix entry".into()));
    }
    let mut steps = 0u32;
    while norm * 0.5f64.powi(steps as i32) > REDUCED_NORM {
        steps += 1;
        if steps > 60 {
            return Err(Error::NonConvergence(format!("argument norm {norm} too large")));
        }
    }
    let reduced = scaled(m, 0.5f64.powi(steps as i32));
    let mut acc = Mat::zeros(m.dim());
    for k in (0..18).rev() {
        acc = acc.matmul(&reduced).scale(&C64::new(1.0 / (k as f64 + 1.0), 0.0)) + Mat::identity(m.dim());
    }
    for _ in 0..steps {
        acc = acc.matmul(&acc);
    }
    if !acc.max_abs().is_finite() {
        return Err(Error::NonConvergence("overflow while squaring".into()));
    }
    Ok(acc)
}

/// Inverse of `sinh(M)/M`. Rounding in the doubling steps is of order
/// `ε e^{‖M‖}`, so an inverse large enough to amplify that past 1e-6 means
/// the argument sits at (or numerically on) a pole.
fn invert_sinhc(s: &Mat<C64>, arg: &Mat<C64>) -> Result<Mat<C64>> {
    let singular = || Error::NonConvergence("sinh(M)/M is singular (argument at a pole)".into());
    let inv = s.inverse().ok_or_else(singular)?;
    let rounding = 16.0 * f64::EPSILON * arg.norm1().exp();
    if inv.norm1() * rounding > 1e-6 {
        return Err(singular());
    }
    Ok(inv)
}

/// Numeric regime.
pub fn matrix_fn(f: EvenSeries, m: &Mat<C64>) -> Result<Mat<C64>> {
    match f {
        EvenSeries::Exp => matrix_exp(m),
        EvenSeries::XOverSinh => {
            let (s, _) = sinhc_cosh(m)?;
            invert_sinhc(&s, m)
        }
        EvenSeries::XCoth => {
            let (s, c) = sinhc_cosh(m)?;
            Ok(c.matmul(&invert_sinhc(&s, m)?))
        }
        EvenSeries::HalfXOverSinhHalf | EvenSeries::XOverExpDiff => matrix_fn(EvenSeries::XOverSinh, &scaled(m, 0.5)),
    }
}

fn form_mat_is_nilpotent<S: Scalar>(m: &Mat<FormScalar<S>>) -> bool {
    m.entries().iter().all(|v| v.is_nilpotent())
}

/// Nilpotent regime: the series terminates, so the result is exact.
pub fn matrix_fn_nilpotent<S: Scalar>(f: EvenSeries, m: &Mat<FormScalar<S>>) -> Result<Mat<FormScalar<S>>> {
    if !form_mat_is_nilpotent(m) {
        return Err(Error::InvalidInput("matrix entries must have zero constant term".into()));
    }
    let step = if f.is_even() { m.matmul(m) } else { m.clone() };
    // Every factor raises form degree by at least one; 2·MAX_DIM bounds the length.
    let coeffs: Vec<S> = f.coefficients(2 * crate::algebra::word::MAX_DIM + 2);
    let mut power = Mat::identity(m.dim());
    let mut acc = Mat::zeros(m.dim());
    for c in coeffs {
        if power.is_zero() {
            return Ok(acc);
        }
        acc = acc + power.map(|v: &FormScalar<S>| v.scale(&c));
        power = power.matmul(&step);
    }
    if power.is_zero() {
        Ok(acc)
    } else {
        Err(Error::NonConvergence("series failed to terminate".into()))
    }
}

/// Denman–Beavers iteration for the principal square root.
fn sqrtm(a: &Mat<C64>) -> Result<Mat<C64>> {
    let mut y = a.clone();
    let mut z = Mat::identity(a.dim());
    for _ in 0..100 {
        let yi = y.inverse().ok_or(Error::BranchCut)?;
        let zi = z.inverse().ok_or(Error::BranchCut)?;
        let y_next = scaled(&(y.clone() + zi), 0.5);
        let z_next = scaled(&(z + yi), 0.5);
        let delta = (y_next.clone() - y).norm1();
        y = y_next;
        z = z_next;
        if !y.max_abs().is_finite() {
            return Err(Error::BranchCut);
        }
        if delta <= 1e-15 * y.norm1().max(1.0) {
            let resid = (y.matmul(&y) - a.clone()).norm1();
            return if resid <= 1e-10 * a.norm1().max(1.0) {
                Ok(y)
            } else {
                Err(Error::BranchCut)
            };
        }
    }
    Err(Error::BranchCut)
}

/// Principal `det(M)^{1/2} = exp(½ tr log M)`.
pub fn sqrt_det(m: &Mat<C64>) -> Result<C64> {
    let id = Mat::identity(m.dim());
    let mut a = m.clone();
    let mut halvings = 0;
    while (a.clone() - id.clone()).norm1() > REDUCED_NORM {
        a = sqrtm(&a)?;
        halvings += 1;
        if halvings > 50 {
            return Err(Error::NonConvergence("log argument did not approach identity".into()));
        }
    }
    let x = a - id;
    let mut power = x.clone();
    let mut tr_log = C64::zero();
    for k in 1..60 {
        let term = power.trace() / k as f64;
        tr_log += if k % 2 == 1 { term } else { -term };
        power = power.matmul(&x);
        if power.norm1() < 1e-18 {
            break;
        }
    }
    Ok((tr_log * 2f64.powi(halvings) * 0.5).exp())
}

/// `det(1 + N)^{1/2}` for nilpotent `N`, via terminating log and exp.
pub fn sqrt_det_nilpotent<S: Scalar>(m: &Mat<FormScalar<S>>) -> Result<FormScalar<S>> {
    let dim = m.dim();
    let x = m.clone() - Mat::identity(dim);
    if !form_mat_is_nilpotent(&x) {
        return Err(Error::InvalidInput("argument must be identity plus nilpotent".into()));
    }
    let mut power = x.clone();
    let mut tr_log = FormScalar::zero();
    let mut k = 1i64;
    while !power.is_zero() {
        let term = power.trace().scale(&S::from_ratio(if k % 2 == 1 { 1 } else { -1 }, k));
        tr_log = tr_log + term;
        power = power.matmul(&x);
        k += 1;
    }
    let half = tr_log.scale(&S::from_ratio(1, 2));
    let mut acc = FormScalar::one();
    let mut term = FormScalar::one();
    let mut j = 1i64;
    loop {
        term = (term * half.clone()).scale(&S::from_ratio(1, j));
        if term.is_zero() {
            break;
        }
        acc = acc + term.clone();
        j += 1;
    }
    Ok(acc)
}

fn to_nalgebra(m: &Mat<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| *m.get(i, j))
}

/// Eigenvalues from a complex Schur decomposition.
pub fn eigenvalues(m: &Mat<C64>) -> Result<Vec<C64>> {
    let schur = nalgebra::Schur::try_new(to_nalgebra(m), 1e-15, 10_000)
        .ok_or_else(|| Error::Eigensolve("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..m.dim()).map(|i| t[(i, i)]).collect())
}

/// `f(M)` through a unitary diagonalization; only for normal `M`.
pub fn matrix_fn_normal(f: EvenSeries, m: &Mat<C64>) -> Result<Mat<C64>> {
    let schur = nalgebra::Schur::try_new(to_nalgebra(m), 1e-15, 10_000)
        .ok_or_else(|| Error::Eigensolve("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let n = m.dim();
    let scale = m.max_abs().max(1.0);
    for i in 0..n {
        for j in (i + 1)..n {
            if t[(i, j)].norm() > 1e-10 * scale {
                return Err(Error::Eigensolve("matrix is not normal".into()));
            }
        }
    }
    let d = DMatrix::from_fn(n, n, |i, j| if i == j { f.eval_scalar(t[(i, i)]) } else { C64::zero() });
    let out = &q * d * q.adjoint();
    Ok(Mat::from_fn(n, |i, j| out[(i, j)]))
}

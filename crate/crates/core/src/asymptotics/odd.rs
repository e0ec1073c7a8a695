//! Leading trace density of `exp(-(t/r) (D^r)²)` on an odd-dimensional base as `r → ∞`.

use nalgebra::DMatrix;

use super::bergman::recognize_numeric;
use crate::algebra::{spin, CliffordElement, Mat};
use crate::error::{Error, Result};
use crate::graded_ops::{CliffordOperator, GradingWeights, MultiIndex};
use crate::mehler::{mehler_kernel, ModelData};
use crate::scalar::C64;

/// `A` with `i da(X, Y) = g(X, A Y)`, real antisymmetric, `n` odd.
#[derive(Debug, Clone, PartialEq)]
pub struct OddCurvature {
    pub n: usize,
    pub a: Mat<f64>,
}

impl OddCurvature {
    pub fn new(a: Mat<f64>) -> Result<Self> {
        let o = OddCurvature { n: a.dim(), a };
        o.validate()?;
        Ok(o)
    }

    /// `b (J ⊕ 0)` with `J` the standard rotation generator in the first plane.
    pub fn single_block(n: usize, b: f64) -> Result<Self> {
        let mut a = Mat::zeros(n);
        if n >= 2 {
            a.set(0, 1, b);
            a.set(1, 0, -b);
        }
        Self::new(a)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("odd base needs odd dimension, got {}", self.n)));
        }
        if self.n > 15 {
            return Err(Error::InvalidInput(format!("dimension {} too large", self.n)));
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let v = *self.a.get(i, j);
                if !v.is_finite() || v != -*self.a.get(j, i) {
                    return Err(Error::InvalidInput("A must be finite and exactly antisymmetric".into()));
                }
            }
        }
        Ok(())
    }

    /// Eigenvalues of the Hermitian matrix `iA`, in `±λ` pairs plus zeros.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let h = DMatrix::from_fn(n, n, |i, j| C64::new(0.0, *self.a.get(i, j)));
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// `da_kj = -i A_kj`.
    pub fn da(&self) -> Mat<C64> {
        self.a.map(|v| C64::new(0.0, -*v))
    }

    /// `c(da) = ½ Σ da_kj c^k c^j`.
    pub fn clifford_da(&self) -> CliffordElement<C64> {
        clifford_two_form(&self.da())
    }
}

fn clifford_two_form(form: &Mat<C64>) -> CliffordElement<C64> {
    let n = form.dim();
    let mut out = CliffordElement::zero(n, 1);
    for k in 0..n {
        for j in 0..n {
            let v = *form.get(k, j);
            if v != C64::new(0.0, 0.0) {
                let ckj = CliffordElement::generator(n, 1, k + 1) * CliffordElement::generator(n, 1, j + 1);
                out = out + ckj.scale(&(v * 0.5));
            }
        }
    }
    out
}

/// `x / tanh x`, even and equal to 1 at the origin.
fn x_over_tanh(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 3.0 - x2 * x2 / 45.0
    } else {
        x / x.tanh()
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidInput(format!("time must be positive, got {t}")));
    }
    Ok(())
}

/// `(4πt)^{-n/2} √det(tA / tanh tA)`, reading `A` through the eigenvalues of `iA`.
pub fn odd_leading(o: &OddCurvature, t: f64) -> Result<f64> {
    o.validate()?;
    check_time(t)?;
    let det: f64 = o.eigenvalues().iter().map(|&l| x_over_tanh(t * l)).product();
    Ok((4.0 * std::f64::consts::PI * t).powf(-(o.n as f64) / 2.0) * det.sqrt())
}

/// Trace prediction on the spinor bundle: `odd_leading` times the spinor rank `2^{(n-1)/2}`.
pub fn odd_trace_density(o: &OddCurvature, t: f64) -> Result<f64> {
    Ok(spin::spinor_dim(o.n) as f64 * odd_leading(o, t)?)
}

/// `Σ_k w_k · odd_leading(o_k, t)`.
pub fn integrate_odd(samples: &[(OddCurvature, f64)], t: f64) -> Result<f64> {
    samples.iter().map(|(o, w)| Ok(odd_leading(o, t)? * w)).sum()
}

/// Intermediate objects of the odd-dimensional derivation.
#[derive(Debug, Clone)]
pub struct OddChain {
    /// `(D^r)²` on the flat model with formal `r`.
    pub operator: CliffordOperator<C64>,
    /// `H_r`, its top part under the parabolic r-grading.
    pub model: CliffordOperator<C64>,
    pub r: Mat<C64>,
    /// `ρ(r c(da))` on spinors.
    pub f: Mat<C64>,
    /// `r^{-n/2} k_{t/r}(0, 0)` on spinors.
    pub value: Mat<C64>,
}

impl OddChain {
    pub fn trace(&self) -> f64 {
        self.value.trace().re
    }
}

/// `-Σ_k (∂_k + r a_k)² + r c(da) + c(F_0)` with `a_k = ½ x_j da_jk`, which vanishes at the origin.
/// `background` is an optional imaginary antisymmetric `F_0`; it carries no power of `r`.
pub fn odd_operator(o: &OddCurvature, background: Option<&Mat<C64>>) -> Result<CliffordOperator<C64>> {
    o.validate()?;
    let n = o.n;
    let da = o.da();
    let mut op = CliffordOperator::zero(n, 1);
    for k in 0..n {
        let mut nabla = CliffordOperator::derivative(n, 1, k + 1);
        for j in 0..n {
            let v = *da.get(j, k) * 0.5;
            if v != C64::new(0.0, 0.0) {
                nabla = nabla
                    + CliffordOperator::term(
                        CliffordElement::scalar(n, 1, v),
                        MultiIndex::axis(n, j + 1, 1),
                        MultiIndex::unit(n),
                        1,
                    );
            }
        }
        op = op - &nabla * &nabla;
    }
    op = op + CliffordOperator::term(o.clifford_da(), MultiIndex::unit(n), MultiIndex::unit(n), 1);
    if let Some(f0) = background {
        if f0.dim() != n {
            return Err(Error::DimensionMismatch(format!("background is {0}x{0}, expected {n}x{n}", f0.dim())));
        }
        op = op + CliffordOperator::multiplication(clifford_two_form(f0));
    }
    Ok(op)
}

/// Evaluates the leading factor through the operator pipeline: r-grading check,
/// parabolic top part, substitution of `r`, recognition, Mehler at `t/r`.
pub fn odd_chain(o: &OddCurvature, r: f64, t: f64, background: Option<&Mat<C64>>) -> Result<OddChain> {
    check_time(t)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidInput(format!("r must be positive, got {r}")));
    }
    let operator = odd_operator(o, background)?;
    for w in [GradingWeights::ODD, GradingWeights::ODD_PARABOLIC] {
        let order = operator.grading_order(&w).unwrap_or(i64::MIN);
        if order > 2 {
            return Err(Error::GradingViolation { preset: w.name(), j: 0, order, bound: 2 });
        }
    }
    let model = operator.top_part(&GradingWeights::ODD_PARABOLIC);
    let fixed = model.substitute_param(&C64::new(r, 0.0));
    let (rmat, f) = recognize_numeric(&fixed)?;
    let f = spin::represent(&f);
    let data = ModelData::new(rmat.clone(), f.clone(), t / r)?;
    let value = mehler_kernel(&data, &vec![0.0; o.n])?.scale(&C64::new(r.powf(-(o.n as f64) / 2.0), 0.0));
    Ok(OddChain { operator, model, r: rmat, f, value })
}

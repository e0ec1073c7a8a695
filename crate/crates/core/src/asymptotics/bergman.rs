//! Leading diagonal term of `exp(-(u/p) D_p²)` on `Λ^{0,*} ⊗ L^p ⊗ E`.
//!
//! Real coordinates `x_1 … x_{2m}` pair into `Z_l = (∂_{2l-1} - i ∂_{2l}) / √2`.
//! Exterior words on `Z̄^1 … Z̄^m` are bitmasks, bit `l-1` for `Z̄^l`.

use nalgebra::DMatrix;

use crate::algebra::{CliffordElement, Mat};
use crate::error::{Error, Result};
use crate::graded_ops::{CliffordOperator, GradingWeights, MonomialKey, MultiIndex};
use crate::mehler::{matrix_fn, mehler_kernel, model_operator, EvenSeries, ModelData};
use crate::scalar::C64;

const HERMITIAN_TOL: f64 = 1e-12;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `Ḟ^L` on `T^{(1,0)}` (Hermitian, `m×m`) and an optional line-bundle twist `Ḟ^E`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexCurvature {
    pub fdot: Mat<C64>,
    pub twist_fdot: Option<Mat<C64>>,
}

impl ComplexCurvature {
    pub fn new(fdot: Mat<C64>) -> Result<Self> {
        let cc = ComplexCurvature { fdot, twist_fdot: None };
        cc.validate()?;
        Ok(cc)
    }

    pub fn diagonal(a: &[f64]) -> Self {
        ComplexCurvature { fdot: Mat::diagonal(a.iter().map(|&v| c(v)).collect()), twist_fdot: None }
    }

    pub fn with_twist(mut self, twist_fdot: Mat<C64>) -> Result<Self> {
        self.twist_fdot = Some(twist_fdot);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.fdot.dim();
        if m == 0 || m > 8 {
            return Err(Error::InvalidInput(format!("complex dimension {m} outside 1..=8")));
        }
        for (name, f) in std::iter::once(("F^L", &self.fdot)).chain(self.twist_fdot.iter().map(|f| ("F^E", f))) {
            if f.dim() != m {
                return Err(Error::DimensionMismatch(format!("{name} is {0}x{0}, expected {m}x{m}", f.dim())));
            }
            let defect = (f - &f.adjoint()).max_abs();
            if defect > HERMITIAN_TOL * f.max_abs().max(1.0) || f.entries().iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be Hermitian and finite")));
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.fdot.dim()
    }

    pub fn n(&self) -> usize {
        2 * self.m()
    }

    /// `τ = tr Ḟ^L`.
    pub fn tau(&self) -> f64 {
        self.fdot.trace().re
    }

    /// Eigenvalues `a_1 … a_m` of `Ḟ^L`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.fdot)
    }

    /// `ω_d = -Ḟ_lk ε(Z̄^l) ι_{Z̄_k}` on the `2^m` exterior words, the index order for which
/// `c(F^L) = -(2ω_d + τ)`.
    pub fn omega_d(&self) -> Mat<C64> {
        omega_of(&self.fdot)
    }

    /// Real antisymmetric-index form `F^L_ij = F^L(∂_i, ∂_j)` (imaginary entries).
    pub fn real_form(&self) -> Mat<C64> {
        real_form_of(&self.fdot)
    }
}

fn hermitian_eigenvalues(f: &Mat<C64>) -> Vec<f64> {
    let m = f.dim();
    let d = DMatrix::from_fn(m, m, |i, j| *f.get(i, j));
    let mut ev: Vec<f64> = d.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// `ε(Z̄^l)` on words; sign counts the factors it passes.
pub fn exterior_mul(m: usize, l: usize) -> Mat<C64> {
    let dim = 1usize << m;
    let bit = 1usize << l;
    let mut out = Mat::zeros(dim);
    for s in 0..dim {
        if s & bit == 0 {
            let sign = if (s & (bit - 1)).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            out.set(s | bit, s, c(sign));
        }
    }
    out
}

/// `ι_{Z̄_l}` on words.
pub fn interior_mul(m: usize, l: usize) -> Mat<C64> {
    exterior_mul(m, l).transpose()
}

fn omega_of(fdot: &Mat<C64>) -> Mat<C64> {
    let m = fdot.dim();
    let mut out = Mat::zeros(1 << m);
    for l in 0..m {
        for k in 0..m {
            let f = *fdot.get(l, k);
            if f == c(0.0) {
                continue;
            }
            out = out - exterior_mul(m, l).matmul(&interior_mul(m, k)).scale(&f);
        }
    }
    out
}

/// Components of `∂_i` along `Z_l` and `Z̄_l`.
fn real_basis(m: usize, i: usize) -> (Vec<C64>, Vec<C64>) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let l = i / 2;
    let mut z = vec![c(0.0); m];
    let mut zbar = vec![c(0.0); m];
    if i.is_multiple_of(2) {
        z[l] = c(s);
        zbar[l] = c(s);
    } else {
        z[l] = C64::new(0.0, s);
        zbar[l] = C64::new(0.0, -s);
    }
    (z, zbar)
}

fn real_form_of(fdot: &Mat<C64>) -> Mat<C64> {
    let m = fdot.dim();
    let n = 2 * m;
    Mat::from_fn(n, |i, j| {
        let (ui, ubar) = real_basis(m, i);
        let (vj, vbar) = real_basis(m, j);
        let mut acc = c(0.0);
        for a in 0..m {
            for b in 0..m {
                let f = *fdot.get(b, a);
                acc += ui[a] * vbar[b] * f - vj[a] * ubar[b] * f;
            }
        }
        acc
    })
}

/// Clifford action on `Λ^{0,*}`: `c(∂_{2l-1}) = ε_l - ι_l`, `c(∂_{2l}) = i(ε_l + ι_l)`.
pub fn clifford_action(m: usize) -> Vec<Mat<C64>> {
    (0..2 * m)
        .map(|i| {
            let l = i / 2;
            let (eps, iota) = (exterior_mul(m, l), interior_mul(m, l));
            if i % 2 == 0 {
                eps - iota
            } else {
                (eps + iota).scale(&C64::new(0.0, 1.0))
            }
        })
        .collect()
}

/// `c(F) = ½ Σ_ij F_ij c_i c_j`.
pub fn clifford_of_form(form: &Mat<C64>, action: &[Mat<C64>]) -> Mat<C64> {
    let n = form.dim();
    let dim = action.first().map_or(1, Mat::dim);
    let mut out = Mat::zeros(dim);
    for i in 0..n {
        for j in 0..n {
            let f = *form.get(i, j);
            if f != c(0.0) {
                out = out + action[i].matmul(&action[j]).scale(&(f * 0.5));
            }
        }
    }
    out
}

/// `a / (1 - e^{-2ua})`, equal to `1/(2u)` at `a = 0`.
fn bergman_factor(a: f64, u: f64) -> Result<f64> {
    let x = 2.0 * u * a;
    if x.abs() < 1e-8 {
        return Ok((1.0 + x / 2.0) / (2.0 * u));
    }
    let den = -(-x).exp_m1();
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Singular(format!("1 - exp(-2ua) vanishes or overflows at a = {a}, u = {u}")));
    }
    Ok(a / den)
}

fn check_u_p(u: f64, p: u32) -> Result<()> {
    if !(u.is_finite() && u > 0.0) || p == 0 {
        return Err(Error::InvalidInput(format!("need u > 0 and p ≥ 1 (got u = {u}, p = {p})")));
    }
    Ok(())
}

/// `p^m (2π)^{-m} e^{2uω_d} det Ḟ / det(1 - e^{-2uḞ})`, an endomorphism of the word space.
pub fn bergman_leading(cc: &ComplexCurvature, u: f64, p: u32) -> Result<Mat<C64>> {
    cc.validate()?;
    check_u_p(u, p)?;
    let m = cc.m();
    let mut scalar = (p as f64 / (2.0 * std::f64::consts::PI)).powi(m as i32);
    for a in cc.eigenvalues() {
        scalar *= bergman_factor(a, u)?;
    }
    let evolve = matrix_fn(EvenSeries::Exp, &cc.omega_d().scale(&c(2.0 * u)))?;
    Ok(evolve.scale(&c(scalar)))
}

/// Intermediate objects of the derivation, kept for inspection.
#[derive(Debug, Clone)]
pub struct BergmanChain {
    /// `D_p²` on the flat model with formal `p`.
    pub operator: CliffordOperator<C64>,
    /// Its top part under the p-grading.
    pub model: CliffordOperator<C64>,
    pub r: Mat<C64>,
    pub f: Mat<C64>,
    /// `k_{u/p}(0, 0)`.
    pub value: Mat<C64>,
}

/// Assembles `D_p² = -Σ_i ∇_i² + p c(F^L) + c(F^E)` with synchronous connections
/// `∇_i = ∂_i - (p/2) x_j F^L_ij - ½ x_j F^E_ij` on the flat model.
pub fn bergman_operator(cc: &ComplexCurvature) -> Result<CliffordOperator<C64>> {
    cc.validate()?;
    let (m, n) = (cc.m(), cc.n());
    let dim = 1usize << m;
    let action = clifford_action(m);
    let fl = cc.real_form();
    let fe = cc.twist_fdot.as_ref().map(real_form_of);
    let id = Mat::<C64>::identity(dim);
    let scalar_term = |v: C64, j: usize, param: u32| {
        CliffordOperator::term(
            CliffordElement::matrix(n, id.scale(&v)),
            MultiIndex::axis(n, j + 1, 1),
            MultiIndex::unit(n),
            param,
        )
    };
    let mut op = CliffordOperator::zero(n, dim);
    for i in 0..n {
        let mut nabla = CliffordOperator::derivative(n, dim, i + 1);
        for j in 0..n {
            let v = *fl.get(i, j) * -0.5;
            if v != c(0.0) {
                nabla = nabla + scalar_term(v, j, 1);
            }
            if let Some(fe) = &fe {
                let v = *fe.get(i, j) * -0.5;
                if v != c(0.0) {
                    nabla = nabla + scalar_term(v, j, 0);
                }
            }
        }
        op = op - &nabla * &nabla;
    }
    let cfl = clifford_of_form(&fl, &action);
    op = op
        + CliffordOperator::term(CliffordElement::matrix(n, cfl), MultiIndex::unit(n), MultiIndex::unit(n), 1);
    if let Some(fe) = &fe {
        op = op + CliffordOperator::multiplication(CliffordElement::matrix(n, clifford_of_form(fe, &action)));
    }
    Ok(op)
}

/// Reads `(R, F)` off `-(∂_i + ¼ x_j R_ij)² + F` with word-free coefficients.
pub(crate) fn recognize_numeric(model: &CliffordOperator<C64>) -> Result<(Mat<C64>, CliffordElement<C64>)> {
    let (n, twist) = (model.dim(), model.twist());
    let mut r = Mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let key = MonomialKey { x: MultiIndex::axis(n, j + 1, 1), d: MultiIndex::axis(n, i + 1, 1), param: 0 };
            let coeff = model.coefficient(&key);
            let scalar = coeff.coefficient(0);
            let s = *scalar.get(0, 0);
            let expect = CliffordElement::matrix(n, Mat::<C64>::identity(twist).scale(&s));
            if (&coeff - &expect).max_abs() > 1e-12 * (1.0 + s.norm()) {
                return Err(Error::InvalidInput(format!("coefficient of x_{} ∂_{} is not a scalar", j + 1, i + 1)));
            }
            r.set(i, j, s * -2.0);
        }
    }
    let unit = MonomialKey { x: MultiIndex::unit(n), d: MultiIndex::unit(n), param: 0 };
    let f = model.coefficient(&unit);
    let rebuilt = model_operator(&r, &Mat::zeros(twist)) + CliffordOperator::multiplication(f.clone());
    let defect = (&rebuilt - model).max_abs();
    if defect > 1e-12 * model.max_abs().max(1.0) {
        return Err(Error::InvalidInput(format!("model is not of Mehler form (defect {defect:e})")));
    }
    Ok((r, f))
}

/// `k_{u/p}(0, 0)` computed from the assembled operator: top part under the
/// p-grading, substitution of `p`, recognition of `(R, F)`, Mehler at the origin.
pub fn bergman_chain(cc: &ComplexCurvature, u: f64, p: u32) -> Result<BergmanChain> {
    check_u_p(u, p)?;
    let operator = bergman_operator(cc)?;
    let w = GradingWeights::LINE_BUNDLE;
    let model = operator.top_part(&w);
    if model.grading_order(&w) != Some(2) {
        return Err(Error::GradingViolation {
            preset: w.name(),
            j: 0,
            order: model.grading_order(&w).unwrap_or(i64::MIN),
            bound: 2,
        });
    }
    let fixed = model.substitute_param(&c(p as f64));
    let (r, f) = recognize_numeric(&fixed)?;
    let f = f.coefficient(0);
    let data = ModelData::new(r.clone(), f.clone(), u / p as f64)?;
    let value = mehler_kernel(&data, &vec![0.0; cc.n()])?;
    Ok(BergmanChain { operator, model, r, f, value })
}

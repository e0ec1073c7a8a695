//! Closed-form heat kernel of `H = -(∂_i + ¼ x_j R_ij)² + F`:
//!
//! `p_t(x) = (4πt)^{-n/2} √det(tR/2 / sinh(tR/2)) exp(-⟨x| tR/2 coth(tR/2) |x⟩ / 4t) e^{-tF}`.

mod matrix_fn;

use rayon::prelude::*;

use crate::algebra::{CliffordElement, FormScalar, Mat};
use crate::error::{Error, Result};
use crate::graded_ops::{CliffordOperator, MultiIndex};
use crate::scalar::{PiScaled, Scalar, C64};

pub use matrix_fn::{
    eigenvalues, matrix_fn, matrix_fn_nilpotent, matrix_fn_normal, sqrt_det, sqrt_det_nilpotent, EvenSeries,
};

const ANTISYMMETRY_TOL: f64 = 1e-12;

/// Numeric model data.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelData {
    pub r: Mat<C64>,
    pub f: Mat<C64>,
    pub t: f64,
}

impl ModelData {
    pub fn new(r: Mat<C64>, f: Mat<C64>, t: f64) -> Result<Self> {
        let m = ModelData { r, f, t };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::InvalidInput(format!("time must be positive, got {}", self.t)));
        }
        let defect = self.r.antisymmetry_defect();
        if defect > ANTISYMMETRY_TOL * self.r.max_abs().max(1.0) {
            return Err(Error::InvalidInput(format!("R is not antisymmetric (defect {defect:e})")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    pub fn twist(&self) -> usize {
        self.f.dim()
    }

    pub fn with_time(&self, t: f64) -> Self {
        ModelData { t, ..self.clone() }
    }

    /// `-(∂_i + ¼ x_j R_ij)² + F` as a graded operator with trivial Clifford content.
    pub fn operator(&self) -> CliffordOperator<C64> {
        model_operator(&self.r, &self.f)
    }
}

/// `-(∂_i + ¼ x_j R_ij)² + F`.
pub fn model_operator<S: Scalar>(r: &Mat<S>, f: &Mat<S>) -> CliffordOperator<S> {
    let (n, twist) = (r.dim(), f.dim());
    let mut op = CliffordOperator::zero(n, twist);
    for i in 0..n {
        let mut nabla = CliffordOperator::derivative(n, twist, i + 1);
        for j in 0..n {
            let c = r.get(i, j).clone() * S::from_ratio(1, 4);
            if c.is_zero() {
                continue;
            }
            nabla = nabla
                + CliffordOperator::term(
                    CliffordElement::scalar(n, twist, c),
                    MultiIndex::axis(n, j + 1, 1),
                    MultiIndex::unit(n),
                    0,
                );
        }
        op = op - &nabla * &nabla;
    }
    op + CliffordOperator::multiplication(CliffordElement::matrix(n, f.clone()))
}

/// The factors of the kernel, evaluated once per `(R, F, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MehlerValue {
    pub n: usize,
    pub t: f64,
    pub prefactor: f64,
    pub detfactor: C64,
    /// `tR/2 · coth(tR/2)`.
    pub quadform: Mat<C64>,
    /// `e^{-tF}`.
    pub endfactor: Mat<C64>,
}

impl MehlerValue {
    pub fn at(&self, x: &[f64]) -> Result<Mat<C64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!("point of length {} in dimension {}", x.len(), self.n)));
        }
        let mut quad = C64::new(0.0, 0.0);
        for i in 0..self.n {
            for j in 0..self.n {
                quad += self.quadform.get(i, j) * x[i] * x[j];
            }
        }
        let scalar = (-quad / (4.0 * self.t)).exp() * self.detfactor * self.prefactor;
        Ok(self.endfactor.scale(&scalar))
    }
}

pub fn mehler_value(m: &ModelData) -> Result<MehlerValue> {
    m.validate()?;
    let n = m.dim();
    let half = m.r.scale(&C64::new(m.t / 2.0, 0.0));
    let detfactor = sqrt_det(&matrix_fn(EvenSeries::XOverSinh, &half)?)?;
    let quadform = matrix_fn(EvenSeries::XCoth, &half)?;
    let endfactor = matrix_fn(EvenSeries::Exp, &m.f.scale(&C64::new(-m.t, 0.0)))?;
    Ok(MehlerValue {
        n,
        t: m.t,
        prefactor: (4.0 * std::f64::consts::PI * m.t).powf(-(n as f64) / 2.0),
        detfactor,
        quadform,
        endfactor,
    })
}

pub fn mehler_kernel(m: &ModelData, x: &[f64]) -> Result<Mat<C64>> {
    mehler_value(m)?.at(x)
}

pub fn mehler_kernel_grid(m: &ModelData, points: &[Vec<f64>]) -> Result<Vec<Mat<C64>>> {
    let value = mehler_value(m)?;
    points.par_iter().map(|x| value.at(x)).collect()
}

/// Kernel on the diagonal with nilpotent coefficients; the prefactor
/// `(4πt)^{-n/2}` is kept separate.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotentMehler<S: Scalar> {
    pub n: usize,
    pub t: S,
    pub detfactor: FormScalar<S>,
    pub endfactor: Mat<FormScalar<S>>,
}

impl<S: Scalar> NilpotentMehler<S> {
    /// `√det(...) e^{-tF}`.
    pub fn value(&self) -> Mat<FormScalar<S>> {
        self.endfactor.map(|v| v.clone() * self.detfactor.clone())
    }

    /// `(4πt)^{-n/2}` with π symbolic; even `n` only.
    pub fn prefactor(&self) -> Result<PiScaled<S>> {
        if self.n % 2 == 1 {
            return Err(Error::OddDimension(self.n));
        }
        let m = self.n / 2;
        let four_t = self.t.clone() * S::from_int(4);
        let inv = four_t
            .recip()
            .ok_or_else(|| Error::InvalidInput("time must be nonzero".into()))?;
        Ok(PiScaled {
            coeff: inv.pow(m as u32),
            pi_power: -(m as i32),
        })
    }
}

pub fn mehler_nilpotent<S: Scalar>(r: &Mat<FormScalar<S>>, f: &Mat<FormScalar<S>>, t: &S) -> Result<NilpotentMehler<S>> {
    let n = r.dim();
    for i in 0..n {
        for j in 0..n {
            if *r.get(i, j) != -r.get(j, i).clone() {
                return Err(Error::InvalidInput("R is not antisymmetric".into()));
            }
        }
    }
    let half = r.map(|v| v.scale(&(t.clone() * S::from_ratio(1, 2))));
    let detfactor = sqrt_det_nilpotent(&matrix_fn_nilpotent(EvenSeries::XOverSinh, &half)?)?;
    let endfactor = matrix_fn_nilpotent(EvenSeries::Exp, &f.map(|v| v.scale(&-t.clone())))?;
    Ok(NilpotentMehler {
        n,
        t: t.clone(),
        detfactor,
        endfactor,
    })
}

#[cfg(test)]
mod tests;

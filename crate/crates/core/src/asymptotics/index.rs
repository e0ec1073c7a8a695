//! Index density `(4π)^{-n/2} (-2i)^{n/2} [√det((R/2)/sinh(R/2)) · tr e^{-F}]_top`.

use crate::algebra::{word, ExteriorElement, FormScalar, Mat};
use crate::error::{Error, Result};
use crate::graded_ops::{ExteriorOperator, MonomialKey, MultiIndex};
use crate::heat_jets::{CurvatureTensor, TwistCurvature};
use crate::mehler::{matrix_fn_nilpotent, mehler_nilpotent, sqrt_det_nilpotent, EvenSeries};
use crate::scalar::{PiScaled, Scalar, C64};
use num::Zero;

/// Riemann curvature as a matrix of 2-forms and twist curvature as a matrix of 2-forms.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexDensityInput<S: Scalar> {
    pub n: usize,
    pub r: Mat<FormScalar<S>>,
    pub f: Mat<FormScalar<S>>,
}

impl<S: Scalar> IndexDensityInput<S> {
    pub fn new(n: usize, r: Mat<FormScalar<S>>, f: Mat<FormScalar<S>>) -> Result<Self> {
        let inp = IndexDensityInput { n, r, f };
        inp.validate()?;
        Ok(inp)
    }

    /// Flat base with twist curvature `F`.
    pub fn twist_only(n: usize, f: Mat<FormScalar<S>>) -> Result<Self> {
        Self::new(n, Mat::zeros(n), f)
    }

    /// Curvature 2-forms of a curvature tensor, twist-free.
    pub fn from_curvature(rm: &CurvatureTensor<S>) -> Result<Self> {
        let n = rm.dim();
        Self::new(n, curvature_forms(rm), Mat::zeros(1))
    }

    pub fn validate(&self) -> Result<()> {
        if self.r.dim() != self.n {
            return Err(Error::DimensionMismatch(format!("R is {}x{} in dimension {}", self.r.dim(), self.r.dim(), self.n)));
        }
        if self.n > 31 {
            return Err(Error::InvalidInput(format!("dimension {} too large for word storage", self.n)));
        }
        for (name, m) in [("R", &self.r), ("F", &self.f)] {
            for e in m.entries() {
                if !e.is_nilpotent() {
                    return Err(Error::InvalidInput(format!("{name} has a non-nilpotent entry")));
                }
                if e.terms().any(|(w, _)| *w >> self.n != 0) {
                    return Err(Error::DimensionMismatch(format!("{name} uses forms beyond dimension {}", self.n)));
                }
            }
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if *self.r.get(i, j) != -self.r.get(j, i).clone() {
                    return Err(Error::InvalidInput("R is not antisymmetric".into()));
                }
            }
        }
        Ok(())
    }

    pub fn twist(&self) -> usize {
        self.f.dim()
    }
}

/// Full mixed-degree density; only the top-degree coefficient is the index density.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexDensity<S: Scalar> {
    pub n: usize,
    /// `4^{-n/2} (-2i)^{n/2} √det(...) tr e^{-F}`, all form degrees.
    pub form: FormScalar<S>,
    pub pi_power: i32,
}

impl<S: Scalar> IndexDensity<S> {
    /// Coefficient of `e^1 ∧ … ∧ e^n`.
    pub fn top(&self) -> PiScaled<S> {
        PiScaled { coeff: self.form.coefficient(word::full(self.n)), pi_power: self.pi_power }
    }

    pub fn degree_part(&self, deg: usize) -> FormScalar<S> {
        self.form.degree_part(deg)
    }
}

/// `(-2i)^m` for `n = 2m`.
fn supertrace_factor<S: Scalar>(n: usize) -> Result<S> {
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    Ok((S::imag_unit() * S::from_int(-2)).pow((n / 2) as u32))
}

pub fn index_density<S: Scalar>(inp: &IndexDensityInput<S>) -> Result<IndexDensity<S>> {
    let norm = supertrace_factor::<S>(inp.n)? * S::from_ratio(1, 4).pow((inp.n / 2) as u32);
    inp.validate()?;
    let ahat = sqrt_det_nilpotent(&matrix_fn_nilpotent(EvenSeries::HalfXOverSinhHalf, &inp.r)?)?;
    let ch = matrix_fn_nilpotent(EvenSeries::Exp, &inp.f.map(|v| -v.clone()))?.trace();
    Ok(IndexDensity { n: inp.n, form: (ahat * ch).scale(&norm), pi_power: -((inp.n / 2) as i32) })
}

/// Same density, obtained by feeding a model operator `-(∂_i + ¼ x_j R_ij)² + F`
/// through the nilpotent Mehler kernel at `t = 1`.
pub fn index_density_from_model<S: Scalar>(model: &ExteriorOperator<S>) -> Result<IndexDensity<S>> {
    let n = model.dim();
    let norm = supertrace_factor::<S>(n)?;
    let inp = recognize_model(model)?;
    let k = mehler_nilpotent(&inp.r, &inp.f, &S::one())?;
    let pref = k.prefactor()?;
    let form = k.value().trace().scale(&(pref.coeff * norm));
    Ok(IndexDensity { n, form, pi_power: pref.pi_power })
}

/// `R_il = -½ Σ_jk Rm(i, l, j, k) e^j ∧ e^k`, matching the synchronous-frame
/// Christoffel jets `Γ_ij^k = -½ Rm(i, l, j, k) x_l`.
pub fn curvature_forms<S: Scalar>(rm: &CurvatureTensor<S>) -> Mat<FormScalar<S>> {
    let n = rm.dim();
    Mat::from_fn(n, |i, l| {
        let mut acc = FormScalar::zero();
        for j in 0..n {
            for k in 0..n {
                let c = rm.get(i, l, j, k).clone() * S::from_ratio(-1, 2);
                if !c.is_zero() {
                    acc = acc + FormScalar::two_form(j + 1, k + 1).scale(&c);
                }
            }
        }
        acc
    })
}

/// `½ Σ_ij F_ij e^i ∧ e^j` as a twist matrix of 2-forms.
pub fn twist_forms<S: Scalar>(fe: &TwistCurvature<S>) -> Mat<FormScalar<S>> {
    let (n, twist) = (fe.dim(), fe.twist());
    Mat::from_fn(twist, |a, b| {
        let mut acc = FormScalar::zero();
        for i in 0..n {
            for j in 0..n {
                let c = fe.get(i, j).get(a, b).clone() * S::from_ratio(1, 2);
                if !c.is_zero() {
                    acc = acc + FormScalar::two_form(i + 1, j + 1).scale(&c);
                }
            }
        }
        acc
    })
}

pub fn forms_to_exterior<S: Scalar>(n: usize, m: &Mat<FormScalar<S>>) -> ExteriorElement<S> {
    let twist = m.dim();
    let mut out = ExteriorElement::zero(n, twist);
    for a in 0..twist {
        for b in 0..twist {
            for (w, c) in m.get(a, b).terms() {
                let mut unit = Mat::zeros(twist);
                unit.set(a, b, c.clone());
                out.add_term(*w, unit);
            }
        }
    }
    out
}

pub fn exterior_to_forms<S: Scalar>(e: &ExteriorElement<S>) -> Mat<FormScalar<S>> {
    let twist = e.twist();
    let mut out: Mat<FormScalar<S>> = Mat::zeros(twist);
    for (w, m) in e.terms() {
        for a in 0..twist {
            for b in 0..twist {
                let c = m.get(a, b);
                if !c.is_zero() {
                    let cur = out.get(a, b).clone();
                    out.set(a, b, cur + FormScalar::monomial(c.clone(), *w));
                }
            }
        }
    }
    out
}

/// `-(∂_i + ¼ x_j R_ij)² + F` with form-valued `R` (scalar in the twist) and `F`.
pub fn purified_operator<S: Scalar>(r: &Mat<FormScalar<S>>, f: &Mat<FormScalar<S>>) -> ExteriorOperator<S> {
    let (n, twist) = (r.dim(), f.dim());
    let id = Mat::<FormScalar<S>>::identity(twist);
    let mut op = ExteriorOperator::zero(n, twist);
    for i in 0..n {
        let mut nabla = ExteriorOperator::derivative(n, twist, i + 1);
        for j in 0..n {
            let c = r.get(i, j).scale(&S::from_ratio(1, 4));
            if c.is_zero() {
                continue;
            }
            let coeff = forms_to_exterior(n, &id.map(|v| v.clone() * c.clone()));
            nabla = nabla + ExteriorOperator::term(coeff, MultiIndex::axis(n, j + 1, 1), MultiIndex::unit(n), 0);
        }
        op = op - &nabla * &nabla;
    }
    op + ExteriorOperator::multiplication(forms_to_exterior(n, f))
}

/// Reads `R` and `F` off a model operator and checks that it has exactly the Mehler form.
pub fn recognize_model<S: Scalar>(model: &ExteriorOperator<S>) -> Result<IndexDensityInput<S>> {
    let (n, twist) = (model.dim(), model.twist());
    if model.max_param() > 0 {
        return Err(Error::InvalidInput("model operator still carries the formal parameter".into()));
    }
    let mut r = Mat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let key = MonomialKey {
                x: MultiIndex::axis(n, j + 1, 1),
                d: MultiIndex::axis(n, i + 1, 1),
                param: 0,
            };
            let c = exterior_to_forms(&model.coefficient(&key));
            // Must be a scalar multiple of the identity twist.
            let s = c.get(0, 0).clone();
            if c != Mat::<FormScalar<S>>::identity(twist).map(|v| v.clone() * s.clone()) {
                return Err(Error::InvalidInput(format!("coefficient of x_{} ∂_{} is not scalar in the twist", j + 1, i + 1)));
            }
            r.set(i, j, s.scale(&S::from_int(-2)));
        }
    }
    let unit = MonomialKey { x: MultiIndex::unit(n), d: MultiIndex::unit(n), param: 0 };
    let f = exterior_to_forms(&model.coefficient(&unit));
    let inp = IndexDensityInput::new(n, r, f)?;
    if purified_operator(&inp.r, &inp.f) != *model {
        return Err(Error::InvalidInput("operator is not of the form -(∂ + ¼xR)² + F".into()));
    }
    Ok(inp)
}

/// Sample-sum integral of the top-degree density, `Σ w_k · density_k`.
pub fn integrate_index<S: Scalar>(samples: &[(IndexDensityInput<S>, f64)]) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for (inp, w) in samples {
        acc += index_density(inp)?.top().to_c64() * *w;
    }
    Ok(acc)
}

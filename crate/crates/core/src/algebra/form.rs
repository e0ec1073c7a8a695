//! Nilpotent commutative coefficients: elements of the exterior algebra on
//! 1-form generators, used with even-degree content so that products commute.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::word::{self, Exterior, ProductRule, Word};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct FormScalar<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> fmt::Debug for FormScalar<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, s)| format!("{:?}·{}", s, word::display(*w, "e")))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<S: Scalar> FormScalar<S> {
    pub fn constant(s: S) -> Self {
        Self::monomial(s, 0)
    }

    pub fn monomial(s: S, w: Word) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(w, s);
        }
        FormScalar { terms }
    }

    /// `e^i ∧ e^j` with 1-based axes.
    pub fn two_form(i: usize, j: usize) -> Self {
        let sign = Exterior::sign(word::generator(i), word::generator(j));
        Self::monomial(S::from_int(sign as i64), word::generator(i) | word::generator(j))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: Word) -> S {
        self.terms.get(&w).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coefficient(0)
    }

    /// Part of form degree exactly `deg`.
    pub fn degree_part(&self, deg: usize) -> Self {
        FormScalar {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| word::len(**w) == deg)
                .map(|(w, s)| (*w, s.clone()))
                .collect(),
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.constant_term().is_zero()
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(*w, v.clone() * s.clone());
        }
        out
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> FormScalar<T> {
        let mut out = FormScalar::zero();
        for (w, v) in &self.terms {
            out.add_term(*w, f(v));
        }
        out
    }

    fn add_term(&mut self, w: Word, s: S) {
        let sum = match self.terms.remove(&w) {
            Some(old) => old + s,
            None => s,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
    }
}

impl<S: Scalar> Zero for FormScalar<S> {
    fn zero() -> Self {
        FormScalar {
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<S: Scalar> One for FormScalar<S> {
    fn one() -> Self {
        Self::constant(S::one())
    }
}

impl<S: Scalar> Add for FormScalar<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (w, s) in rhs.terms {
            self.add_term(w, s);
        }
        self
    }
}

impl<S: Scalar> Neg for FormScalar<S> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Sub for FormScalar<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Mul for FormScalar<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (wa, a) in &self.terms {
            for (wb, b) in &rhs.terms {
                let sign = Exterior::sign(*wa, *wb);
                if sign == 0 {
                    continue;
                }
                let v = a.clone() * b.clone();
                out.add_term(wa | wb, if sign < 0 { -v } else { v });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, ExactComplex};

    type F = FormScalar<ExactComplex>;

    #[test]
    fn two_forms_commute_and_square_to_zero() {
        let a = F::two_form(1, 2);
        let b = F::two_form(3, 4);
        assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        assert!((a.clone() * a).is_zero());
        assert_eq!(F::two_form(2, 1), -F::two_form(1, 2));
    }

    #[test]
    fn top_degree_survives() {
        let a = F::two_form(1, 2).scale(&q(3, 1));
        let b = F::two_form(3, 4);
        let p = a * b;
        assert_eq!(p.coefficient(0b1111), q(3, 1));
        assert_eq!(p.degree_part(4), p);
    }
}

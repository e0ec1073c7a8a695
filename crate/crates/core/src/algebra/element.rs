//! Sums of basis words with twist-matrix coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use super::matrix::Mat;
use super::word::{self, Clifford, Exterior, ProductRule, Word};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, C64};

#[derive(Clone, PartialEq)]
pub struct WordAlgebra<S, R> {
    n: usize,
    twist: usize,
    terms: BTreeMap<Word, Mat<S>>,
    rule: PhantomData<R>,
}

pub type CliffordElement<S> = WordAlgebra<S, Clifford>;
pub type ExteriorElement<S> = WordAlgebra<S, Exterior>;

impl<S: Scalar, R: ProductRule> fmt::Debug for WordAlgebra<S, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = if R::NAME == "clifford" { "c" } else { "e" };
        write!(f, "{}[n={}, N={}]{{", R::NAME, self.n, self.twist)?;
        for (i, (w, m)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{:?}·{}", m, word::display(*w, sym))?;
        }
        write!(f, "}}")
    }
}

impl<S: Scalar, R: ProductRule> WordAlgebra<S, R> {
    pub fn zero(n: usize, twist: usize) -> Self {
        assert!(n <= word::MAX_DIM, "dimension {n} exceeds {}", word::MAX_DIM);
        WordAlgebra {
            n,
            twist,
            terms: BTreeMap::new(),
            rule: PhantomData,
        }
    }

    pub fn one(n: usize, twist: usize) -> Self {
        Self::from_word(n, Mat::identity(twist), 0)
    }

    pub fn scalar(n: usize, twist: usize, s: S) -> Self {
        Self::from_word(n, Mat::scalar(twist, s), 0)
    }

    pub fn matrix(n: usize, m: Mat<S>) -> Self {
        Self::from_word(n, m, 0)
    }

    /// A single word with identity twist.
    pub fn basis(n: usize, twist: usize, w: Word) -> Self {
        Self::from_word(n, Mat::identity(twist), w)
    }

    /// Generator with 1-based axis `i`.
    pub fn generator(n: usize, twist: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n, "axis {i} outside 1..={n}");
        Self::basis(n, twist, word::generator(i))
    }

    pub fn from_word(n: usize, coeff: Mat<S>, w: Word) -> Self {
        assert!(w & !word::full(n) == 0, "word uses axes beyond n = {n}");
        let mut e = Self::zero(n, coeff.dim());
        if !coeff.is_zero() {
            e.terms.insert(w, coeff);
        }
        e
    }

    pub fn from_terms(n: usize, twist: usize, terms: impl IntoIterator<Item = (Word, Mat<S>)>) -> Self {
        let mut e = Self::zero(n, twist);
        for (w, m) in terms {
            e.add_term(w, m);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn twist(&self) -> usize {
        self.twist
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Mat<S>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: Word) -> Mat<S> {
        self.terms
            .get(&w)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.twist))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Longest word present, `None` for zero.
    pub fn max_word_len(&self) -> Option<usize> {
        self.terms.keys().map(|w| word::len(*w)).max()
    }

    pub fn add_term(&mut self, w: Word, m: Mat<S>) {
        assert_eq!(m.dim(), self.twist, "twist size mismatch");
        assert!(w & !word::full(self.n) == 0, "word uses axes beyond n = {}", self.n);
        let sum = match self.terms.remove(&w) {
            Some(old) => old + m,
            None => m,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.n, self.twist);
        for (w, m) in &self.terms {
            out.add_term(*w, m.scale(s));
        }
        out
    }

    /// Words of a fixed length only.
    pub fn homogeneous_part(&self, len: usize) -> Self {
        Self::from_terms(
            self.n,
            self.twist,
            self.terms
                .iter()
                .filter(|(w, _)| word::len(**w) == len)
                .map(|(w, m)| (*w, m.clone())),
        )
    }

    /// Even (`parity = 0`) or odd (`parity = 1`) words.
    pub fn parity_part(&self, parity: usize) -> Self {
        Self::from_terms(
            self.n,
            self.twist,
            self.terms
                .iter()
                .filter(|(w, _)| word::len(**w) % 2 == parity)
                .map(|(w, m)| (*w, m.clone())),
        )
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.twist != other.twist {
            return Err(Error::DimensionMismatch(format!(
                "(n, N) = ({}, {}) vs ({}, {})",
                self.n, self.twist, other.n, other.twist
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (w, m) in &other.terms {
            out.add_term(*w, m.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.n, self.twist);
        for (wa, ma) in &self.terms {
            for (wb, mb) in &other.terms {
                let sign = R::sign(*wa, *wb);
                if sign == 0 {
                    continue;
                }
                let prod = ma.matmul(mb);
                let prod = if sign < 0 { -prod } else { prod };
                out.add_term(wa ^ wb, prod);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n, self.twist);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> WordAlgebra<T, R> {
        let mut out = WordAlgebra::zero(self.n, self.twist);
        for (w, m) in &self.terms {
            out.add_term(*w, m.map(&f));
        }
        out
    }

    pub fn to_c64(&self) -> WordAlgebra<C64, R> {
        self.map_scalar(|v| v.to_c64())
    }

    /// Same words under a different product rule.
    pub fn reinterpret<R2: ProductRule>(&self) -> WordAlgebra<S, R2> {
        WordAlgebra {
            n: self.n,
            twist: self.twist,
            terms: self.terms.clone(),
            rule: PhantomData,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|m| m.entries().iter().map(|v| v.to_c64().norm()))
            .fold(0.0, f64::max)
    }
}

impl<S: Scalar> CliffordElement<S> {
    /// `(-2i)^{n/2} · tr` of the coefficient of `c^1 … c^n`.
    pub fn supertrace(&self) -> Result<S> {
        if self.n % 2 == 1 {
            return Err(Error::OddDimension(self.n));
        }
        let top = self.coefficient(word::full(self.n));
        let minus_two_i = S::imag_unit() * S::from_int(-2);
        Ok(minus_two_i.pow((self.n / 2) as u32) * top.trace())
    }

    /// Graded commutator `ab - (-1)^{|a||b|} ba` summed over parity components.
    pub fn supercommutator(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n, self.twist);
        for pa in 0..2 {
            let a = self.parity_part(pa);
            for pb in 0..2 {
                let b = other.parity_part(pb);
                let ab = &a * &b;
                let ba = &b * &a;
                let term = if pa * pb == 1 { ab + ba } else { ab - ba };
                out = out + term;
            }
        }
        out
    }
}

/// Word-for-word transfer to the exterior algebra (taken after reduction).
pub fn exterior_symbol<S: Scalar>(a: &CliffordElement<S>) -> ExteriorElement<S> {
    a.reinterpret()
}

impl<S: Scalar, R: ProductRule> Add for &WordAlgebra<S, R> {
    type Output = WordAlgebra<S, R>;
    fn add(self, rhs: Self) -> WordAlgebra<S, R> {
        self.try_add(rhs).expect("word algebra shape mismatch")
    }
}

impl<S: Scalar, R: ProductRule> Add for WordAlgebra<S, R> {
    type Output = WordAlgebra<S, R>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<S: Scalar, R: ProductRule> Neg for &WordAlgebra<S, R> {
    type Output = WordAlgebra<S, R>;
    fn neg(self) -> WordAlgebra<S, R> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar, R: ProductRule> Neg for WordAlgebra<S, R> {
    type Output = WordAlgebra<S, R>;
    fn neg(self) -> Self {
        -&self
    }
}

impl<S: Scalar, R: ProductRule> Sub for &WordAlgebra<S, R> {
    type Output = WordAlgebra<S, R>;
    fn sub(self, rhs: Self) -> WordAlgebra<S, R> {
        self + &(-rhs)
    }
}

impl<S: Scalar, R: ProductRule> Sub for WordAlgebra<S, R> {
    type Output = WordAlgebra<S, R>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<S: Scalar, R: ProductRule> Mul for &WordAlgebra<S, R> {
    type Output = WordAlgebra<S, R>;
    fn mul(self, rhs: Self) -> WordAlgebra<S, R> {
        self.try_mul(rhs).expect("word algebra shape mismatch")
    }
}

impl<S: Scalar, R: ProductRule> Mul for WordAlgebra<S, R> {
    type Output = WordAlgebra<S, R>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, ExactComplex};

    type E = ExactComplex;

    fn c(n: usize, i: usize) -> CliffordElement<E> {
        CliffordElement::generator(n, 1, i)
    }

    #[test]
    fn quadratic_relation_and_anticommutation() {
        assert_eq!(&c(2, 1) * &c(2, 1), CliffordElement::scalar(2, 1, q(-1, 1)));
        let c12 = CliffordElement::basis(2, 1, word::from_axes(&[1, 2]));
        assert_eq!(&c(2, 2) * &c(2, 1), -&c12);
        assert_eq!(&c12 * &c12, CliffordElement::scalar(2, 1, q(-1, 1)));
    }

    #[test]
    fn supertrace_values() {
        assert_eq!(CliffordElement::<E>::one(2, 1).supertrace().unwrap(), q(0, 1));
        let c12 = CliffordElement::<E>::basis(2, 1, 0b11);
        assert_eq!(c12.supertrace().unwrap(), E::new(q(0, 1).re, q(-2, 1).re));
        assert_eq!(
            CliffordElement::<E>::one(3, 1).supertrace(),
            Err(Error::OddDimension(3))
        );
    }

    #[test]
    fn symbol_is_taken_after_reduction() {
        let sq = &c(2, 1) * &c(2, 1);
        assert_eq!(exterior_symbol(&sq), ExteriorElement::scalar(2, 1, q(-1, 1)));
        let e1 = ExteriorElement::<E>::generator(2, 1, 1);
        assert!((&e1 * &e1).is_zero());
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let a = CliffordElement::<E>::one(2, 1);
        let b = CliffordElement::<E>::one(3, 1);
        assert!(matches!(a.try_mul(&b), Err(Error::DimensionMismatch(_))));
    }
}

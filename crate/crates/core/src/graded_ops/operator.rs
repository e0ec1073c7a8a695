use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::grading::GradingWeights;
use super::multi_index::MultiIndex;
use crate::algebra::{exterior_symbol, word, Clifford, Exterior, Mat, ProductRule, Word, WordAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, C64};

/// Position of a monomial: x-exponents, derivative exponents, parameter power.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialKey {
    pub x: MultiIndex,
    pub d: MultiIndex,
    pub param: u32,
}

/// A single term `coeff · x^I c^J ∂^K · param^a` in normal order.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMonomial<S> {
    pub coeff: Mat<S>,
    pub x: MultiIndex,
    pub word: Word,
    pub d: MultiIndex,
    pub param: u32,
}

/// Differential operator with polynomial coefficients valued in a word algebra.
#[derive(Clone, PartialEq)]
pub struct GradedOperator<S, R> {
    n: usize,
    twist: usize,
    terms: BTreeMap<MonomialKey, WordAlgebra<S, R>>,
}

pub type CliffordOperator<S> = GradedOperator<S, Clifford>;
pub type ExteriorOperator<S> = GradedOperator<S, Exterior>;

impl<S: Scalar, R: ProductRule> fmt::Debug for GradedOperator<S, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "operator[n={}, N={}]", self.n, self.twist)?;
        for (k, c) in &self.terms {
            writeln!(f, "  x{:?} d{:?} p^{}: {:?}", k.x, k.d, k.param, c)?;
        }
        Ok(())
    }
}

/// `∏ C(k_i, l_i) · s_i! / (s_i - l_i)!`, the Leibniz weight of `∂^K x^S → x^{S-l} ∂^{K-l}`.
fn leibniz_weight(k: &MultiIndex, s: &MultiIndex, l: &MultiIndex) -> i64 {
    let mut w: i64 = 1;
    for ((&ki, &si), &li) in k.exponents().iter().zip(s.exponents()).zip(l.exponents()) {
        w *= binomial(ki, li) * falling(si, li);
    }
    w
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn falling(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64)
}

impl<S: Scalar, R: ProductRule> GradedOperator<S, R> {
    pub fn zero(n: usize, twist: usize) -> Self {
        GradedOperator {
            n,
            twist,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, twist: usize) -> Self {
        Self::multiplication(WordAlgebra::one(n, twist))
    }

    /// Zeroth-order operator: multiplication by a constant algebra element.
    pub fn multiplication(c: WordAlgebra<S, R>) -> Self {
        let n = c.dim();
        Self::term(c, MultiIndex::unit(n), MultiIndex::unit(n), 0)
    }

    pub fn term(coeff: WordAlgebra<S, R>, x: MultiIndex, d: MultiIndex, param: u32) -> Self {
        let mut op = Self::zero(coeff.dim(), coeff.twist());
        op.add_term(MonomialKey { x, d, param }, coeff);
        op
    }

    /// `x_i` (1-based) as a multiplication operator.
    pub fn coordinate(n: usize, twist: usize, i: usize) -> Self {
        Self::term(WordAlgebra::one(n, twist), MultiIndex::axis(n, i, 1), MultiIndex::unit(n), 0)
    }

    /// `∂_i` (1-based).
    pub fn derivative(n: usize, twist: usize, i: usize) -> Self {
        Self::term(WordAlgebra::one(n, twist), MultiIndex::unit(n), MultiIndex::axis(n, i, 1), 0)
    }

    /// The formal parameter as a multiplication operator.
    pub fn parameter(n: usize, twist: usize) -> Self {
        Self::term(WordAlgebra::one(n, twist), MultiIndex::unit(n), MultiIndex::unit(n), 1)
    }

    /// `Σ_i ∂_i²`.
    pub fn laplacian(n: usize, twist: usize) -> Self {
        (1..=n).fold(Self::zero(n, twist), |acc, i| {
            acc + Self::term(WordAlgebra::one(n, twist), MultiIndex::unit(n), MultiIndex::axis(n, i, 2), 0)
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn twist(&self) -> usize {
        self.twist
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &WordAlgebra<S, R>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &MonomialKey) -> WordAlgebra<S, R> {
        self.terms
            .get(key)
            .cloned()
            .unwrap_or_else(|| WordAlgebra::zero(self.n, self.twist))
    }

    /// Flattened monomials, one per (position, word).
    pub fn monomials(&self) -> Vec<OperatorMonomial<S>> {
        let mut out = Vec::new();
        for (k, c) in &self.terms {
            for (w, m) in c.terms() {
                out.push(OperatorMonomial {
                    coeff: m.clone(),
                    x: k.x.clone(),
                    word: *w,
                    d: k.d.clone(),
                    param: k.param,
                });
            }
        }
        out
    }

    pub fn from_monomials(n: usize, twist: usize, monos: impl IntoIterator<Item = OperatorMonomial<S>>) -> Self {
        let mut op = Self::zero(n, twist);
        for m in monos {
            let coeff = WordAlgebra::from_word(n, m.coeff, m.word);
            op.add_term(
                MonomialKey {
                    x: m.x,
                    d: m.d,
                    param: m.param,
                },
                coeff,
            );
        }
        op
    }

    pub fn add_term(&mut self, key: MonomialKey, c: WordAlgebra<S, R>) {
        assert_eq!((c.dim(), c.twist()), (self.n, self.twist), "operator shape mismatch");
        assert_eq!(key.x.dim(), self.n);
        assert_eq!(key.d.dim(), self.n);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.twist != other.twist {
            return Err(Error::DimensionMismatch(format!(
                "operators with (n, N) = ({}, {}) and ({}, {})",
                self.n, self.twist, other.n, other.twist
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.n, self.twist);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.scale(s));
        }
        out
    }

    /// Normal-ordered composition `self ∘ other` via the Leibniz rule.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.n, self.twist);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let prod = ca * cb;
                if prod.is_zero() {
                    continue;
                }
                for l in MultiIndex::sub_indices(&ka.d) {
                    let Some(xrest) = kb.x.minus(&l) else { continue };
                    let w = leibniz_weight(&ka.d, &kb.x, &l);
                    let dleft = ka.d.minus(&l).expect("l ≤ K by construction");
                    let key = MonomialKey {
                        x: ka.x.plus(&xrest),
                        d: dleft.plus(&kb.d),
                        param: ka.param + kb.param,
                    };
                    out.add_term(key, prod.scale(&S::from_int(w)));
                }
            }
        }
        Ok(out)
    }

    /// Maximum weight over all monomials, `None` for the zero operator.
    pub fn grading_order(&self, w: &GradingWeights) -> Option<i64> {
        self.monomial_orders(w).map(|(_, _, o)| o).max()
    }

    fn monomial_orders<'a>(&'a self, w: &'a GradingWeights) -> impl Iterator<Item = (&'a MonomialKey, Word, i64)> + 'a {
        self.terms.iter().flat_map(move |(k, c)| {
            c.terms().map(move |(wd, _)| {
                (k, *wd, w.weight(k.x.degree(), k.d.degree(), word::len(*wd), k.param))
            })
        })
    }

    /// Sub-sum of monomials achieving the grading order.
    pub fn top_part(&self, w: &GradingWeights) -> Self {
        let Some(top) = self.grading_order(w) else {
            return self.clone();
        };
        let mut out = Self::zero(self.n, self.twist);
        for (k, c) in &self.terms {
            for (wd, m) in c.terms() {
                if w.weight(k.x.degree(), k.d.degree(), word::len(*wd), k.param) == top {
                    out.add_term(k.clone(), WordAlgebra::from_word(self.n, m.clone(), *wd));
                }
            }
        }
        out
    }

    /// Replaces the formal parameter by a value.
    pub fn substitute_param(&self, value: &S) -> Self {
        let mut out = Self::zero(self.n, self.twist);
        for (k, c) in &self.terms {
            let key = MonomialKey {
                x: k.x.clone(),
                d: k.d.clone(),
                param: 0,
            };
            out.add_term(key, c.scale(&value.pow(k.param)));
        }
        out
    }

    pub fn max_param(&self) -> u32 {
        self.terms.keys().map(|k| k.param).max().unwrap_or(0)
    }

    pub fn map_coefficients<R2: ProductRule>(&self, f: impl Fn(&WordAlgebra<S, R>) -> WordAlgebra<S, R2>) -> GradedOperator<S, R2> {
        let mut out = GradedOperator::zero(self.n, self.twist);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }

    pub fn to_c64(&self) -> GradedOperator<C64, R> {
        let mut out = GradedOperator::zero(self.n, self.twist);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.to_c64());
        }
        out
    }

    /// Largest coefficient magnitude, for numeric comparisons.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    /// Largest `|I| - |K|` over monomials, the x-degree reach when applied to jets.
    pub fn degree_reach(&self) -> i64 {
        self.terms
            .keys()
            .map(|k| k.x.degree() as i64 - k.d.degree() as i64)
            .max()
            .unwrap_or(0)
    }

    /// Smallest `|I| - |K|`: how much validity a truncated jet loses under this operator.
    pub fn degree_loss(&self) -> i64 {
        self.terms
            .keys()
            .map(|k| k.x.degree() as i64 - k.d.degree() as i64)
            .min()
            .unwrap_or(0)
    }
}

impl<S: Scalar> CliffordOperator<S> {
    /// Top part under the Clifford grading followed by the exterior symbol.
    pub fn model_operator(&self, w: &GradingWeights) -> Result<ExteriorOperator<S>> {
        if *w != GradingWeights::CLIFFORD {
            return Err(Error::InvalidInput(format!(
                "model operator needs the cG grading, got {}",
                w.name()
            )));
        }
        Ok(self.top_part(w).map_coefficients(exterior_symbol))
    }
}

impl<S: Scalar, R: ProductRule> Add for GradedOperator<S, R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("operator shape mismatch")
    }
}

impl<S: Scalar, R: ProductRule> Add for &GradedOperator<S, R> {
    type Output = GradedOperator<S, R>;
    fn add(self, rhs: Self) -> GradedOperator<S, R> {
        self.try_add(rhs).expect("operator shape mismatch")
    }
}

impl<S: Scalar, R: ProductRule> Neg for GradedOperator<S, R> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(&-S::one())
    }
}

impl<S: Scalar, R: ProductRule> Neg for &GradedOperator<S, R> {
    type Output = GradedOperator<S, R>;
    fn neg(self) -> GradedOperator<S, R> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar, R: ProductRule> Sub for GradedOperator<S, R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar, R: ProductRule> Sub for &GradedOperator<S, R> {
    type Output = GradedOperator<S, R>;
    fn sub(self, rhs: Self) -> GradedOperator<S, R> {
        self + &(-rhs)
    }
}

/// Composition.
impl<S: Scalar, R: ProductRule> Mul for &GradedOperator<S, R> {
    type Output = GradedOperator<S, R>;
    fn mul(self, rhs: Self) -> GradedOperator<S, R> {
        self.compose(rhs).expect("operator shape mismatch")
    }
}

impl<S: Scalar, R: ProductRule> Mul for GradedOperator<S, R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

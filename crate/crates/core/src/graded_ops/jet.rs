//! Polynomial jets around the base point.
//!
//! A jet is either an exact polynomial or known only through some degree
//! (`valid`). Arithmetic on exact jets refuses to drop terms beyond the
//! storage bound; truncated jets drop them and lower their validity.

use std::collections::BTreeMap;
use std::fmt;

use super::grading::GradingWeights;
use super::multi_index::MultiIndex;
use super::operator::{GradedOperator, MonomialKey};
use crate::algebra::{word, ProductRule, WordAlgebra};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue<S> {
    Formal,
    Value(S),
}

/// Key of a jet term: x-exponents and formal-parameter power.
pub type JetKey = (MultiIndex, u32);

#[derive(Clone, PartialEq)]
pub struct JetSection<S, R> {
    n: usize,
    twist: usize,
    bound: usize,
    valid: Option<usize>,
    terms: BTreeMap<JetKey, WordAlgebra<S, R>>,
}

impl<S: Scalar, R: ProductRule> fmt::Debug for JetSection<S, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "jet[n={}, N={}, bound={}, valid={:?}]", self.n, self.twist, self.bound, self.valid)?;
        for ((x, p), c) in &self.terms {
            writeln!(f, "  x{:?} p^{}: {:?}", x, p, c)?;
        }
        Ok(())
    }
}

fn min_validity(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (None, v) | (v, None) => v,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl<S: Scalar, R: ProductRule> JetSection<S, R> {
    pub fn zero(n: usize, twist: usize, bound: usize) -> Self {
        JetSection {
            n,
            twist,
            bound,
            valid: None,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: WordAlgebra<S, R>, bound: usize) -> Self {
        let mut s = Self::zero(c.dim(), c.twist(), bound);
        if !c.is_zero() {
            s.terms.insert((MultiIndex::unit(c.dim()), 0), c);
        }
        s
    }

    pub fn monomial(c: WordAlgebra<S, R>, x: MultiIndex, param: u32, bound: usize) -> Result<Self> {
        let mut s = Self::zero(c.dim(), c.twist(), bound);
        s.absorb((x, param), c)?;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn twist(&self) -> usize {
        self.twist
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// `None` for an exact polynomial, otherwise the degree through which terms are known.
    pub fn valid_through(&self) -> Option<usize> {
        self.valid
    }

    pub fn is_exact(&self) -> bool {
        self.valid.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetKey, &WordAlgebra<S, R>)> {
        self.terms.iter()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(x, _)| x.degree()).max()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|(x, _)| x.degree()).min()
    }

    pub fn max_param(&self) -> u32 {
        self.terms.keys().map(|(_, p)| *p).max().unwrap_or(0)
    }

    /// Ceiling on stored degrees: the bound, further capped by validity.
    fn cap(&self) -> usize {
        self.valid.map_or(self.bound, |v| v.min(self.bound))
    }

    /// Inserts a term, dropping it when beyond validity and erroring when an
    /// exact jet would exceed its bound.
    fn absorb(&mut self, key: JetKey, c: WordAlgebra<S, R>) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        let deg = key.0.degree();
        if let Some(v) = self.valid {
            if deg > v {
                return Ok(());
            }
        }
        if deg > self.bound {
            if self.valid.is_none() {
                return Err(Error::TruncationOverflow {
                    degree: deg,
                    bound: self.bound,
                });
            }
            return Ok(());
        }
        let sum = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    /// Marks the jet as known only through `v` and drops anything above.
    pub fn truncate_validity(&mut self, v: usize) {
        self.valid = min_validity(self.valid, Some(v));
        let cap = self.cap();
        self.terms.retain(|(x, _), _| x.degree() <= cap);
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if (self.n, self.twist) != (other.n, other.twist) {
            return Err(Error::DimensionMismatch(format!(
                "jets with (n, N) = ({}, {}) and ({}, {})",
                self.n, self.twist, other.n, other.twist
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.n, self.twist, self.bound.min(other.bound));
        out.valid = min_validity(self.valid, other.valid);
        for (k, c) in self.terms.iter().chain(other.terms.iter()) {
            out.absorb(k.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = self.clone();
        out.terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let v = c.scale(s);
            if !v.is_zero() {
                out.terms.insert(k.clone(), v);
            }
        }
        out
    }

    /// Left multiplication by a constant algebra element.
    pub fn left_mul(&self, c: &WordAlgebra<S, R>) -> Self {
        let mut out = self.clone();
        out.terms = BTreeMap::new();
        for (k, v) in &self.terms {
            let p = c * v;
            if !p.is_zero() {
                out.terms.insert(k.clone(), p);
            }
        }
        out
    }

    /// Product with a scalar jet.
    pub fn mul_scalar_jet(&self, g: &ScalarJet<S>) -> Result<Self> {
        if g.dim() != self.n {
            return Err(Error::DimensionMismatch("scalar jet dimension".into()));
        }
        let low_self = self.min_degree().unwrap_or(0);
        let low_g = g.min_degree().unwrap_or(0);
        let valid = match (self.valid, g.valid_through()) {
            (None, None) => None,
            (Some(a), None) => Some(a + low_g),
            (None, Some(b)) => Some(b + low_self),
            (Some(a), Some(b)) => Some((a + low_g).min(b + low_self)),
        };
        let mut out = Self::zero(self.n, self.twist, self.bound);
        out.valid = valid;
        for ((x, p), c) in &self.terms {
            for (gx, gv) in g.terms() {
                out.absorb((x.plus(gx), *p), c.scale(gv))?;
            }
        }
        Ok(out)
    }

    /// `∫_0^1 s^{j-1} f(s x) ds`, exact on monomials: `x^I ↦ x^I / (j + |I|)`.
    pub fn ray_integrate(&self, j: usize) -> Self {
        let mut out = self.clone();
        out.terms = BTreeMap::new();
        for ((x, p), c) in &self.terms {
            let denom = (j + x.degree()) as i64;
            assert!(denom > 0, "ray integral of a constant with j = 0 diverges");
            out.terms.insert((x.clone(), *p), c.scale(&S::from_ratio(1, denom)));
        }
        out
    }

    /// Euler operator `Σ x_i ∂_i`: multiplies `x^I` by `|I|`.
    pub fn euler(&self) -> Self {
        let mut out = self.clone();
        out.terms = BTreeMap::new();
        for ((x, p), c) in &self.terms {
            if x.degree() > 0 {
                out.terms
                    .insert((x.clone(), *p), c.scale(&S::from_int(x.degree() as i64)));
            }
        }
        out
    }

    /// Coefficient at `x = 0`, grouped by parameter power.
    pub fn at_origin(&self) -> BTreeMap<u32, WordAlgebra<S, R>> {
        self.terms
            .iter()
            .filter(|((x, _), _)| x.is_unit())
            .map(|((_, p), c)| (*p, c.clone()))
            .collect()
    }

    /// Value at `x = 0` with the parameter substituted.
    pub fn value_at_origin(&self, param: &ParamValue<S>) -> WordAlgebra<S, R> {
        let mut acc = WordAlgebra::zero(self.n, self.twist);
        for (p, c) in self.at_origin() {
            let f = match param {
                ParamValue::Formal if p > 0 => panic!("formal parameter present; substitute a value"),
                ParamValue::Formal => S::one(),
                ParamValue::Value(v) => v.pow(p),
            };
            acc = acc + c.scale(&f);
        }
        acc
    }

    /// Viewed as a zeroth-order operator.
    pub fn as_operator(&self) -> GradedOperator<S, R> {
        let mut op = GradedOperator::zero(self.n, self.twist);
        for ((x, p), c) in &self.terms {
            op.add_term(
                MonomialKey {
                    x: x.clone(),
                    d: MultiIndex::unit(self.n),
                    param: *p,
                },
                c.clone(),
            );
        }
        op
    }

    pub fn grading_order(&self, w: &GradingWeights) -> Option<i64> {
        self.terms
            .iter()
            .flat_map(|((x, p), c)| c.terms().map(move |(wd, _)| w.weight(x.degree(), 0, word::len(*wd), *p)))
            .max()
    }

    /// Terms of a given grading weight.
    pub fn weight_part(&self, w: &GradingWeights, order: i64) -> Self {
        let mut out = self.clone();
        out.terms = BTreeMap::new();
        for ((x, p), c) in &self.terms {
            let mut part = WordAlgebra::zero(self.n, self.twist);
            for (wd, m) in c.terms() {
                if w.weight(x.degree(), 0, word::len(*wd), *p) == order {
                    part.add_term(*wd, m.clone());
                }
            }
            if !part.is_zero() {
                out.terms.insert((x.clone(), *p), part);
            }
        }
        out
    }

    /// Same terms, compared ignoring bound and validity metadata.
    pub fn same_terms(&self, other: &Self) -> bool {
        self.terms == other.terms
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.max_abs()).fold(0.0, f64::max)
    }
}

impl<S: Scalar, R: ProductRule> GradedOperator<S, R> {
    /// The operator acting on a polynomial section.
    pub fn apply(&self, s: &JetSection<S, R>, param: &ParamValue<S>) -> Result<JetSection<S, R>> {
        if (self.dim(), self.twist()) != (s.n, s.twist) {
            return Err(Error::DimensionMismatch(format!(
                "operator (n, N) = ({}, {}) on jet ({}, {})",
                self.dim(),
                self.twist(),
                s.n,
                s.twist
            )));
        }
        let valid = match s.valid {
            None => None,
            Some(v) => {
                let v2 = v as i64 + self.degree_loss();
                if v2 < 0 {
                    return Err(Error::InsufficientPrecision(format!(
                        "jet valid through degree {v} cannot absorb a loss of {}",
                        -self.degree_loss()
                    )));
                }
                Some(v2 as usize)
            }
        };
        let mut out = JetSection::zero(s.n, s.twist, s.bound);
        out.valid = valid;
        for (k, a) in self.terms() {
            for ((sx, sp), c) in &s.terms {
                let Some(rest) = sx.minus(&k.d) else { continue };
                let falling: i64 = sx
                    .exponents()
                    .iter()
                    .zip(k.d.exponents())
                    .map(|(&s, &d)| (0..d).fold(1i64, |acc, i| acc * (s - i) as i64))
                    .product();
                let mut coeff = (a * c).scale(&S::from_int(falling));
                let p = match param {
                    ParamValue::Formal => sp + k.param,
                    ParamValue::Value(v) => {
                        coeff = coeff.scale(&v.pow(k.param));
                        *sp
                    }
                };
                out.absorb((k.x.plus(&rest), p), coeff)?;
            }
        }
        Ok(out)
    }
}

/// Scalar polynomial jet (metric densities, scalar curvature).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarJet<S> {
    n: usize,
    valid: Option<usize>,
    terms: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> ScalarJet<S> {
    pub fn one(n: usize) -> Self {
        Self::constant(n, S::one())
    }

    pub fn constant(n: usize, v: S) -> Self {
        let mut terms = BTreeMap::new();
        if !v.is_zero() {
            terms.insert(MultiIndex::unit(n), v);
        }
        ScalarJet { n, valid: None, terms }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, S)>) -> Self {
        let mut out = ScalarJet {
            n,
            valid: None,
            terms: BTreeMap::new(),
        };
        for (x, v) in terms {
            out.add_term(x, v);
        }
        out
    }

    fn add_term(&mut self, x: MultiIndex, v: S) {
        let sum = match self.terms.remove(&x) {
            Some(old) => old + v,
            None => v,
        };
        if !sum.is_zero() {
            self.terms.insert(x, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn valid_through(&self) -> Option<usize> {
        self.valid
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|x| x.degree()).min()
    }

    pub fn constant_term(&self) -> S {
        self.terms
            .get(&MultiIndex::unit(self.n))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    pub fn is_constant_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term() == S::one()
    }

    /// Product truncated at `bound`.
    pub fn mul_truncated(&self, other: &Self, bound: usize) -> Self {
        let mut out = ScalarJet {
            n: self.n,
            valid: min_validity(self.valid, other.valid),
            terms: BTreeMap::new(),
        };
        let cap = out.valid.map_or(bound, |v| v.min(bound));
        let mut dropped = false;
        for (xa, a) in &self.terms {
            for (xb, b) in &other.terms {
                let x = xa.plus(xb);
                if x.degree() > cap {
                    dropped = true;
                    continue;
                }
                out.add_term(x, a.clone() * b.clone());
            }
        }
        if dropped {
            out.valid = min_validity(out.valid, Some(cap));
        }
        out
    }

    /// `1/g` as a series, for `g` with constant term 1, truncated at `bound`.
    pub fn reciprocal(&self, bound: usize) -> Result<Self> {
        if self.constant_term() != S::one() {
            return Err(Error::InvalidInput("jet reciprocal needs constant term 1".into()));
        }
        let u = self.clone() - Self::one(self.n);
        if u.terms.is_empty() {
            return Ok(Self::one(self.n));
        }
        let mut acc = Self::one(self.n);
        let mut power = Self::one(self.n);
        let neg_u = u.scale(&-S::one());
        for _ in 0..bound {
            power = power.mul_truncated(&neg_u, bound);
            acc = acc + power.clone();
        }
        acc.valid = min_validity(acc.valid, Some(bound));
        acc.terms.retain(|x, _| x.degree() <= bound);
        Ok(acc)
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = ScalarJet {
            n: self.n,
            valid: self.valid,
            terms: BTreeMap::new(),
        };
        for (x, v) in &self.terms {
            out.add_term(x.clone(), v.clone() * s.clone());
        }
        out
    }
}

impl<S: Scalar> std::ops::Add for ScalarJet<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.valid = min_validity(self.valid, rhs.valid);
        for (x, v) in rhs.terms {
            self.add_term(x, v);
        }
        self
    }
}

impl<S: Scalar> std::ops::Sub for ScalarJet<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(&-S::one())
    }
}

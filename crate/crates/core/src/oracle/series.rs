//! Exact Taylor coefficients of characteristic series by scalar power-series
//! composition, and the genus they define on a matrix of 2-forms.

use num::{BigInt, BigRational, One, Zero};

use crate::algebra::{FormScalar, Mat};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharacteristicSeries {
    /// `√((x/2) / sinh(x/2))` per eigenvalue, i.e. the unit-normalized Â-genus.
    AHat,
    /// `√(x / sinh x)` per eigenvalue.
    SqrtXOverSinh,
    /// `x / (1 - e^{-2x})`, not under a square root.
    XOverOneMinusExp,
}

impl CharacteristicSeries {
    pub const ALL: [CharacteristicSeries; 3] = [Self::AHat, Self::SqrtXOverSinh, Self::XOverOneMinusExp];

    pub fn name(self) -> &'static str {
        match self {
            Self::AHat => "ahat",
            Self::SqrtXOverSinh => "sqrt_x_over_sinh",
            Self::XOverOneMinusExp => "x_over_one_minus_exp",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    fn under_sqrt(self) -> bool {
        !matches!(self, Self::XOverOneMinusExp)
    }

    /// The per-eigenvalue function before any square root.
    fn base(self, order: usize) -> Series {
        match self {
            Self::AHat => Series::sinh_over_x(order).rescale(&ratio(1, 2)).recip(),
            Self::SqrtXOverSinh => Series::sinh_over_x(order).recip(),
            Self::XOverOneMinusExp => Series::one_minus_exp_over_x(order).recip(),
        }
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Truncated power series in one variable.
#[derive(Debug, Clone, PartialEq)]
struct Series(Vec<BigRational>);

impl Series {
    fn order(&self) -> usize {
        self.0.len() - 1
    }

    fn sinh_over_x(order: usize) -> Self {
        let mut c = vec![BigRational::zero(); order + 1];
        let mut fact = BigInt::one();
        for k in 0..=order {
            fact *= BigInt::from(k as u64 + 1);
            if k % 2 == 0 {
                c[k] = BigRational::new(BigInt::one(), fact.clone());
            }
        }
        Series(c)
    }

    fn one_minus_exp_over_x(order: usize) -> Self {
        // 1 - e^{-2x} = -Σ_{k≥1} (-2x)^k / k!
        let mut c = vec![BigRational::zero(); order + 1];
        let mut fact = BigInt::one();
        let mut pow = BigInt::one();
        for k in 1..=order + 1 {
            fact *= BigInt::from(k as u64);
            pow *= BigInt::from(-2);
            c[k - 1] = -BigRational::new(pow.clone(), fact.clone());
        }
        Series(c)
    }

    /// `f(s·x)`.
    fn rescale(&self, s: &BigRational) -> Self {
        let mut p = BigRational::one();
        Series(
            self.0
                .iter()
                .map(|c| {
                    let v = c * &p;
                    p *= s;
                    v
                })
                .collect(),
        )
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut c = vec![BigRational::zero(); n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                c[i + j] += &self.0[i] * &other.0[j];
            }
        }
        Series(c)
    }

    fn recip(&self) -> Self {
        let n = self.order();
        let a0 = self.0[0].clone();
        assert!(!a0.is_zero(), "reciprocal of a series without constant term");
        let mut b = vec![BigRational::zero(); n + 1];
        b[0] = a0.recip();
        for k in 1..=n {
            let mut s = BigRational::zero();
            for j in 1..=k {
                s += &self.0[j] * &b[k - j];
            }
            b[k] = -s / &a0;
        }
        Series(b)
    }

    fn derivative(&self) -> Self {
        let mut c: Vec<BigRational> = (1..self.0.len())
            .map(|k| &self.0[k] * BigRational::from_integer(BigInt::from(k as u64)))
            .collect();
        c.push(BigRational::zero());
        Series(c)
    }

    /// `log f` for `f(0) = 1`, as `∫ f'/f`.
    fn log(&self) -> Self {
        assert!(self.0[0].is_one(), "log of a series with constant term ≠ 1");
        let q = self.derivative().mul(&self.recip());
        let mut c = vec![BigRational::zero(); self.0.len()];
        for k in 1..c.len() {
            c[k] = &q.0[k - 1] / BigRational::from_integer(BigInt::from(k as u64));
        }
        Series(c)
    }

    /// `exp u` for `u(0) = 0`, from `e' = u' e`.
    fn exp(&self) -> Self {
        assert!(self.0[0].is_zero(), "exp of a series with constant term");
        let n = self.order();
        let mut e = vec![BigRational::zero(); n + 1];
        e[0] = BigRational::one();
        for k in 1..=n {
            let mut s = BigRational::zero();
            for j in 1..=k {
                s += BigRational::from_integer(BigInt::from(j as u64)) * &self.0[j] * &e[k - j];
            }
            e[k] = s / BigRational::from_integer(BigInt::from(k as u64));
        }
        Series(e)
    }

    fn scale(&self, s: &BigRational) -> Self {
        Series(self.0.iter().map(|c| c * s).collect())
    }
}

fn checked_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::InvalidInput(format!("series order {order} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

/// Taylor coefficients `c_0 .. c_order` of the named scalar series.
pub fn series_oracle(kind: CharacteristicSeries, order: usize) -> Result<Vec<BigRational>> {
    checked_order(order)?;
    let f = kind.base(order);
    let out = if kind.under_sqrt() {
        f.log().scale(&ratio(1, 2)).exp()
    } else {
        f
    };
    Ok(out.0)
}

/// Coefficients `ℓ_k` of `log g`, so that the genus is `exp(Σ ℓ_k tr R^k)`.
pub fn log_coefficients(kind: CharacteristicSeries, order: usize) -> Result<Vec<BigRational>> {
    checked_order(order)?;
    let f = kind.base(order);
    // log of x/(1-e^{-2x}) needs f(0) = 1.
    let f = f.scale(&f.0[0].recip());
    let l = f.log();
    Ok(if kind.under_sqrt() { l.scale(&ratio(1, 2)).0 } else { l.0 })
}

/// Multiplicative genus `det(g(R))` (or `√det` for square-root series) of a matrix
/// of even forms in dimension `n`, expanded through power sums `tr R^k`.
pub fn genus_from_power_sums<S: Scalar>(
    kind: CharacteristicSeries,
    curvature: &Mat<FormScalar<S>>,
    n: usize,
) -> Result<FormScalar<S>> {
    if curvature.entries().iter().any(|e| !e.is_nilpotent()) {
        return Err(Error::InvalidInput("curvature entries must be nilpotent forms".into()));
    }
    let order = (n / 2).max(1);
    let logs = log_coefficients(kind, order)?;
    let dim = curvature.dim();
    let constant = if kind.under_sqrt() {
        FormScalar::one()
    } else {
        // x/(1-e^{-2x}) starts at 1/2 per eigenvalue.
        FormScalar::constant(S::from_rational(&ratio(1, 2)).pow(dim as u32))
    };
    let mut exponent = FormScalar::<S>::zero();
    let mut power = Mat::identity(dim);
    for ell in logs.iter().skip(1) {
        power = power.matmul(curvature);
        if power.is_zero() {
            break;
        }
        exponent = exponent + power.trace().scale(&S::from_rational(ell));
    }
    let mut sum = FormScalar::one();
    let mut term = FormScalar::one();
    for k in 1..=n {
        term = term * exponent.clone();
        if term.is_zero() {
            break;
        }
        term = term.scale(&S::from_ratio(1, k as i64));
        sum = sum + term.clone();
    }
    Ok(constant * sum)
}

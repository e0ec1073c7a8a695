//! Finite-difference residual of the heat equation `(∂_t + H) k = 0`.

use crate::algebra::{spin, CliffordElement, Mat};
use crate::error::{Error, Result};
use crate::graded_ops::{CliffordOperator, OperatorMonomial};
use crate::scalar::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct FdGrid {
    pub points: Vec<Vec<f64>>,
    pub t: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdReport {
    pub coarse: f64,
    pub fine: f64,
    /// `coarse / fine`; about 4 for a consistent second-order discretization.
    pub ratio: f64,
}

struct Term {
    coeff: Mat<C64>,
    x: Vec<u32>,
    axes: Vec<usize>,
}

fn prepare(op: &CliffordOperator<C64>) -> Result<Vec<Term>> {
    let monos = op.monomials();
    let clifford = monos.iter().any(|m| m.word != 0);
    monos
        .into_iter()
        .map(|OperatorMonomial { coeff, x, word, d, param }| {
            if param != 0 {
                return Err(Error::InvalidInput("substitute the parameter before taking residuals".into()));
            }
            if d.degree() > 2 {
                return Err(Error::InvalidInput(format!("derivative order {} exceeds the stencil", d.degree())));
            }
            let coeff = if clifford {
                spin::represent(&CliffordElement::from_word(op.dim(), coeff, word))
            } else {
                coeff
            };
            let axes = d
                .pairs()
                .into_iter()
                .flat_map(|(i, k)| std::iter::repeat_n(i - 1, k as usize))
                .collect();
            Ok(Term { coeff, x: x.exponents().to_vec(), axes })
        })
        .collect()
}

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(i, dx) in moves {
        y[i] += dx;
    }
    y
}

/// Central-difference `∂^axes k(t, ·)` at `x`.
fn derivative<K>(kernel: &K, t: f64, x: &[f64], axes: &[usize], h: f64) -> Result<Mat<C64>>
where
    K: Fn(f64, &[f64]) -> Result<Mat<C64>>,
{
    let at = |moves: &[(usize, f64)]| kernel(t, &shifted(x, moves));
    let c = |v: f64| C64::new(v, 0.0);
    Ok(match *axes {
        [] => at(&[])?,
        [i] => (at(&[(i, h)])? - at(&[(i, -h)])?).scale(&c(0.5 / h)),
        [i, j] if i == j => {
            (at(&[(i, h)])? - at(&[])?.scale(&c(2.0)) + at(&[(i, -h)])?).scale(&c(1.0 / (h * h)))
        }
        [i, j] => (at(&[(i, h), (j, h)])? - at(&[(i, h), (j, -h)])? - at(&[(i, -h), (j, h)])?
            + at(&[(i, -h), (j, -h)])?)
        .scale(&c(0.25 / (h * h))),
        _ => unreachable!("stencil order checked in prepare"),
    })
}

fn residual_norm<K>(kernel: &K, terms: &[Term], grid: &FdGrid, h: f64) -> Result<f64>
where
    K: Fn(f64, &[f64]) -> Result<Mat<C64>>,
{
    let mut worst: f64 = 0.0;
    for x in &grid.points {
        let dt = (kernel(grid.t + h, x)? - kernel(grid.t - h, x)?).scale(&C64::new(0.5 / h, 0.0));
        let mut res = dt;
        for term in terms {
            let mono: f64 = term.x.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product();
            if mono == 0.0 {
                continue;
            }
            let dk = derivative(kernel, grid.t, x, &term.axes, h)?;
            if dk.dim() != term.coeff.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "kernel values are {}x{}, operator coefficients {}x{}",
                    dk.dim(),
                    dk.dim(),
                    term.coeff.dim(),
                    term.coeff.dim()
                )));
            }
            res = res + term.coeff.matmul(&dk).scale(&C64::new(mono, 0.0));
        }
        worst = worst.max(res.max_abs());
    }
    Ok(worst)
}

/// Max-norm of `∂_t k + H k` over the grid at spacings `h` and `h/2` (time step equal
/// to the spatial step), for a kernel `k(t, x)` with the second point fixed.
pub fn fd_residual<K>(kernel: K, op: &CliffordOperator<C64>, grid: &FdGrid) -> Result<FdReport>
where
    K: Fn(f64, &[f64]) -> Result<Mat<C64>>,
{
    if grid.points.iter().any(|p| p.len() != op.dim()) {
        return Err(Error::DimensionMismatch(format!("grid points must have {} coordinates", op.dim())));
    }
    if !(grid.h > 0.0 && grid.t > grid.h) {
        return Err(Error::InvalidInput(format!("need 0 < h < t (h = {}, t = {})", grid.h, grid.t)));
    }
    let terms = prepare(op)?;
    let coarse = residual_norm(&kernel, &terms, grid, grid.h)?;
    let fine = residual_norm(&kernel, &terms, grid, grid.h / 2.0)?;
    Ok(FdReport { coarse, fine, ratio: coarse / fine })
}

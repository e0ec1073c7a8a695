//! Diagonal heat kernel of the constant-field operator from its Landau levels.
//!
//! For `-(∂ + A)²` in the plane with `dA = B dx∧dy` the levels are `B(2k+1)`,
//! each with degeneracy `B / 2π` per unit area.

use crate::error::{Error, Result};

pub const TAIL_TOL: f64 = 1e-12;
const MAX_TERMS: usize = 100_000_000;

/// Per-unit-area `Σ_k (b/2π) exp(-t b (2k+1))`, summed until the geometric tail
/// falls below `TAIL_TOL` relative to the partial sum.
pub fn landau_trace(b: f64, t: f64) -> Result<f64> {
    if !(b.is_finite() && b > 0.0 && t.is_finite() && t > 0.0) {
        return Err(Error::InvalidInput(format!("landau_trace needs b, t > 0 (got b = {b}, t = {t})")));
    }
    let ratio = (-2.0 * t * b).exp();
    // The relative tail after k levels is about ratio^k.
    let needed = TAIL_TOL.ln() / (-2.0 * t * b);
    if ratio >= 1.0 || needed > MAX_TERMS as f64 {
        return Err(Error::TailUnbounded { tol: TAIL_TOL, terms: MAX_TERMS });
    }
    let degeneracy = b / (2.0 * std::f64::consts::PI);
    let mut term = degeneracy * (-t * b).exp();
    let mut sum = 0.0;
    for k in 0..MAX_TERMS {
        sum += term;
        term *= ratio;
        // Remaining terms form a geometric series.
        let tail = term / (1.0 - ratio);
        if tail <= TAIL_TOL * sum {
            return Ok(sum);
        }
        if k + 1 == MAX_TERMS {
            break;
        }
    }
    Err(Error::TailUnbounded { tol: TAIL_TOL, terms: MAX_TERMS })
}

/// Landau sum for a field split by a constant spin term: `Σ_s landau(b, t)·exp(-t s)`.
pub fn landau_trace_shifted(b: f64, t: f64, shifts: &[f64]) -> Result<f64> {
    let base = landau_trace(b, t)?;
    Ok(shifts.iter().map(|s| base * (-t * s).exp()).sum())
}

//! Real symmetric eigenvalues for periodic Jacobi rings.
//!
//! A ring `d_0 .. d_{n-1}` with constant hopping `w` between neighbours
//! (including `n-1 ~ 0`) is reordered as `0, 1, n-1, 2, n-2, ...`, which turns
//! it into a pentadiagonal band. The band is reduced to tridiagonal form by
//! Givens rotations with bulge chasing, then solved by implicit QL.

use crate::error::{Error, Result};

/// Symmetric band matrix, upper storage with room for one bulge diagonal.
struct Band {
    n: usize,
    width: usize,
    data: Vec<f64>,
}

impl Band {
    fn new(n: usize, half_bandwidth: usize) -> Self {
        let width = half_bandwidth + 1;
        Band { n, width, data: vec![0.0; n * (width + 1)] }
    }

    fn index(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let d = j - i;
        (d <= self.width).then(|| i * (self.width + 1) + d)
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.index(i, j).map_or(0.0, |k| self.data[k])
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        match self.index(i, j) {
            Some(k) => self.data[k] = v,
            None => debug_assert!(v.abs() < 1e-300 || v == 0.0, "fill outside band"),
        }
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    /// Similarity by the plane rotation on rows/columns `p, p+1` that zeros `A[p+1][col]`.
    fn rotate_out(&mut self, p: usize, col: usize) {
        let q = p + 1;
        let a = self.get(p, col);
        let b = self.get(q, col);
        if b == 0.0 {
            return;
        }
        let r = a.hypot(b);
        let (c, s) = (a / r, b / r);
        let lo = p.saturating_sub(self.width);
        let hi = (q + self.width).min(self.n - 1);
        for j in lo..=hi {
            if j == p || j == q {
                continue;
            }
            let apj = self.get(p, j);
            let aqj = self.get(q, j);
            self.set(p, j, c * apj + s * aqj);
            self.set(q, j, -s * apj + c * aqj);
        }
        let app = self.get(p, p);
        let aqq = self.get(q, q);
        let apq = self.get(p, q);
        self.set(p, p, c * c * app + 2.0 * c * s * apq + s * s * aqq);
        self.set(q, q, s * s * app - 2.0 * c * s * apq + c * c * aqq);
        self.set(p, q, c * s * (aqq - app) + (c * c - s * s) * apq);
        self.set(q, col, 0.0);
    }

    fn tridiagonalize(mut self, half_bandwidth: usize) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let b = half_bandwidth;
        for k in 0..n.saturating_sub(2) {
            for d in (2..=b).rev() {
                let mut row = k + d;
                let mut col = k;
                while row < n {
                    self.rotate_out(row - 1, col);
                    col = row - 1;
                    row += b;
                }
            }
        }
        let diag = (0..n).map(|i| self.get(i, i)).collect();
        let off = (0..n.saturating_sub(1)).map(|i| self.get(i, i + 1)).collect();
        (diag, off)
    }
}

/// Eigenvalues of a symmetric band matrix given as dense rows of upper diagonals:
/// `upper[d][i] = A[i][i+d]` for `d = 0..=b`.
pub fn band_eigenvalues(upper: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = upper.first().map_or(0, Vec::len);
    let b = upper.len().saturating_sub(1);
    let mut band = Band::new(n, b.max(1));
    for (d, diag) in upper.iter().enumerate() {
        for (i, v) in diag.iter().enumerate() {
            if i + d < n {
                band.set(i, i + d, *v);
            }
        }
    }
    let (diag, off) = band.tridiagonalize(b.max(1));
    tridiagonal_eigenvalues(diag, off)
}

/// Eigenvalues of the periodic ring with diagonal `diag` and uniform hopping `hop`,
/// sorted ascending.
pub fn periodic_jacobi_eigenvalues(diag: &[f64], hop: f64) -> Result<Vec<f64>> {
    let n = diag.len();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![diag[0] + 2.0 * hop]),
        2 => {
            // Both ring edges join the same pair.
            let (a, c, w) = (diag[0], diag[1], 2.0 * hop);
            let mid = 0.5 * (a + c);
            let rad = (0.25 * (a - c) * (a - c) + w * w).sqrt();
            return Ok(vec![mid - rad, mid + rad]);
        }
        _ => {}
    }
    let mut order = Vec::with_capacity(n);
    order.push(0usize);
    let (mut lo, mut hi) = (1usize, n - 1);
    while lo <= hi {
        order.push(lo);
        lo += 1;
        if lo <= hi {
            order.push(hi);
            hi -= 1;
        }
    }
    let mut pos = vec![0usize; n];
    for (i, &site) in order.iter().enumerate() {
        pos[site] = i;
    }
    let mut band = Band::new(n, 2);
    for (i, &site) in order.iter().enumerate() {
        band.set(i, i, diag[site]);
    }
    for s in 0..n {
        let (i, j) = (pos[s], pos[(s + 1) % n]);
        debug_assert!(i.abs_diff(j) <= 2);
        band.add(i, j, hop);
    }
    let (d, e) = band.tridiagonalize(2);
    tridiagonal_eigenvalues(d, e)
}

/// Implicit QL with Wilkinson-type shifts; eigenvalues sorted ascending.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, off: Vec<f64>) -> Result<Vec<f64>> {
    let n = d.len();
    if off.len() + 1 != n && !(n == 0 && off.is_empty()) {
        return Err(Error::DimensionMismatch(format!(
            "tridiagonal: {} diagonal entries, {} off-diagonal",
            n,
            off.len()
        )));
    }
    let mut e = off;
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Eigensolve(format!("QL iteration stalled at row {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigensolve("non-finite eigenvalue".into()));
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

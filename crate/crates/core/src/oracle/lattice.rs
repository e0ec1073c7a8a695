//! Magnetic lattice Laplacians on tori and their heat traces.
//!
//! The 2D operator is the phase-decorated five-point Laplacian in Landau gauge:
//! `y`-links carry `exp(2πi·α·x)`, the seam link `x = L-1 → 0` carries
//! `exp(-2πi·α·L·y)`, with `α` the flux per plaquette in units of `2π`.
//! Because the phases do not depend on `y` away from the seam, a discrete
//! Fourier transform in `y` maps it unitarily onto `gcd(N, L)` real periodic
//! Jacobi rings (N = αL²), which are solved exactly by [`super::jacobi`].
//! The third axis, when present, is a free ring and enters as a Kronecker sum.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num::rational::Ratio;
use num::{Integer, ToPrimitive, Zero};
use rayon::prelude::*;

use super::jacobi::periodic_jacobi_eigenvalues;
use crate::algebra::Mat;
use crate::error::{Error, Result};
use crate::scalar::C64;

pub const MAX_SITES: usize = 128;
const ADJOINT_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum LatticePotential {
    None,
    Constant(f64),
    /// Constant Hermitian endomorphism on an internal fibre, acting at every site.
    Endomorphism(Mat<C64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub dim: usize,
    pub sites: usize,
    pub spacing: f64,
    /// Flux per plaquette of the `(x, y)` plane, in units of `2π`.
    pub flux: Ratio<i64>,
    pub potential: LatticePotential,
}

impl LatticeSpec {
    pub fn free(dim: usize, sites: usize, spacing: f64) -> Self {
        LatticeSpec { dim, sites, spacing, flux: Ratio::zero(), potential: LatticePotential::None }
    }

    /// Torus with `quanta` flux quanta through the plane, sized so the continuum field is `field`.
    pub fn with_field(dim: usize, sites: usize, quanta: i64, field: f64) -> Self {
        let side = (2.0 * std::f64::consts::PI * quanta as f64 / field).sqrt();
        LatticeSpec {
            dim,
            sites,
            spacing: side / sites as f64,
            flux: Ratio::new(quanta, (sites * sites) as i64),
            potential: LatticePotential::None,
        }
    }

    pub fn circumference(&self) -> f64 {
        self.spacing * self.sites as f64
    }

    pub fn volume(&self) -> f64 {
        self.circumference().powi(self.dim as i32)
    }

    /// Continuum field strength `2π·α / h²`.
    pub fn field(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.flux.to_f64().unwrap_or(f64::NAN) / (self.spacing * self.spacing)
    }

    /// Total flux quanta through the plane.
    pub fn flux_quanta(&self) -> Result<i64> {
        let l2 = (self.sites * self.sites) as i64;
        let total = self.flux * Ratio::from_integer(l2);
        if !total.is_integer() {
            return Err(Error::FluxQuantization(format!(
                "flux {} per plaquette times L² = {} is not an integer",
                self.flux, l2
            )));
        }
        Ok(total.to_integer())
    }

    pub fn fibre_dim(&self) -> usize {
        match &self.potential {
            LatticePotential::Endomorphism(v) => v.dim(),
            _ => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::InvalidInput(format!("lattice dimension {} not in 1..=3", self.dim)));
        }
        if self.sites < 3 || self.sites > MAX_SITES {
            return Err(Error::InvalidInput(format!(
                "sites per axis {} outside 3..={}",
                self.sites, MAX_SITES
            )));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::InvalidInput(format!("spacing {} must be positive", self.spacing)));
        }
        if self.dim == 1 && !self.flux.is_zero() {
            return Err(Error::FluxQuantization("a one-dimensional lattice carries no flux".into()));
        }
        self.flux_quanta()?;
        match &self.potential {
            LatticePotential::Constant(v) if !v.is_finite() => {
                Err(Error::InvalidInput("potential must be finite".into()))
            }
            LatticePotential::Endomorphism(v) => {
                let defect = (v - &v.adjoint()).max_abs();
                if defect > ADJOINT_TOL * v.max_abs().max(1.0) {
                    return Err(Error::InvalidInput(format!("endomorphism potential is not Hermitian (defect {defect:e})")));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Sparse 2D magnetic Laplacian, sites indexed `x + L·y`.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    pub size: usize,
    pub entries: HashMap<(usize, usize), C64>,
}

impl SparseOperator {
    fn push(&mut self, i: usize, j: usize, v: C64) {
        *self.entries.entry((i, j)).or_insert(C64::zero()) += v;
    }

    /// Largest `|H_ij - conj(H_ji)|`.
    pub fn adjoint_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|(&(i, j), v)| {
                let w = self.entries.get(&(j, i)).copied().unwrap_or_else(C64::zero);
                (v - w.conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.size, self.size);
        for (&(i, j), v) in &self.entries {
            m[(i, j)] += *v;
        }
        m
    }
}

fn phase(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

pub fn magnetic_plane_operator(sites: usize, spacing: f64, flux: Ratio<i64>) -> SparseOperator {
    let l = sites;
    let alpha = flux.to_f64().unwrap_or(0.0);
    let tau = 2.0 * std::f64::consts::PI;
    let inv_h2 = 1.0 / (spacing * spacing);
    let mut op = SparseOperator { size: l * l, entries: HashMap::with_capacity(5 * l * l) };
    let site = |x: usize, y: usize| x + l * y;
    for y in 0..l {
        for x in 0..l {
            let s = site(x, y);
            op.push(s, s, C64::new(4.0 * inv_h2, 0.0));
            let ux = if x + 1 == l {
                phase(-tau * alpha * (l * y) as f64)
            } else {
                C64::new(1.0, 0.0)
            };
            let sx = site((x + 1) % l, y);
            op.push(s, sx, -ux * inv_h2);
            op.push(sx, s, -ux.conj() * inv_h2);
            let uy = phase(tau * alpha * x as f64);
            let sy = site(x, (y + 1) % l);
            op.push(s, sy, -uy * inv_h2);
            op.push(sy, s, -uy.conj() * inv_h2);
        }
    }
    op
}

/// Spectrum of the 2D magnetic Laplacian through its Fourier ring decomposition.
pub fn magnetic_plane_eigenvalues(sites: usize, spacing: f64, flux: Ratio<i64>) -> Result<Vec<f64>> {
    let l = sites;
    let quanta = (flux * Ratio::from_integer((l * l) as i64)).to_integer();
    let alpha = flux.to_f64().unwrap_or(0.0);
    let tau = 2.0 * std::f64::consts::PI;
    let inv_h2 = 1.0 / (spacing * spacing);
    let shift = quanta.rem_euclid(l as i64) as usize;
    let cycles = shift.gcd(&l);
    let rings: Vec<Vec<f64>> = (0..cycles)
        .map(|start| {
            let mut diag = Vec::with_capacity(l * l / cycles);
            let mut j = start;
            loop {
                for x in 0..l {
                    let arg = tau * j as f64 / l as f64 + tau * alpha * x as f64;
                    diag.push((4.0 - 2.0 * arg.cos()) * inv_h2);
                }
                j = (j + shift) % l;
                if j == start {
                    break;
                }
            }
            diag
        })
        .collect();
    let mut out = Vec::with_capacity(l * l);
    for ring in rings {
        out.extend(periodic_jacobi_eigenvalues(&ring, -inv_h2)?);
    }
    out.sort_by(|a, b| a.total_cmp(b));
    Ok(out)
}

pub fn free_ring_eigenvalues(sites: usize, spacing: f64) -> Result<Vec<f64>> {
    let inv_h2 = 1.0 / (spacing * spacing);
    periodic_jacobi_eigenvalues(&vec![2.0 * inv_h2; sites], -inv_h2)
}

fn hermitian_eigenvalues(v: &Mat<C64>) -> Vec<f64> {
    let n = v.dim();
    let m = DMatrix::from_fn(n, n, |i, j| *v.get(i, j));
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Spectrum stored as Kronecker-sum factors: every eigenvalue is one pick per factor, summed.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpectrum {
    pub factors: Vec<Vec<f64>>,
}

impl LatticeSpectrum {
    pub fn len(&self) -> usize {
        self.factors.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn min(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| f.iter().copied().fold(f64::INFINITY, f64::min))
            .sum()
    }

    pub fn heat_trace(&self, t: f64) -> f64 {
        self.factors
            .iter()
            .map(|f| f.iter().map(|&l| (-t * l).exp()).sum::<f64>())
            .product()
    }

    /// All eigenvalues, sorted ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut acc = vec![0.0];
        for f in &self.factors {
            acc = acc.iter().flat_map(|a| f.iter().map(move |b| a + b)).collect();
        }
        acc.sort_by(|a, b| a.total_cmp(b));
        acc
    }
}

pub fn lattice_spectrum(spec: &LatticeSpec) -> Result<LatticeSpectrum> {
    spec.validate()?;
    let mut factors = Vec::new();
    if spec.dim >= 2 {
        let op = magnetic_plane_operator(spec.sites, spec.spacing, spec.flux);
        let defect = op.adjoint_defect();
        if defect > ADJOINT_TOL * op.max_abs().max(1.0) {
            return Err(Error::Eigensolve(format!("discretized operator not self-adjoint (defect {defect:e})")));
        }
        factors.push(magnetic_plane_eigenvalues(spec.sites, spec.spacing, spec.flux)?);
        if spec.dim == 3 {
            factors.push(free_ring_eigenvalues(spec.sites, spec.spacing)?);
        }
    } else {
        factors.push(free_ring_eigenvalues(spec.sites, spec.spacing)?);
    }
    for f in &factors {
        let lo = f.first().copied().unwrap_or(0.0);
        if lo < -POSITIVITY_TOL {
            return Err(Error::Eigensolve(format!("squared discretization has eigenvalue {lo:e} < 0")));
        }
    }
    match &spec.potential {
        LatticePotential::None => {}
        LatticePotential::Constant(v) => factors.push(vec![*v]),
        LatticePotential::Endomorphism(v) => factors.push(hermitian_eigenvalues(v)),
    }
    Ok(LatticeSpectrum { factors })
}

/// `Σ exp(-tλ)` over the spectrum of the discretized operator.
pub fn lattice_heat_trace(spec: &LatticeSpec, t: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidInput(format!("time {t} must be positive")));
    }
    Ok(lattice_spectrum(spec)?.heat_trace(t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub t: f64,
    /// Trace divided by the torus volume.
    pub lattice: f64,
    pub reference: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOracleReport {
    pub spec: LatticeSpec,
    pub eigenvalues: Vec<f64>,
    pub heat_traces: Vec<(f64, f64)>,
    pub comparisons: Vec<Comparison>,
}

impl SpectralOracleReport {
    pub fn per_volume(&self) -> Vec<(f64, f64)> {
        let vol = self.spec.volume();
        self.heat_traces.iter().map(|&(t, tr)| (t, tr / vol)).collect()
    }

    /// Fills the comparison table against a per-volume reference.
    pub fn compare_with(&mut self, reference: impl Fn(f64) -> f64) {
        self.comparisons = self
            .per_volume()
            .into_iter()
            .map(|(t, lattice)| {
                let r = reference(t);
                Comparison { t, lattice, reference: r, rel_err: ((lattice - r) / r).abs() }
            })
            .collect();
    }

    pub fn max_rel_err(&self) -> f64 {
        self.comparisons.iter().map(|c| c.rel_err).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeJob {
    pub spec: LatticeSpec,
    pub times: Vec<f64>,
}

pub fn spectral_report(job: &LatticeJob) -> Result<SpectralOracleReport> {
    if let Some(t) = job.times.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        return Err(Error::InvalidInput(format!("time {t} must be positive")));
    }
    let spectrum = lattice_spectrum(&job.spec)?;
    let heat_traces = job.times.iter().map(|&t| (t, spectrum.heat_trace(t))).collect();
    Ok(SpectralOracleReport {
        spec: job.spec.clone(),
        eigenvalues: spectrum.eigenvalues(),
        heat_traces,
        comparisons: Vec::new(),
    })
}

/// Independent jobs, evaluated in parallel; results keep the input order.
pub fn run_jobs(jobs: &[LatticeJob]) -> Vec<Result<SpectralOracleReport>> {
    jobs.par_iter().map(spectral_report).collect()
}

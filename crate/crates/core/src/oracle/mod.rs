//! Brute-force reference values that share no code with the closed-form evaluators:
//! lattice heat traces, Landau-level sums, finite-difference residuals and exact
//! scalar series.

mod fd;
pub mod jacobi;
mod landau;
mod lattice;
mod series;

pub use fd::{fd_residual, FdGrid, FdReport};
pub use landau::{landau_trace, landau_trace_shifted, TAIL_TOL};
pub use lattice::{
    free_ring_eigenvalues, lattice_heat_trace, lattice_spectrum, magnetic_plane_eigenvalues,
    magnetic_plane_operator, run_jobs, spectral_report, Comparison, LatticeJob, LatticePotential,
    LatticeSpec, LatticeSpectrum, SparseOperator, SpectralOracleReport, MAX_SITES,
};
pub use series::{genus_from_power_sums, log_coefficients, series_oracle, CharacteristicSeries, MAX_ORDER};

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Command to run when none is given on the command line.
    pub command: Option<String>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub jobs: usize,
    #[serde(default)]
    pub inputs: Inputs,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default)]
    pub truncation: Truncation,
    #[serde(default)]
    pub tolerance: Tolerances,
    #[serde(default)]
    pub bergman: BergmanParams,
    #[serde(default)]
    pub odd: OddParams,
    #[serde(default)]
    pub lattice: LatticeParams,
    #[serde(default)]
    pub verify: VerifyParams,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    pub operator: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub index: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Sweep {
    pub p: Vec<u32>,
    pub r: Vec<u32>,
    pub t: Vec<f64>,
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep { p: vec![4, 8, 16], r: vec![4, 8, 16], t: vec![0.25, 0.5, 1.0] }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Truncation {
    /// Highest heat coefficient index.
    pub j: usize,
    /// Polynomial degree bound of the jets.
    pub d: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { j: 3, d: 8 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub bergman: f64,
    pub odd: f64,
    pub lattice: f64,
    pub landau: f64,
    pub fd_ratio: [f64; 2],
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { bergman: 0.05, odd: 0.08, lattice: 0.02, landau: 0.01, fd_ratio: [3.0, 5.0] }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BergmanParams {
    /// Eigenvalue of the line-bundle curvature (m = 1).
    pub a: f64,
    /// Curvature of the fixed twisting bundle.
    pub twist: f64,
    pub u: f64,
}

impl Default for BergmanParams {
    fn default() -> Self {
        BergmanParams { a: 1.0, twist: 0.5, u: 0.5 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OddParams {
    pub b: f64,
    pub t: f64,
}

impl Default for OddParams {
    fn default() -> Self {
        OddParams { b: 1.0, t: 0.5 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeParams {
    pub sites: usize,
    pub field: f64,
}

impl Default for LatticeParams {
    fn default() -> Self {
        LatticeParams { sites: 64, field: 1.0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyParams {
    pub seed: u64,
    pub pairs_per_preset: usize,
}

impl Default for VerifyParams {
    fn default() -> Self {
        let d = graded_heat::verify::VerifyOptions::default();
        VerifyParams { seed: d.seed, pairs_per_preset: d.pairs_per_preset }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config")
    }
}

impl RunConfig {
    /// Reads a config; relative input paths resolve against the config's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.inputs.operator, &mut cfg.inputs.model, &mut cfg.inputs.index].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweep.p.iter().chain(&self.sweep.r).any(|&v| v == 0) {
            bail!("sweep.p and sweep.r entries must be positive");
        }
        if self.sweep.t.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            bail!("sweep.t entries must be positive");
        }
        if self.lattice.sites < 2 {
            bail!("lattice.sites must be at least 2");
        }
        Ok(())
    }
}

//! Experiment configuration: a strict TOML schema (unknown keys are errors)
//! that resolves into the harness settings, kernel and exponent choices.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use fracpot::funcspace::GridBox;
use fracpot::inequalities::{classify, ExponentConfig, HarnessSettings};
use fracpot::kernel::{Kernel, Profile};
use fracpot::operators::KernelChoice;

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub kernel: KernelSection,
    #[serde(default)]
    pub operator: OperatorSection,
    #[serde(default)]
    pub exponents: ExponentSection,
    #[serde(default)]
    pub family: FamilySection,
    #[serde(default)]
    pub zoo: ZooSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "d_dimension")]
    pub dimension: usize,
    #[serde(default = "d_lower")]
    pub lower: Vec<f64>,
    #[serde(default = "d_upper")]
    pub upper: Vec<f64>,
    #[serde(default = "d_resolution")]
    pub resolution: usize,
}

fn d_dimension() -> usize {
    2
}
fn d_lower() -> Vec<f64> {
    vec![-2.0, -2.0]
}
fn d_upper() -> Vec<f64> {
    vec![2.0, 2.0]
}
fn d_resolution() -> usize {
    128
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            dimension: d_dimension(),
            lower: d_lower(),
            upper: d_upper(),
            resolution: d_resolution(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    #[serde(default = "d_kernel_name")]
    pub name: String,
    #[serde(default = "d_kernel_s")]
    pub s: f64,
}

fn d_kernel_name() -> String {
    "identity".to_string()
}
fn d_kernel_s() -> f64 {
    f64::INFINITY
}

impl Default for KernelSection {
    fn default() -> Self {
        KernelSection {
            name: d_kernel_name(),
            s: d_kernel_s(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSection {
    #[serde(default = "d_alpha")]
    pub alpha: f64,
    #[serde(default = "d_shell_count")]
    pub shell_count: usize,
    #[serde(default = "d_inner_cutoff")]
    pub inner_cutoff_cells: f64,
    #[serde(default = "d_radii_count")]
    pub radii_count: usize,
}

fn d_alpha() -> f64 {
    0.5
}
fn d_shell_count() -> usize {
    48
}
fn d_inner_cutoff() -> f64 {
    2.0
}
fn d_radii_count() -> usize {
    64
}

impl Default for OperatorSection {
    fn default() -> Self {
        OperatorSection {
            alpha: d_alpha(),
            shell_count: d_shell_count(),
            inner_cutoff_cells: d_inner_cutoff(),
            radii_count: d_radii_count(),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentSection {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub kappa: Option<f64>,
    pub r: Option<f64>,
    pub lambda: Option<f64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySection {
    #[serde(default = "d_centers")]
    pub centers_per_axis: usize,
    #[serde(default = "d_family_radii")]
    pub radii_count: usize,
}

fn d_centers() -> usize {
    8
}
fn d_family_radii() -> usize {
    10
}

impl Default for FamilySection {
    fn default() -> Self {
        FamilySection {
            centers_per_axis: d_centers(),
            radii_count: d_family_radii(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ZooSection {
    #[serde(default = "d_seed")]
    pub seed: u64,
}

fn d_seed() -> u64 {
    42
}

impl Default for ZooSection {
    fn default() -> Self {
        ZooSection { seed: d_seed() }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default = "d_output_dir")]
    pub output_dir: String,
    #[serde(default = "d_lattice")]
    pub lattice_per_axis: usize,
    #[serde(default = "d_hls_resolution")]
    pub hls_resolution: usize,
    #[serde(default = "d_pair_count")]
    pub pair_count: usize,
}

fn d_output_dir() -> String {
    "out".to_string()
}
fn d_lattice() -> usize {
    32
}
fn d_hls_resolution() -> usize {
    64
}
fn d_pair_count() -> usize {
    6
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            suites: vec![],
            output_dir: d_output_dir(),
            lattice_per_axis: d_lattice(),
            hls_resolution: d_hls_resolution(),
            pair_count: d_pair_count(),
        }
    }
}

/// Parameter grids for the sweep subcommand; empty lists mean "not swept".
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub p: Vec<f64>,
    #[serde(default)]
    pub kappa: Vec<f64>,
    #[serde(default)]
    pub s: Vec<f64>,
    #[serde(default)]
    pub resolution: Vec<usize>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: ExperimentConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Validate every structural invariant of the referenced types: a bad
    /// configuration must be rejected at load time, with the classifier's
    /// explanation when an exponent relation fails.
    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.dimension != 2 && g.dimension != 3 {
            bail!("grid.dimension must be 2 or 3, got {}", g.dimension);
        }
        if g.lower.len() != g.dimension || g.upper.len() != g.dimension {
            bail!("grid corners must have {} coordinates", g.dimension);
        }
        for axis in 0..g.dimension {
            if !(g.upper[axis] > g.lower[axis]) {
                bail!("grid is degenerate on axis {axis}");
            }
        }
        if g.resolution == 0 {
            bail!("grid.resolution must be positive");
        }
        if self.kernel.name != "identity" {
            Profile::by_name(&self.kernel.name).map_err(|e| anyhow::anyhow!(e.to_string()))?;
        }
        if !(self.kernel.s > 1.0) {
            bail!("kernel.s must satisfy s > 1, got {}", self.kernel.s);
        }
        let n = g.dimension as f64;
        if !(self.operator.alpha > 0.0 && self.operator.alpha < n) {
            bail!("operator.alpha must lie in (0, {n}), got {}", self.operator.alpha);
        }
        if self.operator.shell_count < 16 {
            bail!("operator.shell_count must be at least 16");
        }
        if self.operator.radii_count < 2 {
            bail!("operator.radii_count must be at least 2");
        }
        if self.family.centers_per_axis == 0 || self.family.radii_count == 0 {
            bail!("family sizes must be positive");
        }
        for suite in &self.run.suites {
            if !fracpot::inequalities::SUITE_NAMES.contains(&suite.as_str()) {
                bail!(
                    "unknown suite {suite:?}; available: {}",
                    fracpot::inequalities::SUITE_NAMES.join(", ")
                );
            }
        }
        // Exponent relations: reject exactly what the classifier rejects.
        if let Some(p) = self.exponents.p {
            let cfg = self.exponent_config(p);
            let class = classify(&cfg).map_err(|e| anyhow::anyhow!(e.to_string()))?;
            if !class.explanations.is_empty() {
                bail!("exponent relations rejected: {}", class.explanations.join("; "));
            }
        }
        Ok(())
    }

    pub fn exponent_config(&self, p: f64) -> ExponentConfig {
        let mut cfg = ExponentConfig::new(self.grid.dimension, self.operator.alpha, self.kernel.s, p);
        cfg.q = self.exponents.q;
        cfg.kappa = self.exponents.kappa;
        cfg.r = self.exponents.r;
        cfg.lambda_hls = self.exponents.lambda;
        cfg
    }

    pub fn grid_box(&self) -> GridBox {
        let g = &self.grid;
        let mut lower = [0.0; 3];
        let mut upper = [0.0; 3];
        for axis in 0..g.dimension {
            lower[axis] = g.lower[axis];
            upper[axis] = g.upper[axis];
        }
        let res = match g.dimension {
            2 => [g.resolution, g.resolution, 1],
            _ => [g.resolution, g.resolution, g.resolution],
        };
        GridBox::new(g.dimension, lower, upper, res)
    }

    pub fn kernel_choice(&self) -> Result<KernelChoice> {
        if self.kernel.name == "identity" {
            Ok(KernelChoice::Identity)
        } else {
            let k = Kernel::by_name(self.grid.dimension, &self.kernel.name)
                .map_err(|e| anyhow::anyhow!(e.to_string()))?;
            Ok(KernelChoice::omega(k))
        }
    }

    pub fn harness_settings(&self) -> HarnessSettings {
        HarnessSettings {
            resolution: self.grid.resolution,
            lattice_per_axis: self.run.lattice_per_axis,
            family_centers: self.family.centers_per_axis,
            family_radii: self.family.radii_count,
            zoo_seed: self.zoo.seed,
            radii_count: self.operator.radii_count,
            hls_resolution: self.run.hls_resolution,
            pair_count: self.run.pair_count,
        }
    }

    /// Canonical form for provenance: the output location is not an input of
    /// the experiment, so it is cleared before hashing/embedding.
    pub fn canonical(&self) -> ExperimentConfig {
        let mut c = self.clone();
        c.run.output_dir = String::new();
        c
    }

    /// Canonical serialization used for the provenance hash and for embedding
    /// the resolved configuration into reports.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(&self.canonical()).expect("config serializes")
    }

    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_toml().as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Mesh,
    #[default]
    Verify,
    Decompose,
    Szego,
    Limits,
    Maximal,
    Mobius,
    Converge,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Mesh => "mesh",
            Command::Verify => "verify",
            Command::Decompose => "decompose",
            Command::Szego => "szego",
            Command::Limits => "limits",
            Command::Maximal => "maximal",
            Command::Mobius => "mobius",
            Command::Converge => "converge",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Geometry {
    Circle { radius: f64 },
    Sphere { radius: f64 },
    Deformed { eps: f64, mode: u32 },
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry::Circle { radius: 1.0 }
    }
}

impl Geometry {
    /// Ambient dimension the geometry lives in.
    pub fn dimension(&self) -> usize {
        match self {
            Geometry::Sphere { .. } => 3,
            _ => 2,
        }
    }
}

/// Boundary data used by `decompose`, `szego` and `limits`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Data {
    /// `f ≡ 1`.
    #[default]
    One,
    /// Trace of a monogenic polynomial, `ζ e_1 + 1` on curves and `x e_1 + 1` on spheres.
    Monogenic,
    /// First seeded random band-limited test function.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Absolute cap on identity residuals.
    pub identity: f64,
    /// Cap on Möbius isometry and covariance gaps.
    pub mobius: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-2,
            mobius: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub geometry: Geometry,
    /// Node counts; a single entry for one-mesh runs, several for sweeps.
    #[serde(rename = "N")]
    pub sizes: Vec<usize>,
    pub tolerances: Tolerances,
    pub out: PathBuf,
    pub seed: u64,
    pub data: Data,
    /// Steps of the limit test.
    pub depth: usize,
    /// Random test functions for maximal diagnostics.
    pub functions: usize,
    pub samples_per_cone: usize,
    /// Kelvin shift `a` (real) for the Möbius checks.
    pub shift: [f64; 2],
    /// Sampled pairs for the kernel intertwining check.
    pub pairs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::default(),
            n: 2,
            geometry: Geometry::default(),
            sizes: vec![128],
            tolerances: Tolerances::default(),
            out: PathBuf::from("out"),
            seed: 0,
            data: Data::default(),
            depth: 8,
            functions: 20,
            samples_per_cone: plemelj::manifold::CONE_SAMPLES,
            shift: [2.0, 0.0],
            pairs: 200,
        }
    }
}

impl RunConfig {
    pub fn from_json(s: &str) -> CliResult<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> CliResult<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.n != self.geometry.dimension() {
            return Err(CliError::Usage(format!(
                "geometry {:?} needs n = {}, got n = {}",
                self.geometry,
                self.geometry.dimension(),
                self.n
            )));
        }
        if self.sizes.is_empty() {
            return Err(CliError::Usage("N must list at least one node count".into()));
        }
        if self.depth == 0 || self.functions == 0 || self.samples_per_cone == 0 || self.pairs == 0 {
            return Err(CliError::Usage("depth, functions, samples_per_cone and pairs must be positive".into()));
        }
        Ok(())
    }
}

/// Parses `128` or `64,128,256`.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad node count {t:?}: {e}")))
        .collect()
}

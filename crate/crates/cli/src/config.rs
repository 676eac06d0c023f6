//! Experiment configuration files.

use std::path::{Path, PathBuf};

use planar_jets::cauchy::DbarSource;
use planar_jets::functions::{Bump, CatalogFn, FunctionSymbol};
use planar_jets::plane_sets::{
    ifs_sample, region_make, snowflake_sample, IfsSpec, Region, RegionSpec, SampleOrigin, SetSample, Similarity,
    SnowflakeCurve,
};
use planar_jets::wirtinger::RealSubspace;
use planar_jets::{Grid, C64};
use serde::Deserialize;

use crate::catalog::EXPERIMENTS;
use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub set: Option<SetConfig>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub functions: Vec<FunctionSpec>,
    #[serde(default)]
    pub regions: Vec<RegionSpec>,
    /// `φ` for the pairing identity.
    #[serde(default)]
    pub test_function: Option<Bump>,
    #[serde(default)]
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub scales: Vec<f64>,
    #[serde(default)]
    pub levels: Vec<usize>,
    #[serde(default = "default_dbar_source")]
    pub dbar_source: DbarSource,
    /// Random cases drawn from `seed` (max-principle, extend-linear).
    #[serde(default)]
    pub trials: usize,
    /// Largest degree of random polynomials.
    #[serde(default = "default_degree")]
    pub degree: u32,
    /// Boundary and interior sampling density for max-principle.
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub subspace: Option<SubspaceConfig>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

fn default_dbar_source() -> DbarSource {
    DbarSource::Exact
}

fn default_degree() -> u32 {
    8
}

fn default_resolution() -> usize {
    256
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetConfig {
    FourCorner {
        depth: usize,
    },
    MiddleThirds {
        depth: usize,
    },
    Ifs {
        maps: Vec<Similarity>,
        depth: usize,
    },
    Koch {
        #[serde(default = "default_beta")]
        beta: f64,
        depth: usize,
    },
    Circle {
        center: C64,
        radius: f64,
        n: usize,
    },
    Grid {
        corner: C64,
        spacing: f64,
        nx: usize,
        ny: usize,
    },
    File {
        path: PathBuf,
    },
}

fn default_beta() -> f64 {
    std::f64::consts::FRAC_PI_3
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub corner: C64,
    pub size: [usize; 2],
    pub h: f64,
}

impl GridConfig {
    pub fn build(&self) -> planar_jets::Result<Grid> {
        Grid::new(self.corner, self.size[0], self.size[1], self.h)
    }
}

/// A catalog symbol, a user polynomial, or a bump with explicit centre and
/// radius.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Bump { bump: Bump },
    Symbol(FunctionSymbol),
}

impl FunctionSpec {
    pub fn resolve(&self) -> planar_jets::Result<CatalogFn> {
        match self {
            FunctionSpec::Bump { bump } => Bump::new(bump.center, bump.radius).map(CatalogFn::Bump),
            FunctionSpec::Symbol(s) => s.resolve(),
        }
    }

    /// Short label used in CSV `case` columns and the manifest.
    pub fn label(&self) -> String {
        match self {
            FunctionSpec::Bump { bump } => format!(
                "bump(c={}{:+}i,r={})",
                bump.center.re, bump.center.im, bump.radius
            ),
            FunctionSpec::Symbol(FunctionSymbol::Id(id)) => id.clone(),
            FunctionSpec::Symbol(FunctionSymbol::Poly { poly }) => {
                let terms: Vec<String> = poly
                    .iter()
                    .map(|[p, q, re, im]| format!("({re}{im:+}i)z^{p}zbar^{q}"))
                    .collect();
                format!("poly[{}]", terms.join("+"))
            }
        }
    }
}

/// Prescribed values of a real-linear map on a real subspace of `Cⁿ`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceConfig {
    pub n: usize,
    pub basis: Vec<Vec<C64>>,
    pub values: Vec<C64>,
}

impl SubspaceConfig {
    pub fn build(&self) -> planar_jets::Result<RealSubspace> {
        RealSubspace::new(self.n, self.basis.clone())
    }
}

/// A function resolved from the catalog, with its label.
pub struct NamedFn {
    pub label: String,
    pub f: CatalogFn,
}

/// Checks everything that can be checked without running the experiment.
pub fn validate(config: &ExperimentConfig) -> Result<(), CliError> {
    let fail = |msg: String| Err(CliError::Config(msg));
    if !EXPERIMENTS.iter().any(|(name, _)| *name == config.experiment) {
        return fail(format!("unknown experiment '{}'", config.experiment));
    }
    check_descending("deltas", &config.deltas)?;
    check_descending("scales", &config.scales)?;
    for f in &config.functions {
        f.resolve().map_err(|e| CliError::Config(format!("function {}: {e}", f.label())))?;
    }
    if let Some(g) = &config.grid {
        if g.size[0] == 0 || g.size[1] == 0 || !(g.h > 0.0 && g.h.is_finite()) {
            return fail("grid size must be positive and h positive and finite".into());
        }
    }
    if let Some(b) = &config.test_function {
        Bump::new(b.center, b.radius).map_err(|e| CliError::Config(format!("test_function: {e}")))?;
    }
    for r in &config.regions {
        region_make(r).map_err(|e| CliError::Config(format!("region: {e}")))?;
    }
    if config.resolution < 8 {
        return fail("resolution must be at least 8".into());
    }

    let need = |present: bool, what: &str| {
        if present {
            Ok(())
        } else {
            Err(CliError::Config(format!("experiment '{}' needs {what}", config.experiment)))
        }
    };
    match config.experiment.as_str() {
        "holo-approx" => {
            need(config.set.is_some(), "a set")?;
            need(config.grid.is_some(), "a grid")?;
            need(!config.deltas.is_empty(), "a delta list")?;
            need(!config.functions.is_empty(), "at least one function")?;
        }
        "perimeter" => {
            need(config.grid.is_some(), "a grid")?;
            need(!config.regions.is_empty(), "at least one region")?;
            need(config.test_function.is_some(), "a test_function")?;
            need(!config.functions.is_empty(), "at least one function")?;
        }
        "commutator-scan" | "whitney-determinacy" => {
            need(config.set.is_some(), "a set")?;
            need(!config.scales.is_empty(), "a scale list")?;
            need(!config.functions.is_empty(), "at least one function")?;
        }
        "snowflake-jet" => {
            need(config.set.is_some(), "a Koch set")?;
            need(!config.scales.is_empty(), "a scale list")?;
        }
        "locally-constant" => {
            need(config.set.is_some(), "an IFS set")?;
            need(!config.levels.is_empty(), "a level list")?;
            need(!config.functions.is_empty(), "at least one function")?;
        }
        "max-principle" => {
            need(!config.regions.is_empty(), "at least one region")?;
            need(config.trials > 0 || !config.functions.is_empty(), "functions or trials")?;
        }
        "extend-linear" => {
            need(config.subspace.is_some() || config.trials > 0, "a subspace or trials")?;
        }
        _ => unreachable!("experiment names are checked above"),
    }
    Ok(())
}

fn check_descending(name: &str, values: &[f64]) -> Result<(), CliError> {
    if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(CliError::Config(format!("{name} must be positive and finite")));
    }
    if values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CliError::Config(format!("{name} must be sorted in strictly descending order")));
    }
    Ok(())
}

pub fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

impl ExperimentConfig {
    pub fn named_functions(&self) -> planar_jets::Result<Vec<NamedFn>> {
        self.functions
            .iter()
            .map(|f| {
                Ok(NamedFn {
                    label: f.label(),
                    f: f.resolve()?,
                })
            })
            .collect()
    }

    pub fn regions(&self) -> planar_jets::Result<Vec<Region>> {
        self.regions.iter().map(region_make).collect()
    }

    fn set_config(&self) -> Result<&SetConfig, CliError> {
        self.set
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("experiment '{}' needs a set", self.experiment)))
    }

    pub fn sample(&self) -> Result<SetSample, CliError> {
        Ok(match self.set_config()? {
            SetConfig::FourCorner { depth } => ifs_sample(&IfsSpec::four_corner(), *depth)?,
            SetConfig::MiddleThirds { depth } => ifs_sample(&IfsSpec::middle_thirds_squared(), *depth)?,
            SetConfig::Ifs { maps, depth } => ifs_sample(&IfsSpec::new(maps.clone())?, *depth)?,
            SetConfig::Koch { beta, depth } => snowflake_sample(*beta, *depth)?.to_sample()?,
            SetConfig::Circle { center, radius, n } => SetSample::circle(*center, *radius, *n)?,
            SetConfig::Grid { corner, spacing, nx, ny } => SetSample::grid(*corner, *spacing, *nx, *ny)?,
            SetConfig::File { path } => read_sample(path)?,
        })
    }

    /// The Koch-type curve behind the configured set, if there is one.
    pub fn curve(&self) -> Result<Option<SnowflakeCurve>, CliError> {
        Ok(match self.set_config()? {
            SetConfig::Koch { beta, depth } => Some(snowflake_sample(*beta, *depth)?),
            SetConfig::File { path } => match read_sample(path)?.origin() {
                SampleOrigin::Snowflake { beta, depth } => Some(snowflake_sample(*beta, *depth)?),
                _ => None,
            },
            _ => None,
        })
    }
}

pub fn read_sample(path: &Path) -> Result<SetSample, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("reading set file {}: {e}", path.display())))?;
    SetSample::from_json(&text).map_err(|e| CliError::Config(format!("set file {}: {e}", path.display())))
}

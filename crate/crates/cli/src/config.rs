use std::path::{Path, PathBuf};

use helmwave::beams::{BeamKind, BeamSpec, Branch, RandomBeam};
use helmwave::Grid2D;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub grid: GridConfig,
    pub beam: BeamConfig,
    pub run: RunConfig,
    pub modes: Option<ModesConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub k0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamKindName {
    PlaneWave,
    Bessel,
    Gaussian,
    Random,
    Dump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchName {
    #[default]
    Plus,
    Minus,
    PlusConj,
    MinusConj,
}

impl From<BranchName> for Branch {
    fn from(b: BranchName) -> Self {
        match b {
            BranchName::Plus => Branch::Plus,
            BranchName::Minus => Branch::Minus,
            BranchName::PlusConj => Branch::PlusConj,
            BranchName::MinusConj => Branch::MinusConj,
        }
    }
}

/// Beam section. Which optional keys are required depends on `kind`:
/// `p0` for plane waves, `theta0` for Bessel beams, `w0` for Gaussians and
/// `path` (an `MBF1` dump) for `dump`. Random beams use the run seed.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamConfig {
    pub kind: BeamKindName,
    #[serde(default)]
    pub branch: BranchName,
    #[serde(default = "unit_amplitude")]
    pub amplitude: [f64; 2],
    pub p0: Option<[f64; 2]>,
    pub theta0: Option<f64>,
    pub w0: Option<f64>,
    pub path: Option<PathBuf>,
}

fn unit_amplitude() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Propagator {
    #[default]
    Helmholtz,
    Paraxial,
    Dirac,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub propagator: Propagator,
    pub z: Vec<f64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub allow_unstable: bool,
    #[serde(default)]
    pub seed: u64,
}

/// Single-mode run: `Q(0)` from `(c1, c2)`, stepped `steps` times by `dz`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModesConfig {
    pub p: [f64; 2],
    pub c1: [f64; 2],
    pub c2: [f64; 2],
    pub dz: f64,
    pub steps: usize,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub allow_unstable: bool,
    pub seed: Option<u64>,
}

/// Parses and validates a TOML configuration.
pub fn parse_config(text: &str) -> CliResult<Config> {
    let cfg: Config = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> CliResult<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

fn finite(name: &str, v: &[f64]) -> CliResult<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be finite")))
    }
}

impl Config {
    pub fn validate(&self) -> CliResult<()> {
        self.grid()?;
        let b = &self.beam;
        finite("beam.amplitude", &b.amplitude)?;
        let missing = |key: &str| CliError::Config(format!("beam kind {:?} needs beam.{key}", b.kind));
        match b.kind {
            BeamKindName::PlaneWave => finite("beam.p0", &b.p0.ok_or_else(|| missing("p0"))?)?,
            BeamKindName::Bessel => finite("beam.theta0", &[b.theta0.ok_or_else(|| missing("theta0"))?])?,
            BeamKindName::Gaussian => finite("beam.w0", &[b.w0.ok_or_else(|| missing("w0"))?])?,
            BeamKindName::Dump => {
                b.path.as_ref().ok_or_else(|| missing("path"))?;
            }
            BeamKindName::Random => {}
        }
        if self.run.z.is_empty() {
            return Err(CliError::Config("run.z lists no planes".into()));
        }
        finite("run.z", &self.run.z)?;
        if let Some(m) = &self.modes {
            finite("modes", &[m.p[0], m.p[1], m.c1[0], m.c1[1], m.c2[0], m.c2[1], m.dz])?;
            if m.dz == 0.0 || m.steps == 0 {
                return Err(CliError::Config("modes.dz must be nonzero and modes.steps positive".into()));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> CliResult<Grid2D> {
        let g = self.grid;
        Ok(Grid2D::new(g.nx, g.ny, g.dx, g.dy, g.k0)?)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.out.is_some() {
            self.run.out = o.out.clone();
        }
        self.run.allow_unstable |= o.allow_unstable;
        if let Some(s) = o.seed {
            self.run.seed = s;
        }
    }

    /// Output directory; relative paths in the file stay relative to the
    /// working directory.
    pub fn out_dir(&self) -> PathBuf {
        self.run.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    /// Beam specification, or `None` for dump input.
    pub fn beam_spec(&self) -> CliResult<Option<BeamSpec>> {
        let b = &self.beam;
        let grid = self.grid()?;
        let kind = match b.kind {
            BeamKindName::PlaneWave => BeamKind::PlaneWave { p0: b.p0.unwrap_or_default() },
            BeamKindName::Bessel => BeamKind::Bessel { theta0: b.theta0.unwrap_or_default() },
            BeamKindName::Gaussian => BeamKind::GaussianParaxial { w0: b.w0.unwrap_or_default() },
            BeamKindName::Random => {
                let s = RandomBeam::for_k0(grid.k0()).spectrum(&grid, self.run.seed)?;
                BeamKind::CustomSpectrum { amps: s.amps().to_vec() }
            }
            BeamKindName::Dump => return Ok(None),
        };
        let amp = Complex64::new(b.amplitude[0], b.amplitude[1]);
        Ok(Some(BeamSpec::new(kind, b.branch.into()).with_amplitude(amp)))
    }
}

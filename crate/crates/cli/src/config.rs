//! Run configuration, its layered overrides and validation.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use movwell_core::{FdOptions, SpectralOptions, WallMotion};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::presets;

/// Environment variable that overrides the output directory.
pub const OUTPUT_DIR_ENV: &str = "MOVWELL_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Spectral,
    Fd,
    Exact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Spectral => "spectral",
            Method::Fd => "fd",
            Method::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    /// Pure instantaneous eigenstate u_j.
    Doescher,
    /// u_j times the moving-wall phase exp(iαx²/ℓ(0)²).
    Fojon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    pub kind: InitialKind,
    pub j: usize,
}

impl FromStr for Initial {
    type Err = String;

    /// `doescher:1`, `fojon:2`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, j) = s.split_once(':').ok_or("expected <doescher|fojon>:<j>")?;
        let kind = match kind {
            "doescher" => InitialKind::Doescher,
            "fojon" => InitialKind::Fojon,
            other => return Err(format!("unknown initial state kind '{other}'")),
        };
        let j = j.parse().map_err(|e| format!("mode index '{j}': {e}"))?;
        Ok(Initial { kind, j })
    }
}

impl fmt::Display for Initial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            InitialKind::Doescher => "doescher",
            InitialKind::Fojon => "fojon",
        };
        write!(f, "{kind}:{}", self.j)
    }
}

/// Observables that can be written as output files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Observable {
    Norm,
    Energy,
    EnergyNormalized,
    Position,
    Density,
}

impl Observable {
    pub fn name(self) -> &'static str {
        match self {
            Observable::Norm => "norm",
            Observable::Energy => "energy",
            Observable::EnergyNormalized => "energy_normalized",
            Observable::Position => "position",
            Observable::Density => "density",
        }
    }
}

/// Parses `uniform:l0=1,velocity=-16` and the like into a [`WallMotion`].
pub fn parse_motion(s: &str) -> std::result::Result<WallMotion, String> {
    let (kind, params) = s.split_once(':').unwrap_or((s, ""));
    let mut map = serde_json::Map::new();
    map.insert("kind".into(), kind.into());
    for pair in params.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = pair.split_once('=').ok_or_else(|| format!("expected key=value, got '{pair}'"))?;
        let v: f64 = v.trim().parse().map_err(|e| format!("{k}: {e}"))?;
        map.insert(k.trim().to_string(), v.into());
    }
    let motion: WallMotion = serde_json::from_value(map.into()).map_err(|e| e.to_string())?;
    motion.checked().map_err(|e| e.to_string())
}

/// A fully specified run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Preset name, or "custom".
    pub scenario: String,
    pub motion: WallMotion,
    pub method: Method,
    /// k_max for spectral runs, N for FD runs, number of exact modes in the
    /// superposition for exact runs from a Doescher state.
    pub resolution: usize,
    pub initial: Initial,
    pub t_max: f64,
    pub dt: f64,
    pub n_samples: usize,
    pub outputs: Vec<Observable>,
    /// Times of density snapshots; each picks the nearest sample time.
    #[serde(default)]
    pub density_times: Vec<f64>,
    pub density_points: usize,
    pub output_path: PathBuf,
    #[serde(default)]
    pub spectral: SpectralOptions,
    #[serde(default)]
    pub fd: FdOptions,
}

impl RunConfig {
    /// α of the initial state: zero for Doescher, ℓ(0)ℓ′(0)/4 for Fojón.
    pub fn initial_alpha(&self) -> f64 {
        match self.initial.kind {
            InitialKind::Doescher => 0.0,
            InitialKind::Fojon => self.motion.alpha(),
        }
    }

    /// Number of complex ODEs integrated by the method.
    pub fn n_complex_odes(&self) -> usize {
        match self.method {
            Method::Spectral => self.resolution,
            Method::Fd => self.resolution - 1,
            Method::Exact => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, field: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CliError::usage(field, format!("must be positive and finite, got {v}")))
            }
        };
        positive(self.t_max, "t_max")?;
        positive(self.dt, "dt")?;
        if self.dt > self.t_max {
            return Err(CliError::usage("dt", format!("{} exceeds t_max = {}", self.dt, self.t_max)));
        }
        if self.n_samples < 2 {
            return Err(CliError::usage("n_samples", "at least two samples are needed"));
        }
        if self.initial.j == 0 {
            return Err(CliError::usage("initial", "mode index j starts at 1"));
        }
        if self.resolution == 0 {
            return Err(CliError::usage("resolution", "must be positive"));
        }
        match self.method {
            Method::Spectral if self.resolution < self.initial.j => {
                return Err(CliError::usage(
                    "resolution",
                    format!("k_max = {} cannot hold initial mode {}", self.resolution, self.initial.j),
                ));
            }
            Method::Fd if self.resolution < 3 => {
                return Err(CliError::usage("resolution", "FD needs N >= 3"));
            }
            Method::Exact => {
                if !matches!(self.motion, WallMotion::Uniform { .. }) {
                    return Err(CliError::usage("method", "exact solutions exist only for uniform wall motion"));
                }
                if self.initial.kind == InitialKind::Doescher && self.resolution < self.initial.j {
                    return Err(CliError::usage(
                        "resolution",
                        format!("{} exact modes cannot hold initial mode {}", self.resolution, self.initial.j),
                    ));
                }
            }
            _ => {}
        }
        if self.outputs.contains(&Observable::Density) && self.density_points < 3 {
            return Err(CliError::usage("density_points", "at least three points are needed"));
        }
        if let Some(t) = self.density_times.iter().find(|t| !(0.0..=self.t_max).contains(*t)) {
            return Err(CliError::usage("density_times", format!("{t} lies outside [0, t_max]")));
        }
        if self.output_path.as_os_str().is_empty() {
            return Err(CliError::usage("output_path", "must not be empty"));
        }
        self.motion.checked()?;
        self.motion.validate(self.t_max)?;
        Ok(())
    }
}

/// Partial configuration from flags or a config file. Later layers win.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct RunOverrides {
    /// Named parameter set (see list-presets).
    #[arg(long)]
    pub preset: Option<String>,
    /// Wall law, e.g. `uniform:l0=1,velocity=-16`,
    /// `oscillatory:l0=1,amplitude=0.3,omega=10`,
    /// `sudden_expansion:asymptote=2,rate=10`.
    #[arg(long, value_parser = parse_motion)]
    pub motion: Option<WallMotion>,
    #[arg(long)]
    pub method: Option<Method>,
    /// k_max (spectral), N (fd) or number of exact modes.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Initial state, `doescher:<j>` or `fojon:<j>`.
    #[arg(long)]
    pub initial: Option<Initial>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    /// Comma-separated observables.
    #[arg(long, value_delimiter = ',')]
    pub outputs: Option<Vec<Observable>>,
    /// Comma-separated density snapshot times.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub density_times: Option<Vec<f64>>,
    #[arg(long)]
    pub density_points: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub output_path: Option<PathBuf>,
    /// Spectral phase advance per RK4 step in radians; 0 disables
    /// sub-stepping.
    #[arg(long, allow_negative_numbers = true)]
    pub max_phase_step: Option<f64>,
    /// Relative spectral norm drift that aborts a run.
    #[arg(long, allow_negative_numbers = true)]
    pub drift_limit: Option<f64>,
}

impl RunOverrides {
    /// Fields set in `other` replace those set here.
    pub fn layered(&self, other: &RunOverrides) -> RunOverrides {
        macro_rules! pick {
            ($($f:ident),*) => {
                RunOverrides { $($f: other.$f.clone().or_else(|| self.$f.clone())),* }
            };
        }
        pick!(
            preset,
            motion,
            method,
            resolution,
            initial,
            t_max,
            dt,
            n_samples,
            outputs,
            density_times,
            density_points,
            output_path,
            max_phase_step,
            drift_limit
        )
    }
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigSource {
    /// A TOML file with any subset of the run fields.
    Overrides(RunOverrides),
    /// The complete configuration recorded in a run manifest.
    Manifest(Box<RunConfig>),
}

/// Reads a TOML override file or a JSON manifest, chosen by extension.
pub fn load_config_file(path: &Path) -> Result<ConfigSource> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if path.extension().is_some_and(|e| e == "json") {
        #[derive(Deserialize)]
        struct ManifestConfig {
            config: RunConfig,
        }
        let m: ManifestConfig = serde_json::from_str(&text)?;
        Ok(ConfigSource::Manifest(Box::new(m.config)))
    } else {
        Ok(ConfigSource::Overrides(toml::from_str(&text)?))
    }
}

/// Builds a validated configuration. Precedence, lowest first: preset (or
/// defaults for a custom motion), flags, config file, output directory
/// from the environment.
pub fn resolve(flags: &RunOverrides, file: Option<ConfigSource>, env_output: Option<PathBuf>) -> Result<RunConfig> {
    let mut config = match file {
        Some(ConfigSource::Manifest(config)) => *config,
        Some(ConfigSource::Overrides(file)) => apply(&flags.layered(&file))?,
        None => apply(flags)?,
    };
    if let Some(dir) = env_output {
        config.output_path = dir;
    }
    config.validate()?;
    Ok(config)
}

fn apply(o: &RunOverrides) -> Result<RunConfig> {
    let (mut config, defaults) = match (&o.preset, o.motion) {
        (Some(name), _) => {
            let p = presets::find(name)?;
            (p.config, p.resolutions)
        }
        (None, Some(motion)) => presets::custom(motion),
        (None, None) => return Err(CliError::usage("preset", "give a preset or an explicit --motion")),
    };
    if let Some(m) = o.motion {
        config.motion = m;
        config.scenario = "custom".into();
    }
    if let Some(method) = o.method {
        config.method = method;
        config.resolution = defaults.for_method(method);
    }
    let set = |dst: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *dst = v;
        }
    };
    if let Some(r) = o.resolution {
        config.resolution = r;
    }
    if let Some(i) = o.initial {
        config.initial = i;
    }
    let t_max_given = o.t_max.is_some();
    set(&mut config.t_max, o.t_max);
    set(&mut config.dt, o.dt);
    if let Some(n) = o.n_samples {
        config.n_samples = n;
    }
    if let Some(outputs) = &o.outputs {
        config.outputs = outputs.clone();
    }
    match &o.density_times {
        Some(times) => config.density_times = times.clone(),
        None if t_max_given => config.density_times = vec![config.t_max],
        None => {}
    }
    if let Some(n) = o.density_points {
        config.density_points = n;
    }
    if let Some(p) = &o.output_path {
        config.output_path = p.clone();
    }
    if let Some(step) = o.max_phase_step {
        config.spectral.max_phase_step = (step > 0.0).then_some(step);
    }
    set(&mut config.spectral.drift_limit, o.drift_limit);
    Ok(config)
}

/// Parses `exact`, `spectral:40` or `fd:200`.
pub fn parse_method_spec(s: &str) -> std::result::Result<(Method, Option<usize>), String> {
    let (m, r) = match s.split_once(':') {
        Some((m, r)) => (m, Some(r.parse::<usize>().map_err(|e| format!("resolution '{r}': {e}"))?)),
        None => (s, None),
    };
    let method = Method::from_str(m, true)?;
    Ok((method, r))
}

/// Default resolution per method, used when only the method is overridden.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolutions {
    pub spectral: usize,
    pub fd: usize,
    pub exact: usize,
}

impl Resolutions {
    pub fn for_method(&self, m: Method) -> usize {
        match m {
            Method::Spectral => self.spectral,
            Method::Fd => self.fd,
            Method::Exact => self.exact,
        }
    }
}

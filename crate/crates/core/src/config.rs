//! Run configuration: a TOML file plus command-line overrides.
//!
//! ```toml
//! country = "CA"            # or "all"
//! output_dir = "out"
//!
//! [inputs]
//! population = "data/population.csv"
//! probes = "data/probes.json"
//!
//! [thresholds]
//! cumulative_cap = 0.95
//! per_as_floor = 0.01
//!
//! [http]
//! base_url = "https://atlas.ripe.net/api/v2/"
//! rate_limit = 4.0
//! credential_env = "ATLAS_API_KEY"
//! measurement_ids = [1001, 1002]
//! ```
//!
//! Every key is optional. Relative paths are resolved against the directory
//! holding the config file; without a config file, inputs default to the
//! standard file names in the working directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::coverage::Thresholds;
use crate::ingest::http::DEFAULT_RATE_LIMIT;
use crate::model::CountryCode;
use crate::pipeline::files;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid country filter {0:?}: expected a two-letter code or \"all\"")]
    Country(String),
    #[error("{name} must be in (0, 1], got {value}")]
    Threshold { name: &'static str, value: f64 },
    #[error("rate limit must be a positive number of requests per second, got {0}")]
    RateLimit(f64),
    #[error("output directory {path} is not writable: {reason}")]
    OutputDir { path: PathBuf, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountryFilter {
    One(CountryCode),
    All,
}

impl FromStr for CountryFilter {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(CountryFilter::All);
        }
        CountryCode::new(&s.to_ascii_uppercase())
            .map(CountryFilter::One)
            .map_err(|_| ConfigError::Country(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputPaths {
    pub population: PathBuf,
    pub country_users: PathBuf,
    pub probes: PathBuf,
    pub traceroutes: PathBuf,
    pub prefix2as: PathBuf,
    pub geo: PathBuf,
    pub capitals: PathBuf,
}

impl InputPaths {
    /// Standard file names under `dir`.
    pub fn in_dir(dir: &Path) -> Self {
        InputPaths {
            population: dir.join(files::POPULATION),
            country_users: dir.join(files::COUNTRY_USERS),
            probes: dir.join(files::PROBES),
            traceroutes: dir.join(files::TRACEROUTES),
            prefix2as: dir.join(files::PREFIX2AS),
            geo: dir.join(files::GEO),
            capitals: dir.join(files::CAPITALS),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HttpSettings {
    pub base_url: Option<String>,
    pub rate_limit: f64,
    /// Name of the environment variable holding the API key.
    pub credential_env: Option<String>,
    pub measurement_ids: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub inputs: InputPaths,
    pub country: CountryFilter,
    pub thresholds: Thresholds,
    pub output_dir: PathBuf,
    pub http: HttpSettings,
}

/// Values given on the command line; they win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub country: Option<CountryFilter>,
    pub output_dir: Option<PathBuf>,
    pub cumulative_cap: Option<f64>,
    pub per_as_floor: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    country: Option<String>,
    output_dir: Option<PathBuf>,
    #[serde(default)]
    inputs: FileInputs,
    #[serde(default)]
    thresholds: FileThresholds,
    #[serde(default)]
    http: FileHttp,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileInputs {
    population: Option<PathBuf>,
    country_users: Option<PathBuf>,
    probes: Option<PathBuf>,
    traceroutes: Option<PathBuf>,
    prefix2as: Option<PathBuf>,
    geo: Option<PathBuf>,
    capitals: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileThresholds {
    cumulative_cap: Option<f64>,
    per_as_floor: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileHttp {
    base_url: Option<String>,
    rate_limit: Option<f64>,
    credential_env: Option<String>,
    #[serde(default)]
    measurement_ids: Vec<u64>,
}

impl RunConfig {
    /// Reads `path` (if any), applies `overrides` and validates the result.
    /// Nothing is created on disk.
    pub fn load(path: Option<&Path>, overrides: Overrides) -> Result<Self, ConfigError> {
        let (file, base) = match path {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|source| ConfigError::Read {
                    path: p.to_path_buf(),
                    source,
                })?;
                let file: FileConfig = toml::from_str(&text).map_err(|e| ConfigError::Parse {
                    path: p.to_path_buf(),
                    message: e.to_string(),
                })?;
                let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
                (file, base)
            }
            None => (FileConfig::default(), PathBuf::new()),
        };
        Self::resolve(file, &base, overrides)
    }

    /// Parses TOML text as if it were a config file located in `base`.
    pub fn from_toml(text: &str, base: &Path, overrides: Overrides) -> Result<Self, ConfigError> {
        let file: FileConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: base.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::resolve(file, base, overrides)
    }

    fn resolve(file: FileConfig, base: &Path, overrides: Overrides) -> Result<Self, ConfigError> {
        let at = |p: Option<PathBuf>, default: &str| match p {
            Some(p) if p.is_absolute() => p,
            Some(p) => base.join(p),
            None => base.join(default),
        };
        let inputs = InputPaths {
            population: at(file.inputs.population, files::POPULATION),
            country_users: at(file.inputs.country_users, files::COUNTRY_USERS),
            probes: at(file.inputs.probes, files::PROBES),
            traceroutes: at(file.inputs.traceroutes, files::TRACEROUTES),
            prefix2as: at(file.inputs.prefix2as, files::PREFIX2AS),
            geo: at(file.inputs.geo, files::GEO),
            capitals: at(file.inputs.capitals, files::CAPITALS),
        };
        let country = match (overrides.country, file.country) {
            (Some(c), _) => c,
            (None, Some(s)) => s.parse()?,
            (None, None) => CountryFilter::All,
        };
        let defaults = Thresholds::default();
        let thresholds = Thresholds {
            cumulative_cap: overrides
                .cumulative_cap
                .or(file.thresholds.cumulative_cap)
                .unwrap_or(defaults.cumulative_cap),
            per_as_floor: overrides
                .per_as_floor
                .or(file.thresholds.per_as_floor)
                .unwrap_or(defaults.per_as_floor),
        };
        let output_dir = match overrides.output_dir {
            Some(d) => d,
            None => at(file.output_dir, "."),
        };
        let config = RunConfig {
            inputs,
            country,
            thresholds,
            output_dir,
            http: HttpSettings {
                base_url: file.http.base_url,
                rate_limit: file.http.rate_limit.unwrap_or(DEFAULT_RATE_LIMIT),
                credential_env: file.http.credential_env,
                measurement_ids: file.http.measurement_ids,
            },
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, value) in [
            ("cumulative cap", self.thresholds.cumulative_cap),
            ("per-AS floor", self.thresholds.per_as_floor),
        ] {
            // written so that NaN fails too
            if !(value > 0.0 && value <= 1.0) {
                return Err(ConfigError::Threshold { name, value });
            }
        }
        if !(self.http.rate_limit > 0.0 && self.http.rate_limit.is_finite()) {
            return Err(ConfigError::RateLimit(self.http.rate_limit));
        }
        check_writable(&self.output_dir)
    }

    /// The API key, read from the configured environment variable.
    pub fn api_key(&self) -> Option<String> {
        let var = self.http.credential_env.as_deref()?;
        std::env::var(var).ok().filter(|k| !k.is_empty())
    }
}

/// The directory must either exist and be writable or be creatable below
/// its nearest existing ancestor.
fn check_writable(dir: &Path) -> Result<(), ConfigError> {
    let fail = |reason: &str| ConfigError::OutputDir {
        path: dir.to_path_buf(),
        reason: reason.to_string(),
    };
    let mut probe = if dir.as_os_str().is_empty() {
        Path::new(".")
    } else {
        dir
    };
    loop {
        match fs::metadata(probe) {
            Ok(meta) if !meta.is_dir() => {
                return Err(fail(&format!("{} is not a directory", probe.display())))
            }
            Ok(meta) if meta.permissions().readonly() => {
                return Err(fail(&format!("{} is read-only", probe.display())))
            }
            Ok(_) => return Ok(()),
            Err(_) => match probe.parent() {
                Some(parent) if !parent.as_os_str().is_empty() => probe = parent,
                _ => return Ok(()),
            },
        }
    }
}

//! Scenario files.
//!
//! ```text
//! # global keys come first
//! model = maser
//! t_max = 10
//!
//! [model.maser]
//! delta1 = 1
//! ...
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use entroflux_core::{
    BoundMode, GaussianState, MaserParams, QubitParams, RunOptions, SqueezedParams, C64,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("missing required key `{key}` in {section}")]
    Missing { key: String, section: String },

    #[error("invalid scenario ({invariant})")]
    Validation { invariant: String },
}

impl ConfigError {
    fn parse(line: usize, message: impl Into<String>) -> Self {
        ConfigError::Parse {
            line,
            message: message.into(),
        }
    }

    fn validation(invariant: impl Into<String>) -> Self {
        ConfigError::Validation {
            invariant: invariant.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Qubit,
    Maser,
    Squeezed,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Qubit => "qubit",
            ModelKind::Maser => "maser",
            ModelKind::Squeezed => "squeezed",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        match name {
            "qubit" => Some(ModelKind::Qubit),
            "maser" => Some(ModelKind::Maser),
            "squeezed" => Some(ModelKind::Squeezed),
            _ => None,
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            ModelKind::Qubit => &["delta", "beta", "gamma", "p0", "c0_re", "c0_im"],
            ModelKind::Maser => &[
                "delta1", "delta2", "beta1", "beta2", "lambda1", "lambda2", "gamma_d", "p1_0",
                "p2_0", "c0_re", "c0_im",
            ],
            ModelKind::Squeezed => &[
                "omega",
                "omega_s",
                "temperature",
                "gamma",
                "r",
                "theta",
                "epsilon",
                "n0",
                "m0_re",
                "m0_im",
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    Qubit(QubitParams),
    Maser(MaserParams),
    Squeezed(SqueezedParams),
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Qubit(_) => ModelKind::Qubit,
            ModelParams::Maser(_) => ModelKind::Maser,
            ModelParams::Squeezed(_) => ModelKind::Squeezed,
        }
    }

    fn validate(&self) -> entroflux_core::Result<()> {
        match self {
            ModelParams::Qubit(p) => p.validate(),
            ModelParams::Maser(p) => p.validate(),
            ModelParams::Squeezed(p) => p.validate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: ModelParams,
    pub t_max: f64,
    pub dt: f64,
    pub sample_every: usize,
    pub mode: BoundMode,
    pub output_path: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn model(&self) -> ModelKind {
        self.params.kind()
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions::new(self.t_max, self.dt)
            .sample_every(self.sample_every)
            .mode(self.mode)
    }

    /// Checks the cross-field invariants and the model's own validation.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(ConfigError::validation(format!(
                "t_max > 0 violated: t_max = {}",
                self.t_max
            )));
        }
        if self.dt.is_nan() || self.dt <= 0.0 {
            return Err(ConfigError::validation(format!(
                "dt > 0 violated: dt = {}",
                self.dt
            )));
        }
        if self.dt > self.t_max {
            return Err(ConfigError::validation(format!(
                "dt <= t_max violated: dt = {}, t_max = {}",
                self.dt, self.t_max
            )));
        }
        if self.sample_every < 1 {
            return Err(ConfigError::validation("sample_every >= 1 violated"));
        }
        self.params.validate().map_err(|e| {
            ConfigError::validation(format!("{} parameters: {e}", self.model().name()))
        })
    }
}

pub fn parse_mode(value: &str) -> Option<BoundMode> {
    match value {
        "incremental" => Some(BoundMode::Incremental),
        "resolve" => Some(BoundMode::Resolve),
        _ => None,
    }
}

struct Entry {
    line: usize,
    value: String,
}

#[derive(Default)]
struct Section {
    line: usize,
    entries: BTreeMap<String, Entry>,
}

impl Section {
    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let Some(entry) = self.entries.get(key) else {
            return Ok(None);
        };
        entry
            .value
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Some)
            .ok_or_else(|| {
                ConfigError::parse(
                    entry.line,
                    format!("`{key}` expects a finite number, got `{}`", entry.value),
                )
            })
    }
}

struct Reader<'a> {
    section: &'a Section,
    name: String,
}

impl Reader<'_> {
    fn required(&self, key: &str) -> Result<f64, ConfigError> {
        self.section
            .number(key)?
            .ok_or_else(|| ConfigError::Missing {
                key: key.to_string(),
                section: self.name.clone(),
            })
    }

    fn optional(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.section.number(key)?.unwrap_or(default))
    }
}

/// Parses and validates a scenario file.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut global = Section::default();
    let mut models: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(header) = content.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::parse(line, "unterminated section header"))?
                .trim();
            let name = header
                .strip_prefix("model.")
                .ok_or_else(|| ConfigError::parse(line, format!("unknown section `[{header}]`")))?;
            if ModelKind::from_name(name).is_none() {
                return Err(ConfigError::parse(line, format!("unknown model `{name}`")));
            }
            if models.contains_key(name) {
                return Err(ConfigError::parse(
                    line,
                    format!("duplicate section `[{header}]`"),
                ));
            }
            models.insert(
                name.to_string(),
                Section {
                    line,
                    ..Section::default()
                },
            );
            current = Some(name.to_string());
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            ConfigError::parse(line, format!("expected `key = value`, got `{content}`"))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ConfigError::parse(line, "empty key"));
        }
        if value.is_empty() {
            return Err(ConfigError::parse(line, format!("empty value for `{key}`")));
        }
        let section = match &current {
            None => {
                const GLOBAL: [&str; 6] = [
                    "model",
                    "t_max",
                    "dt",
                    "sample_every",
                    "output_path",
                    "mode",
                ];
                if !GLOBAL.contains(&key) {
                    return Err(ConfigError::parse(line, format!("unknown key `{key}`")));
                }
                &mut global
            }
            Some(name) => {
                let kind = ModelKind::from_name(name).expect("section names are checked");
                if !kind.keys().contains(&key) {
                    return Err(ConfigError::parse(
                        line,
                        format!("unknown key `{key}` for model {name}"),
                    ));
                }
                models.get_mut(name).expect("section was inserted")
            }
        };
        if section.entries.contains_key(key) {
            return Err(ConfigError::parse(line, format!("duplicate key `{key}`")));
        }
        section.entries.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }

    let model_entry = global
        .entries
        .get("model")
        .ok_or_else(|| ConfigError::Missing {
            key: "model".into(),
            section: "global settings".into(),
        })?;
    let kind = ModelKind::from_name(&model_entry.value).ok_or_else(|| {
        ConfigError::parse(
            model_entry.line,
            format!(
                "model must be one of qubit, maser, squeezed; got `{}`",
                model_entry.value
            ),
        )
    })?;
    let mode = match global.entries.get("mode") {
        None => BoundMode::default(),
        Some(e) => parse_mode(&e.value).ok_or_else(|| {
            ConfigError::parse(
                e.line,
                format!("mode must be incremental or resolve, got `{}`", e.value),
            )
        })?,
    };
    let sample_every = match global.entries.get("sample_every") {
        None => 10,
        Some(e) => e.value.parse::<usize>().map_err(|_| {
            ConfigError::parse(
                e.line,
                format!(
                    "`sample_every` expects a non-negative integer, got `{}`",
                    e.value
                ),
            )
        })?,
    };
    let t_max = global
        .number("t_max")?
        .ok_or_else(|| ConfigError::Missing {
            key: "t_max".into(),
            section: "global settings".into(),
        })?;
    let dt = global.number("dt")?.unwrap_or(1e-3);
    if let Some((name, section)) = models.iter().find(|(name, _)| *name != kind.name()) {
        return Err(ConfigError::parse(
            section.line,
            format!(
                "section [model.{name}] does not match model = {}",
                kind.name()
            ),
        ));
    }
    let empty = Section::default();
    let reader = Reader {
        section: models.get(kind.name()).unwrap_or(&empty),
        name: format!("[model.{}]", kind.name()),
    };
    let params = match kind {
        ModelKind::Qubit => ModelParams::Qubit(QubitParams {
            delta: reader.required("delta")?,
            beta: reader.required("beta")?,
            gamma: reader.required("gamma")?,
            p0: reader.required("p0")?,
            c0: C64::new(
                reader.optional("c0_re", 0.0)?,
                reader.optional("c0_im", 0.0)?,
            ),
        }),
        ModelKind::Maser => ModelParams::Maser(MaserParams {
            delta1: reader.required("delta1")?,
            delta2: reader.required("delta2")?,
            beta1: reader.required("beta1")?,
            beta2: reader.required("beta2")?,
            lambda1: reader.required("lambda1")?,
            lambda2: reader.required("lambda2")?,
            gamma_d: reader.required("gamma_d")?,
            p1_0: reader.required("p1_0")?,
            p2_0: reader.required("p2_0")?,
            c0: C64::new(
                reader.optional("c0_re", 0.0)?,
                reader.optional("c0_im", 0.0)?,
            ),
        }),
        ModelKind::Squeezed => ModelParams::Squeezed(SqueezedParams {
            omega: reader.required("omega")?,
            omega_s: reader.required("omega_s")?,
            temperature: reader.required("temperature")?,
            gamma: reader.required("gamma")?,
            r: reader.required("r")?,
            theta: reader.required("theta")?,
            initial: squeezed_initial(&reader)?,
        }),
    };

    let cfg = ScenarioConfig {
        params,
        t_max,
        dt,
        sample_every,
        mode,
        output_path: global
            .entries
            .get("output_path")
            .map(|e| PathBuf::from(&e.value)),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn squeezed_initial(reader: &Reader<'_>) -> Result<GaussianState, ConfigError> {
    let section = reader.section;
    let epsilon = section.number("epsilon")?;
    let moments = ["n0", "m0_re", "m0_im"]
        .iter()
        .find_map(|k| section.entries.get(*k).map(|e| e.line));
    match (epsilon, moments) {
        (Some(_), Some(line)) => Err(ConfigError::parse(
            line,
            "give either `epsilon` or the moments `n0`, `m0_re`, `m0_im`, not both",
        )),
        (Some(eps), None) => Ok(GaussianState::squeezed_vacuum(eps)),
        (None, Some(_)) => Ok(GaussianState {
            mean: C64::new(0.0, 0.0),
            occupation: reader.required("n0")?,
            anomalous: C64::new(
                reader.optional("m0_re", 0.0)?,
                reader.optional("m0_im", 0.0)?,
            ),
        }),
        (None, None) => Err(ConfigError::Missing {
            key: "epsilon".into(),
            section: reader.name.clone(),
        }),
    }
}

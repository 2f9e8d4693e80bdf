//! TOML run configuration.
//!
//! ```toml
//! temperature = 300.0
//!
//! [materials.silica]
//! kind = "lorentz"
//! oscillators = [{ strength = 1.1, resonance = 2.0e16 }]
//!
//! [stack]
//! left = "silica"
//! right = "silica"
//! layers = [{ material = "vacuum", thickness_nm = 10.0 }]
//!
//! [sweep]
//! layer = 1
//! min_nm = 1.0
//! max_nm = 100.0
//! points = 10
//! spacing = "log"
//! ```
//!
//! Thicknesses are given in nanometres and stored in metres.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::em_core::{Layer, Stack};
use crate::kernel::MatsubaraSpec;
use crate::materials::{MaterialModel, OscillatorTerm};
use crate::quadrature::QuadratureSpec;

const NM: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Syntax { path: String, message: String },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaterialKind {
    Vacuum,
    Constant,
    Lorentz,
    Drude,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOscillator {
    strength: f64,
    resonance: f64,
    #[serde(default)]
    damping: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaterial {
    kind: MaterialKind,
    epsilon: Option<f64>,
    static_offset: Option<f64>,
    oscillators: Option<Vec<RawOscillator>>,
    plasma_frequency: Option<f64>,
    damping: Option<f64>,
    permeability: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    material: String,
    thickness_nm: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStack {
    left: String,
    right: String,
    #[serde(default)]
    layers: Vec<RawLayer>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    layer: usize,
    min_nm: f64,
    max_nm: f64,
    points: usize,
    #[serde(default = "default_spacing")]
    spacing: Spacing,
}

fn default_spacing() -> Spacing {
    Spacing::Log
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNumerics {
    matsubara_rel_tol: Option<f64>,
    min_terms: Option<usize>,
    max_terms: Option<usize>,
    quad_rel_tol: Option<f64>,
    quad_abs_tol: Option<f64>,
    max_depth: Option<u32>,
    tail_cutoff: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    temperature: Option<f64>,
    #[serde(default)]
    materials: BTreeMap<String, RawMaterial>,
    stack: RawStack,
    sweep: Option<RawSweep>,
    #[serde(default)]
    numerics: RawNumerics,
}

/// Thickness sweep of one layer, in metres.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub layer: usize,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn thicknesses(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
                    Spacing::Linear => self.min + f * (self.max - self.min),
                }
            })
            .collect()
    }
}

/// A validated configuration with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub temperature: f64,
    pub materials: BTreeMap<String, MaterialModel>,
    pub stack: Stack,
    pub sweep: Option<SweepSpec>,
    pub matsubara: MatsubaraSpec,
    pub quadrature: QuadratureSpec,
}

impl RunConfig {
    pub fn material(&self, name: &str) -> Option<&MaterialModel> {
        self.materials.get(name)
    }
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config_str(&text).map_err(|e| match e {
        ConfigError::Syntax { message, .. } => ConfigError::Syntax {
            path: path.display().to_string(),
            message,
        },
        other => other,
    })
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax {
        path: "<config>".into(),
        message: e.to_string(),
    })?;
    build(raw)
}

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(field, format!("must be finite and > 0, got {v}")))
    }
}

fn require<T: Copy>(field: String, v: Option<T>) -> Result<T, ConfigError> {
    v.ok_or_else(|| invalid(field, "required for this kind"))
}

fn build_material(name: &str, raw: &RawMaterial) -> Result<MaterialModel, ConfigError> {
    let field = |f: &str| format!("materials.{name}.{f}");
    let allowed: &[&str] = match raw.kind {
        MaterialKind::Vacuum => &[],
        MaterialKind::Constant => &["epsilon"],
        MaterialKind::Lorentz => &["static_offset", "oscillators"],
        MaterialKind::Drude => &["plasma_frequency", "damping"],
    };
    let present = [
        ("epsilon", raw.epsilon.is_some()),
        ("static_offset", raw.static_offset.is_some()),
        ("oscillators", raw.oscillators.is_some()),
        ("plasma_frequency", raw.plasma_frequency.is_some()),
        ("damping", raw.damping.is_some()),
    ];
    for (key, set) in present {
        if set && !allowed.contains(&key) {
            return Err(invalid(
                field(key),
                format!("not valid for kind {:?}", raw.kind),
            ));
        }
    }
    let model = match raw.kind {
        MaterialKind::Vacuum => MaterialModel::vacuum(),
        MaterialKind::Constant => MaterialModel::constant(require(field("epsilon"), raw.epsilon)?),
        MaterialKind::Lorentz => MaterialModel::lorentz(
            raw.static_offset.unwrap_or(0.0),
            raw.oscillators
                .as_deref()
                .unwrap_or_default()
                .iter()
                .map(|o| OscillatorTerm::new(o.strength, o.resonance, o.damping))
                .collect(),
        ),
        MaterialKind::Drude => MaterialModel::drude(
            require(field("plasma_frequency"), raw.plasma_frequency)?,
            raw.damping.unwrap_or(0.0),
        ),
    };
    let model = model.with_permeability(raw.permeability.unwrap_or(1.0));
    model
        .validate()
        .map_err(|e| invalid(format!("materials.{name}"), e.to_string()))?;
    Ok(model)
}

fn build(raw: RawConfig) -> Result<RunConfig, ConfigError> {
    let temperature = positive("temperature", raw.temperature.unwrap_or(300.0))?;
    let mut materials = BTreeMap::new();
    for (name, m) in &raw.materials {
        materials.insert(name.clone(), build_material(name, m)?);
    }
    materials
        .entry("vacuum".to_string())
        .or_insert_with(MaterialModel::vacuum);

    let lookup = |field: String, name: &str| {
        materials
            .get(name)
            .cloned()
            .ok_or_else(|| invalid(field, format!("unknown material `{name}`")))
    };
    let left = lookup("stack.left".into(), &raw.stack.left)?;
    let right = lookup("stack.right".into(), &raw.stack.right)?;
    let mut layers = Vec::with_capacity(raw.stack.layers.len());
    for (i, l) in raw.stack.layers.iter().enumerate() {
        let material = lookup(format!("stack.layers[{i}].material"), &l.material)?;
        let t = positive(&format!("stack.layers[{i}].thickness_nm"), l.thickness_nm)?;
        layers.push(Layer::new(material, t * NM));
    }
    let stack = Stack::new(left, layers, right);

    let sweep = match raw.sweep {
        None => None,
        Some(s) => {
            if s.layer == 0 || s.layer > stack.layers.len() {
                return Err(invalid(
                    "sweep.layer",
                    format!("must lie in 1..={}, got {}", stack.layers.len(), s.layer),
                ));
            }
            let min = positive("sweep.min_nm", s.min_nm)?;
            let max = positive("sweep.max_nm", s.max_nm)?;
            if min >= max {
                return Err(invalid(
                    "sweep.max_nm",
                    format!("must exceed sweep.min_nm ({min} >= {max})"),
                ));
            }
            if s.points < 2 {
                return Err(invalid(
                    "sweep.points",
                    format!("must be >= 2, got {}", s.points),
                ));
            }
            Some(SweepSpec {
                layer: s.layer,
                min: min * NM,
                max: max * NM,
                points: s.points,
                spacing: s.spacing,
            })
        }
    };

    let n = &raw.numerics;
    let mut matsubara = MatsubaraSpec::at(temperature);
    if let Some(v) = n.matsubara_rel_tol {
        matsubara.rel_tol = v;
    }
    if let Some(v) = n.min_terms {
        matsubara.min_terms = v;
    }
    if let Some(v) = n.max_terms {
        matsubara.max_terms = v;
    }
    matsubara
        .validate()
        .map_err(|e| invalid("numerics", e.to_string()))?;
    let mut quadrature = QuadratureSpec::default();
    if let Some(v) = n.quad_rel_tol {
        quadrature.rel_tol = v;
    }
    if let Some(v) = n.quad_abs_tol {
        quadrature.abs_tol = v;
    }
    if let Some(v) = n.max_depth {
        quadrature.max_depth = v;
    }
    if let Some(v) = n.tail_cutoff {
        quadrature.tail_cutoff = v;
    }
    quadrature
        .validate()
        .map_err(|e| invalid("numerics", e.to_string()))?;

    Ok(RunConfig {
        temperature,
        materials,
        stack,
        sweep,
        matsubara,
        quadrature,
    })
}

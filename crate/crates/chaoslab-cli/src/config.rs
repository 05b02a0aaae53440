//! JSON configuration schema and conversion into library types.
//!
//! One document drives the orbit commands (render, converge, rapunzel,
//! fibre); seqgen only reads its `stream` field, and cgr has its own small
//! schema. Every required field that is missing is reported by name.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;

use chaoslab::{FiniteWord, Ifs, MapSpec, MetricPoint, SpaceTag, StochasticKernel, SymbolStream};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub space: SpaceField,
    pub maps: Vec<MapConfig>,
    pub stream: StreamConfig,
    pub x0: PointConfig,
    pub kmax: usize,
    #[serde(rename = "Ks")]
    pub ks: Vec<usize>,
    pub delta: f64,
    pub epsilon: f64,
    #[serde(default)]
    pub reference: Option<ReferenceConfig>,
    #[serde(default)]
    pub render: Option<RenderConfig>,
    #[serde(default)]
    pub rapunzel: Option<RapunzelConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceField {
    Plane,
    Sphere,
}

impl From<SpaceField> for SpaceTag {
    fn from(s: SpaceField) -> SpaceTag {
        match s {
            SpaceField::Plane => SpaceTag::Plane,
            SpaceField::Sphere => SpaceTag::Sphere,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum MapConfig {
    #[serde(rename = "affine2d")]
    Affine2d {
        /// Row-major [a, b, c, d] for the 2×2 linear part.
        matrix: [f64; 4],
        translation: [f64; 2],
    },
    #[serde(rename = "mobius")]
    Mobius {
        /// [[re, im]; 4] coefficients a, b, c, d of (az+b)/(cz+d).
        matrix: [[f64; 2]; 4],
    },
}

/// A point: `[x, y]` (plane coordinates or sphere re/im), or `"inf"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PointConfig {
    Coords([f64; 2]),
    Named(String),
}

impl PointConfig {
    pub fn to_point(&self, space: SpaceTag) -> Result<MetricPoint, CliError> {
        match (self, space) {
            (PointConfig::Coords([x, y]), SpaceTag::Plane) => Ok(MetricPoint::planar(*x, *y)),
            (PointConfig::Coords([re, im]), SpaceTag::Sphere) => Ok(MetricPoint::sphere(*re, *im)),
            (PointConfig::Named(name), SpaceTag::Sphere) if name == "inf" => {
                Ok(MetricPoint::infinity())
            }
            (PointConfig::Named(name), _) => Err(CliError::usage(format!(
                "point field: unknown name {name:?} (only \"inf\" on the sphere is allowed)"
            ))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceConfig {
    /// Hutchinson steps for the deterministic attractor reference.
    #[serde(default = "default_reference_iters")]
    pub iters: usize,
    /// Seed point; defaults to the origin of the configured space.
    #[serde(default)]
    pub seed_point: Option<PointConfig>,
}

fn default_reference_iters() -> usize {
    12
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        ReferenceConfig {
            iters: default_reference_iters(),
            seed_point: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderConfig {
    #[serde(default = "default_image_side")]
    pub width: u32,
    #[serde(default = "default_image_side")]
    pub height: u32,
    /// [xmin, xmax, ymin, ymax]; defaults fit the unit triangle (plane) or
    /// the embedded unit sphere.
    #[serde(default)]
    pub viewport: Option<[f64; 4]>,
}

fn default_image_side() -> u32 {
    512
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            width: 512,
            height: 512,
            viewport: None,
        }
    }
}

impl RenderConfig {
    pub fn viewport_for(&self, space: SpaceTag) -> [f64; 4] {
        self.viewport.unwrap_or(match space {
            SpaceTag::Plane => [-0.05, 1.05, -0.05, 1.05],
            SpaceTag::Sphere => [-1.05, 1.05, -1.05, 1.05],
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RapunzelConfig {
    pub x0_dual: PointConfig,
    #[serde(default = "default_escape_threshold")]
    pub escape_threshold: f64,
}

fn default_escape_threshold() -> f64 {
    0.1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StreamConfig {
    Champernowne {
        n: u32,
    },
    Bernoulli {
        probs: Vec<f64>,
        seed: u64,
    },
    Markov {
        initial: Vec<f64>,
        rows: Vec<Vec<f64>>,
        seed: u64,
    },
    Ccc {
        alpha: f64,
        base: KernelConfig,
        seed: u64,
    },
    Explicit {
        symbols: Vec<u32>,
        #[serde(default)]
        n: Option<u32>,
    },
    Periodic {
        word: Vec<u32>,
        #[serde(default)]
        n: Option<u32>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum KernelConfig {
    Bernoulli {
        probs: Vec<f64>,
    },
    Markov {
        initial: Vec<f64>,
        rows: Vec<Vec<f64>>,
    },
    Ccc {
        alpha: f64,
        base: Box<KernelConfig>,
    },
}

impl KernelConfig {
    pub fn build(&self) -> Result<StochasticKernel, CliError> {
        let kernel = match self {
            KernelConfig::Bernoulli { probs } => StochasticKernel::bernoulli(probs.clone()),
            KernelConfig::Markov { initial, rows } => {
                StochasticKernel::markov(initial.clone(), rows.clone())
            }
            KernelConfig::Ccc { alpha, base } => {
                let base = base.build()?;
                StochasticKernel::ccc(base, *alpha)
            }
        };
        kernel.map_err(|e| CliError::usage(format!("stream kernel: {e}")))
    }
}

impl StreamConfig {
    /// Builds the stream; `seed_override` (the --seed flag) replaces any
    /// configured seed for stochastic kinds and is ignored by deterministic
    /// ones.
    pub fn build(&self, seed_override: Option<u64>) -> Result<SymbolStream, CliError> {
        let err = |e: chaoslab::Error| CliError::usage(format!("stream: {e}"));
        match self {
            StreamConfig::Champernowne { n } => SymbolStream::champernowne(*n).map_err(err),
            StreamConfig::Bernoulli { probs, seed } => {
                let kernel = StochasticKernel::bernoulli(probs.clone()).map_err(err)?;
                Ok(SymbolStream::stochastic(
                    kernel,
                    seed_override.unwrap_or(*seed),
                ))
            }
            StreamConfig::Markov {
                initial,
                rows,
                seed,
            } => {
                let kernel =
                    StochasticKernel::markov(initial.clone(), rows.clone()).map_err(err)?;
                Ok(SymbolStream::stochastic(
                    kernel,
                    seed_override.unwrap_or(*seed),
                ))
            }
            StreamConfig::Ccc { alpha, base, seed } => {
                let kernel = StochasticKernel::ccc(base.build()?, *alpha).map_err(err)?;
                Ok(SymbolStream::stochastic(
                    kernel,
                    seed_override.unwrap_or(*seed),
                ))
            }
            StreamConfig::Explicit { symbols, n } => {
                let n = n.unwrap_or_else(|| symbols.iter().copied().max().unwrap_or(1));
                let word = FiniteWord::new(symbols.clone(), n).map_err(err)?;
                Ok(SymbolStream::explicit(&word))
            }
            StreamConfig::Periodic { word, n } => {
                let n = n.unwrap_or_else(|| word.iter().copied().max().unwrap_or(1));
                let word = FiniteWord::new(word.clone(), n).map_err(err)?;
                Ok(SymbolStream::periodic(&word))
            }
        }
    }
}

/// The narrow view seqgen needs: only the stream. Extra fields in the
/// document are fine, so a full experiment config also works.
#[derive(Debug, Deserialize)]
pub struct SeqgenConfig {
    pub stream: StreamConfig,
}

/// Configuration of the data-driven chaos game.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CgrConfig {
    /// Path to the input string file.
    pub input: String,
    /// Single-character keys to symbols 1..=alphabet_size.
    pub mapping: BTreeMap<String, u32>,
    /// 2 (segment), 3 (triangle) or 4 (square corners).
    pub alphabet_size: u32,
    /// Occupancy histogram grid resolution (cells per axis).
    pub histogram_resolution: u32,
    /// Where the histogram CSV goes.
    pub histogram_out: String,
    #[serde(default)]
    pub render: Option<RenderConfig>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::usage(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.delta > 0.0) {
            return Err(CliError::usage("config: delta must be > 0"));
        }
        if !(self.epsilon > 0.0) {
            return Err(CliError::usage("config: epsilon must be > 0"));
        }
        if self.ks.is_empty() {
            return Err(CliError::usage("config: Ks must be nonempty"));
        }
        if let Some(&k) = self.ks.iter().max() {
            if self.kmax < k {
                return Err(CliError::usage(format!(
                    "config: kmax = {} must be >= max(Ks) = {k}",
                    self.kmax
                )));
            }
        }
        Ok(())
    }

    pub fn space(&self) -> SpaceTag {
        self.space.into()
    }

    pub fn build_ifs(&self) -> Result<Ifs, CliError> {
        let maps: Vec<MapSpec> = self
            .maps
            .iter()
            .map(|m| match m {
                MapConfig::Affine2d {
                    matrix,
                    translation,
                } => MapSpec::affine(*matrix, *translation),
                MapConfig::Mobius { matrix } => MapSpec::mobius(
                    Complex64::new(matrix[0][0], matrix[0][1]),
                    Complex64::new(matrix[1][0], matrix[1][1]),
                    Complex64::new(matrix[2][0], matrix[2][1]),
                    Complex64::new(matrix[3][0], matrix[3][1]),
                ),
            })
            .collect();
        let ifs = Ifs::new(self.space(), maps)
            .map_err(|e| CliError::usage(format!("config maps: {e}")))?;
        Ok(ifs)
    }

    /// Builds the stream and checks its alphabet against the maps.
    pub fn build_stream(&self, seed_override: Option<u64>) -> Result<SymbolStream, CliError> {
        let stream = self.stream.build(seed_override)?;
        let n = self.maps.len() as u32;
        if stream.alphabet_size() != n {
            return Err(CliError::usage(format!(
                "config stream: alphabet size {} does not match the {} maps",
                stream.alphabet_size(),
                n
            )));
        }
        Ok(stream)
    }

    pub fn x0(&self) -> Result<MetricPoint, CliError> {
        self.x0.to_point(self.space())
    }

    /// Deterministic attractor reference per the `reference` section (or
    /// its defaults).
    pub fn reference_attractor(&self, ifs: &Ifs) -> Result<chaoslab::PointCloud, CliError> {
        let reference = self.reference.as_ref();
        let iters = reference
            .map(|r| r.iters)
            .unwrap_or_else(default_reference_iters);
        let seed_point = match reference.and_then(|r| r.seed_point.as_ref()) {
            Some(p) => p.to_point(self.space())?,
            None => match self.space() {
                SpaceTag::Plane => MetricPoint::planar(0.0, 0.0),
                SpaceTag::Sphere => MetricPoint::sphere(0.0, 0.0),
            },
        };
        ifs.iterate_hutchinson(
            &chaoslab::PointCloud::from_point(seed_point),
            iters,
            self.delta,
        )
        .map_err(|e| CliError::usage(format!("reference attractor: {e}")))
    }
}

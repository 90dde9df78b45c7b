//! Run configuration: a JSON document merged with command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};
use crate::geometry::{validate_geometry, BulkGeometry, GeometryKind, UnitsConvention};
use crate::measures::Interval;
use crate::quadrature::QuadratureSpec;
use crate::rgflow::{MeasureKind, SweepParameter};

use super::output::Format;

pub const CACHE_ENV: &str = "HOLOSCOPE_CACHE";
pub const DEFAULT_CUTOFF: f64 = 0.01;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheConfig {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

/// Command-specific parameters. Each subcommand reads the subset it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<Interval>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<SweepParameter>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measures: Option<Vec<MeasureKind>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<MeasureKind>,
}

impl CommandConfig {
    /// Fields set in `over` replace those of `self`.
    pub fn merge(self, over: CommandConfig) -> Self {
        Self {
            name: over.name.or(self.name),
            length: over.length.or(self.length),
            intervals: over.intervals.or(self.intervals),
            lengths: over.lengths.or(self.lengths),
            gap: over.gap.or(self.gap),
            parameter: over.parameter.or(self.parameter),
            start: over.start.or(self.start),
            stop: over.stop.or(self.stop),
            steps: over.steps.or(self.steps),
            measures: over.measures.or(self.measures),
            measure: over.measure.or(self.measure),
            bracket: over.bracket.or(self.bracket),
            rate: over.rate.or(self.rate),
        }
    }

    /// Intervals from `intervals`, or laid out from `lengths` and `gap`
    /// starting at the origin.
    pub fn interval_list(&self) -> Result<Option<Vec<Interval>>> {
        if let Some(ivs) = &self.intervals {
            return Ok(Some(ivs.clone()));
        }
        let Some(lengths) = &self.lengths else {
            return Ok(None);
        };
        let gap = match (self.gap, lengths.len()) {
            (Some(g), _) => g,
            (None, 1) => 0.0,
            (None, _) => match (self.parameter, self.bracket, self.start) {
                (Some(SweepParameter::GapSize) | None, Some((lo, _)), _) => lo,
                (Some(SweepParameter::GapSize), None, Some(s)) => s,
                _ => {
                    return Err(HoloError::Config(
                        "`lengths` with several entries needs `gap`".into(),
                    ))
                }
            },
        };
        let mut out = Vec::with_capacity(lengths.len());
        let mut a = 0.0;
        for &l in lengths {
            let iv = Interval::new(a, a + l)?;
            a = iv.b + gap;
            out.push(iv);
        }
        Ok(Some(out))
    }
}

/// Contents of a `--config` document. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub geometry: Option<BulkGeometry>,
    #[serde(default)]
    pub units: Option<UnitsConvention>,
    #[serde(default)]
    pub cutoff: Option<f64>,
    #[serde(default)]
    pub quadrature: Option<QuadratureSpec>,
    #[serde(default)]
    pub output: Option<OutputConfig>,
    #[serde(default)]
    pub cache: Option<CacheConfig>,
    #[serde(default)]
    pub command: Option<CommandConfig>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            HoloError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| HoloError::Config(format!("config {}: {e}", path.display())))
    }
}

/// Geometry-related flags.
#[derive(Debug, Clone, Default)]
pub struct GeometryFlags {
    pub kind: Option<String>,
    pub d: Option<u32>,
    pub z_h: Option<f64>,
    pub z_w: Option<f64>,
    pub radius: Option<f64>,
}

/// Everything a run depends on, echoed into output metadata. Where the
/// output and cache live does not affect results and is left out.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub geometry: BulkGeometry,
    pub units: UnitsConvention,
    pub cutoff: f64,
    pub quadrature: QuadratureSpec,
    pub output: OutputConfig,
    #[serde(skip)]
    pub cache: CacheConfig,
    pub command: CommandConfig,
    pub seed: Option<u64>,
}

pub struct Overrides {
    pub geometry: GeometryFlags,
    pub cutoff: Option<f64>,
    pub four_g_n: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub cache: Option<PathBuf>,
    pub seed: Option<u64>,
    pub command: CommandConfig,
}

fn resolve_geometry(base: Option<BulkGeometry>, flags: &GeometryFlags) -> Result<BulkGeometry> {
    let mut geom = match flags.kind.as_deref() {
        None => base.unwrap_or_else(|| BulkGeometry::pure_ads(2)),
        Some(kind) => {
            let keep = base.filter(|g| g.label() == kind);
            match (kind, keep) {
                (_, Some(g)) => g,
                ("pure_ads", None) => BulkGeometry::pure_ads(2),
                ("black_brane", None) => {
                    let z_h = flags
                        .z_h
                        .ok_or_else(|| HoloError::Config("black_brane needs --z-h".into()))?;
                    BulkGeometry::black_brane(2, z_h)
                }
                ("hard_wall", None) => BulkGeometry::hard_wall(2, flags.z_w.unwrap_or(0.5)),
                ("tabulated", None) => {
                    return Err(HoloError::Config(
                        "tabulated geometries must be given in a config file".into(),
                    ))
                }
                (other, None) => {
                    return Err(HoloError::Config(format!(
                        "unknown geometry kind `{other}`"
                    )))
                }
            }
        }
    };
    if let Some(d) = flags.d {
        geom.d = d;
    }
    if let Some(r) = flags.radius {
        geom.radius = r;
    }
    match (&mut geom.kind, flags.z_h, flags.z_w) {
        (GeometryKind::BlackBrane { z_h }, Some(v), _) => *z_h = v,
        (GeometryKind::HardWall { z_w }, _, Some(v)) => *z_w = v,
        (_, None, None) => {}
        (_, Some(_), _) => {
            return Err(HoloError::Config(format!(
                "--z-h does not apply to {}",
                geom.label()
            )))
        }
        (_, _, Some(_)) => {
            return Err(HoloError::Config(format!(
                "--z-w does not apply to {}",
                geom.label()
            )))
        }
    }
    validate_geometry(&geom)?;
    Ok(geom)
}

impl ResolvedConfig {
    pub fn resolve(file: FileConfig, over: Overrides, command_name: &str) -> Result<Self> {
        if let Some(declared) = file.command.as_ref().and_then(|c| c.name.as_deref()) {
            if declared != command_name {
                return Err(HoloError::Config(format!(
                    "config declares command `{declared}` but `{command_name}` was run"
                )));
            }
        }
        let geometry = resolve_geometry(file.geometry, &over.geometry)?;
        let mut units = file.units.unwrap_or_default();
        if let Some(g) = over.four_g_n {
            units.four_g_n = g;
        }
        units.validate()?;
        let cutoff = over.cutoff.or(file.cutoff).unwrap_or(DEFAULT_CUTOFF);
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(HoloError::NonPositiveParameter {
                name: "eps",
                value: cutoff,
            });
        }
        let quadrature = file.quadrature.unwrap_or_default();
        quadrature.validate()?;

        let mut output = file.output.unwrap_or_default();
        if let Some(p) = over.out {
            output.path = Some(p);
        }
        if let Some(f) = over.format {
            output.format = f;
        }

        let mut cache = file.cache.unwrap_or_default();
        if let Some(p) = over.cache {
            cache.enabled = true;
            cache.path = Some(p);
        }
        if let Some(p) = std::env::var_os(CACHE_ENV).filter(|p| !p.is_empty()) {
            cache.enabled = true;
            cache.path = Some(PathBuf::from(p));
        }
        if cache.enabled && cache.path.is_none() {
            return Err(HoloError::Config("cache is enabled but has no path".into()));
        }

        let mut command = file.command.unwrap_or_default().merge(over.command);
        command.name = Some(command_name.to_owned());
        Ok(Self {
            geometry,
            units,
            cutoff,
            quadrature,
            output,
            cache,
            command,
            seed: over.seed,
        })
    }

    /// Metadata lines for emitted series.
    pub fn metadata(&self) -> Result<Vec<String>> {
        let json = serde_json::to_string(self)
            .map_err(|e| HoloError::Config(format!("config does not serialize: {e}")))?;
        Ok(vec![
            format!("holoscope {}", env!("CARGO_PKG_VERSION")),
            format!("config: {json}"),
            format!("geometry_id: {}", self.geometry.geometry_id()),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_overrides() -> Overrides {
        Overrides {
            geometry: GeometryFlags::default(),
            cutoff: None,
            four_g_n: None,
            out: None,
            format: None,
            cache: None,
            seed: None,
            command: CommandConfig::default(),
        }
    }

    #[test]
    fn flags_override_file_values() {
        let file: FileConfig = serde_json::from_str(
            r#"{"geometry": {"kind": "black_brane", "z_h": 2.0, "d": 2}, "cutoff": 0.001,
                "command": {"name": "mi", "lengths": [1.0, 1.0], "gap": 0.5}}"#,
        )
        .unwrap();
        let mut over = no_overrides();
        over.geometry.z_h = Some(1.0);
        over.cutoff = Some(0.01);
        over.command.gap = Some(0.1);
        let r = ResolvedConfig::resolve(file, over, "mi").unwrap();
        assert_eq!(r.geometry, BulkGeometry::black_brane(2, 1.0));
        assert_eq!(r.cutoff, 0.01);
        let ivs = r.command.interval_list().unwrap().unwrap();
        assert_eq!(ivs[1].a, 1.1);
    }

    #[test]
    fn invalid_geometry_and_mismatched_command() {
        let mut over = no_overrides();
        over.geometry.kind = Some("black_brane".into());
        over.geometry.z_h = Some(-1.0);
        assert!(ResolvedConfig::resolve(FileConfig::default(), over, "entropy").is_err());
        let file: FileConfig = serde_json::from_str(r#"{"command": {"name": "scan"}}"#).unwrap();
        assert!(ResolvedConfig::resolve(file, no_overrides(), "entropy").is_err());
        assert!(serde_json::from_str::<FileConfig>(r#"{"bogus": 1}"#).is_err());
    }
}

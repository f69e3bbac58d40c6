//! Run configuration: the JSON config file mirroring the CLI flags, and
//! the fully resolved plan the pipeline executes.

use std::path::PathBuf;

use serde::Deserialize;
use thiserror::Error;

use crate::graph::Direction;
use crate::layout::{GeometryParams, RankMetric, SectorFractions};
use crate::render::{AnimationParams, CanvasPx};
use crate::visual::{BlinkSchedule, MeasureChoice, VisualParams};

/// Optional JSON config file. Keys mirror the long flag names; flags given
/// on the command line take precedence over values here.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub format: Option<String>,
    pub window: Option<usize>,
    pub max_messages: Option<usize>,
    pub stride: Option<usize>,
    pub direction: Option<String>,
    pub rank_by: Option<String>,
    pub fractions: Option<String>,
    pub x_margin: Option<f64>,
    pub baseline: Option<f64>,
    pub amplitude: Option<f64>,
    pub line_y: Option<f64>,
    pub periods: Option<u32>,
    pub decay: Option<f64>,
    pub canvas: Option<String>,
    pub blink: Option<String>,
    pub measure: Option<String>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub fps_hint: Option<u32>,
    pub dump_networks: Option<bool>,
}

impl FileConfig {
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::BadFile(e.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config file: {0}")]
    BadFile(String),
    #[error("invalid value for {flag}: \"{value}\" ({hint})")]
    BadValue {
        flag: &'static str,
        value: String,
        hint: String,
    },
}

fn bad(flag: &'static str, value: impl Into<String>, hint: impl Into<String>) -> ConfigError {
    ConfigError::BadValue {
        flag,
        value: value.into(),
        hint: hint.into(),
    }
}

pub fn parse_direction(text: &str) -> Result<Direction, ConfigError> {
    match text {
        "information" => Ok(Direction::Information),
        "status" => Ok(Direction::Status),
        other => Err(bad("--direction", other, "expected information|status")),
    }
}

pub fn parse_rank_by(text: &str) -> Result<RankMetric, ConfigError> {
    match text {
        "strength" => Ok(RankMetric::Strength),
        "degree" => Ok(RankMetric::Degree),
        other => Err(bad("--rank-by", other, "expected strength|degree")),
    }
}

pub fn parse_measure(text: &str) -> Result<MeasureChoice, ConfigError> {
    match text {
        "out-in" => Ok(MeasureChoice::OutIn),
        "out" => Ok(MeasureChoice::OutStrength),
        "in" => Ok(MeasureChoice::InStrength),
        "total" => Ok(MeasureChoice::TotalStrength),
        "rank" => Ok(MeasureChoice::Rank),
        other => Err(bad("--measure", other, "expected out-in|out|in|total|rank")),
    }
}

/// Parse `h,i` as hub and intermediary fractions.
pub fn parse_fractions(text: &str) -> Result<SectorFractions, ConfigError> {
    let parts: Vec<&str> = text.split(',').collect();
    let [hub, intermediary] = parts[..] else {
        return Err(bad("--fractions", text, "expected H,I like 0.05,0.15"));
    };
    let hub: f64 = hub
        .trim()
        .parse()
        .map_err(|_| bad("--fractions", text, "hub share is not a number"))?;
    let intermediary: f64 = intermediary
        .trim()
        .parse()
        .map_err(|_| bad("--fractions", text, "intermediary share is not a number"))?;
    SectorFractions::new(hub, intermediary).map_err(|e| bad("--fractions", text, e.to_string()))
}

/// Parse `WxH` pixel dimensions.
pub fn parse_canvas(text: &str) -> Result<CanvasPx, ConfigError> {
    let Some((w, h)) = text.split_once(['x', 'X']) else {
        return Err(bad("--canvas", text, "expected WxH like 1000x600"));
    };
    let width: u32 = w
        .trim()
        .parse()
        .map_err(|_| bad("--canvas", text, "width is not a number"))?;
    let height: u32 = h
        .trim()
        .parse()
        .map_err(|_| bad("--canvas", text, "height is not a number"))?;
    CanvasPx::new(width, height).map_err(|e| bad("--canvas", text, e.to_string()))
}

/// Parse `period,duty` blink cadence.
pub fn parse_blink(text: &str) -> Result<BlinkSchedule, ConfigError> {
    let Some((period, duty)) = text.split_once(',') else {
        return Err(bad("--blink", text, "expected PERIOD,DUTY like 30,6"));
    };
    let period: u32 = period
        .trim()
        .parse()
        .map_err(|_| bad("--blink", text, "period is not a number"))?;
    let duty: u32 = duty
        .trim()
        .parse()
        .map_err(|_| bad("--blink", text, "duty is not a number"))?;
    BlinkSchedule::new(period, duty).map_err(|e| bad("--blink", text, e.to_string()))
}

/// Everything the pipeline needs, fully validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderPlan {
    pub delta: usize,
    pub max_messages: Option<usize>,
    pub stride: usize,
    pub direction: Direction,
    pub rank_by: RankMetric,
    pub fractions: SectorFractions,
    pub geometry: GeometryParams,
    pub blink: BlinkSchedule,
    pub visual: VisualParams,
    pub measure: MeasureChoice,
    pub canvas: CanvasPx,
    pub fps_hint: u32,
    pub jobs: usize,
    pub dump_networks: bool,
}

impl Default for RenderPlan {
    fn default() -> Self {
        RenderPlan {
            delta: 400,
            max_messages: None,
            stride: 1,
            direction: Direction::Information,
            rank_by: RankMetric::Strength,
            fractions: SectorFractions::default(),
            geometry: GeometryParams::default(),
            blink: BlinkSchedule::default(),
            visual: VisualParams::default(),
            measure: MeasureChoice::OutIn,
            canvas: CanvasPx::default(),
            fps_hint: 30,
            jobs: 0, // resolved to available parallelism
            dump_networks: false,
        }
    }
}

impl RenderPlan {
    /// Resolve a plan from a config file alone, with defaults for
    /// everything unset.
    pub fn from_file_config(cfg: &FileConfig) -> Result<Self, ConfigError> {
        let defaults = RenderPlan::default();
        let geometry = GeometryParams {
            x_margin: cfg.x_margin.unwrap_or(defaults.geometry.x_margin),
            baseline: cfg.baseline.unwrap_or(defaults.geometry.baseline),
            amplitude: cfg.amplitude.unwrap_or(defaults.geometry.amplitude),
            line_y: cfg.line_y.unwrap_or(defaults.geometry.line_y),
            periods: cfg.periods.unwrap_or(defaults.geometry.periods),
            decay: cfg.decay.unwrap_or(defaults.geometry.decay),
        }
        .validated()
        .map_err(|e| ConfigError::BadValue {
            flag: "geometry",
            value: String::new(),
            hint: e.to_string(),
        })?;

        let plan = RenderPlan {
            delta: cfg.window.unwrap_or(defaults.delta),
            max_messages: cfg.max_messages,
            stride: cfg.stride.unwrap_or(defaults.stride),
            direction: cfg
                .direction
                .as_deref()
                .map(parse_direction)
                .transpose()?
                .unwrap_or(defaults.direction),
            rank_by: cfg
                .rank_by
                .as_deref()
                .map(parse_rank_by)
                .transpose()?
                .unwrap_or(defaults.rank_by),
            fractions: cfg
                .fractions
                .as_deref()
                .map(parse_fractions)
                .transpose()?
                .unwrap_or(defaults.fractions),
            geometry,
            blink: cfg
                .blink
                .as_deref()
                .map(parse_blink)
                .transpose()?
                .unwrap_or(defaults.blink),
            visual: defaults.visual,
            measure: cfg
                .measure
                .as_deref()
                .map(parse_measure)
                .transpose()?
                .unwrap_or(defaults.measure),
            canvas: cfg
                .canvas
                .as_deref()
                .map(parse_canvas)
                .transpose()?
                .unwrap_or(defaults.canvas),
            fps_hint: cfg.fps_hint.unwrap_or(defaults.fps_hint),
            jobs: cfg.jobs.unwrap_or(defaults.jobs),
            dump_networks: cfg.dump_networks.unwrap_or(defaults.dump_networks),
        };
        plan.validated()
    }

    pub fn validated(self) -> Result<Self, ConfigError> {
        if self.delta == 0 {
            return Err(bad("--window", self.delta.to_string(), "must be >= 1"));
        }
        if self.stride == 0 {
            return Err(bad("--stride", self.stride.to_string(), "must be >= 1"));
        }
        Ok(self)
    }

    /// Number of render workers, resolving 0 to the machine's parallelism.
    pub fn effective_jobs(&self) -> usize {
        if self.jobs > 0 {
            self.jobs
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }

    pub fn animation_params(&self) -> AnimationParams {
        AnimationParams {
            canvas: self.canvas,
            fps_hint: self.fps_hint,
            jobs: self.effective_jobs(),
            dump_networks: self.dump_networks,
            blink: self.blink,
            visual: self.visual,
            measure: self.measure,
            fractions: self.fractions,
            geometry: self.geometry,
        }
    }
}

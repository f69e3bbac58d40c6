//! Mapping window measures onto glyph geometry, color, rank labels, and the
//! periodic measure-blink schedule.

use thiserror::Error;

use crate::graph::{InteractionNetwork, SenderId, StreamIndex, VertexStats};
use crate::layout::{LayoutTable, SectorAssignment};

/// On/off cadence for the per-vertex measure overlay: visible on the first
/// `duty` frames of every `period` frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlinkSchedule {
    pub period: u32,
    pub duty: u32,
}

impl BlinkSchedule {
    pub fn new(period: u32, duty: u32) -> Result<Self, VisualError> {
        if duty == 0 || duty > period {
            return Err(VisualError::InvalidBlink { period, duty });
        }
        Ok(BlinkSchedule { period, duty })
    }

    pub fn visible_at(&self, frame_index: usize) -> bool {
        (frame_index as u64 % self.period as u64) < self.duty as u64
    }
}

impl Default for BlinkSchedule {
    fn default() -> Self {
        BlinkSchedule {
            period: 30,
            duty: 6,
        }
    }
}

/// Which measure the blinking overlay shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MeasureChoice {
    /// The pair `out:in` of window strengths.
    #[default]
    OutIn,
    OutStrength,
    InStrength,
    TotalStrength,
    Rank,
}

impl MeasureChoice {
    pub fn name(self) -> &'static str {
        match self {
            MeasureChoice::OutIn => "out-in",
            MeasureChoice::OutStrength => "out",
            MeasureChoice::InStrength => "in",
            MeasureChoice::TotalStrength => "total",
            MeasureChoice::Rank => "rank",
        }
    }

    fn text(self, stats: &VertexStats, rank: usize) -> String {
        match self {
            MeasureChoice::OutIn => format!("{}:{}", stats.out_strength, stats.in_strength),
            MeasureChoice::OutStrength => stats.out_strength.to_string(),
            MeasureChoice::InStrength => stats.in_strength.to_string(),
            MeasureChoice::TotalStrength => stats.total_strength().to_string(),
            MeasureChoice::Rank => rank.to_string(),
        }
    }
}

/// Size bounds for glyphs and the base stroke for edges, all in unit-canvas
/// lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisualParams {
    pub glyph_min: f64,
    pub glyph_max: f64,
    pub edge_base: f64,
    pub edge_opacity: f64,
}

impl Default for VisualParams {
    fn default() -> Self {
        VisualParams {
            glyph_min: 0.004,
            glyph_max: 0.02,
            edge_base: 0.003,
            edge_opacity: 0.6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

/// One renderable vertex: fixed center, per-window size and color, the
/// global rank label, and the measure overlay on blink frames.
#[derive(Debug, Clone, PartialEq)]
pub struct GlyphSpec {
    pub vertex: String,
    pub center: (f64, f64),
    pub width: f64,
    pub height: f64,
    pub color: Rgb,
    pub rank_label: usize,
    pub measure_text: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub from_pos: (f64, f64),
    pub to_pos: (f64, f64),
    pub stroke_width: f64,
    pub opacity: f64,
}

/// Everything needed to draw one window position.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameScene {
    pub frame_index: usize,
    pub window_start: usize,
    /// Sorted by global rank.
    pub glyphs: Vec<GlyphSpec>,
    /// Sorted by (from, to); self-loops are never included.
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Error, PartialEq)]
pub enum VisualError {
    #[error("invalid blink schedule: period={period}, duty={duty} (need 1 <= duty <= period)")]
    InvalidBlink { period: u32, duty: u32 },
    #[error("vertex \"{vertex}\" active in a window but missing from the layout")]
    MissingLayout { vertex: String },
    #[error("vertex \"{vertex}\" active in a window but missing from the ranking")]
    MissingRank { vertex: String },
}

/// Log-compressed size transfer: `min` at value 0, `max` at the frame
/// maximum, and `min` whenever the frame maximum is 0.
pub fn glyph_size(value: u64, frame_max: u64, min_size: f64, max_size: f64) -> f64 {
    debug_assert!(value <= frame_max);
    if frame_max == 0 {
        return min_size;
    }
    let ratio = ((1 + value) as f64).ln() / ((1 + frame_max) as f64).ln();
    min_size + (max_size - min_size) * ratio
}

/// Strength asymmetry `(out - in) / (out + in)` on a blue -> white -> red
/// ramp; balanced (or isolated) vertices come out white.
pub fn glyph_color(stats: &VertexStats) -> Rgb {
    let sum = stats.out_strength + stats.in_strength;
    if sum == 0 {
        return Rgb(255, 255, 255);
    }
    let c = (stats.out_strength as f64 - stats.in_strength as f64) / sum as f64;
    if c >= 0.0 {
        let level = (255.0 * (1.0 - c)) as u8;
        Rgb(255, level, level)
    } else {
        let level = (255.0 * (1.0 + c)) as u8;
        Rgb(level, level, 255)
    }
}

/// Assemble the scene for one window position. Pure: equal inputs give
/// equal scenes.
#[allow(clippy::too_many_arguments)]
pub fn build_scene(
    net: &InteractionNetwork,
    layout: &LayoutTable,
    assignment: &SectorAssignment,
    index: &StreamIndex,
    frame_index: usize,
    window_start: usize,
    blink: &BlinkSchedule,
    params: &VisualParams,
    measure: MeasureChoice,
) -> Result<FrameScene, VisualError> {
    let blinking = blink.visible_at(frame_index);

    let mut active: Vec<(SenderId, &VertexStats)> = net.vertices().collect();
    let max_out = active
        .iter()
        .map(|(_, s)| s.out_strength)
        .max()
        .unwrap_or(0);
    let max_in = active.iter().map(|(_, s)| s.in_strength).max().unwrap_or(0);

    let lookup = |id: SenderId| -> Result<((f64, f64), usize), VisualError> {
        let pos = layout
            .position(id)
            .ok_or_else(|| VisualError::MissingLayout {
                vertex: index.sender_name(id).to_string(),
            })?;
        let rank = assignment
            .rank(id)
            .ok_or_else(|| VisualError::MissingRank {
                vertex: index.sender_name(id).to_string(),
            })?;
        Ok((pos, rank))
    };

    active.sort_unstable_by_key(|(id, _)| assignment.rank(*id).unwrap_or(usize::MAX));
    let mut glyphs = Vec::with_capacity(active.len());
    for (id, stats) in active {
        let (center, rank) = lookup(id)?;
        glyphs.push(GlyphSpec {
            vertex: index.sender_name(id).to_string(),
            center,
            width: glyph_size(
                stats.in_strength,
                max_in,
                params.glyph_min,
                params.glyph_max,
            ),
            height: glyph_size(
                stats.out_strength,
                max_out,
                params.glyph_min,
                params.glyph_max,
            ),
            color: glyph_color(stats),
            rank_label: rank,
            measure_text: blinking.then(|| measure.text(stats, rank)),
        });
    }

    let drawable: Vec<(SenderId, SenderId, u64)> =
        net.edges().filter(|(from, to, _)| from != to).collect();
    let max_weight = drawable.iter().map(|&(_, _, w)| w).max().unwrap_or(0);
    let mut edges = Vec::with_capacity(drawable.len());
    for (from, to, weight) in drawable {
        let (from_pos, _) = lookup(from)?;
        let (to_pos, _) = lookup(to)?;
        edges.push(EdgeSpec {
            from: index.sender_name(from).to_string(),
            to: index.sender_name(to).to_string(),
            from_pos,
            to_pos,
            stroke_width: glyph_size(weight, max_weight, 0.0, params.edge_base),
            opacity: params.edge_opacity,
        });
    }
    edges.sort_unstable_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));

    Ok(FrameScene {
        frame_index,
        window_start,
        glyphs,
        edges,
    })
}

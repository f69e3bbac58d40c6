//! Versinus: deterministic animations of evolving reply networks.
//!
//! A chronological message log becomes a sequence of SVG frames. Each frame
//! shows the interaction network of a fixed-size sliding window over the
//! stream, drawn on a layout that never moves: the most connected vertices
//! on the first half of a sinusoid, the next block on the second half, and
//! the long tail on a straight line above the crest. Degree measures drive
//! glyph size and color, global rank labels stay put, and per-vertex
//! measures blink in periodically.
//!
//! The pipeline is `ingest` -> `graph` -> `layout` -> `visual` -> `render`,
//! with `synth` providing seeded test corpora and `cli` the command-line
//! front end.

pub mod cli;
pub mod config;
pub mod graph;
pub mod ingest;
pub mod layout;
pub mod pipeline;
pub mod render;
pub mod synth;
pub mod visual;

pub use config::{FileConfig, RenderPlan};
pub use graph::{
    build_network, resolve_contribution, window_count, Direction, InteractionNetwork, SenderId,
    StreamIndex, VertexStats, WindowConfig, WindowEngine,
};
pub use ingest::{detect_format, parse_bytes, Format, Message, ParsedStream};
pub use layout::{
    partition, place, rank_vertices, GeometryParams, LayoutTable, RankMetric, Sector,
    SectorAssignment, SectorFractions,
};
pub use pipeline::{prepare, run_render, verify_windows, Prepared};
pub use render::{render_animation, render_frame, AnimationParams, CanvasPx, Manifest};
pub use synth::{generate_stream, SynthParams};
pub use visual::{build_scene, BlinkSchedule, FrameScene, MeasureChoice, VisualParams};

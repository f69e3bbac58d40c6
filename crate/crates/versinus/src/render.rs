//! Deterministic SVG frames and the animation writer.
//!
//! Frames are emitted with fixed element order and 4-decimal fixed-point
//! numbers so two runs over the same inputs produce byte-identical files.
//! Video assembly is left to an external encoder.

use std::borrow::Cow;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{edge_list_dump, GraphError, WindowEngine};
use crate::layout::{GeometryParams, LayoutTable, SectorAssignment, SectorFractions};
use crate::visual::{
    build_scene, BlinkSchedule, FrameScene, MeasureChoice, VisualError, VisualParams,
};

const BG_COLOR: &str = "#000000";
const EDGE_COLOR: &str = "#7f8fa6";
const RANK_DOT_COLOR: &str = "#ffffff";
const RANK_TEXT_COLOR: &str = "#10131a";
const MEASURE_COLOR: &str = "#e8e8e8";
const FONT_FAMILY: &str = "monospace";

// Unit-canvas sizes for the fixed markups, scaled by min(width, height).
const RANK_DOT_RADIUS: f64 = 0.008;
const RANK_FONT_SIZE: f64 = 0.013;
const MEASURE_FONT_SIZE: f64 = 0.016;
const MEASURE_GAP: f64 = 0.012;

/// Pixel dimensions of the output frames; both sides must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanvasPx {
    pub width: u32,
    pub height: u32,
}

impl CanvasPx {
    pub fn new(width: u32, height: u32) -> Result<Self, RenderError> {
        if width == 0 || height == 0 {
            return Err(RenderError::InvalidCanvas { width, height });
        }
        Ok(CanvasPx { width, height })
    }
}

impl Default for CanvasPx {
    fn default() -> Self {
        CanvasPx {
            width: 1000,
            height: 600,
        }
    }
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("canvas must have positive dimensions, got {width}x{height}")]
    InvalidCanvas { width: u32, height: u32 },
    #[error("output directory {path:?} is not writable: {source}")]
    OutputDir {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("writing {path:?}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Scene(#[from] VisualError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Fixed 4-decimal formatting; normalizes negative zero.
fn fmt4(value: f64) -> String {
    let v = if value == 0.0 { 0.0 } else { value };
    format!("{v:.4}")
}

fn xml_escape(text: &str) -> Cow<'_, str> {
    if text.contains(['&', '<', '>', '"']) {
        let mut out = String::with_capacity(text.len() + 8);
        for ch in text.chars() {
            match ch {
                '&' => out.push_str("&amp;"),
                '<' => out.push_str("&lt;"),
                '>' => out.push_str("&gt;"),
                '"' => out.push_str("&quot;"),
                other => out.push(other),
            }
        }
        Cow::Owned(out)
    } else {
        Cow::Borrowed(text)
    }
}

/// Render one scene to SVG text. The unit canvas maps to pixels with the
/// y axis flipped; element order is background, edges, glyphs, rank
/// labels, measure texts.
pub fn render_frame(scene: &FrameScene, canvas: CanvasPx) -> String {
    let w = canvas.width as f64;
    let h = canvas.height as f64;
    let scale = w.min(h);
    let px = |x: f64| x * w;
    let py = |y: f64| (1.0 - y) * h;

    let mut svg = String::with_capacity(4096);
    let _ = writeln!(svg, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">",
        canvas.width, canvas.height
    );
    let _ = writeln!(
        svg,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{BG_COLOR}\"/>",
        fmt4(0.0),
        fmt4(0.0),
        fmt4(w),
        fmt4(h)
    );

    for edge in &scene.edges {
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{EDGE_COLOR}\" stroke-width=\"{}\" stroke-opacity=\"{}\"/>",
            fmt4(px(edge.from_pos.0)),
            fmt4(py(edge.from_pos.1)),
            fmt4(px(edge.to_pos.0)),
            fmt4(py(edge.to_pos.1)),
            fmt4(edge.stroke_width * scale),
            fmt4(edge.opacity)
        );
    }

    for glyph in &scene.glyphs {
        let _ = writeln!(
            svg,
            "<ellipse data-vertex=\"{}\" cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" fill=\"rgb({},{},{})\"/>",
            xml_escape(&glyph.vertex),
            fmt4(px(glyph.center.0)),
            fmt4(py(glyph.center.1)),
            fmt4(glyph.width / 2.0 * w),
            fmt4(glyph.height / 2.0 * h),
            glyph.color.0,
            glyph.color.1,
            glyph.color.2
        );
    }

    for glyph in &scene.glyphs {
        let cx = fmt4(px(glyph.center.0));
        let cy = fmt4(py(glyph.center.1));
        let _ = writeln!(
            svg,
            "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{}\" fill=\"{RANK_DOT_COLOR}\"/>",
            fmt4(RANK_DOT_RADIUS * scale)
        );
        let _ = writeln!(
            svg,
            "<text x=\"{cx}\" y=\"{cy}\" font-family=\"{FONT_FAMILY}\" font-size=\"{}\" fill=\"{RANK_TEXT_COLOR}\" text-anchor=\"middle\" dominant-baseline=\"central\">{}</text>",
            fmt4(RANK_FONT_SIZE * scale),
            glyph.rank_label
        );
    }

    for glyph in &scene.glyphs {
        let Some(text) = &glyph.measure_text else {
            continue;
        };
        let top = glyph.center.1 + glyph.height / 2.0 + MEASURE_GAP;
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"{FONT_FAMILY}\" font-size=\"{}\" fill=\"{MEASURE_COLOR}\" text-anchor=\"middle\">{}</text>",
            fmt4(px(glyph.center.0)),
            fmt4(py(top)),
            fmt4(MEASURE_FONT_SIZE * scale),
            xml_escape(text)
        );
    }

    svg.push_str("</svg>\n");
    svg
}

/// Options for a full animation run.
#[derive(Debug, Clone, PartialEq)]
pub struct AnimationParams {
    pub canvas: CanvasPx,
    pub fps_hint: u32,
    pub jobs: usize,
    pub dump_networks: bool,
    pub blink: BlinkSchedule,
    pub visual: VisualParams,
    pub measure: MeasureChoice,
    pub fractions: SectorFractions,
    pub geometry: GeometryParams,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ManifestFractions {
    pub hub: f64,
    pub intermediary: f64,
    pub peripheral: f64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ManifestGeometry {
    pub x_margin: f64,
    pub baseline: f64,
    pub amplitude: f64,
    pub line_y: f64,
    pub periods: u32,
    pub decay: f64,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct FrameInfo {
    pub index: usize,
    pub window_start: usize,
    pub active_vertices: usize,
    pub edge_count: usize,
}

/// `manifest.json`, written once after the last frame.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub delta: usize,
    pub total: usize,
    pub stride: usize,
    pub frame_count: usize,
    pub canvas_px: CanvasPx,
    pub fps_hint: u32,
    pub fractions: ManifestFractions,
    pub geometry: ManifestGeometry,
    pub direction: String,
    pub frames: Vec<FrameInfo>,
}

#[derive(Debug)]
pub struct RenderSummary {
    pub frame_count: usize,
    pub out_dir: PathBuf,
    pub encoder_hint: String,
}

pub fn frame_file_name(index: usize) -> String {
    format!("frame_{index:06}.svg")
}

/// Suggested external encoder invocation; never executed by this crate.
pub fn encoder_hint(fps_hint: u32) -> String {
    format!(
        "ffmpeg -framerate {fps_hint} -i frame_%06d.svg -c:v libx264 -pix_fmt yuv420p versinus.mp4"
    )
}

// Scenes render and write in parallel per batch; sizing it keeps memory
// bounded on long streams.
const BATCH_FRAMES: usize = 128;

/// Drive the engine across every window position, writing one SVG per
/// position and the manifest last. Output bytes do not depend on `jobs`.
pub fn render_animation(
    engine: &mut WindowEngine,
    layout: &LayoutTable,
    assignment: &SectorAssignment,
    params: &AnimationParams,
    out_dir: &Path,
) -> Result<RenderSummary, RenderError> {
    fs::create_dir_all(out_dir).map_err(|source| RenderError::OutputDir {
        path: out_dir.to_path_buf(),
        source,
    })?;
    probe_writable(out_dir)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(params.jobs)
        .build()
        .map_err(|e| RenderError::Pool(e.to_string()))?;

    let config = *engine.config();
    let frame_count = config.window_count();
    let mut frames = Vec::with_capacity(frame_count);
    let mut batch: Vec<(usize, String, Option<String>)> = Vec::with_capacity(BATCH_FRAMES);

    for frame_index in 0..frame_count {
        let net = engine.current();
        let scene = build_scene(
            net,
            layout,
            assignment,
            engine.index(),
            frame_index,
            engine.window_start(),
            &params.blink,
            &params.visual,
            params.measure,
        )?;
        frames.push(FrameInfo {
            index: frame_index,
            window_start: scene.window_start,
            active_vertices: net.vertex_count(),
            edge_count: net.edge_count(),
        });
        let dump = params
            .dump_networks
            .then(|| edge_list_dump(net, engine.index()));
        batch.push((frame_index, render_frame(&scene, params.canvas), dump));

        if batch.len() == BATCH_FRAMES || frame_index + 1 == frame_count {
            write_batch(&pool, out_dir, &mut batch)?;
        }
        if frame_index + 1 < frame_count {
            engine.advance()?;
        }
    }

    let manifest = Manifest {
        delta: config.delta,
        total: config.total,
        stride: config.stride,
        frame_count,
        canvas_px: params.canvas,
        fps_hint: params.fps_hint,
        fractions: ManifestFractions {
            hub: params.fractions.hub,
            intermediary: params.fractions.intermediary,
            peripheral: params.fractions.peripheral(),
        },
        geometry: ManifestGeometry {
            x_margin: params.geometry.x_margin,
            baseline: params.geometry.baseline,
            amplitude: params.geometry.amplitude,
            line_y: params.geometry.line_y,
            periods: params.geometry.periods,
            decay: params.geometry.decay,
        },
        direction: engine.direction().name().to_string(),
        frames,
    };
    let manifest_path = out_dir.join("manifest.json");
    let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    body.push('\n');
    fs::write(&manifest_path, body).map_err(|source| RenderError::Io {
        path: manifest_path,
        source,
    })?;

    Ok(RenderSummary {
        frame_count,
        out_dir: out_dir.to_path_buf(),
        encoder_hint: encoder_hint(params.fps_hint),
    })
}

fn probe_writable(dir: &Path) -> Result<(), RenderError> {
    let probe = dir.join(".versinus_write_probe");
    fs::write(&probe, b"probe").map_err(|source| RenderError::OutputDir {
        path: dir.to_path_buf(),
        source,
    })?;
    let _ = fs::remove_file(&probe);
    Ok(())
}

fn write_batch(
    pool: &rayon::ThreadPool,
    out_dir: &Path,
    batch: &mut Vec<(usize, String, Option<String>)>,
) -> Result<(), RenderError> {
    use rayon::prelude::*;
    let result = pool.install(|| {
        batch.par_iter().try_for_each(|(index, svg, dump)| {
            let path = out_dir.join(frame_file_name(*index));
            fs::write(&path, svg).map_err(|source| RenderError::Io { path, source })?;
            if let Some(text) = dump {
                let path = out_dir.join(format!("frame_{index:06}.edges"));
                fs::write(&path, text).map_err(|source| RenderError::Io { path, source })?;
            }
            Ok(())
        })
    });
    batch.clear();
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_network, Direction, StreamIndex, WindowConfig, WindowEngine};
    use crate::ingest::Message;
    use crate::layout::{partition, place, rank_vertices, RankMetric};
    use crate::visual::{GlyphSpec, Rgb};
    use std::sync::Arc;

    fn msg(seq: usize, sender: &str, id: &str, reply: Option<&str>) -> Message {
        Message {
            seq_index: seq,
            sender: sender.to_string(),
            message_id: id.to_string(),
            reply_to: reply.map(|r| r.to_string()),
            timestamp: None,
        }
    }

    fn empty_scene() -> FrameScene {
        FrameScene {
            frame_index: 0,
            window_start: 0,
            glyphs: Vec::new(),
            edges: Vec::new(),
        }
    }

    #[test]
    fn canvas_rejects_zero() {
        assert!(CanvasPx::new(0, 600).is_err());
        assert!(CanvasPx::new(1000, 0).is_err());
        assert!(CanvasPx::new(1, 1).is_ok());
    }

    #[test]
    fn empty_scene_renders_background_only() {
        let svg = render_frame(&empty_scene(), CanvasPx::default());
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("<rect"));
        assert!(!svg.contains("<ellipse"));
        assert!(!svg.contains("<line"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn rendering_twice_is_byte_identical() {
        let scene = FrameScene {
            frame_index: 0,
            window_start: 0,
            glyphs: vec![GlyphSpec {
                vertex: "a".into(),
                center: (0.275, 0.70),
                width: 0.01,
                height: 0.02,
                color: Rgb(255, 10, 10),
                rank_label: 1,
                measure_text: Some("3:1".into()),
            }],
            edges: Vec::new(),
        };
        let canvas = CanvasPx::default();
        assert_eq!(render_frame(&scene, canvas), render_frame(&scene, canvas));
    }

    #[test]
    fn glyph_center_scales_with_y_flip() {
        let scene = FrameScene {
            frame_index: 0,
            window_start: 0,
            glyphs: vec![GlyphSpec {
                vertex: "a".into(),
                center: (0.275, 0.70),
                width: 0.01,
                height: 0.01,
                color: Rgb(255, 255, 255),
                rank_label: 1,
                measure_text: None,
            }],
            edges: Vec::new(),
        };
        let svg = render_frame(&scene, CanvasPx::new(1000, 600).unwrap());
        assert!(
            svg.contains("cx=\"275.0000\" cy=\"180.0000\""),
            "svg was: {svg}"
        );
    }

    #[test]
    fn special_characters_are_escaped() {
        let scene = FrameScene {
            frame_index: 0,
            window_start: 0,
            glyphs: vec![GlyphSpec {
                vertex: "a<b>&\"c".into(),
                center: (0.5, 0.5),
                width: 0.01,
                height: 0.01,
                color: Rgb(255, 255, 255),
                rank_label: 1,
                measure_text: None,
            }],
            edges: Vec::new(),
        };
        let svg = render_frame(&scene, CanvasPx::default());
        assert!(svg.contains("data-vertex=\"a&lt;b&gt;&amp;&quot;c\""));
    }

    fn small_pipeline() -> (
        Arc<Vec<Message>>,
        Arc<StreamIndex>,
        SectorAssignment,
        LayoutTable,
    ) {
        let messages: Vec<Message> = vec![
            msg(0, "a", "m0", None),
            msg(1, "b", "m1", Some("m0")),
            msg(2, "c", "m2", Some("m0")),
            msg(3, "a", "m3", Some("m1")),
            msg(4, "b", "m4", Some("m3")),
            msg(5, "c", "m5", None),
        ];
        let index = Arc::new(StreamIndex::build(&messages));
        let net = build_network(&messages, &index, Direction::Information);
        let ranking = rank_vertices(&net, &index, RankMetric::Strength);
        let assignment = partition(ranking, &SectorFractions::default());
        let layout = place(&assignment, &GeometryParams::default());
        (Arc::new(messages), index, assignment, layout)
    }

    fn default_params() -> AnimationParams {
        AnimationParams {
            canvas: CanvasPx::default(),
            fps_hint: 30,
            jobs: 2,
            dump_networks: false,
            blink: BlinkSchedule::default(),
            visual: VisualParams::default(),
            measure: MeasureChoice::OutIn,
            fractions: SectorFractions::default(),
            geometry: GeometryParams::default(),
        }
    }

    #[test]
    fn full_window_yields_single_frame_and_manifest() {
        let (messages, index, assignment, layout) = small_pipeline();
        let config = WindowConfig::new(messages.len(), messages.len(), 1).unwrap();
        let mut engine =
            WindowEngine::new(messages, index, config, Direction::Information).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let summary = render_animation(
            &mut engine,
            &layout,
            &assignment,
            &default_params(),
            dir.path(),
        )
        .unwrap();
        assert_eq!(summary.frame_count, 1);
        assert!(dir.path().join("frame_000000.svg").exists());
        assert!(!dir.path().join("frame_000001.svg").exists());

        let manifest: Manifest =
            serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
                .unwrap();
        assert_eq!(manifest.frame_count, 1);
        assert_eq!(manifest.frames.len(), 1);
        assert_eq!(manifest.direction, "information");
    }

    #[test]
    fn manifest_counts_match_disk() {
        let (messages, index, assignment, layout) = small_pipeline();
        let config = WindowConfig::new(2, messages.len(), 1).unwrap();
        let mut engine =
            WindowEngine::new(messages, index, config, Direction::Information).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let summary = render_animation(
            &mut engine,
            &layout,
            &assignment,
            &default_params(),
            dir.path(),
        )
        .unwrap();
        assert_eq!(summary.frame_count, config.window_count());
        let svg_files = fs::read_dir(dir.path())
            .unwrap()
            .filter(|e| {
                e.as_ref()
                    .unwrap()
                    .file_name()
                    .to_string_lossy()
                    .ends_with(".svg")
            })
            .count();
        assert_eq!(svg_files, summary.frame_count);
    }

    #[test]
    fn repeat_runs_are_byte_identical() {
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        let mut outputs = Vec::new();
        for (jobs, dir) in [(1usize, &dirs[0]), (3, &dirs[1])] {
            let (messages, index, assignment, layout) = small_pipeline();
            let config = WindowConfig::new(3, messages.len(), 1).unwrap();
            let mut engine =
                WindowEngine::new(messages, index, config, Direction::Information).unwrap();
            let params = AnimationParams {
                jobs,
                dump_networks: true,
                ..default_params()
            };
            render_animation(&mut engine, &layout, &assignment, &params, dir.path()).unwrap();
            let mut names: Vec<String> = fs::read_dir(dir.path())
                .unwrap()
                .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
                .collect();
            names.sort();
            let bytes: Vec<(String, Vec<u8>)> = names
                .into_iter()
                .map(|n| {
                    let b = fs::read(dir.path().join(&n)).unwrap();
                    (n, b)
                })
                .collect();
            outputs.push(bytes);
        }
        assert_eq!(outputs[0], outputs[1]);
    }

    #[test]
    fn coordinates_round_trip_through_the_svg() {
        let (messages, index, assignment, layout) = small_pipeline();
        let config = WindowConfig::new(messages.len(), messages.len(), 1).unwrap();
        let mut engine =
            WindowEngine::new(messages, index.clone(), config, Direction::Information).unwrap();
        let dir = tempfile::tempdir().unwrap();
        render_animation(
            &mut engine,
            &layout,
            &assignment,
            &default_params(),
            dir.path(),
        )
        .unwrap();
        let svg = fs::read_to_string(dir.path().join("frame_000000.svg")).unwrap();
        let re = regex::Regex::new("data-vertex=\"([^\"]+)\" cx=\"([0-9.]+)\" cy=\"([0-9.]+)\"")
            .unwrap();
        let mut seen = 0;
        for cap in re.captures_iter(&svg) {
            let id = index.sender_id(&cap[1]).unwrap();
            let (x, y) = layout.position(id).unwrap();
            let cx: f64 = cap[2].parse().unwrap();
            let cy: f64 = cap[3].parse().unwrap();
            assert!((cx / 1000.0 - x).abs() < 1e-4);
            assert!((1.0 - cy / 600.0 - y).abs() < 1e-4);
            seen += 1;
        }
        assert_eq!(seen, 3);
    }

    #[test]
    fn unwritable_output_dir_fails_before_frames() {
        let (messages, index, assignment, layout) = small_pipeline();
        let config = WindowConfig::new(2, messages.len(), 1).unwrap();
        let mut engine =
            WindowEngine::new(messages, index, config, Direction::Information).unwrap();
        let file = tempfile::NamedTempFile::new().unwrap();
        // path exists but is a file, so the directory cannot be created
        let err = render_animation(
            &mut engine,
            &layout,
            &assignment,
            &default_params(),
            file.path(),
        )
        .unwrap_err();
        assert!(matches!(err, RenderError::OutputDir { .. }));
    }
}

//! Orchestration shared by the CLI and the C ABI: parse once, build the
//! global structures, then hand out engines and runs.

use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::config::{ConfigError, RenderPlan};
use crate::graph::{
    build_network, count_unresolved, GraphError, InteractionNetwork, StreamIndex, WindowConfig,
    WindowEngine,
};
use crate::ingest::{IngestError, Message};
use crate::layout::{partition, place, rank_vertices, LayoutTable, SectorAssignment};
use crate::render::{render_animation, RenderError, RenderSummary};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Global structures computed once per run: the considered message slice,
/// its index, the whole-stream network, and the fixed layout.
#[derive(Debug)]
pub struct Prepared {
    pub messages: Arc<Vec<Message>>,
    pub index: Arc<StreamIndex>,
    pub global: InteractionNetwork,
    pub assignment: SectorAssignment,
    pub layout: LayoutTable,
    pub unresolved: usize,
}

/// Truncate to `max_messages`, index, rank, partition and place.
pub fn prepare(mut messages: Vec<Message>, plan: &RenderPlan) -> Prepared {
    if let Some(max) = plan.max_messages {
        messages.truncate(max);
    }
    let index = Arc::new(StreamIndex::build(&messages));
    let global = build_network(&messages, &index, plan.direction);
    let unresolved = count_unresolved(&messages, &index);
    let ranking = rank_vertices(&global, &index, plan.rank_by);
    let assignment = partition(ranking, &plan.fractions);
    let layout = place(&assignment, &plan.geometry);
    Prepared {
        messages: Arc::new(messages),
        index,
        global,
        assignment,
        layout,
        unresolved,
    }
}

impl Prepared {
    pub fn total(&self) -> usize {
        self.messages.len()
    }

    pub fn window_config(&self, plan: &RenderPlan) -> Result<WindowConfig, GraphError> {
        WindowConfig::new(plan.delta, self.total(), plan.stride)
    }

    pub fn engine(&self, plan: &RenderPlan) -> Result<WindowEngine, GraphError> {
        let config = self.window_config(plan)?;
        WindowEngine::new(
            self.messages.clone(),
            self.index.clone(),
            config,
            plan.direction,
        )
    }
}

/// The full render pipeline over already-parsed messages.
pub fn run_render(
    messages: Vec<Message>,
    plan: &RenderPlan,
    out_dir: &Path,
) -> Result<RenderSummary, PipelineError> {
    let prepared = prepare(messages, plan);
    let mut engine = prepared.engine(plan)?;
    let summary = render_animation(
        &mut engine,
        &prepared.layout,
        &prepared.assignment,
        &plan.animation_params(),
        out_dir,
    )?;
    Ok(summary)
}

/// Compare the incremental engine against a batch rebuild at every window
/// position. Returns (matching, total) window counts and invokes `report`
/// for each position.
pub fn verify_windows(
    prepared: &Prepared,
    plan: &RenderPlan,
    mut report: impl FnMut(usize, bool),
) -> Result<(usize, usize), PipelineError> {
    let config = prepared.window_config(plan)?;
    let mut engine = prepared.engine(plan)?;
    let total = config.window_count();
    let mut matching = 0;
    for _ in 0..total {
        let start = engine.window_start();
        let batch = build_network(
            &prepared.messages[start..start + config.delta],
            &prepared.index,
            plan.direction,
        );
        let ok = *engine.current() == batch;
        if ok {
            matching += 1;
        }
        report(start, ok);
        if engine.at_last_window() {
            break;
        }
        engine.advance()?;
    }
    Ok((matching, total))
}

//! Command-line entry point: `render`, `inspect`, `oracle` and `generate`
//! subcommands wiring ingest -> graph -> layout -> visual -> render.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{FileConfig, RenderPlan};
use crate::ingest::{self, Format, ParsedStream};
use crate::layout::layout_dump;
use crate::pipeline::{self, Prepared};
use crate::render::render_animation;
use crate::synth::{generate_stream, SynthParams};

#[derive(Parser)]
#[command(
    name = "versinus",
    version,
    about = "Animate the evolution of a reply network over a sliding message window"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render one SVG frame per window position plus a manifest.
    Render(RenderArgs),
    /// Print the global ranking, sector sizes and layout table.
    Inspect(CommonOpts),
    /// Check the incremental window engine against batch rebuilds.
    Oracle(CommonOpts),
    /// Emit a seeded synthetic reply stream.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatOpt {
    Auto,
    Csv,
    Jsonl,
    Mbox,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionOpt {
    Information,
    Status,
}

#[derive(Clone, Copy, ValueEnum)]
enum RankByOpt {
    Strength,
    Degree,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureOpt {
    OutIn,
    Out,
    In,
    Total,
    Rank,
}

#[derive(Args, Default)]
struct CommonOpts {
    /// Message log to read.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Input encoding [default: auto]
    #[arg(long)]
    format: Option<FormatOpt>,
    /// JSON config file mirroring these flag names; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Window length in messages [default: 400]
    #[arg(long)]
    window: Option<usize>,
    /// Consider only the first M messages [default: all]
    #[arg(long = "max-messages")]
    max_messages: Option<usize>,
    /// Window step per frame [default: 1]
    #[arg(long)]
    stride: Option<usize>,
    /// Edge orientation [default: information]
    #[arg(long)]
    direction: Option<DirectionOpt>,
    /// Global ranking metric [default: strength]
    #[arg(long = "rank-by")]
    rank_by: Option<RankByOpt>,
    /// Hub,intermediary shares [default: 0.05,0.15]
    #[arg(long)]
    fractions: Option<String>,
    /// Horizontal margin of the unit canvas [default: 0.05]
    #[arg(long = "x-margin")]
    x_margin: Option<f64>,
    /// Sinusoid baseline height [default: 0.45]
    #[arg(long)]
    baseline: Option<f64>,
    /// Sinusoid amplitude [default: 0.25]
    #[arg(long)]
    amplitude: Option<f64>,
    /// Height of the peripheral line [default: 0.85]
    #[arg(long = "line-y")]
    line_y: Option<f64>,
    /// Sinusoid periods across the span [default: 1]
    #[arg(long)]
    periods: Option<u32>,
    /// Wavelength growth per period [default: 1.0]
    #[arg(long)]
    decay: Option<f64>,
    /// Frame size in pixels [default: 1000x600]
    #[arg(long)]
    canvas: Option<String>,
    /// Measure blink cadence period,duty in frames [default: 30,6]
    #[arg(long)]
    blink: Option<String>,
    /// Measure shown on blink frames [default: out-in]
    #[arg(long)]
    measure: Option<MeasureOpt>,
    /// Parallel render workers [default: number of processors]
    #[arg(long)]
    jobs: Option<usize>,
    /// Frame rate suggested to the external encoder [default: 30]
    #[arg(long = "fps-hint")]
    fps_hint: Option<u32>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Output directory for frames and manifest.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-frame edge lists.
    #[arg(long = "dump-networks")]
    dump_networks: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Messages to generate.
    #[arg(long, default_value_t = 200)]
    messages: usize,
    /// Distinct senders.
    #[arg(long, default_value_t = 12)]
    senders: usize,
    /// RNG seed; equal seeds give equal streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Probability that a message replies to an earlier one.
    #[arg(long = "reply-prob", default_value_t = 0.75)]
    reply_prob: f64,
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = GenFormatOpt::Csv)]
    format: GenFormatOpt,
    /// Output file [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFormatOpt {
    Csv,
    Jsonl,
}

enum CliError {
    Usage(String),
    Run(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Run(m) => m,
        }
    }
}

impl From<crate::config::ConfigError> for CliError {
    fn from(err: crate::config::ConfigError) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<pipeline::PipelineError> for CliError {
    fn from(err: pipeline::PipelineError) -> Self {
        CliError::Run(err.to_string())
    }
}

impl From<crate::ingest::IngestError> for CliError {
    fn from(err: crate::ingest::IngestError) -> Self {
        CliError::Run(err.to_string())
    }
}

impl From<crate::graph::GraphError> for CliError {
    fn from(err: crate::graph::GraphError) -> Self {
        CliError::Run(err.to_string())
    }
}

impl From<crate::render::RenderError> for CliError {
    fn from(err: crate::render::RenderError) -> Self {
        CliError::Run(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Run(err.to_string())
    }
}

/// Parse and run; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return err.exit_code();
        }
    };
    let result = match cli.command {
        Command::Render(args) => run_render(args),
        Command::Inspect(common) => run_inspect(common),
        Command::Oracle(common) => run_oracle(common),
        Command::Generate(args) => run_generate(args),
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.code()
        }
    }
}

/// Flags overlaid on the config file; anything still unset falls back to
/// the built-in defaults.
fn merge(opts: &CommonOpts) -> Result<(FileConfig, RenderPlan), CliError> {
    let mut cfg = match &opts.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config file {path:?}: {e}")))?;
            FileConfig::from_json_str(&text)?
        }
        None => FileConfig::default(),
    };

    if let Some(v) = &opts.input {
        cfg.input = Some(v.clone());
    }
    if let Some(v) = opts.format {
        cfg.format = Some(
            match v {
                FormatOpt::Auto => "auto",
                FormatOpt::Csv => "csv",
                FormatOpt::Jsonl => "jsonl",
                FormatOpt::Mbox => "mbox",
            }
            .to_string(),
        );
    }
    if let Some(v) = opts.window {
        cfg.window = Some(v);
    }
    if let Some(v) = opts.max_messages {
        cfg.max_messages = Some(v);
    }
    if let Some(v) = opts.stride {
        cfg.stride = Some(v);
    }
    if let Some(v) = opts.direction {
        cfg.direction = Some(
            match v {
                DirectionOpt::Information => "information",
                DirectionOpt::Status => "status",
            }
            .to_string(),
        );
    }
    if let Some(v) = opts.rank_by {
        cfg.rank_by = Some(
            match v {
                RankByOpt::Strength => "strength",
                RankByOpt::Degree => "degree",
            }
            .to_string(),
        );
    }
    if let Some(v) = &opts.fractions {
        cfg.fractions = Some(v.clone());
    }
    if let Some(v) = opts.x_margin {
        cfg.x_margin = Some(v);
    }
    if let Some(v) = opts.baseline {
        cfg.baseline = Some(v);
    }
    if let Some(v) = opts.amplitude {
        cfg.amplitude = Some(v);
    }
    if let Some(v) = opts.line_y {
        cfg.line_y = Some(v);
    }
    if let Some(v) = opts.periods {
        cfg.periods = Some(v);
    }
    if let Some(v) = opts.decay {
        cfg.decay = Some(v);
    }
    if let Some(v) = &opts.canvas {
        cfg.canvas = Some(v.clone());
    }
    if let Some(v) = &opts.blink {
        cfg.blink = Some(v.clone());
    }
    if let Some(v) = opts.measure {
        cfg.measure = Some(
            match v {
                MeasureOpt::OutIn => "out-in",
                MeasureOpt::Out => "out",
                MeasureOpt::In => "in",
                MeasureOpt::Total => "total",
                MeasureOpt::Rank => "rank",
            }
            .to_string(),
        );
    }
    if let Some(v) = opts.jobs {
        cfg.jobs = Some(v);
    }
    if let Some(v) = opts.fps_hint {
        cfg.fps_hint = Some(v);
    }

    let plan = RenderPlan::from_file_config(&cfg)?;
    Ok((cfg, plan))
}

fn load_input(cfg: &FileConfig) -> Result<ParsedStream, CliError> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("--input is required".to_string()))?;
    let bytes =
        fs::read(path).map_err(|e| CliError::Run(format!("cannot read input {path:?}: {e}")))?;
    let format = match cfg.format.as_deref() {
        None | Some("auto") => ingest::detect_format(&bytes),
        Some("csv") => Format::Csv,
        Some("jsonl") => Format::Jsonl,
        Some("mbox") => Format::Mbox,
        Some(other) => {
            return Err(CliError::Usage(format!(
                "invalid value for --format: \"{other}\" (expected csv|jsonl|mbox|auto)"
            )))
        }
    };
    let parsed = ingest::parse_bytes(format, &bytes)?;
    let skips = parsed.skipped;
    if skips.total() > 0 {
        eprintln!(
            "warning: skipped {} mbox messages (missing id: {}, missing from: {}, duplicate id: {})",
            skips.total(),
            skips.missing_message_id,
            skips.missing_sender,
            skips.duplicate_message_id
        );
    }
    Ok(parsed)
}

fn report_unresolved(prepared: &Prepared) {
    if prepared.unresolved > 0 {
        eprintln!(
            "warning: {} replies reference ids never seen in the stream; no edges for them",
            prepared.unresolved
        );
    }
}

fn run_render(args: RenderArgs) -> Result<(), CliError> {
    let (mut cfg, mut plan) = merge(&args.common)?;
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    if args.dump_networks {
        plan.dump_networks = true;
    }
    let out_dir = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::Usage("--out is required".to_string()))?;

    let parsed = load_input(&cfg)?;
    let prepared = pipeline::prepare(parsed.messages, &plan);
    report_unresolved(&prepared);
    let mut engine = prepared.engine(&plan)?;
    let summary = render_animation(
        &mut engine,
        &prepared.layout,
        &prepared.assignment,
        &plan.animation_params(),
        &out_dir,
    )?;
    println!(
        "wrote {} frames and manifest.json to {}",
        summary.frame_count,
        summary.out_dir.display()
    );
    println!("encode with: {}", summary.encoder_hint);
    Ok(())
}

fn run_inspect(common: CommonOpts) -> Result<(), CliError> {
    let (cfg, plan) = merge(&common)?;
    let parsed = load_input(&cfg)?;
    let prepared = pipeline::prepare(parsed.messages, &plan);
    report_unresolved(&prepared);

    let mut out = String::new();
    out.push_str(&format!("messages: {}\n", prepared.total()));
    out.push_str(&format!("senders: {}\n", prepared.assignment.len()));
    out.push_str(&format!(
        "sectors: h={}, i={}, p={}\n",
        prepared.assignment.hub_count,
        prepared.assignment.intermediary_count,
        prepared.assignment.peripheral_count
    ));
    out.push_str("ranking:\n");
    for (pos, &id) in prepared.assignment.ranking.iter().enumerate() {
        let stats = prepared.global.stats(id).expect("ranked vertex has stats");
        let sector = prepared
            .assignment
            .sector(id)
            .expect("ranked vertex has a sector");
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            pos + 1,
            sector.name(),
            prepared.index.sender_name(id),
            stats.total_strength(),
            stats.total_degree(),
            stats.message_count
        ));
    }
    out.push_str("layout:\n");
    out.push_str(&layout_dump(
        &prepared.layout,
        &prepared.assignment,
        &prepared.index,
    ));
    print!("{out}");
    Ok(())
}

fn run_oracle(common: CommonOpts) -> Result<(), CliError> {
    let (cfg, plan) = merge(&common)?;
    let parsed = load_input(&cfg)?;
    let prepared = pipeline::prepare(parsed.messages, &plan);
    report_unresolved(&prepared);

    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let mut window = 0usize;
    let (matching, total) = pipeline::verify_windows(&prepared, &plan, |start, ok| {
        let verdict = if ok { "ok" } else { "MISMATCH" };
        let _ = writeln!(lock, "window {window} (start {start}): {verdict}");
        window += 1;
    })?;
    if matching == total {
        let _ = writeln!(lock, "all {total} windows match");
        Ok(())
    } else {
        let _ = writeln!(lock, "{} of {total} windows mismatch", total - matching);
        Err(CliError::Run(format!(
            "incremental/batch mismatch in {} of {total} windows",
            total - matching
        )))
    }
}

fn run_generate(args: GenerateArgs) -> Result<(), CliError> {
    if args.senders == 0 {
        return Err(CliError::Usage("--senders must be >= 1".to_string()));
    }
    if !(0.0..=1.0).contains(&args.reply_prob) {
        return Err(CliError::Usage(
            "--reply-prob must be between 0 and 1".to_string(),
        ));
    }
    let messages = generate_stream(&SynthParams {
        messages: args.messages,
        senders: args.senders,
        seed: args.seed,
        reply_prob: args.reply_prob,
    });

    let mut buf = Vec::new();
    match args.format {
        GenFormatOpt::Csv => ingest::write_csv(&messages, &mut buf)?,
        GenFormatOpt::Jsonl => ingest::write_jsonl(&messages, &mut buf)?,
    }
    match &args.out {
        Some(path) => fs::write(path, buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

//! Global degree ordering, hub/intermediary/peripheral partition, and the
//! fixed per-vertex canvas coordinates.
//!
//! The most connected vertices sit on the first half of a sinusoid, the
//! next block on the second half, and everyone else on a straight line
//! above the crest. Positions are computed once from the whole stream and
//! never change between frames.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{InteractionNetwork, SenderId, StreamIndex};

/// Which aggregate orders the global ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankMetric {
    /// Weighted: in-strength + out-strength.
    #[default]
    Strength,
    /// Unweighted: distinct in-neighbors + distinct out-neighbors.
    Degree,
}

impl RankMetric {
    pub fn name(self) -> &'static str {
        match self {
            RankMetric::Strength => "strength",
            RankMetric::Degree => "degree",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    Hub,
    Intermediary,
    Peripheral,
}

impl Sector {
    pub fn name(self) -> &'static str {
        match self {
            Sector::Hub => "hub",
            Sector::Intermediary => "intermediary",
            Sector::Peripheral => "peripheral",
        }
    }
}

/// Hub and intermediary shares of the vertex set; the periphery takes the
/// remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorFractions {
    pub hub: f64,
    pub intermediary: f64,
}

impl SectorFractions {
    pub fn new(hub: f64, intermediary: f64) -> Result<Self, LayoutError> {
        let ok = hub.is_finite()
            && intermediary.is_finite()
            && (0.0..=1.0).contains(&hub)
            && (0.0..=1.0).contains(&intermediary)
            && hub + intermediary <= 1.0;
        if !ok {
            return Err(LayoutError::InvalidFractions { hub, intermediary });
        }
        Ok(SectorFractions { hub, intermediary })
    }

    pub fn peripheral(&self) -> f64 {
        1.0 - self.hub - self.intermediary
    }
}

impl Default for SectorFractions {
    /// The usual 5% hubs, 15% intermediary, 80% periphery.
    fn default() -> Self {
        SectorFractions {
            hub: 0.05,
            intermediary: 0.15,
        }
    }
}

/// Global ranking with its sector blocks. Ranks are 1-based; rank 1 is the
/// most connected vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorAssignment {
    pub ranking: Vec<SenderId>,
    sectors: HashMap<SenderId, Sector>,
    ranks: HashMap<SenderId, usize>,
    pub hub_count: usize,
    pub intermediary_count: usize,
    pub peripheral_count: usize,
}

impl SectorAssignment {
    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    pub fn sector(&self, id: SenderId) -> Option<Sector> {
        self.sectors.get(&id).copied()
    }

    pub fn rank(&self, id: SenderId) -> Option<usize> {
        self.ranks.get(&id).copied()
    }
}

/// Order vertices most-connected first. Ties break by descending message
/// count, then ascending sender string, so the result is deterministic and
/// independent of input ordering.
pub fn rank_vertices(
    net: &InteractionNetwork,
    index: &StreamIndex,
    metric: RankMetric,
) -> Vec<SenderId> {
    let mut ids: Vec<SenderId> = net.vertices().map(|(id, _)| id).collect();
    ids.sort_unstable_by(|&a, &b| {
        let (sa, sb) = (net.stats(a).unwrap(), net.stats(b).unwrap());
        let ka = match metric {
            RankMetric::Strength => sa.total_strength(),
            RankMetric::Degree => sa.total_degree(),
        };
        let kb = match metric {
            RankMetric::Strength => sb.total_strength(),
            RankMetric::Degree => sb.total_degree(),
        };
        kb.cmp(&ka)
            .then_with(|| sb.message_count.cmp(&sa.message_count))
            .then_with(|| index.sender_name(a).cmp(index.sender_name(b)))
    });
    ids
}

/// Split a ranking into rank blocks: `h = ceil(hub * N)` hubs, then
/// `i = ceil(intermediary * N)` intermediaries capped so `h + i <= N`,
/// and the rest peripheral.
pub fn partition(ranking: Vec<SenderId>, fractions: &SectorFractions) -> SectorAssignment {
    let n = ranking.len();
    let hub_count = ((fractions.hub * n as f64).ceil() as usize).min(n);
    let intermediary_count =
        ((fractions.intermediary * n as f64).ceil() as usize).min(n - hub_count);
    let peripheral_count = n - hub_count - intermediary_count;

    let mut sectors = HashMap::with_capacity(n);
    let mut ranks = HashMap::with_capacity(n);
    for (pos, &id) in ranking.iter().enumerate() {
        let sector = if pos < hub_count {
            Sector::Hub
        } else if pos < hub_count + intermediary_count {
            Sector::Intermediary
        } else {
            Sector::Peripheral
        };
        sectors.insert(id, sector);
        ranks.insert(id, pos + 1);
    }
    SectorAssignment {
        ranking,
        sectors,
        ranks,
        hub_count,
        intermediary_count,
        peripheral_count,
    }
}

/// Geometry of the unit canvas (y grows upward). The sinusoid is
/// `y = baseline + amplitude * sin(phase)`, the periphery sits on the
/// horizontal line `y = line_y` above the crest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParams {
    pub x_margin: f64,
    pub baseline: f64,
    pub amplitude: f64,
    pub line_y: f64,
    /// Full sinusoid periods across the span.
    pub periods: u32,
    /// Per-period widening of the horizontal wavelength; 1.0 keeps the
    /// frequency constant.
    pub decay: f64,
}

impl GeometryParams {
    pub fn validated(self) -> Result<Self, LayoutError> {
        let GeometryParams {
            x_margin,
            baseline,
            amplitude,
            line_y,
            periods,
            decay,
        } = self;
        let finite = x_margin.is_finite()
            && baseline.is_finite()
            && amplitude.is_finite()
            && line_y.is_finite()
            && decay.is_finite();
        let ok = finite
            && x_margin > 0.0
            && x_margin < 0.5
            && amplitude > 0.0
            && baseline + amplitude < line_y
            && line_y <= 1.0
            && periods >= 1
            && decay > 0.0;
        if !ok {
            return Err(LayoutError::InvalidGeometry(format!(
                "x_margin={x_margin}, baseline={baseline}, amplitude={amplitude}, \
                 line_y={line_y}, periods={periods}, decay={decay}"
            )));
        }
        Ok(self)
    }

    /// Total phase swept across the span: 2*pi per period.
    pub fn total_phase(&self) -> f64 {
        std::f64::consts::TAU * self.periods as f64
    }

    /// Normalized u-widths of the per-period segments, proportional to
    /// decay^j.
    fn segment_widths(&self) -> Vec<f64> {
        let p = self.periods as usize;
        let raw: Vec<f64> = (0..p).map(|j| self.decay.powi(j as i32)).collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / sum).collect()
    }

    /// Horizontal parameter u in [0, 1] at which the sinusoid reaches
    /// `phase`. Piecewise linear: segment j covers one full period over a
    /// u-width proportional to decay^j.
    pub fn u_of_phase(&self, phase: f64) -> f64 {
        let widths = self.segment_widths();
        let seg = ((phase / std::f64::consts::TAU) as usize).min(widths.len() - 1);
        let u_start: f64 = widths[..seg].iter().sum();
        let local = phase / std::f64::consts::TAU - seg as f64;
        u_start + widths[seg] * local
    }

    /// Phase of the sinusoid at horizontal parameter u; inverse of
    /// [`Self::u_of_phase`].
    pub fn phase_of_u(&self, u: f64) -> f64 {
        let widths = self.segment_widths();
        let mut u_start = 0.0;
        for (j, w) in widths.iter().enumerate() {
            let u_end = u_start + w;
            if u <= u_end || j == widths.len() - 1 {
                return std::f64::consts::TAU * (j as f64 + (u - u_start) / w);
            }
            u_start = u_end;
        }
        unreachable!("periods >= 1 guarantees at least one segment");
    }

    /// Map u in [0, 1] to a canvas x inside the margins.
    pub fn x_of_u(&self, u: f64) -> f64 {
        self.x_margin + u * (1.0 - 2.0 * self.x_margin)
    }

    /// Inverse of [`Self::x_of_u`].
    pub fn u_of_x(&self, x: f64) -> f64 {
        (x - self.x_margin) / (1.0 - 2.0 * self.x_margin)
    }

    /// Height of the sinusoid at horizontal parameter u.
    pub fn curve_y(&self, u: f64) -> f64 {
        self.baseline + self.amplitude * self.phase_of_u(u).sin()
    }
}

impl Default for GeometryParams {
    fn default() -> Self {
        GeometryParams {
            x_margin: 0.05,
            baseline: 0.45,
            amplitude: 0.25,
            line_y: 0.85,
            periods: 1,
            decay: 1.0,
        }
    }
}

/// Immutable vertex -> (x, y) table over the unit canvas. Every globally
/// known vertex has exactly one slot, used by every frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutTable {
    positions: HashMap<SenderId, (f64, f64)>,
}

impl LayoutTable {
    pub fn position(&self, id: SenderId) -> Option<(f64, f64)> {
        self.positions.get(&id).copied()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SenderId, (f64, f64))> + '_ {
        self.positions.iter().map(|(&id, &pos)| (id, pos))
    }
}

/// Compute the fixed position of every ranked vertex.
///
/// Hubs are spread over the first half of the total phase, intermediaries
/// over the second, each at the half-step centers of its block so single
/// vertices land mid-arch instead of on a margin. Peripherals take the
/// half-step centers of the line span. Empty sectors are simply skipped.
pub fn place(assignment: &SectorAssignment, geometry: &GeometryParams) -> LayoutTable {
    let mut positions = HashMap::with_capacity(assignment.len());
    let half_phase = geometry.total_phase() / 2.0;

    let hubs = &assignment.ranking[..assignment.hub_count];
    for (k, &id) in hubs.iter().enumerate() {
        let phase = half_phase * (k as f64 + 0.5) / assignment.hub_count as f64;
        positions.insert(id, curve_point(geometry, phase));
    }

    let inter_end = assignment.hub_count + assignment.intermediary_count;
    let intermediaries = &assignment.ranking[assignment.hub_count..inter_end];
    for (k, &id) in intermediaries.iter().enumerate() {
        let phase =
            half_phase + half_phase * (k as f64 + 0.5) / assignment.intermediary_count as f64;
        positions.insert(id, curve_point(geometry, phase));
    }

    let peripherals = &assignment.ranking[inter_end..];
    for (k, &id) in peripherals.iter().enumerate() {
        let u = (k as f64 + 0.5) / assignment.peripheral_count as f64;
        positions.insert(id, (geometry.x_of_u(u), geometry.line_y));
    }

    LayoutTable { positions }
}

fn curve_point(geometry: &GeometryParams, phase: f64) -> (f64, f64) {
    let u = geometry.u_of_phase(phase);
    let x = geometry.x_of_u(u);
    let y = geometry.baseline + geometry.amplitude * phase.sin();
    (x, y)
}

/// Text dump `vertex<TAB>sector<TAB>rank<TAB>x<TAB>y` in rank order, with
/// coordinates printed to exactly 6 decimals.
pub fn layout_dump(
    table: &LayoutTable,
    assignment: &SectorAssignment,
    index: &StreamIndex,
) -> String {
    let mut out = String::new();
    for (pos, &id) in assignment.ranking.iter().enumerate() {
        let (x, y) = table.position(id).expect("every ranked vertex is placed");
        let sector = assignment
            .sector(id)
            .expect("every ranked vertex has a sector");
        out.push_str(&format!(
            "{}\t{}\t{}\t{:.6}\t{:.6}\n",
            index.sender_name(id),
            sector.name(),
            pos + 1,
            x,
            y
        ));
    }
    out
}

#[derive(Debug, Error, PartialEq)]
pub enum LayoutError {
    #[error("invalid sector fractions: hub={hub}, intermediary={intermediary}")]
    InvalidFractions { hub: f64, intermediary: f64 },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
}

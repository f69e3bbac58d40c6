//! Directed weighted interaction networks over sender identities, plus the
//! sliding-window engine that maintains one incrementally as the window
//! moves along the message stream.
//!
//! A reply yields an edge from the author of the original message to the
//! author of the reply; repeated replies raise the weight by one each.
//! Flipping every edge turns the information network into the status
//! network.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::ingest::Message;

/// Interned sender identity. Stable for the lifetime of one [`StreamIndex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SenderId(pub u32);

/// Edge orientation of the interaction network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    /// Original author -> responder, following the information flow.
    #[default]
    Information,
    /// Responder -> original author; the exact transpose.
    Status,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Information => "information",
            Direction::Status => "status",
        }
    }
}

/// Global lookup tables built once over the full stream: sender interning
/// and message-id -> author resolution. Built over all considered messages
/// so a reply resolves identically no matter which window looks at it.
#[derive(Debug, Default)]
pub struct StreamIndex {
    names: Vec<String>,
    ids: HashMap<String, SenderId>,
    authors: HashMap<String, SenderId>,
}

impl StreamIndex {
    pub fn build(messages: &[Message]) -> Self {
        let mut index = StreamIndex::default();
        for msg in messages {
            let id = index.intern(&msg.sender);
            index.authors.insert(msg.message_id.clone(), id);
        }
        index
    }

    fn intern(&mut self, name: &str) -> SenderId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = SenderId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    pub fn sender_id(&self, name: &str) -> Option<SenderId> {
        self.ids.get(name).copied()
    }

    pub fn sender_name(&self, id: SenderId) -> &str {
        &self.names[id.0 as usize]
    }

    pub fn author_of(&self, message_id: &str) -> Option<SenderId> {
        self.authors.get(message_id).copied()
    }

    pub fn sender_count(&self) -> usize {
        self.names.len()
    }

    pub fn sender_ids(&self) -> impl Iterator<Item = SenderId> + '_ {
        (0..self.names.len() as u32).map(SenderId)
    }
}

/// Per-vertex measures inside one network scope (a window or the whole
/// stream). Strengths sum incident edge weights; degrees count distinct
/// neighbors.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct VertexStats {
    pub in_strength: u64,
    pub out_strength: u64,
    pub in_degree: u64,
    pub out_degree: u64,
    pub message_count: u64,
}

impl VertexStats {
    pub fn total_strength(&self) -> u64 {
        self.in_strength + self.out_strength
    }

    pub fn total_degree(&self) -> u64 {
        self.in_degree + self.out_degree
    }

    fn is_zero(&self) -> bool {
        *self == VertexStats::default()
    }
}

/// Directed weighted graph over sender identities. Vertices carry their
/// stats; edges carry positive reply counts (an edge that would drop to
/// weight zero is deleted, and a vertex with all-zero stats is dropped).
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct InteractionNetwork {
    vertices: HashMap<SenderId, VertexStats>,
    edges: HashMap<(SenderId, SenderId), u64>,
}

impl InteractionNetwork {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn stats(&self, id: SenderId) -> Option<&VertexStats> {
        self.vertices.get(&id)
    }

    pub fn contains(&self, id: SenderId) -> bool {
        self.vertices.contains_key(&id)
    }

    pub fn weight(&self, from: SenderId, to: SenderId) -> Option<u64> {
        self.edges.get(&(from, to)).copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (SenderId, &VertexStats)> {
        self.vertices.iter().map(|(id, stats)| (*id, stats))
    }

    pub fn edges(&self) -> impl Iterator<Item = (SenderId, SenderId, u64)> + '_ {
        self.edges.iter().map(|(&(from, to), &w)| (from, to, w))
    }

    /// Sum of all edge weights; equals the number of resolvable replies
    /// inside the network's scope.
    pub fn total_edge_weight(&self) -> u64 {
        self.edges.values().sum()
    }

    fn stats_mut(&mut self, id: SenderId) -> &mut VertexStats {
        self.vertices.entry(id).or_default()
    }

    pub(crate) fn apply_message(&mut self, sender: SenderId, reply: Option<(SenderId, SenderId)>) {
        self.stats_mut(sender).message_count += 1;
        if let Some((from, to)) = reply {
            self.bump_edge(from, to);
        }
    }

    pub(crate) fn retract_message(
        &mut self,
        sender: SenderId,
        reply: Option<(SenderId, SenderId)>,
    ) {
        let stats = self
            .vertices
            .get_mut(&sender)
            .expect("retracting a message from a sender not in the network");
        stats.message_count -= 1;
        if let Some((from, to)) = reply {
            self.drop_edge(from, to);
        }
        self.prune(sender);
    }

    pub(crate) fn bump_edge(&mut self, from: SenderId, to: SenderId) {
        let weight = self.edges.entry((from, to)).or_insert(0);
        *weight += 1;
        let fresh = *weight == 1;
        if fresh {
            self.stats_mut(from).out_degree += 1;
            self.stats_mut(to).in_degree += 1;
        }
        self.stats_mut(from).out_strength += 1;
        self.stats_mut(to).in_strength += 1;
    }

    fn drop_edge(&mut self, from: SenderId, to: SenderId) {
        let weight = self
            .edges
            .get_mut(&(from, to))
            .expect("retracting an edge that is not in the network");
        *weight -= 1;
        let gone = *weight == 0;
        if gone {
            self.edges.remove(&(from, to));
            self.stats_mut(from).out_degree -= 1;
            self.stats_mut(to).in_degree -= 1;
        }
        self.stats_mut(from).out_strength -= 1;
        self.stats_mut(to).in_strength -= 1;
        self.prune(from);
        self.prune(to);
    }

    fn prune(&mut self, id: SenderId) {
        if self.vertices.get(&id).is_some_and(|s| s.is_zero()) {
            self.vertices.remove(&id);
        }
    }

    /// Recompute strengths and degrees from the edge map and report every
    /// discrepancy. An empty result means the bookkeeping is consistent.
    pub fn audit(&self, index: &StreamIndex) -> Vec<String> {
        let mut findings = Vec::new();
        let mut recomputed: HashMap<SenderId, VertexStats> = HashMap::new();
        for (&(from, to), &weight) in &self.edges {
            if weight == 0 {
                findings.push(format!(
                    "edge {} -> {} has weight 0 but was not deleted",
                    index.sender_name(from),
                    index.sender_name(to)
                ));
            }
            for endpoint in [from, to] {
                if !self.vertices.contains_key(&endpoint) {
                    findings.push(format!(
                        "edge endpoint {} missing from vertex set",
                        index.sender_name(endpoint)
                    ));
                }
            }
            let f = recomputed.entry(from).or_default();
            f.out_strength += weight;
            f.out_degree += 1;
            let t = recomputed.entry(to).or_default();
            t.in_strength += weight;
            t.in_degree += 1;
        }
        for (&id, stats) in &self.vertices {
            let expect = recomputed.remove(&id).unwrap_or_default();
            let actual = VertexStats {
                message_count: 0,
                ..*stats
            };
            let expect = VertexStats {
                message_count: 0,
                ..expect
            };
            if actual != expect {
                findings.push(format!(
                    "vertex {}: stored {:?} but edges imply {:?}",
                    index.sender_name(id),
                    actual,
                    expect
                ));
            }
            if stats.in_degree > stats.in_strength || stats.out_degree > stats.out_strength {
                findings.push(format!(
                    "vertex {}: degree exceeds strength",
                    index.sender_name(id)
                ));
            }
        }
        findings.sort();
        findings
    }
}

/// The directed pair contributed by one message, in information
/// orientation: author of the original message -> author of the reply.
/// `None` when the message is not a reply or the referenced id was never
/// seen in the stream; the sender still counts as a vertex either way.
pub fn resolve_contribution(msg: &Message, index: &StreamIndex) -> Option<(SenderId, SenderId)> {
    let reply_to = msg.reply_to.as_deref()?;
    let original_author = index.author_of(reply_to)?;
    let responder = index
        .sender_id(&msg.sender)
        .expect("message sender is interned in the stream index");
    Some((original_author, responder))
}

fn oriented(pair: (SenderId, SenderId), direction: Direction) -> (SenderId, SenderId) {
    match direction {
        Direction::Information => pair,
        Direction::Status => (pair.1, pair.0),
    }
}

/// Build the interaction network of a message slice in one pass.
/// Reply targets resolve through the global `index`, never through the
/// slice itself.
pub fn build_network(
    messages: &[Message],
    index: &StreamIndex,
    direction: Direction,
) -> InteractionNetwork {
    let mut net = InteractionNetwork::default();
    for msg in messages {
        let sender = index
            .sender_id(&msg.sender)
            .expect("message sender is interned in the stream index");
        let reply = resolve_contribution(msg, index).map(|p| oriented(p, direction));
        net.apply_message(sender, reply);
    }
    net
}

/// Number of messages whose `reply_to` cannot be resolved through the index.
pub fn count_unresolved(messages: &[Message], index: &StreamIndex) -> usize {
    messages
        .iter()
        .filter(|m| m.reply_to.is_some() && resolve_contribution(m, index).is_none())
        .count()
}

/// Window length, stream length, and step size for the sliding window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowConfig {
    /// Window length in messages.
    pub delta: usize,
    /// Number of messages considered.
    pub total: usize,
    /// Messages the window moves per frame.
    pub stride: usize,
}

impl WindowConfig {
    pub fn new(delta: usize, total: usize, stride: usize) -> Result<Self, GraphError> {
        if delta == 0 || delta > total || stride == 0 {
            return Err(GraphError::InvalidWindow {
                delta,
                total,
                stride,
            });
        }
        Ok(WindowConfig {
            delta,
            total,
            stride,
        })
    }

    /// Number of window positions: starts 0, stride, ... up to total-delta.
    pub fn window_count(&self) -> usize {
        (self.total - self.delta) / self.stride + 1
    }

    fn last_start(&self) -> usize {
        self.total - self.delta
    }
}

/// Number of window positions for a config; see [`WindowConfig::window_count`].
pub fn window_count(config: &WindowConfig) -> usize {
    config.window_count()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error(
        "invalid window config: delta={delta}, total={total}, stride={stride} \
         (need 1 <= delta <= total and stride >= 1)"
    )]
    InvalidWindow {
        delta: usize,
        total: usize,
        stride: usize,
    },
    #[error("stream has {len} messages but the window config considers {total}")]
    StreamTooShort { len: usize, total: usize },
    #[error("window exhausted: cannot advance past start {at} (last valid start is {last})")]
    WindowExhausted { at: usize, last: usize },
}

/// Sequential state machine holding the current window's network and
/// sliding it along the stream. Each advance retracts the contributions of
/// the departing messages and applies the arriving ones, so the state is
/// always exactly the batch-built network of the current slice.
#[derive(Debug)]
pub struct WindowEngine {
    messages: Arc<Vec<Message>>,
    index: Arc<StreamIndex>,
    config: WindowConfig,
    direction: Direction,
    window_start: usize,
    current: InteractionNetwork,
    unresolved: u64,
}

impl WindowEngine {
    pub fn new(
        messages: Arc<Vec<Message>>,
        index: Arc<StreamIndex>,
        config: WindowConfig,
        direction: Direction,
    ) -> Result<Self, GraphError> {
        if messages.len() < config.total {
            return Err(GraphError::StreamTooShort {
                len: messages.len(),
                total: config.total,
            });
        }
        let first = &messages[0..config.delta];
        let current = build_network(first, &index, direction);
        let unresolved = count_unresolved(first, &index) as u64;
        Ok(WindowEngine {
            messages,
            index,
            config,
            direction,
            window_start: 0,
            current,
            unresolved,
        })
    }

    pub fn config(&self) -> &WindowConfig {
        &self.config
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn window_start(&self) -> usize {
        self.window_start
    }

    /// Network of the messages currently inside the window.
    pub fn current(&self) -> &InteractionNetwork {
        &self.current
    }

    pub fn index(&self) -> &StreamIndex {
        &self.index
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    /// Cumulative count of applied messages whose reply target never
    /// appeared in the stream.
    pub fn unresolved_replies(&self) -> u64 {
        self.unresolved
    }

    /// True when no further advance is possible.
    pub fn at_last_window(&self) -> bool {
        self.window_start + self.config.stride > self.config.last_start()
    }

    /// Slide the window forward by `stride` messages, one message at a time.
    pub fn advance(&mut self) -> Result<(), GraphError> {
        if self.at_last_window() {
            return Err(GraphError::WindowExhausted {
                at: self.window_start,
                last: self.config.last_start(),
            });
        }
        for _ in 0..self.config.stride {
            self.retract_at(self.window_start);
            self.apply_at(self.window_start + self.config.delta);
            self.window_start += 1;
        }
        Ok(())
    }

    fn apply_at(&mut self, pos: usize) {
        let msg = &self.messages[pos];
        let sender = self
            .index
            .sender_id(&msg.sender)
            .expect("message sender is interned in the stream index");
        let reply = resolve_contribution(msg, &self.index).map(|p| oriented(p, self.direction));
        if msg.reply_to.is_some() && reply.is_none() {
            self.unresolved += 1;
        }
        self.current.apply_message(sender, reply);
    }

    fn retract_at(&mut self, pos: usize) {
        let msg = &self.messages[pos];
        let sender = self
            .index
            .sender_id(&msg.sender)
            .expect("message sender is interned in the stream index");
        let reply = resolve_contribution(msg, &self.index).map(|p| oriented(p, self.direction));
        self.current.retract_message(sender, reply);
    }
}

/// Edge-list dump `from<TAB>to<TAB>weight`, rows sorted lexicographically.
pub fn edge_list_dump(net: &InteractionNetwork, index: &StreamIndex) -> String {
    let mut rows: Vec<(&str, &str, u64)> = net
        .edges()
        .map(|(from, to, w)| (index.sender_name(from), index.sender_name(to), w))
        .collect();
    rows.sort();
    let mut out = String::new();
    for (from, to, w) in rows {
        out.push_str(&format!("{from}\t{to}\t{w}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Message;

    fn msg(seq: usize, sender: &str, id: &str, reply: Option<&str>) -> Message {
        Message {
            seq_index: seq,
            sender: sender.to_string(),
            message_id: id.to_string(),
            reply_to: reply.map(|r| r.to_string()),
            timestamp: None,
        }
    }

    fn stream(specs: &[(&str, &str, Option<&str>)]) -> Vec<Message> {
        specs
            .iter()
            .enumerate()
            .map(|(i, (sender, id, reply))| msg(i, sender, id, *reply))
            .collect()
    }

    fn id(index: &StreamIndex, name: &str) -> SenderId {
        index.sender_id(name).unwrap()
    }

    #[test]
    fn reply_yields_original_author_to_responder() {
        let messages = stream(&[("alice", "m1", None), ("bob", "m2", Some("m1"))]);
        let index = StreamIndex::build(&messages);
        let pair = resolve_contribution(&messages[1], &index).unwrap();
        assert_eq!(pair, (id(&index, "alice"), id(&index, "bob")));
    }

    #[test]
    fn non_reply_contributes_no_edge_but_registers_vertex() {
        let messages = stream(&[("bob", "m1", None)]);
        let index = StreamIndex::build(&messages);
        assert_eq!(resolve_contribution(&messages[0], &index), None);
        let net = build_network(&messages, &index, Direction::Information);
        assert_eq!(net.vertex_count(), 1);
        assert_eq!(net.edge_count(), 0);
        assert_eq!(net.stats(id(&index, "bob")).unwrap().message_count, 1);
    }

    #[test]
    fn unresolvable_reply_is_counted_not_fatal() {
        let messages = stream(&[("bob", "m1", Some("ghost"))]);
        let index = StreamIndex::build(&messages);
        assert_eq!(resolve_contribution(&messages[0], &index), None);
        assert_eq!(count_unresolved(&messages, &index), 1);
        let net = build_network(&messages, &index, Direction::Information);
        assert!(net.contains(id(&index, "bob")));
        assert_eq!(net.edge_count(), 0);
    }

    #[test]
    fn repeat_replies_accumulate_weight() {
        let messages = stream(&[
            ("alice", "m1", None),
            ("bob", "m2", Some("m1")),
            ("bob", "m3", Some("m1")),
        ]);
        let index = StreamIndex::build(&messages);
        let net = build_network(&messages, &index, Direction::Information);
        assert_eq!(net.weight(id(&index, "alice"), id(&index, "bob")), Some(2));
        let alice = net.stats(id(&index, "alice")).unwrap();
        assert_eq!((alice.out_strength, alice.out_degree), (2, 1));
        let bob = net.stats(id(&index, "bob")).unwrap();
        assert_eq!(
            (bob.in_strength, bob.in_degree, bob.message_count),
            (2, 1, 2)
        );
    }

    #[test]
    fn status_direction_is_the_transpose() {
        let messages = stream(&[
            ("alice", "m1", None),
            ("bob", "m2", Some("m1")),
            ("bob", "m3", Some("m1")),
        ]);
        let index = StreamIndex::build(&messages);
        let info = build_network(&messages, &index, Direction::Information);
        let status = build_network(&messages, &index, Direction::Status);
        assert_eq!(
            status.weight(id(&index, "bob"), id(&index, "alice")),
            Some(2)
        );
        for (from, to, w) in info.edges() {
            assert_eq!(status.weight(to, from), Some(w));
        }
        for (v, stats) in info.vertices() {
            let flipped = status.stats(v).unwrap();
            assert_eq!(stats.in_strength, flipped.out_strength);
            assert_eq!(stats.out_strength, flipped.in_strength);
            assert_eq!(stats.in_degree, flipped.out_degree);
            assert_eq!(stats.out_degree, flipped.in_degree);
            assert_eq!(stats.message_count, flipped.message_count);
        }
    }

    #[test]
    fn self_reply_counts_in_both_directions() {
        let messages = stream(&[("alice", "m1", None), ("alice", "m2", Some("m1"))]);
        let index = StreamIndex::build(&messages);
        let net = build_network(&messages, &index, Direction::Information);
        let a = id(&index, "alice");
        assert_eq!(net.weight(a, a), Some(1));
        let stats = net.stats(a).unwrap();
        assert_eq!(
            (
                stats.in_strength,
                stats.out_strength,
                stats.in_degree,
                stats.out_degree
            ),
            (1, 1, 1, 1)
        );
    }

    #[test]
    fn window_count_matches_index_range() {
        let cfg = WindowConfig::new(400, 20000, 1).unwrap();
        assert_eq!(cfg.window_count(), 19601);

        let full = WindowConfig::new(64, 64, 7).unwrap();
        assert_eq!(full.window_count(), 1);

        // brute-force oracle: enumerate the valid start positions
        let cfg = WindowConfig::new(25, 200, 5).unwrap();
        let starts = (0..=200 - 25).step_by(5).count();
        assert_eq!(starts, 36);
        assert_eq!(cfg.window_count(), 36);
    }

    #[test]
    fn zero_width_and_oversized_windows_are_rejected() {
        assert!(matches!(
            WindowConfig::new(0, 10, 1),
            Err(GraphError::InvalidWindow { .. })
        ));
        assert!(matches!(
            WindowConfig::new(11, 10, 1),
            Err(GraphError::InvalidWindow { .. })
        ));
        assert!(matches!(
            WindowConfig::new(5, 10, 0),
            Err(GraphError::InvalidWindow { .. })
        ));
    }

    fn five_message_stream() -> (Arc<Vec<Message>>, Arc<StreamIndex>) {
        let messages = stream(&[
            ("a", "m0", None),
            ("b", "m1", Some("m0")),
            ("c", "m2", None),
            ("a", "m3", Some("m1")),
            ("b", "m4", Some("m3")),
        ]);
        let index = Arc::new(StreamIndex::build(&messages));
        (Arc::new(messages), index)
    }

    #[test]
    fn engine_initial_window_covers_first_delta_messages() {
        let (messages, index) = five_message_stream();
        let cfg = WindowConfig::new(3, 5, 1).unwrap();
        let engine =
            WindowEngine::new(messages.clone(), index.clone(), cfg, Direction::Information)
                .unwrap();
        let batch = build_network(&messages[0..3], &index, Direction::Information);
        assert_eq!(*engine.current(), batch);
        assert_eq!(engine.window_start(), 0);
    }

    #[test]
    fn engine_rejects_short_stream() {
        let (messages, index) = five_message_stream();
        let err = WindowConfig::new(6, 6, 1)
            .map(|cfg| WindowEngine::new(messages, index, cfg, Direction::Information))
            .unwrap()
            .unwrap_err();
        assert!(matches!(err, GraphError::StreamTooShort { .. }));
    }

    #[test]
    fn departing_reply_removes_its_edge() {
        // window of 1: each frame holds exactly one message
        let messages = stream(&[
            ("a", "m0", None),
            ("b", "m1", Some("m0")),
            ("c", "m2", None),
        ]);
        let index = Arc::new(StreamIndex::build(&messages));
        let cfg = WindowConfig::new(1, 3, 1).unwrap();
        let mut engine = WindowEngine::new(
            Arc::new(messages),
            index.clone(),
            cfg,
            Direction::Information,
        )
        .unwrap();
        assert_eq!(engine.current().edge_count(), 0);

        engine.advance().unwrap();
        // the reply m1 is inside: edge a->b, with a present only via the edge
        let (a, b) = (id(&index, "a"), id(&index, "b"));
        assert_eq!(engine.current().weight(a, b), Some(1));
        assert_eq!(engine.current().stats(a).unwrap().message_count, 0);

        engine.advance().unwrap();
        // the reply left: edge gone, both endpoints pruned
        assert_eq!(engine.current().edge_count(), 0);
        assert!(!engine.current().contains(a));
        assert!(!engine.current().contains(b));
        assert!(engine.current().contains(id(&index, "c")));
    }

    #[test]
    fn advance_visits_every_window_then_errors() {
        let (messages, index) = five_message_stream();
        let cfg = WindowConfig::new(2, 5, 2).unwrap();
        let mut engine =
            WindowEngine::new(messages.clone(), index.clone(), cfg, Direction::Information)
                .unwrap();
        let mut visited = vec![engine.window_start()];
        while !engine.at_last_window() {
            engine.advance().unwrap();
            visited.push(engine.window_start());
        }
        assert_eq!(visited.len(), cfg.window_count());
        assert_eq!(visited, vec![0, 2]);
        assert!(matches!(
            engine.advance(),
            Err(GraphError::WindowExhausted { .. })
        ));
    }

    #[test]
    fn incremental_matches_batch_on_random_streams() {
        // trimmed-down version of the acceptance oracle: a few seeds here
        for seed in 0..10u64 {
            let params = crate::synth::SynthParams {
                messages: 120,
                senders: 9,
                seed,
                reply_prob: 0.8,
            };
            let messages = crate::synth::generate_stream(&params);
            let index = Arc::new(StreamIndex::build(&messages));
            let messages = Arc::new(messages);
            let cfg = WindowConfig::new(20, 120, 1).unwrap();
            for direction in [Direction::Information, Direction::Status] {
                let mut engine =
                    WindowEngine::new(messages.clone(), index.clone(), cfg, direction).unwrap();
                loop {
                    let start = engine.window_start();
                    let batch =
                        build_network(&messages[start..start + cfg.delta], &index, direction);
                    assert_eq!(*engine.current(), batch, "seed {seed} window {start}");
                    assert!(engine.current().audit(&index).is_empty());
                    let replies = messages[start..start + cfg.delta]
                        .iter()
                        .filter(|m| resolve_contribution(m, &index).is_some())
                        .count() as u64;
                    assert_eq!(engine.current().total_edge_weight(), replies);
                    if engine.at_last_window() {
                        break;
                    }
                    engine.advance().unwrap();
                }
            }
        }
    }

    #[test]
    fn audit_flags_corrupted_stats() {
        let messages = stream(&[("alice", "m1", None), ("bob", "m2", Some("m1"))]);
        let index = StreamIndex::build(&messages);
        let mut net = build_network(&messages, &index, Direction::Information);
        assert!(net.audit(&index).is_empty());

        net.stats_mut(id(&index, "alice")).out_strength += 5;
        let findings = net.audit(&index);
        assert_eq!(findings.len(), 1);
        assert!(findings[0].contains("alice"));
    }

    #[test]
    fn edge_dump_is_sorted() {
        let messages = stream(&[
            ("c", "m1", None),
            ("a", "m2", Some("m1")),
            ("b", "m3", Some("m2")),
            ("b", "m4", Some("m1")),
        ]);
        let index = StreamIndex::build(&messages);
        let net = build_network(&messages, &index, Direction::Information);
        let dump = edge_list_dump(&net, &index);
        assert_eq!(dump, "a\tb\t1\nc\ta\t1\nc\tb\t1\n");
    }
}

//! Seeded synthetic reply streams, so demos and tests need no real
//! mailing-list data.
//!
//! Sender activity and reply targets both follow preferential attachment:
//! busy senders post more, and messages that already drew replies draw
//! more. That yields the skewed degree distributions the layout is built
//! for.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ingest::Message;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub messages: usize,
    pub senders: usize,
    pub seed: u64,
    /// Probability that a message answers an earlier one.
    pub reply_prob: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            messages: 200,
            senders: 12,
            seed: 0,
            reply_prob: 0.75,
        }
    }
}

/// Generate a deterministic message stream for the given parameters.
/// Equal params give byte-equal streams.
pub fn generate_stream(params: &SynthParams) -> Vec<Message> {
    assert!(params.senders > 0, "need at least one sender");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let width = params.senders.saturating_sub(1).to_string().len().max(2);
    let names: Vec<String> = (0..params.senders)
        .map(|i| format!("s{i:0width$}"))
        .collect();

    // sender urn: one base ball per sender, plus one per message sent
    let mut sender_urn: Vec<usize> = (0..params.senders).collect();
    // target urn: one base ball per message, plus one per reply it receives
    let mut target_urn: Vec<usize> = Vec::with_capacity(params.messages * 2);

    let mut messages = Vec::with_capacity(params.messages);
    for i in 0..params.messages {
        let sender = sender_urn[rng.random_range(0..sender_urn.len())];
        sender_urn.push(sender);

        let reply_to = if i > 0 && rng.random_bool(params.reply_prob) {
            let target = target_urn[rng.random_range(0..target_urn.len())];
            target_urn.push(target);
            Some(format!("m{target:06}"))
        } else {
            None
        };
        target_urn.push(i);

        messages.push(Message {
            seq_index: i,
            sender: names[sender].clone(),
            message_id: format!("m{i:06}"),
            reply_to,
            timestamp: Some(1_000_000 + 60 * i as i64),
        });
    }
    messages
}

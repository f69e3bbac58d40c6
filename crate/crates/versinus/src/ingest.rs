//! Message-log ingestion: CSV, JSONL and mbox readers producing one
//! validated, ordered [`Message`] stream.
//!
//! Only three fields matter downstream: who sent a message, its id, and the
//! id of the message it answers. Bodies are never inspected.

use std::collections::HashSet;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact header line required on CSV input and emitted by [`write_csv`].
pub const CSV_HEADER: &str = "message_id,sender,reply_to,timestamp";

/// One record of the chronological log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    /// 0-based position in the stream, dense and strictly increasing.
    pub seq_index: usize,
    /// Normalized sender identity (trimmed, lowercased).
    pub sender: String,
    /// Opaque id, unique within a stream.
    pub message_id: String,
    /// Id of the message this one answers, if any.
    pub reply_to: Option<String>,
    /// Seconds since epoch; ordering never depends on it.
    pub timestamp: Option<i64>,
}

/// Input encodings understood by the parsers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
    Mbox,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
            Format::Mbox => "mbox",
        }
    }
}

/// Per-category counters for mbox messages dropped instead of parsed.
/// Structured formats never skip; they fail instead.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct SkipCounts {
    pub missing_message_id: usize,
    pub missing_sender: usize,
    pub duplicate_message_id: usize,
}

impl SkipCounts {
    pub fn total(&self) -> usize {
        self.missing_message_id + self.missing_sender + self.duplicate_message_id
    }
}

/// A fully parsed stream plus the warnings accumulated while reading it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedStream {
    pub messages: Vec<Message>,
    pub skipped: SkipCounts,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: expected {expected} columns, found {found}")]
    ColumnCount {
        line: u64,
        expected: u64,
        found: u64,
    },
    #[error("line {line}: {field} must not be empty")]
    EmptyField { line: u64, field: &'static str },
    #[error("line {line}: duplicate message id \"{id}\"")]
    DuplicateId { line: u64, id: String },
    #[error("line {line}: {detail}")]
    Malformed { line: u64, detail: String },
    #[error("missing or malformed CSV header, expected \"{CSV_HEADER}\"")]
    Header,
    #[error("no parseable messages in mbox input")]
    EmptyMbox,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Trim and lowercase an identity string.
pub fn normalize_sender(raw: &str) -> String {
    raw.trim().to_lowercase()
}

/// Decide the input format from the leading bytes: an mbox starts with
/// `From ` at offset 0, JSONL with `{` as the first non-whitespace byte,
/// anything else is CSV.
pub fn detect_format(head: &[u8]) -> Format {
    if head.starts_with(b"From ") {
        return Format::Mbox;
    }
    match head.iter().find(|b| !b.is_ascii_whitespace()) {
        Some(b'{') => Format::Jsonl,
        _ => Format::Csv,
    }
}

/// Parse `input` as `format`. CSV and JSONL yield no skips.
pub fn parse(format: Format, mut input: impl Read) -> Result<ParsedStream, IngestError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    parse_bytes(format, &bytes)
}

pub fn parse_bytes(format: Format, bytes: &[u8]) -> Result<ParsedStream, IngestError> {
    match format {
        Format::Csv => Ok(ParsedStream {
            messages: parse_csv(bytes)?,
            skipped: SkipCounts::default(),
        }),
        Format::Jsonl => Ok(ParsedStream {
            messages: parse_jsonl(bytes)?,
            skipped: SkipCounts::default(),
        }),
        Format::Mbox => parse_mbox(bytes),
    }
}

/// Tracks id uniqueness and assigns dense sequence indexes.
struct StreamBuilder {
    messages: Vec<Message>,
    seen_ids: HashSet<String>,
}

impl StreamBuilder {
    fn new() -> Self {
        StreamBuilder {
            messages: Vec::new(),
            seen_ids: HashSet::new(),
        }
    }

    /// True when the id was fresh and the message got appended.
    fn push(
        &mut self,
        sender: String,
        message_id: String,
        reply_to: Option<String>,
        timestamp: Option<i64>,
    ) -> bool {
        if !self.seen_ids.insert(message_id.clone()) {
            return false;
        }
        self.messages.push(Message {
            seq_index: self.messages.len(),
            sender,
            message_id,
            reply_to,
            timestamp,
        });
        true
    }
}

/// Parse CSV with the exact header `message_id,sender,reply_to,timestamp`.
/// Any malformed row is fatal and reported with its line number.
pub fn parse_csv(bytes: &[u8]) -> Result<Vec<Message>, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(bytes);
    let mut records = reader.records();

    let header = match records.next() {
        Some(rec) => rec.map_err(csv_error)?,
        None => return Err(IngestError::Header),
    };
    let expected: Vec<&str> = CSV_HEADER.split(',').collect();
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(IngestError::Header);
    }

    let mut builder = StreamBuilder::new();
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 4 {
            return Err(IngestError::ColumnCount {
                line,
                expected: 4,
                found: rec.len() as u64,
            });
        }
        let message_id = rec[0].to_string();
        if message_id.is_empty() {
            return Err(IngestError::EmptyField {
                line,
                field: "message_id",
            });
        }
        let sender = normalize_sender(&rec[1]);
        if sender.is_empty() {
            return Err(IngestError::EmptyField {
                line,
                field: "sender",
            });
        }
        let reply_to = (!rec[2].is_empty()).then(|| rec[2].to_string());
        let timestamp = if rec[3].is_empty() {
            None
        } else {
            Some(rec[3].parse::<i64>().map_err(|e| IngestError::Malformed {
                line,
                detail: format!("bad timestamp \"{}\": {e}", &rec[3]),
            })?)
        };
        if !builder.push(sender, message_id.clone(), reply_to, timestamp) {
            return Err(IngestError::DuplicateId {
                line,
                id: message_id,
            });
        }
    }
    Ok(builder.messages)
}

fn csv_error(err: csv::Error) -> IngestError {
    let line = err.position().map_or(0, |p| p.line());
    match err.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => IngestError::ColumnCount {
            line,
            expected: *expected_len,
            found: *len,
        },
        _ => IngestError::Malformed {
            line,
            detail: err.to_string(),
        },
    }
}

#[derive(Deserialize)]
struct JsonlRecord {
    message_id: String,
    sender: String,
    #[serde(default)]
    reply_to: Option<String>,
    #[serde(default)]
    timestamp: Option<i64>,
}

/// Parse one JSON object per line; blank lines are ignored.
pub fn parse_jsonl(bytes: &[u8]) -> Result<Vec<Message>, IngestError> {
    let text = std::str::from_utf8(bytes).map_err(|e| IngestError::Malformed {
        line: 0,
        detail: format!("input is not UTF-8: {e}"),
    })?;
    let mut builder = StreamBuilder::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx as u64 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let rec: JsonlRecord = serde_json::from_str(raw).map_err(|e| IngestError::Malformed {
            line,
            detail: e.to_string(),
        })?;
        if rec.message_id.is_empty() {
            return Err(IngestError::EmptyField {
                line,
                field: "message_id",
            });
        }
        let sender = normalize_sender(&rec.sender);
        if sender.is_empty() {
            return Err(IngestError::EmptyField {
                line,
                field: "sender",
            });
        }
        let reply_to = rec.reply_to.filter(|r| !r.is_empty());
        if !builder.push(sender, rec.message_id.clone(), reply_to, rec.timestamp) {
            return Err(IngestError::DuplicateId {
                line,
                id: rec.message_id,
            });
        }
    }
    Ok(builder.messages)
}

/// Parse mbox-style text: messages delimited by `From ` at column 0,
/// headers up to the first blank line, bodies ignored entirely.
///
/// Messages without a usable `Message-ID:` or `From:` are skipped and
/// counted, as are duplicate ids; only a stream with zero parseable
/// messages is an error.
pub fn parse_mbox(bytes: &[u8]) -> Result<ParsedStream, IngestError> {
    // Real mboxes are dirty; tolerate invalid UTF-8 instead of failing.
    let text = String::from_utf8_lossy(bytes);

    let mut builder = StreamBuilder::new();
    let mut skipped = SkipCounts::default();
    let mut headers: Vec<String> = Vec::new();
    let mut in_headers = false;

    let flush =
        |headers: &mut Vec<String>, builder: &mut StreamBuilder, skipped: &mut SkipCounts| {
            let mut from_value: Option<String> = None;
            let mut id_value: Option<String> = None;
            let mut reply_value: Option<String> = None;
            for header in headers.iter() {
                let Some((name, value)) = header.split_once(':') else {
                    continue;
                };
                let name = name.trim();
                if name.eq_ignore_ascii_case("from") {
                    from_value.get_or_insert_with(|| value.to_string());
                } else if name.eq_ignore_ascii_case("message-id") {
                    id_value.get_or_insert_with(|| value.to_string());
                } else if name.eq_ignore_ascii_case("in-reply-to") {
                    reply_value.get_or_insert_with(|| value.to_string());
                }
            }
            headers.clear();

            let Some(message_id) = id_value.as_deref().and_then(first_message_id) else {
                skipped.missing_message_id += 1;
                return;
            };
            let Some(sender) = from_value
                .as_deref()
                .map(extract_address)
                .filter(|s| !s.is_empty())
            else {
                skipped.missing_sender += 1;
                return;
            };
            let reply_to = reply_value.as_deref().and_then(first_message_id);
            if !builder.push(sender, message_id, reply_to, None) {
                skipped.duplicate_message_id += 1;
            }
        };

    for raw in text.split('\n') {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.starts_with("From ") {
            if in_headers {
                flush(&mut headers, &mut builder, &mut skipped);
            }
            in_headers = true;
            headers.clear();
            continue;
        }
        if !in_headers {
            continue; // body, or junk before the first delimiter
        }
        if line.is_empty() {
            // End of the header block; everything until the next `From `
            // line is body and is ignored.
            flush(&mut headers, &mut builder, &mut skipped);
            in_headers = false;
        } else if line.starts_with(' ') || line.starts_with('\t') {
            // Folded header: unfolding removes the line break only.
            match headers.last_mut() {
                Some(prev) => prev.push_str(line),
                None => headers.push(line.to_string()),
            }
        } else {
            headers.push(line.to_string());
        }
    }
    if in_headers {
        flush(&mut headers, &mut builder, &mut skipped);
    }

    if builder.messages.is_empty() {
        return Err(IngestError::EmptyMbox);
    }
    Ok(ParsedStream {
        messages: builder.messages,
        skipped,
    })
}

/// Address part of a `From:` value: the text inside `<...>` when present,
/// otherwise the whole value, normalized either way.
fn extract_address(value: &str) -> String {
    if let Some(open) = value.rfind('<') {
        if let Some(close) = value[open + 1..].find('>') {
            return normalize_sender(&value[open + 1..open + 1 + close]);
        }
    }
    normalize_sender(value)
}

/// First message id in a header value, stripped of surrounding `<>`.
fn first_message_id(value: &str) -> Option<String> {
    let trimmed = value.trim();
    if let Some(open) = trimmed.find('<') {
        if let Some(close) = trimmed[open + 1..].find('>') {
            let inner = trimmed[open + 1..open + 1 + close].trim();
            return (!inner.is_empty()).then(|| inner.to_string());
        }
    }
    trimmed.split_whitespace().next().map(|tok| tok.to_string())
}

/// Serialize messages back to the canonical CSV schema.
pub fn write_csv(messages: &[Message], out: impl std::io::Write) -> Result<(), IngestError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    for msg in messages {
        let ts = msg.timestamp.map(|t| t.to_string()).unwrap_or_default();
        writer.write_record([
            msg.message_id.as_str(),
            msg.sender.as_str(),
            msg.reply_to.as_deref().unwrap_or(""),
            ts.as_str(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

impl From<csv::Error> for IngestError {
    fn from(err: csv::Error) -> Self {
        csv_error(err)
    }
}

#[derive(Serialize)]
struct JsonlOut<'a> {
    message_id: &'a str,
    sender: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reply_to: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<i64>,
}

/// Serialize messages as one JSON object per line.
pub fn write_jsonl(messages: &[Message], mut out: impl std::io::Write) -> Result<(), IngestError> {
    for msg in messages {
        let rec = JsonlOut {
            message_id: &msg.message_id,
            sender: &msg.sender,
            reply_to: msg.reply_to.as_deref(),
            timestamp: msg.timestamp,
        };
        let line = serde_json::to_string(&rec).expect("jsonl record serializes");
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

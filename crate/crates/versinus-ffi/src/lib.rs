//! C ABI over the versinus pipeline: opaque stream handles, status codes,
//! and a thread-local last-error message.
//!
//! The generated header lands in `include/versinus.h`. Functions follow the
//! usual out-parameter convention: they return [`VnStatus`], write results
//! through pointers, and leave a human-readable explanation retrievable via
//! [`vn_last_error_message`] on failure.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::Path;

use versinus::config::{FileConfig, RenderPlan};
use versinus::ingest::{self, Format};
use versinus::pipeline;
use versinus::synth::{generate_stream, SynthParams};
use versinus::Message;
use versinus::WindowConfig;

/// Result codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Utf8 = 3,
    Io = 4,
    Parse = 5,
    Pipeline = 6,
}

/// Input encodings accepted by the stream constructors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VnFormat {
    Auto = 0,
    Csv = 1,
    Jsonl = 2,
    Mbox = 3,
}

/// Opaque handle over a parsed message stream.
pub struct VnStream {
    messages: Vec<Message>,
    skipped: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> =
        RefCell::new(CString::new("").expect("empty C string"));
}

fn fail(status: VnStatus, message: impl Into<String>) -> VnStatus {
    let text = CString::new(message.into().replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
    status
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn vn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn vn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

unsafe fn cstr_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, VnStatus> {
    if ptr.is_null() {
        return Err(fail(VnStatus::NullPointer, format!("{name} is NULL")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| fail(VnStatus::Utf8, format!("{name} is not UTF-8: {e}")))
}

fn parse_stream(bytes: &[u8], format: VnFormat) -> Result<VnStream, VnStatus> {
    let format = match format {
        VnFormat::Auto => ingest::detect_format(bytes),
        VnFormat::Csv => Format::Csv,
        VnFormat::Jsonl => Format::Jsonl,
        VnFormat::Mbox => Format::Mbox,
    };
    let parsed =
        ingest::parse_bytes(format, bytes).map_err(|e| fail(VnStatus::Parse, e.to_string()))?;
    Ok(VnStream {
        messages: parsed.messages,
        skipped: parsed.skipped.total() as u64,
    })
}

/// Parse a message log from a file into a new stream handle.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer;
/// on success `*out` owns the handle until [`vn_stream_free`].
#[no_mangle]
pub unsafe extern "C" fn vn_stream_open(
    path: *const c_char,
    format: VnFormat,
    out: *mut *mut VnStream,
) -> VnStatus {
    if out.is_null() {
        return fail(VnStatus::NullPointer, "out is NULL");
    }
    let path = match cstr_arg(path, "path") {
        Ok(p) => p,
        Err(status) => return status,
    };
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) => return fail(VnStatus::Io, format!("cannot read {path}: {e}")),
    };
    match parse_stream(&bytes, format) {
        Ok(stream) => {
            *out = Box::into_raw(Box::new(stream));
            VnStatus::Ok
        }
        Err(status) => status,
    }
}

/// Parse a message log from a byte buffer into a new stream handle.
///
/// # Safety
/// `data` must point to `len` readable bytes and `out` must be valid; on
/// success `*out` owns the handle until [`vn_stream_free`].
#[no_mangle]
pub unsafe extern "C" fn vn_stream_from_bytes(
    data: *const u8,
    len: usize,
    format: VnFormat,
    out: *mut *mut VnStream,
) -> VnStatus {
    if out.is_null() || (data.is_null() && len > 0) {
        return fail(VnStatus::NullPointer, "data or out is NULL");
    }
    let bytes = if len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(data, len)
    };
    match parse_stream(bytes, format) {
        Ok(stream) => {
            *out = Box::into_raw(Box::new(stream));
            VnStatus::Ok
        }
        Err(status) => status,
    }
}

/// Number of messages in the stream; 0 for a NULL handle.
///
/// # Safety
/// `stream` must be NULL or a live handle from a stream constructor.
#[no_mangle]
pub unsafe extern "C" fn vn_stream_message_count(stream: *const VnStream) -> u64 {
    if stream.is_null() {
        return 0;
    }
    (*stream).messages.len() as u64
}

/// Number of mbox messages skipped while parsing; 0 for a NULL handle.
///
/// # Safety
/// `stream` must be NULL or a live handle from a stream constructor.
#[no_mangle]
pub unsafe extern "C" fn vn_stream_skipped_count(stream: *const VnStream) -> u64 {
    if stream.is_null() {
        return 0;
    }
    (*stream).skipped
}

/// Release a stream handle. NULL is allowed.
///
/// # Safety
/// `stream` must have come from a stream constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn vn_stream_free(stream: *mut VnStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

/// Number of window positions for the given window parameters.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vn_window_count(
    delta: u64,
    total: u64,
    stride: u64,
    out: *mut u64,
) -> VnStatus {
    if out.is_null() {
        return fail(VnStatus::NullPointer, "out is NULL");
    }
    match WindowConfig::new(delta as usize, total as usize, stride as usize) {
        Ok(config) => {
            *out = config.window_count() as u64;
            VnStatus::Ok
        }
        Err(e) => fail(VnStatus::InvalidArgument, e.to_string()),
    }
}

/// Run the full render pipeline over a stream: one SVG per window position
/// plus `manifest.json` under `out_dir`.
///
/// `config_json` may be NULL or empty for defaults; otherwise it is a JSON
/// object with the same keys as the CLI config file (for example
/// `{"window": 25, "direction": "status"}`).
///
/// # Safety
/// `stream` must be a live handle; `out_dir` a valid NUL-terminated path;
/// `config_json` NULL or valid; `out_frame_count` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn vn_render_animation(
    stream: *const VnStream,
    config_json: *const c_char,
    out_dir: *const c_char,
    out_frame_count: *mut u64,
) -> VnStatus {
    if stream.is_null() {
        return fail(VnStatus::NullPointer, "stream is NULL");
    }
    let out_dir = match cstr_arg(out_dir, "out_dir") {
        Ok(d) => d,
        Err(status) => return status,
    };
    let cfg = if config_json.is_null() {
        FileConfig::default()
    } else {
        let text = match cstr_arg(config_json, "config_json") {
            Ok(t) => t,
            Err(status) => return status,
        };
        if text.trim().is_empty() {
            FileConfig::default()
        } else {
            match FileConfig::from_json_str(text) {
                Ok(cfg) => cfg,
                Err(e) => return fail(VnStatus::InvalidArgument, e.to_string()),
            }
        }
    };
    let plan = match RenderPlan::from_file_config(&cfg) {
        Ok(plan) => plan,
        Err(e) => return fail(VnStatus::InvalidArgument, e.to_string()),
    };
    let messages = (*stream).messages.clone();
    match pipeline::run_render(messages, &plan, Path::new(out_dir)) {
        Ok(summary) => {
            if !out_frame_count.is_null() {
                *out_frame_count = summary.frame_count as u64;
            }
            VnStatus::Ok
        }
        Err(pipeline::PipelineError::Render(e)) => fail(VnStatus::Io, e.to_string()),
        Err(e) => fail(VnStatus::Pipeline, e.to_string()),
    }
}

/// Write a seeded synthetic reply stream to `out_path` as CSV.
///
/// # Safety
/// `out_path` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn vn_generate_csv(
    messages: u64,
    senders: u64,
    seed: u64,
    out_path: *const c_char,
) -> VnStatus {
    let path = match cstr_arg(out_path, "out_path") {
        Ok(p) => p,
        Err(status) => return status,
    };
    if senders == 0 {
        return fail(VnStatus::InvalidArgument, "senders must be >= 1");
    }
    let stream = generate_stream(&SynthParams {
        messages: messages as usize,
        senders: senders as usize,
        seed,
        reply_prob: SynthParams::default().reply_prob,
    });
    let mut buf = Vec::new();
    if let Err(e) = ingest::write_csv(&stream, &mut buf) {
        return fail(VnStatus::Pipeline, e.to_string());
    }
    match std::fs::write(path, buf) {
        Ok(()) => VnStatus::Ok,
        Err(e) => fail(VnStatus::Io, format!("cannot write {path}: {e}")),
    }
}

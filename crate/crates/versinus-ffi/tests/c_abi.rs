//! Exercises the C ABI the way a foreign caller would: through the
//! exported functions, status codes and the last-error message.

use std::ffi::{CStr, CString};
use std::ptr;

use versinus_ffi::{
    vn_generate_csv, vn_last_error_message, vn_render_animation, vn_stream_free,
    vn_stream_from_bytes, vn_stream_message_count, vn_stream_open, vn_stream_skipped_count,
    vn_version, vn_window_count, VnFormat, VnStatus, VnStream,
};

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(vn_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

#[test]
fn version_is_a_static_string() {
    let version = unsafe { CStr::from_ptr(vn_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn stream_from_bytes_counts_messages() {
    let csv = b"message_id,sender,reply_to,timestamp\nm1,a,,\nm2,b,m1,\n";
    let mut stream: *mut VnStream = ptr::null_mut();
    let status =
        unsafe { vn_stream_from_bytes(csv.as_ptr(), csv.len(), VnFormat::Auto, &mut stream) };
    assert_eq!(status, VnStatus::Ok);
    assert!(!stream.is_null());
    assert_eq!(unsafe { vn_stream_message_count(stream) }, 2);
    assert_eq!(unsafe { vn_stream_skipped_count(stream) }, 0);
    unsafe { vn_stream_free(stream) };
}

#[test]
fn parse_failure_sets_the_error_message() {
    let csv = b"message_id,sender,reply_to,timestamp\nm1,a,,\nm1,b,,\n";
    let mut stream: *mut VnStream = ptr::null_mut();
    let status =
        unsafe { vn_stream_from_bytes(csv.as_ptr(), csv.len(), VnFormat::Csv, &mut stream) };
    assert_eq!(status, VnStatus::Parse);
    assert!(stream.is_null());
    assert!(last_error().contains("m1"), "message: {}", last_error());
}

#[test]
fn open_missing_file_is_io() {
    let path = CString::new("/nonexistent/corpus.csv").unwrap();
    let mut stream: *mut VnStream = ptr::null_mut();
    let status = unsafe { vn_stream_open(path.as_ptr(), VnFormat::Auto, &mut stream) };
    assert_eq!(status, VnStatus::Io);
    assert!(!last_error().is_empty());
}

#[test]
fn null_arguments_are_rejected() {
    let mut stream: *mut VnStream = ptr::null_mut();
    let status = unsafe { vn_stream_open(ptr::null(), VnFormat::Auto, &mut stream) };
    assert_eq!(status, VnStatus::NullPointer);
    assert_eq!(unsafe { vn_stream_message_count(ptr::null()) }, 0);
    unsafe { vn_stream_free(ptr::null_mut()) };
}

#[test]
fn window_count_matches_the_library() {
    let mut count = 0u64;
    let status = unsafe { vn_window_count(400, 20000, 1, &mut count) };
    assert_eq!(status, VnStatus::Ok);
    assert_eq!(count, 19601);

    let status = unsafe { vn_window_count(0, 10, 1, &mut count) };
    assert_eq!(status, VnStatus::InvalidArgument);
}

#[test]
fn generate_then_open_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("synthetic.csv");
    let c_path = CString::new(path.to_str().unwrap()).unwrap();
    let status = unsafe { vn_generate_csv(120, 9, 42, c_path.as_ptr()) };
    assert_eq!(status, VnStatus::Ok);

    let mut stream: *mut VnStream = ptr::null_mut();
    let status = unsafe { vn_stream_open(c_path.as_ptr(), VnFormat::Csv, &mut stream) };
    assert_eq!(status, VnStatus::Ok);
    assert_eq!(unsafe { vn_stream_message_count(stream) }, 120);
    unsafe { vn_stream_free(stream) };
}

#[test]
fn render_animation_writes_frames() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.csv");
    let c_corpus = CString::new(corpus.to_str().unwrap()).unwrap();
    assert_eq!(
        unsafe { vn_generate_csv(40, 8, 5, c_corpus.as_ptr()) },
        VnStatus::Ok
    );

    let mut stream: *mut VnStream = ptr::null_mut();
    assert_eq!(
        unsafe { vn_stream_open(c_corpus.as_ptr(), VnFormat::Auto, &mut stream) },
        VnStatus::Ok
    );

    let out_dir = dir.path().join("frames");
    let c_out = CString::new(out_dir.to_str().unwrap()).unwrap();
    let config = CString::new(r#"{"window": 10, "stride": 5, "canvas": "400x300"}"#).unwrap();
    let mut frames = 0u64;
    let status =
        unsafe { vn_render_animation(stream, config.as_ptr(), c_out.as_ptr(), &mut frames) };
    assert_eq!(status, VnStatus::Ok, "error: {}", last_error());
    assert_eq!(frames, 7);
    assert!(out_dir.join("frame_000000.svg").exists());
    assert!(out_dir.join("frame_000006.svg").exists());
    assert!(out_dir.join("manifest.json").exists());
    unsafe { vn_stream_free(stream) };
}

#[test]
fn bad_config_json_is_invalid_argument() {
    let csv = b"message_id,sender,reply_to,timestamp\nm1,a,,\n";
    let mut stream: *mut VnStream = ptr::null_mut();
    assert_eq!(
        unsafe { vn_stream_from_bytes(csv.as_ptr(), csv.len(), VnFormat::Csv, &mut stream) },
        VnStatus::Ok
    );
    let out = CString::new("/tmp/unused").unwrap();
    let config = CString::new(r#"{"windw": 10}"#).unwrap();
    let status =
        unsafe { vn_render_animation(stream, config.as_ptr(), out.as_ptr(), ptr::null_mut()) };
    assert_eq!(status, VnStatus::InvalidArgument);
    assert!(last_error().contains("config"), "message: {}", last_error());
    unsafe { vn_stream_free(stream) };
}

#[test]
fn header_was_generated() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("versinus.h");
    let text = std::fs::read_to_string(header).expect("cbindgen header exists");
    for symbol in [
        "vn_stream_open",
        "vn_render_animation",
        "vn_window_count",
        "vn_last_error_message",
        "typedef struct VnStream VnStream;",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}

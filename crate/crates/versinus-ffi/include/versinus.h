#ifndef VERSINUS_H
#define VERSINUS_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every fallible entry point.
 */
typedef enum VnStatus {
  VnStatus_Ok = 0,
  VnStatus_NullPointer = 1,
  VnStatus_InvalidArgument = 2,
  VnStatus_Utf8 = 3,
  VnStatus_Io = 4,
  VnStatus_Parse = 5,
  VnStatus_Pipeline = 6,
} VnStatus;

/**
 * Input encodings accepted by the stream constructors.
 */
typedef enum VnFormat {
  VnFormat_Auto = 0,
  VnFormat_Csv = 1,
  VnFormat_Jsonl = 2,
  VnFormat_Mbox = 3,
} VnFormat;

/**
 * Opaque handle over a parsed message stream.
 */
typedef struct VnStream VnStream;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *vn_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *vn_version(void);

/**
 * Parse a message log from a file into a new stream handle.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid pointer;
 * on success `*out` owns the handle until [`vn_stream_free`].
 */
enum VnStatus vn_stream_open(const char *path, enum VnFormat format, struct VnStream **out);

/**
 * Parse a message log from a byte buffer into a new stream handle.
 *
 * # Safety
 * `data` must point to `len` readable bytes and `out` must be valid; on
 * success `*out` owns the handle until [`vn_stream_free`].
 */
enum VnStatus vn_stream_from_bytes(const uint8_t *data,
                                   size_t len,
                                   enum VnFormat format,
                                   struct VnStream **out);

/**
 * Number of messages in the stream; 0 for a NULL handle.
 *
 * # Safety
 * `stream` must be NULL or a live handle from a stream constructor.
 */
uint64_t vn_stream_message_count(const struct VnStream *stream);

/**
 * Number of mbox messages skipped while parsing; 0 for a NULL handle.
 *
 * # Safety
 * `stream` must be NULL or a live handle from a stream constructor.
 */
uint64_t vn_stream_skipped_count(const struct VnStream *stream);

/**
 * Release a stream handle. NULL is allowed.
 *
 * # Safety
 * `stream` must have come from a stream constructor and not be freed twice.
 */
void vn_stream_free(struct VnStream *stream);

/**
 * Number of window positions for the given window parameters.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum VnStatus vn_window_count(uint64_t delta, uint64_t total, uint64_t stride, uint64_t *out);

/**
 * Run the full render pipeline over a stream: one SVG per window position
 * plus `manifest.json` under `out_dir`.
 *
 * `config_json` may be NULL or empty for defaults; otherwise it is a JSON
 * object with the same keys as the CLI config file (for example
 * `{"window": 25, "direction": "status"}`).
 *
 * # Safety
 * `stream` must be a live handle; `out_dir` a valid NUL-terminated path;
 * `config_json` NULL or valid; `out_frame_count` NULL or valid.
 */
enum VnStatus vn_render_animation(const struct VnStream *stream,
                                  const char *config_json,
                                  const char *out_dir,
                                  uint64_t *out_frame_count);

/**
 * Write a seeded synthetic reply stream to `out_path` as CSV.
 *
 * # Safety
 * `out_path` must be a valid NUL-terminated string.
 */
enum VnStatus vn_generate_csv(uint64_t messages,
                              uint64_t senders,
                              uint64_t seed,
                              const char *out_path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VERSINUS_H */

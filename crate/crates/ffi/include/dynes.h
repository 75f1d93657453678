#ifndef DYNES_H
#define DYNES_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>

// Result codes.
typedef enum DynesStatus {
  DYNES_STATUS_OK = 0,
  DYNES_STATUS_NULL_ARGUMENT = 1,
  DYNES_STATUS_INVALID_UTF8 = 2,
  // The text is not a well-formed structure file.
  DYNES_STATUS_PARSE = 3,
  // The structure violates a well-formedness rule.
  DYNES_STATUS_INVALID = 4,
  // The operation is not defined for this family or input.
  DYNES_STATUS_UNSUPPORTED = 5,
  // Unknown example, claim, family, mode or kind name.
  DYNES_STATUS_UNKNOWN_NAME = 6,
  DYNES_STATUS_ALPHABET_MISMATCH = 7,
  // A Rust panic was caught at the boundary.
  DYNES_STATUS_INTERNAL = 8,
} DynesStatus;

// An owned structure.
typedef struct DynesStructure DynesStructure;

// The library version as a static NUL-terminated string.
const char *dynes_version(void);

// The message of the last failed call on this thread, or "" after a
// successful one. Valid until the next call on the same thread.
const char *dynes_last_error(void);

// Parses and validates a structure file's text.
//
// # Safety
// `text_ptr` must be NUL-terminated; `out` must be writable.
enum DynesStatus dynes_parse(const char *text_ptr, struct DynesStructure **out);

// Loads a bundled example by name.
//
// # Safety
// `name` must be NUL-terminated; `out` must be writable.
enum DynesStatus dynes_load_example(const char *name, struct DynesStructure **out);

// Releases a structure. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void dynes_free(struct DynesStructure *s);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void dynes_string_free(char *s);

// Writes whether the structure is well-formed and, when `out_report` is
// non-null, its violations one per line.
//
// # Safety
// Pointers must be valid; `out_report` may be null.
enum DynesStatus dynes_validate(const struct DynesStructure *s, bool *out_ok, char **out_report);

// The structure in file syntax.
//
// # Safety
// Pointers must be valid.
enum DynesStatus dynes_serialize(const struct DynesStructure *s, char **out);

// Traces as JSON, in the command line's schema.
//
// # Safety
// Pointers must be valid.
enum DynesStatus dynes_traces_json(const struct DynesStructure *s, char **out);

// Configurations as JSON; step-based when `step` is set.
//
// # Safety
// Pointers must be valid.
enum DynesStatus dynes_configs_json(const struct DynesStructure *s, bool step, char **out);

// Reachable steps as JSON.
//
// # Safety
// Pointers must be valid.
enum DynesStatus dynes_transitions_json(const struct DynesStructure *s, char **out);

// The state graph of a DCES as JSON.
//
// # Safety
// Pointers must be valid.
enum DynesStatus dynes_states_json(const struct DynesStructure *s, char **out);

// Posets of one mode (`early`, `late`, ...) as JSON.
//
// # Safety
// Pointers must be valid; `mode` NUL-terminated.
enum DynesStatus dynes_posets_json(const struct DynesStructure *s, const char *mode, char **out);

// Translates into the named family (`RCES`, `DES`, `SES`, `DCES`).
//
// # Safety
// Pointers must be valid; `family` NUL-terminated.
enum DynesStatus dynes_translate(const struct DynesStructure *s,
                                 const char *family,
                                 struct DynesStructure **out);

// Compares two structures under `kind` (`trace`, `config`, `transition`,
// `state`, `poset:MODE`). A distinguishing witness is written to
// `out_witness` when they differ and it is non-null; otherwise it is set
// to null.
//
// # Safety
// Pointers must be valid; `out_witness` may be null.
enum DynesStatus dynes_equivalent(const struct DynesStructure *a,
                                  const struct DynesStructure *b,
                                  const char *kind,
                                  bool *out_equal,
                                  char **out_witness);

// Checks one registered claim with default settings. The report (one
// evidence line per row) goes to `out_report` when non-null.
//
// # Safety
// `id` NUL-terminated; `out_passed` writable; `out_report` may be null.
enum DynesStatus dynes_verify_claim(const char *id, bool *out_passed, char **out_report);

#endif  /* DYNES_H */
